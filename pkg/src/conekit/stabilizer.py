"""The ground state as a stabilizer group.

On an L x L patch the group is generated by every star operator except
the one at (L, L) (the product of all stars is the identity) together
with all L^2 plaquette operators: 2L(L+1) independent commuting
generators on 2L(L+1) qubits, hence a unique fixed state.  State
identities and overlaps reduce to GF(2) solves against the generator
matrix followed by one exact Pauli product to pin the phase.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import ConsistencyError
from .geometry import Patch
from .pauli import PauliOperator, commutation_sign, multiply_all, plaquette_operator, star_operator

Site = tuple[str, tuple[int, int]]

STAR = "star"
PLAQUETTE = "plaquette"


class StabilizerGroup:
    """Row-reduced generator matrix with combination bookkeeping."""

    def __init__(self, patch: Patch):
        self.patch = patch
        n = patch.n_bonds
        self.n = n
        dropped = (patch.L, patch.L)
        self.dropped_star = dropped
        sites: list[Site] = []
        gens: list[PauliOperator] = []
        for v in patch.vertices():
            if v == dropped:
                continue
            sites.append((STAR, v))
            gens.append(star_operator(v, patch))
        for f in patch.faces():
            sites.append((PLAQUETTE, f))
            gens.append(plaquette_operator(f, patch))
        self.sites = tuple(sites)
        self.generators = tuple(gens)

        # echelon rows over GF(2); vector = x_bits | z_bits << n,
        # each row carries the combination of original generators
        self._rows: list[tuple[int, int, int]] = []  # (pivot, vector, combo)
        for idx, g in enumerate(gens):
            vec = g.x | (g.z << n)
            combo = 1 << idx
            vec, combo = self._reduce(vec, combo)
            if vec == 0:
                raise ConsistencyError("dependent generator in stabilizer set")
            self._rows.append((vec.bit_length() - 1, vec, combo))
            self._rows.sort(key=lambda r: -r[0])
        if len(self._rows) != n:
            raise ConsistencyError(
                f"stabilizer rank {len(self._rows)} != bond count {n}"
            )
        # full star list (dropped one included) for syndrome queries
        self._all_sites: list[Site] = [(STAR, v) for v in patch.vertices()]
        self._all_sites += [(PLAQUETTE, f) for f in patch.faces()]
        self._all_ops = tuple(
            star_operator(v, patch) if kind == STAR else plaquette_operator(v, patch)
            for kind, v in self._all_sites
        )

    def _reduce(self, vec: int, combo: int = 0) -> tuple[int, int]:
        for pivot, row_vec, row_combo in self._rows:
            if (vec >> pivot) & 1:
                vec ^= row_vec
                combo ^= row_combo
        return vec, combo

    def solve(self, op: PauliOperator) -> int | None:
        """Combination bitmask c with prod_{i in c} gen_i matching op's
        string (phase ignored), or None if the string is outside the span."""
        vec = op.x | (op.z << self.n)
        vec, combo = self._reduce(vec, 0)
        return combo if vec == 0 else None

    def product_of(self, combo: int) -> PauliOperator:
        """Exact Pauli product of the selected generators."""
        return multiply_all(
            (self.generators[i] for i in range(self.n) if (combo >> i) & 1),
            self.n,
        )

    def generator_sites(self, combo: int) -> frozenset[Site]:
        return frozenset(self.sites[i] for i in range(self.n) if (combo >> i) & 1)


@dataclass(frozen=True)
class ChargedState:
    """A Pauli excitation of the ground state: F applied to it, plus the
    set of stabilizer sites whose operator anticommutes with F."""

    representative: PauliOperator
    syndrome: frozenset[Site]

    def star_sites(self) -> frozenset[tuple[int, int]]:
        return frozenset(v for kind, v in self.syndrome if kind == STAR)

    def plaquette_sites(self) -> frozenset[tuple[int, int]]:
        return frozenset(f for kind, f in self.syndrome if kind == PLAQUETTE)


def ground_stabilizers(patch: Patch) -> StabilizerGroup:
    """Independent commuting generators fixing the unique ground state."""
    return StabilizerGroup(patch)


def syndrome(op: PauliOperator, group: StabilizerGroup) -> ChargedState:
    """Charged state for op: all violated stars (the dropped one included)
    and plaquettes."""
    bad = frozenset(
        site
        for site, gen in zip(group._all_sites, group._all_ops)
        if commutation_sign(op, gen) == -1
    )
    return ChargedState(op, bad)


def states_equal(f: PauliOperator, g: PauliOperator, group: StabilizerGroup) -> bool:
    """Whether f and g produce the same excited state.

    True exactly when g^dagger f is a product of generators with an
    overall +1 phase; the GF(2) solve finds the candidate combination and
    one exact Pauli product settles the sign.
    """
    d = g.adjoint() * f
    combo = group.solve(d)
    if combo is None:
        return False
    return group.product_of(combo) == d


def overlap(f: PauliOperator, g: PauliOperator, group: StabilizerGroup) -> complex:
    """Exact inner product between the two excited states.

    Zero when the syndromes differ, otherwise a fourth root of unity read
    off from the phase of the stabilizer decomposition of f^dagger g.
    """
    d = f.adjoint() * g
    combo = group.solve(d)
    if combo is None:
        return 0
    k = d.phase_relative_to(group.product_of(combo))
    return (1, 1j, -1, -1j)[k]
