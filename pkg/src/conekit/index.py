"""Crossed products and the optimal conditional-expectation bound.

The observable algebra of a cone is modelled by the full Pauli span on k
selected cone bonds; the four charge transporters implement a Z2 x Z2
action on it by conjugation (diagonal signs in the Pauli word basis).
Elements of the crossed product are G-indexed block families, multiplied
with the usual twist.  The canonical expectation keeps the identity
block; the module certifies, in exact arithmetic, that its best
domination constant is 1/|G| (so the inclusion index is |G| = 4) and
that mapping blocks to actual patch operators through the transporters
is multiplicative and injective.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction

from .anyons import (
    CHARGE_E,
    CHARGE_EPS,
    CHARGE_M,
    SECTOR_ORDER,
    VACUUM,
    SectorLabel,
    charge_endomorphism,
    apply_endomorphism,
    fuse,
    standard_cone_pair,
    transporter_truncation,
)
from .errors import (
    ConsistencyError,
    DimensionMismatchError,
    InvalidActionError,
    LocalizationError,
    NoRoomError,
)
from .geometry import NORTH, Bond, Patch, Region
from .pauli import PauliOperator, _mul_raw, commutation_sign, embed, path_operator
from .scalars import (
    GR_ONE,
    GR_ZERO,
    GaussianRational,
    I_POWERS,
    is_positive_semidefinite,
    min_eigenvalue_float,
)
from .stabilizer import StabilizerGroup, overlap
from .geometry import dual_path_through, primal_path_through


# ---------------------------------------------------------------------------
# The finite cone algebra: Pauli words on k bonds
# ---------------------------------------------------------------------------


class WordAlgebra:
    """All complex matrices of size 2^k, in the Pauli word basis.

    A word is a pair of k-bit integers (x, z) meaning X^x Z^z with the X
    block written first; coefficients are Gaussian rationals.
    """

    def __init__(self, bonds: tuple[Bond, ...], patch: Patch):
        if not bonds:
            raise DimensionMismatchError("algebra needs at least one bond")
        self.patch = patch
        self.bonds = tuple(bonds)
        self.k = len(bonds)
        self.bond_indices = tuple(patch.bond_index(b) for b in bonds)

    def zero(self) -> "AlgebraElement":
        return AlgebraElement(self, {})

    def unit(self) -> "AlgebraElement":
        return AlgebraElement(self, {(0, 0): GR_ONE})

    def word(self, x: int, z: int, coeff=GR_ONE) -> "AlgebraElement":
        return AlgebraElement(self, {(x, z): GaussianRational.of(coeff)})

    def words(self):
        for x in range(1 << self.k):
            for z in range(1 << self.k):
                yield (x, z)

    def embed_word(self, x: int, z: int) -> PauliOperator:
        return embed(x, z, self.bond_indices, self.patch.n_bonds)

    def random_element(self, rng: random.Random, terms: int = 3, span: int = 2) -> "AlgebraElement":
        coeffs = {}
        for _ in range(terms):
            w = (rng.randrange(1 << self.k), rng.randrange(1 << self.k))
            c = GaussianRational(
                Fraction(rng.randint(-span, span)), Fraction(rng.randint(-span, span))
            )
            coeffs[w] = coeffs.get(w, GR_ZERO) + c
        return AlgebraElement(self, coeffs)


class AlgebraElement:
    """A finite Gaussian-rational combination of Pauli words."""

    __slots__ = ("algebra", "coeffs")

    def __init__(self, algebra: WordAlgebra, coeffs: dict):
        self.algebra = algebra
        self.coeffs = {w: c for w, c in coeffs.items() if not c.is_zero()}

    def is_zero(self) -> bool:
        return not self.coeffs

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, AlgebraElement)
            and self.algebra is other.algebra
            and self.coeffs == other.coeffs
        )

    def __add__(self, other: "AlgebraElement") -> "AlgebraElement":
        out = dict(self.coeffs)
        for w, c in other.coeffs.items():
            out[w] = out.get(w, GR_ZERO) + c
        return AlgebraElement(self.algebra, out)

    def __sub__(self, other: "AlgebraElement") -> "AlgebraElement":
        out = dict(self.coeffs)
        for w, c in other.coeffs.items():
            out[w] = out.get(w, GR_ZERO) - c
        return AlgebraElement(self.algebra, out)

    def scale(self, factor) -> "AlgebraElement":
        factor = GaussianRational.of(factor)
        return AlgebraElement(
            self.algebra, {w: c * factor for w, c in self.coeffs.items()}
        )

    def __mul__(self, other: "AlgebraElement") -> "AlgebraElement":
        out: dict = {}
        for (x1, z1), c1 in self.coeffs.items():
            for (x2, z2), c2 in other.coeffs.items():
                x, z, k = _mul_raw(x1, z1, 0, x2, z2, 0)
                c = (c1 * c2).times_i_power(k)
                key = (x, z)
                out[key] = out.get(key, GR_ZERO) + c
        return AlgebraElement(self.algebra, out)

    def adjoint(self) -> "AlgebraElement":
        out = {}
        for (x, z), c in self.coeffs.items():
            sign = 2 * ((x & z).bit_count() % 2)
            out[(x, z)] = c.conj().times_i_power(sign)
        return AlgebraElement(self.algebra, out)

    def __repr__(self) -> str:
        return f"AlgebraElement({self.coeffs!r})"


def select_cone_bonds(cone_pair: tuple[Region, Region], k: int, patch: Patch) -> tuple[Bond, ...]:
    """The first k bonds of the left cone's vertical ray."""
    left = cone_pair[0]
    if left.descriptor is None:
        raise NoRoomError("cone pair carries no descriptor")
    ax, ay = left.descriptor.apex
    if ay + k > patch.L:
        raise NoRoomError(f"ray of {k} bonds does not fit above the apex")
    bonds = tuple(Bond(ax, ay + j, NORTH) for j in range(k))
    missing = [b for b in bonds if b not in left.bonds]
    if missing:
        raise NoRoomError(f"ray bonds {missing} lie outside the cone")
    return bonds


# ---------------------------------------------------------------------------
# Group action by transporter conjugation
# ---------------------------------------------------------------------------


class GroupAction:
    """Conjugation by commuting transporter unitaries, restricted to the
    word algebra, where it acts by diagonal signs."""

    def __init__(
        self,
        group: tuple[SectorLabel, ...],
        implementers: dict,
        algebra: WordAlgebra,
        truncation_n: int | None = None,
    ):
        self.group = tuple(group)
        self.algebra = algebra
        self.implementers = dict(implementers)
        self.truncation_n = truncation_n
        for g in self.group:
            for h in self.group:
                if fuse(g, h) not in self.group:
                    raise InvalidActionError("label set is not closed under fusion")
        items = list(self.implementers.items())
        for i, (g, vg) in enumerate(items):
            if not vg.is_hermitian() or (vg * vg) != PauliOperator.identity(vg.n):
                raise InvalidActionError(f"implementer for {g} does not square to I")
            for h, vh in items[i + 1 :]:
                if commutation_sign(vg, vh) != 1:
                    raise InvalidActionError(
                        f"implementers for {g} and {h} anticommute"
                    )
        # restriction of each implementer to the algebra bonds
        self._local: dict[SectorLabel, tuple[int, int]] = {}
        for g, vg in self.implementers.items():
            lx = lz = 0
            for j, idx in enumerate(algebra.bond_indices):
                lx |= ((vg.x >> idx) & 1) << j
                lz |= ((vg.z >> idx) & 1) << j
            self._local[g] = (lx, lz)

    def word_sign(self, g: SectorLabel, word: tuple[int, int]) -> int:
        lx, lz = self._local[g]
        parity = ((lx & word[1]).bit_count() + (lz & word[0]).bit_count()) % 2
        return -1 if parity else 1

    def act(self, g: SectorLabel, element: AlgebraElement) -> AlgebraElement:
        out = {}
        for w, c in element.coeffs.items():
            out[w] = c if self.word_sign(g, w) == 1 else -c
        return AlgebraElement(self.algebra, out)


def standard_action(patch: Patch, n: int, k: int, pair=None):
    """Algebra on k ray bonds plus the Z2 x Z2 transporter action at
    truncation n; ``pair`` defaults to the standard two-cone layout."""
    if pair is None:
        pair = standard_cone_pair(patch)
    algebra = WordAlgebra(select_cone_bonds(pair, k, patch), patch)
    implementers = {VACUUM: PauliOperator.identity(patch.n_bonds)}
    for g in (CHARGE_E, CHARGE_M, CHARGE_EPS):
        implementers[g] = transporter_truncation(g, n, pair, patch).operator
    action = GroupAction(SECTOR_ORDER, implementers, algebra, truncation_n=n)
    return algebra, action


# ---------------------------------------------------------------------------
# Crossed product elements
# ---------------------------------------------------------------------------


@dataclass
class CrossedProductElement:
    """X = sum_g R_g U_g with blocks R_g in the word algebra."""

    action: GroupAction
    blocks: dict = field(default_factory=dict)

    def __post_init__(self):
        self.blocks = {
            g: r for g, r in self.blocks.items() if not r.is_zero()
        }

    def block(self, g: SectorLabel) -> AlgebraElement:
        return self.blocks.get(g, self.action.algebra.zero())

    def is_zero(self) -> bool:
        return not self.blocks

    def __eq__(self, other) -> bool:
        if not isinstance(other, CrossedProductElement):
            return NotImplemented
        keys = set(self.blocks) | set(other.blocks)
        return all(self.block(g) == other.block(g) for g in keys)

    def __add__(self, other: "CrossedProductElement") -> "CrossedProductElement":
        out = dict(self.blocks)
        for g, r in other.blocks.items():
            out[g] = out.get(g, self.action.algebra.zero()) + r
        return CrossedProductElement(self.action, out)

    def __sub__(self, other: "CrossedProductElement") -> "CrossedProductElement":
        out = dict(self.blocks)
        for g, r in other.blocks.items():
            out[g] = out.get(g, self.action.algebra.zero()) - r
        return CrossedProductElement(self.action, out)

    def scale(self, factor) -> "CrossedProductElement":
        return CrossedProductElement(
            self.action, {g: r.scale(factor) for g, r in self.blocks.items()}
        )


def cp_unit(action: GroupAction) -> CrossedProductElement:
    return CrossedProductElement(action, {VACUUM: action.algebra.unit()})


def cp_generator(action: GroupAction, g: SectorLabel) -> CrossedProductElement:
    """The implementing unitary U_g as a crossed-product element."""
    return CrossedProductElement(action, {g: action.algebra.unit()})


def cp_multiply(x: CrossedProductElement, y: CrossedProductElement) -> CrossedProductElement:
    """(R_g U_g)(S_h U_h) = R_g alpha_g(S_h) U_{gh}, extended bilinearly."""
    if x.action is not y.action:
        raise DimensionMismatchError("crossed elements over different actions")
    action = x.action
    out: dict = {}
    for g, rg in x.blocks.items():
        for h, sh in y.blocks.items():
            gh = fuse(g, h)
            term = rg * action.act(g, sh)
            out[gh] = out.get(gh, action.algebra.zero()) + term
    return CrossedProductElement(action, out)


def cp_adjoint(x: CrossedProductElement) -> CrossedProductElement:
    """(R_g U_g)^dagger = alpha_g(R_g^dagger) U_g for involutive g."""
    action = x.action
    return CrossedProductElement(
        action, {g: action.act(g, r.adjoint()) for g, r in x.blocks.items()}
    )


def canonical_expectation(x: CrossedProductElement) -> CrossedProductElement:
    """Keep the identity block: the conditional expectation onto the
    embedded algebra."""
    return CrossedProductElement(x.action, {VACUUM: x.block(VACUUM)})


def character(t: SectorLabel, g: SectorLabel) -> int:
    parity = (t.e_parity * g.e_parity + t.m_parity * g.m_parity) % 2
    return -1 if parity else 1


def dual_twist(x: CrossedProductElement, t: SectorLabel) -> CrossedProductElement:
    """The dual-group automorphism scaling block g by the character value."""
    out = {}
    for g, r in x.blocks.items():
        out[g] = r if character(t, g) == 1 else r.scale(-1)
    return CrossedProductElement(x.action, out)


def dual_average(x: CrossedProductElement) -> CrossedProductElement:
    total = CrossedProductElement(x.action, {})
    for t in x.action.group:
        total = total + dual_twist(x, t)
    return total.scale(Fraction(1, len(x.action.group)))


# ---------------------------------------------------------------------------
# Exact matrix representation (for positivity oracles)
# ---------------------------------------------------------------------------


def _word_matrix(x: int, z: int, k: int):
    """2^k matrix of X^x Z^z with entries in {+-1}."""
    dim = 1 << k
    rows = [[GR_ZERO] * dim for _ in range(dim)]
    for j in range(dim):
        sign = (z & j).bit_count() % 2
        rows[j ^ x][j] = I_POWERS[2] if sign else GR_ONE
    return rows


def to_matrix(x: CrossedProductElement):
    """Faithful *-representation on C^{2^k} tensor C[G]: the (u, v) block
    is alpha_u applied to the block at u*v."""
    action = x.action
    k = action.algebra.k
    dim = 1 << k
    order = list(action.group)
    size = len(order) * dim
    rows = [[GR_ZERO] * size for _ in range(size)]
    for ui, u in enumerate(order):
        for vi, v in enumerate(order):
            r = x.block(fuse(u, v))
            if r.is_zero():
                continue
            twisted = action.act(u, r)
            for (wx, wz), c in twisted.coeffs.items():
                wm = _word_matrix(wx, wz, k)
                for a in range(dim):
                    for b in range(dim):
                        if not wm[a][b].is_zero():
                            rows[ui * dim + a][vi * dim + b] = (
                                rows[ui * dim + a][vi * dim + b] + c * wm[a][b]
                            )
    return rows


def expectation_dominates(
    x: CrossedProductElement, lam: Fraction, mode: str = "exact", tolerance: float = 1e-9
) -> bool:
    """Whether E(x^dagger x) - lam * x^dagger x is positive semidefinite."""
    positive = cp_multiply(cp_adjoint(x), x)
    gap = canonical_expectation(positive) - positive.scale(lam)
    matrix = to_matrix(gap)
    if mode == "exact":
        return is_positive_semidefinite(matrix)
    return min_eigenvalue_float(matrix) >= -tolerance


# ---------------------------------------------------------------------------
# The optimal bound and its certificates
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ExpectationBound:
    lam: Fraction
    index: Fraction
    certificates: dict
    k: int
    group_size: int
    truncation_n: int | None

    @property
    def all_certified(self) -> bool:
        return all(self.certificates.values())

    def to_json_dict(self) -> dict:
        return {
            "lambda": {"num": self.lam.numerator, "den": self.lam.denominator},
            "index": {"num": self.index.numerator, "den": self.index.denominator},
            "certificates": dict(self.certificates),
            "k": self.k,
            "n": self.truncation_n,
        }


def witness_projection(action: GroupAction) -> CrossedProductElement:
    """P = (1/|G|) sum_g U_g: a projection averaging the implementers."""
    total = CrossedProductElement(action, {})
    for g in action.group:
        total = total + cp_generator(action, g)
    return total.scale(Fraction(1, len(action.group)))


def pimsner_popa_constant(
    algebra: WordAlgebra,
    action: GroupAction,
    *,
    full_basis_limit: int = 3,
    sample_pairs: int = 20,
    seed: int = 5,
) -> ExpectationBound:
    """Best constant lam with E(X) >= lam X on positives; returns 1/|G|
    with two exact certificates.

    Lower bound: E agrees with averaging over the dual-group twists on a
    spanning set (the whole block basis when k <= full_basis_limit), and
    each twist is verified to be a *-automorphism, so E - (1/|G|) id is a
    sum of |G| - 1 positive maps.  Upper bound: the averaged-implementer
    projection P satisfies E(P) = (1/|G|) I, so no larger constant works.
    """
    size = len(action.group)
    lam = Fraction(1, size)
    rng = random.Random(seed)

    # --- dual averaging -------------------------------------------------
    dual_ok = True
    if algebra.k <= full_basis_limit:
        basis_words = list(algebra.words())
    else:
        basis_words = [(0, 0)] + [
            (rng.randrange(1 << algebra.k), rng.randrange(1 << algebra.k))
            for _ in range(64)
        ]
    for g in action.group:
        for w in basis_words:
            x = CrossedProductElement(action, {g: algebra.word(*w)})
            if dual_average(x) != canonical_expectation(x):
                dual_ok = False
    for _ in range(sample_pairs):
        x = _random_crossed(action, rng)
        y = _random_crossed(action, rng)
        if dual_average(x + y) != canonical_expectation(x + y):
            dual_ok = False
        for t in action.group:
            if dual_twist(cp_multiply(x, y), t) != cp_multiply(
                dual_twist(x, t), dual_twist(y, t)
            ):
                dual_ok = False
            if dual_twist(cp_adjoint(x), t) != cp_adjoint(dual_twist(x, t)):
                dual_ok = False

    # --- witness projection ---------------------------------------------
    p = witness_projection(action)
    expected = cp_unit(action).scale(lam)
    witness_ok = (
        cp_adjoint(p) == p
        and cp_multiply(p, p) == p
        and canonical_expectation(p) == expected
        and not p.is_zero()
    )

    return ExpectationBound(
        lam=lam,
        index=Fraction(size),
        certificates={"dual_averaging": dual_ok, "witness_projection": witness_ok},
        k=algebra.k,
        group_size=size,
        truncation_n=action.truncation_n,
    )


def _random_crossed(action: GroupAction, rng: random.Random) -> CrossedProductElement:
    blocks = {}
    for g in action.group:
        if rng.random() < 0.7:
            blocks[g] = action.algebra.random_element(rng, terms=2)
    return CrossedProductElement(action, blocks)


# ---------------------------------------------------------------------------
# Mapping blocks to patch operators
# ---------------------------------------------------------------------------


class PauliSum:
    """A formal Gaussian-rational combination of patch Pauli strings.

    Keys are (x_bits, z_bits); the i^k word phases are folded into the
    coefficients, so equality is plain dictionary equality.
    """

    __slots__ = ("n", "coeffs")

    def __init__(self, n: int, coeffs: dict | None = None):
        self.n = n
        self.coeffs = {
            key: c for key, c in (coeffs or {}).items() if not c.is_zero()
        }

    @staticmethod
    def from_pauli(op: PauliOperator, coeff=GR_ONE) -> "PauliSum":
        c = GaussianRational.of(coeff).times_i_power(op.phase_exp)
        return PauliSum(op.n, {(op.x, op.z): c})

    def add_pauli(self, op: PauliOperator, coeff) -> None:
        c = GaussianRational.of(coeff).times_i_power(op.phase_exp)
        key = (op.x, op.z)
        acc = self.coeffs.get(key, GR_ZERO) + c
        if acc.is_zero():
            self.coeffs.pop(key, None)
        else:
            self.coeffs[key] = acc

    def is_zero(self) -> bool:
        return not self.coeffs

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, PauliSum)
            and self.n == other.n
            and self.coeffs == other.coeffs
        )

    def __mul__(self, other: "PauliSum") -> "PauliSum":
        if self.n != other.n:
            raise DimensionMismatchError("sums over different bond counts")
        out: dict = {}
        for (x1, z1), c1 in self.coeffs.items():
            for (x2, z2), c2 in other.coeffs.items():
                x, z, k = _mul_raw(x1, z1, 0, x2, z2, 0)
                c = (c1 * c2).times_i_power(k)
                key = (x, z)
                acc = out.get(key, GR_ZERO) + c
                if acc.is_zero():
                    out.pop(key, None)
                else:
                    out[key] = acc
        return PauliSum(self.n, out)


def phi_map(x: CrossedProductElement) -> PauliSum:
    """Blocks to patch operators: sum_g R_g V_g as a formal Pauli sum."""
    action = x.action
    algebra = action.algebra
    n = algebra.patch.n_bonds
    total = PauliSum(n)
    for g, r in x.blocks.items():
        vg = action.implementers[g]
        for (wx, wz), c in r.coeffs.items():
            op = algebra.embed_word(wx, wz) * vg
            total.add_pauli(op, c)
    return total


def _base_charge_strings(action: GroupAction) -> dict:
    """Fixed straight strings between the cone tips, one per sector; they
    carry the same charge pattern as the matching transporter."""
    patch = action.algebra.patch
    # the probe ray sits on the left apex column; the standard layout
    # mirrors the right apex across the patch
    ax = action.algebra.bonds[0].x
    bx = patch.L - ax
    base_e = path_operator(
        primal_path_through([(x, 0) for x in range(ax, bx + 1)], patch), patch
    )
    base_m = path_operator(
        dual_path_through([(x, 0) for x in range(ax - 1, bx + 1)], patch), patch
    )
    return {
        VACUUM: PauliOperator.identity(patch.n_bonds),
        CHARGE_E: base_e,
        CHARGE_M: base_m,
        CHARGE_EPS: base_m * base_e,
    }


def assert_probe_bonds_clean(algebra: WordAlgebra, group: StabilizerGroup) -> None:
    """No nontrivial word on the probe bonds may be a stabilizer element;
    this is what lets the charged-vector pairings isolate single blocks."""
    for w in algebra.words():
        if w == (0, 0):
            continue
        if group.solve(algebra.embed_word(*w)) is not None:
            raise ConsistencyError(f"probe word {w} lies in the stabilizer span")


def _pairing(
    x: CrossedProductElement,
    sector: SectorLabel,
    word: tuple[int, int],
    bases: dict,
    group: StabilizerGroup,
) -> GaussianRational:
    """<T_sector Omega, phi(x) embed(word) Omega> in exact arithmetic."""
    action = x.action
    algebra = action.algebra
    probe = algebra.embed_word(*word)
    total = GR_ZERO
    t_op = bases[sector]
    for g, r in x.blocks.items():
        vg = action.implementers[g]
        for (wx, wz), c in r.coeffs.items():
            op = algebra.embed_word(wx, wz) * vg * probe
            val = overlap(t_op, op, group)
            if val != 0:
                total = total + c * GaussianRational.of(val)
    return total


def phi_injectivity_check(
    patch: Patch,
    group: StabilizerGroup,
    truncation_n: int,
    *,
    k: int = 3,
    trials: int = 50,
    seed: int = 11,
) -> bool:
    """Finite injectivity test for the block-to-operator map.

    Pairing phi(X) against the four charged vectors (the straight-string
    states, one per sector) isolates one block at a time: the pairing at
    (sector g, probe word w) is a unit multiple of the coefficient of w
    in R_g.  The check confirms that every nonzero spanning element is
    detected and that the zero element is not.
    """
    algebra, action = standard_action(patch, truncation_n, k)
    assert_probe_bonds_clean(algebra, group)
    bases = _base_charge_strings(action)

    def detected(x: CrossedProductElement) -> bool:
        seen_words = {w for r in x.blocks.values() for w in r.coeffs}
        candidates = list(seen_words) or [(0, 0)]
        for g in action.group:
            for w in candidates:
                if not _pairing(x, g, w, bases, group).is_zero():
                    return True
        return False

    if detected(CrossedProductElement(action, {})):
        return False
    for g in action.group:
        for w in algebra.words():
            x = CrossedProductElement(action, {g: algebra.word(*w)})
            if not detected(x):
                return False
    rng = random.Random(seed)
    for _ in range(trials):
        x = _random_crossed(action, rng)
        if detected(x) != (not x.is_zero()):
            return False
    return True


# ---------------------------------------------------------------------------
# Sector-side expectation from conjugates
# ---------------------------------------------------------------------------


def sector_expectation(
    a: SectorLabel, cone: Region, op: PauliOperator, patch: Patch
) -> PauliOperator:
    """Expectation built from the self-conjugate sector structure.

    With identity intertwiners and dimension one this is applying the
    charge automorphism twice, which must return the input exactly.
    """
    cone_mask = 0
    for b in cone.bonds:
        cone_mask |= 1 << patch.bond_index(b)
    if op.support_mask & ~cone_mask:
        raise LocalizationError("operator is not supported inside the cone")
    rho = charge_endomorphism(a, cone, patch)
    result = apply_endomorphism(rho, apply_endomorphism(rho, op))
    if result != op:
        raise ConsistencyError("sector expectation failed to fix the input")
    return result
