"""Superselection sectors at finite scale.

Sector labels form the group Z2 x Z2: the first component counts star
(vertex) charge, the second plaquette charge.  The vertex charge is
carried by primal Z-strings and moved between cones by the primal
transporter; the plaquette charge by dual X-strings and the dual
transporter; the composite label uses both.  The standard two-cone layout
anchors the cones at the bottom of the patch with a buffer of at least
two bond columns between them, and the transporter truncations route the
connector along lattice row n so that the primal and dual transporters
never overlap (they commute exactly).
"""

from __future__ import annotations

import itertools
import random
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .errors import (
    AmbiguousChargeError,
    ConsistencyError,
    GeometryError,
    NoRoomError,
)
from .geometry import (
    DUAL,
    EAST,
    NORTH,
    PRIMAL,
    Bond,
    DetectionLoop,
    Patch,
    Region,
    box_region,
    cone_region,
    detection_loop,
    dual_path_through,
    dual_rectangle_loop,
    primal_path_through,
    rectangle_loop,
)
from .pauli import (
    PauliOperator,
    commutation_sign,
    multiply_all,
    path_operator,
    plaquette_operator,
    single_bond,
    star_operator,
)
from .stabilizer import (
    PLAQUETTE,
    STAR,
    ChargedState,
    StabilizerGroup,
    states_equal,
    syndrome,
)


@dataclass(frozen=True)
class SectorLabel:
    """Element of Z2 x Z2 labelling a superselection sector."""

    e_parity: int
    m_parity: int

    def __post_init__(self):
        if self.e_parity not in (0, 1) or self.m_parity not in (0, 1):
            raise ValueError("sector parities must be 0 or 1")

    @property
    def name(self) -> str:
        return {(0, 0): "1", (1, 0): "e", (0, 1): "m", (1, 1): "eps"}[
            (self.e_parity, self.m_parity)
        ]

    def __str__(self) -> str:
        return self.name


VACUUM = SectorLabel(0, 0)
CHARGE_E = SectorLabel(1, 0)
CHARGE_M = SectorLabel(0, 1)
CHARGE_EPS = SectorLabel(1, 1)
SECTOR_ORDER = (VACUUM, CHARGE_E, CHARGE_M, CHARGE_EPS)


def parse_sector(name: str) -> SectorLabel:
    table = {"1": VACUUM, "i": VACUUM, "e": CHARGE_E, "m": CHARGE_M, "eps": CHARGE_EPS}
    try:
        return table[name.lower()]
    except KeyError:
        raise ValueError(f"unknown sector name {name!r}") from None


def fuse(a: SectorLabel, b: SectorLabel) -> SectorLabel:
    """Fusion is componentwise addition mod 2."""
    return SectorLabel((a.e_parity + b.e_parity) % 2, (a.m_parity + b.m_parity) % 2)


def conjugate_sector(a: SectorLabel) -> SectorLabel:
    """Every sector is its own conjugate: a x a = vacuum."""
    return a


# ---------------------------------------------------------------------------
# Standard two-cone layout and charge transporters
# ---------------------------------------------------------------------------


def standard_cone_pair(patch: Patch) -> tuple[Region, Region]:
    """Two disjoint cones anchored at (2, 0) and (L-2, 0).

    The left cone opens between straight-up and up-left, the right cone
    between up-right and straight-up, leaving a buffer of at least two
    bond columns between them for every L >= 6.
    """
    if patch.L < 6:
        raise NoRoomError(f"standard cone pair needs L >= 6, got {patch.L}")
    reach = 3 * patch.L
    left = cone_region((2, 0), (0, 1), (-1, 1), 0, reach, patch)
    right = cone_region((patch.L - 2, 0), (1, 1), (0, 1), 0, reach, patch)
    return left, right


def _pair_apexes(cone_pair: tuple[Region, Region]) -> tuple[int, int]:
    left, right = cone_pair
    if left.descriptor is None or right.descriptor is None:
        raise GeometryError("transporters need cones built from descriptors")
    a, b = left.descriptor.apex[0], right.descriptor.apex[0]
    if left.descriptor.apex[1] != 0 or right.descriptor.apex[1] != 0 or a >= b:
        raise GeometryError("cone pair must sit on the bottom row, left of right")
    return a, b


@dataclass(frozen=True)
class Transporter:
    """Finite truncation of a charge transporter between two cones."""

    kind: SectorLabel
    truncation_n: int
    operator: PauliOperator
    cone_pair: tuple[Region, Region]


def _primal_transporter_path(a: int, b: int, n: int, patch: Patch):
    seq = [(a, y) for y in range(n + 1)]
    seq += [(x, n) for x in range(a + 1, b + 1)]
    seq += [(b, y) for y in range(n - 1, -1, -1)]
    return primal_path_through(seq, patch)


def _dual_transporter_path(a: int, b: int, n: int, patch: Patch):
    seq = [(a - 1, y) for y in range(n + 1)]
    seq += [(x, n) for x in range(a, b + 1)]
    seq += [(b, y) for y in range(n - 1, -1, -1)]
    return dual_path_through(seq, patch)


def transporter_truncation(
    kind: SectorLabel, n: int, cone_pair: tuple[Region, Region], patch: Patch
) -> Transporter:
    """Level-n truncation: rays of length n inside each cone joined by a
    connector along row n.  The composite kind is the product of the two
    elementary transporters at the same level (they commute: disjoint
    supports by construction)."""
    if kind == VACUUM:
        raise GeometryError("transporters are labelled by non-vacuum sectors")
    a, b = _pair_apexes(cone_pair)
    if n < 1:
        raise NoRoomError("truncation level must be >= 1")
    if n > patch.L - 1 or a - 1 < 0 or b + 1 > patch.L:
        raise NoRoomError(
            f"truncation n={n} does not fit on patch L={patch.L}"
        )
    if kind == CHARGE_E:
        op = path_operator(_primal_transporter_path(a, b, n, patch), patch)
    elif kind == CHARGE_M:
        op = path_operator(_dual_transporter_path(a, b, n, patch), patch)
    else:
        op_e = path_operator(_primal_transporter_path(a, b, n, patch), patch)
        op_m = path_operator(_dual_transporter_path(a, b, n, patch), patch)
        if commutation_sign(op_e, op_m) != 1:
            raise ConsistencyError("elementary transporters must commute")
        op = op_m * op_e
    return Transporter(kind, n, op, cone_pair)


def _comparison_operator(kind: SectorLabel, t: Transporter, patch: Patch) -> PauliOperator:
    """Product of short in-cone legs and a fixed crossing path at height 1.

    The legs join the transporter anchors to the crossing path, so the
    product reaches the same pair of charge sites as the truncation.
    """
    a, b = _pair_apexes(t.cone_pair)
    if kind == CHARGE_E:
        leg1 = primal_path_through([(a, 0), (a, 1)], patch)
        cross = primal_path_through([(x, 1) for x in range(a, b + 1)], patch)
        leg2 = primal_path_through([(b, 1), (b, 0)], patch)
    else:
        leg1 = dual_path_through([(a - 1, 0), (a - 1, 1)], patch)
        cross = dual_path_through([(x, 1) for x in range(a - 1, b + 1)], patch)
        leg2 = dual_path_through([(b, 1), (b, 0)], patch)
    ops = [path_operator(p, patch) for p in (leg1, cross, leg2)]
    return multiply_all(ops, patch.n_bonds)


def transporter_vacuum_identity(
    t: Transporter, group: StabilizerGroup, comparison: PauliOperator | None = None
) -> bool:
    """Check V applied to the ground state equals the ray/base string state.

    With no explicit comparison the canonical one is built: the two
    truncation rays joined by the base path along the bottom row (for the
    composite kind, the product of both elementary comparisons).
    """
    patch = group.patch
    if comparison is None:
        if t.kind == CHARGE_EPS:
            comparison = _comparison_operator(CHARGE_M, t, patch) * _comparison_operator(
                CHARGE_E, t, patch
            )
        else:
            comparison = _comparison_operator(t.kind, t, patch)
    return states_equal(t.operator, comparison, group)


# ---------------------------------------------------------------------------
# Charge detection
# ---------------------------------------------------------------------------


@lru_cache(maxsize=64)
def _loop_observables(loop: DetectionLoop, patch: Patch):
    wa = multiply_all((star_operator(v, patch) for v in sorted(loop.star_set)), patch.n_bonds)
    wb = multiply_all(
        (plaquette_operator(f, patch) for f in sorted(loop.plaquette_set)), patch.n_bonds
    )
    support = frozenset(
        patch.bond_at(i)
        for i in range(patch.n_bonds)
        if ((wa.support_mask | wb.support_mask) >> i) & 1
    )
    if support != loop.annulus_bonds:
        raise ConsistencyError("loop observables stray off the annulus")
    return wa, wb


def sector_of_state(state: ChargedState, loop: DetectionLoop, patch: Patch) -> SectorLabel:
    """Sector read off from the two Wilson-loop eigenvalues.

    Every syndrome site must classify cleanly as inside or outside the
    annulus; a site adjacent to the annulus raises.
    """
    for site in state.star_sites():
        if site in loop.ambiguous_stars:
            raise AmbiguousChargeError(f"star syndrome at {site} sits on the annulus")
    for site in state.plaquette_sites():
        if site in loop.ambiguous_plaquettes:
            raise AmbiguousChargeError(
                f"plaquette syndrome at {site} sits on the annulus"
            )
    wa, wb = _loop_observables(loop, patch)
    rep = state.representative
    e_parity = 0 if commutation_sign(wa, rep) == 1 else 1
    m_parity = 0 if commutation_sign(wb, rep) == 1 else 1
    if e_parity != len(state.star_sites() & loop.star_set) % 2:
        raise ConsistencyError("loop eigenvalue disagrees with enclosed star count")
    if m_parity != len(state.plaquette_sites() & loop.plaquette_set) % 2:
        raise ConsistencyError("loop eigenvalue disagrees with enclosed plaquette count")
    return SectorLabel(e_parity, m_parity)


def _multi_source_bfs(sources, targets, neighbours):
    """Deterministic shortest path from any source to any target."""
    parent: dict = {}
    queue = deque()
    for s in sorted(sources):
        parent[s] = None
        queue.append(s)
    while queue:
        node = queue.popleft()
        if node in targets:
            walk = [node]
            while parent[walk[-1]] is not None:
                walk.append(parent[walk[-1]])
            return list(reversed(walk))
        for nxt in neighbours(node):
            if nxt not in parent:
                parent[nxt] = node
                queue.append(nxt)
    return None


def _escape_paths(loop: DetectionLoop, patch: Patch):
    """Shortest unambiguous-inside -> unambiguous-outside walks, one on
    the lattice and one on the dual lattice."""
    in_stars = loop.star_set - loop.ambiguous_stars
    out_stars = (
        frozenset(patch.vertices()) - loop.star_set - loop.ambiguous_stars
    )
    in_faces = loop.plaquette_set - loop.ambiguous_plaquettes
    out_faces = frozenset(patch.faces()) - loop.plaquette_set - loop.ambiguous_plaquettes

    def vertex_neighbours(v):
        x, y = v
        for cand in ((x, y + 1), (x + 1, y), (x, y - 1), (x - 1, y)):
            if patch.is_vertex(cand):
                yield cand

    def face_neighbours(f):
        x, y = f
        for cand in ((x, y + 1), (x + 1, y), (x, y - 1), (x - 1, y)):
            if patch.is_face(cand):
                yield cand

    walk_v = _multi_source_bfs(in_stars, out_stars, vertex_neighbours)
    walk_f = _multi_source_bfs(in_faces, out_faces, face_neighbours)
    if walk_v is None or walk_f is None:
        raise NoRoomError("no escape route past the detection annulus")
    return primal_path_through(walk_v, patch), dual_path_through(walk_f, patch)


@dataclass(frozen=True)
class SectorCensus:
    """Result of a sector enumeration."""

    witnesses: dict
    exhaustive_labels: frozenset
    complete: bool
    invariance_samples: int

    def labels(self) -> frozenset:
        return frozenset(self.witnesses)


def _random_interior_pauli(bond_indices, n, rng) -> PauliOperator:
    x = z = 0
    for i in bond_indices:
        lx, lz = rng.choice(((0, 0), (1, 0), (1, 1), (0, 1)))
        x |= lx << i
        z |= lz << i
    phase = (x & z).bit_count() % 4
    return PauliOperator(n, x, z, phase)


def enumerate_sectors(
    region: Region,
    loop: DetectionLoop,
    patch: Patch,
    group: StabilizerGroup,
    budget: int,
    *,
    samples: int = 100,
    seed: int = 7,
    allow_escape: bool = True,
    max_work: int = 600_000,
) -> SectorCensus:
    """Realize every sector visible through the detection loop.

    Exhaustively sweeps all Pauli operators of support at most ``budget``
    on the region bonds plus the two canonical escape walks, recording the
    first valid witness per label; labels the sweep cannot reach at this
    budget get constructive witnesses built from the escape walks
    directly.  Each witness is then re-checked against ``samples`` random
    Paulis supported strictly inside the loop, which can move charge
    around the interior but never across the annulus.
    """
    wa, wb = _loop_observables(loop, patch)
    for bond in region.bonds:
        u, v = bond.endpoints()
        for site in (u, v):
            if site not in loop.star_set or site in loop.ambiguous_stars:
                raise GeometryError(f"region vertex {site} is not strictly inside the loop")
        for f in bond.faces(patch):
            if f not in loop.plaquette_set or f in loop.ambiguous_plaquettes:
                raise GeometryError(f"region face {f} is not strictly inside the loop")

    candidates = sorted(patch.bond_index(b) for b in region.bonds)
    escape_primal = escape_dual = None
    if allow_escape:
        escape_primal, escape_dual = _escape_paths(loop, patch)
        extra = {patch.bond_index(b) for p in (escape_primal, escape_dual) for b in p.bonds}
        candidates = sorted(set(candidates) | extra)

    witnesses: dict[SectorLabel, ChargedState] = {}
    exhaustive: set[SectorLabel] = set()

    identity_state = syndrome(PauliOperator.identity(patch.n_bonds), group)
    witnesses[sector_of_state(identity_state, loop, patch)] = identity_state
    exhaustive.add(VACUUM)

    work = sum(
        _n_choose_k(len(candidates), j) * 3**j for j in range(1, budget + 1)
    )
    complete = work <= max_work
    if complete:
        letters = ((1, 0), (1, 1), (0, 1))  # X, Y, Z
        for size in range(1, budget + 1):
            for combo in itertools.combinations(candidates, size):
                for assignment in itertools.product(letters, repeat=size):
                    e = m = 0
                    x = z = 0
                    for i, (lx, lz) in zip(combo, assignment):
                        e ^= lz & (wa.x >> i)
                        m ^= lx & (wb.z >> i)
                        x |= lx << i
                        z |= lz << i
                    label = SectorLabel(e & 1, m & 1)
                    if label in exhaustive:
                        continue
                    phase = (x & z).bit_count() % 4
                    op = PauliOperator(patch.n_bonds, x, z, phase)
                    state = syndrome(op, group)
                    try:
                        found = sector_of_state(state, loop, patch)
                    except AmbiguousChargeError:
                        continue
                    if found != label:
                        raise ConsistencyError("sweep label disagrees with detector")
                    witnesses[label] = state
                    exhaustive.add(label)

    if allow_escape:
        constructive = {
            CHARGE_E: path_operator(escape_primal, patch),
            CHARGE_M: path_operator(escape_dual, patch),
        }
        constructive[CHARGE_EPS] = constructive[CHARGE_E] * constructive[CHARGE_M]
        for label, op in constructive.items():
            if label in witnesses:
                continue
            state = syndrome(op, group)
            found = sector_of_state(state, loop, patch)
            if found != label:
                raise ConsistencyError(
                    f"constructive witness for {label} detects as {found}"
                )
            witnesses[label] = state

    interior = sorted(patch.bond_index(b) for b in loop.interior_bonds(patch))
    rng = random.Random(seed)
    checked = 0
    for label, state in witnesses.items():
        for _ in range(samples):
            g = _random_interior_pauli(interior, patch.n_bonds, rng)
            perturbed = syndrome(state.representative * g, group)
            if sector_of_state(perturbed, loop, patch) != label:
                raise ConsistencyError(
                    f"interior operator moved witness out of sector {label}"
                )
            checked += 1
    return SectorCensus(
        witnesses=dict(witnesses),
        exhaustive_labels=frozenset(exhaustive),
        complete=complete,
        invariance_samples=checked,
    )


def _n_choose_k(n: int, k: int) -> int:
    out = 1
    for i in range(k):
        out = out * (n - i) // (i + 1)
    return out


def sector_census_layout(patch: Patch):
    """Canonical placement for the sector census on any L >= 6.

    A small quadrant cone sits two steps inside the north-east corner of
    the detector box [L-5, L-2]^2, leaving exactly enough clearance for
    an escape walk to unambiguous territory on every patch size.
    """
    if patch.L < 6:
        raise NoRoomError(f"sector census needs L >= 6, got {patch.L}")
    apex = (patch.L - 4, patch.L - 4)
    region = cone_region(apex, (1, 0), (0, 1), 0, 1, patch)
    box = box_region(patch, (patch.L - 5, patch.L - 5), (patch.L - 2, patch.L - 2))
    loop = detection_loop(box, patch)
    return region, loop


# ---------------------------------------------------------------------------
# Sector endomorphisms
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SectorEndomorphism:
    """Conjugation by a charge string truncated at the patch rim."""

    label: SectorLabel
    cone: Region
    string: PauliOperator


_DIRECTIONS = ((0, 1), (1, 0), (0, -1), (-1, 0))


def _vertex_ray_bonds(v, d, patch: Patch):
    x, y = v
    bonds = []
    if d == (0, 1):
        bonds = [Bond(x, yy, NORTH) for yy in range(y, patch.L)]
    elif d == (0, -1):
        bonds = [Bond(x, yy, NORTH) for yy in range(0, y)]
    elif d == (1, 0):
        bonds = [Bond(xx, y, EAST) for xx in range(x, patch.L)]
    else:
        bonds = [Bond(xx, y, EAST) for xx in range(0, x)]
    return bonds


def _face_ray_bonds(f, d, patch: Patch):
    """Bonds crossed by a dual ray from face f out through the patch rim."""
    x, y = f
    if d == (0, 1):
        return [Bond(x, yy, EAST) for yy in range(y + 1, patch.L + 1)]
    if d == (0, -1):
        return [Bond(x, yy, EAST) for yy in range(0, y + 1)]
    if d == (1, 0):
        return [Bond(xx, y, NORTH) for xx in range(x + 1, patch.L + 1)]
    return [Bond(xx, y, NORTH) for xx in range(0, x + 1)]


def _string_in_cone(kind: str, cone: Region, patch: Patch) -> PauliOperator:
    """First axis ray fully inside the cone, searched deterministically."""
    if kind == PRIMAL:
        sites = sorted({v for b in cone.bonds for v in b.endpoints()})
        for v, d in itertools.product(sites, _DIRECTIONS):
            bonds = _vertex_ray_bonds(v, d, patch)
            if bonds and all(b in cone.bonds for b in bonds):
                mask = 0
                for b in bonds:
                    mask |= 1 << patch.bond_index(b)
                return PauliOperator(patch.n_bonds, 0, mask, 0)
    else:
        faces = sorted({f for b in cone.bonds for f in b.faces(patch)})
        for f, d in itertools.product(faces, _DIRECTIONS):
            bonds = _face_ray_bonds(f, d, patch)
            if bonds and all(b in cone.bonds for b in bonds):
                mask = 0
                for b in bonds:
                    mask |= 1 << patch.bond_index(b)
                return PauliOperator(patch.n_bonds, mask, 0, 0)
    raise NoRoomError(f"no {kind} ray to the rim inside the cone")


def charge_endomorphism(label: SectorLabel, cone: Region, patch: Patch) -> SectorEndomorphism:
    """The automorphism adding charge ``label`` localised in ``cone``."""
    string = PauliOperator.identity(patch.n_bonds)
    if label.e_parity:
        string = string * _string_in_cone(PRIMAL, cone, patch)
    if label.m_parity:
        string = string * _string_in_cone(DUAL, cone, patch)
    return SectorEndomorphism(label, cone, string)


def apply_endomorphism(rho: SectorEndomorphism, a: PauliOperator) -> PauliOperator:
    """string * a * string^dagger, which is exactly a commutation sign."""
    sign = commutation_sign(rho.string, a)
    return a if sign == 1 else a.scalar_times_i(2)


def statistical_dimension(a: SectorLabel, cone: Region, patch: Patch) -> Fraction:
    """Quantum dimension of the sector: always 1, certified.

    The endomorphism is an involutive automorphism of the cone algebra
    (checked on the single-bond spanning set), so its image has index one
    and the conjugate intertwiners can be taken to be the identity.
    """
    rho = charge_endomorphism(a, cone, patch)
    for bond in sorted(cone.bonds):
        for letter in ("X", "Z"):
            p = single_bond(bond, letter, patch)
            q = apply_endomorphism(rho, p)
            if not q.same_string(p):
                raise ConsistencyError("endomorphism left the cone algebra")
            if apply_endomorphism(rho, q) != p:
                raise ConsistencyError("endomorphism is not involutive")
    return Fraction(1)


# ---------------------------------------------------------------------------
# Monodromy, degeneracy, S-matrix
# ---------------------------------------------------------------------------


def _monodromy_string(a: SectorLabel, patch: Patch) -> PauliOperator:
    """Charge-a string from the patch centre out through the north rim."""
    c = patch.L // 2
    op = PauliOperator.identity(patch.n_bonds)
    if a.e_parity:
        mask = 0
        for y in range(c, patch.L):
            mask |= 1 << patch.bond_index(Bond(c, y, NORTH))
        op = op * PauliOperator(patch.n_bonds, 0, mask, 0)
    if a.m_parity:
        mask = 0
        for y in range(c + 1, patch.L + 1):
            mask |= 1 << patch.bond_index(Bond(c, y, EAST))
        op = op * PauliOperator(patch.n_bonds, mask, 0, 0)
    return op


def _monodromy_loop(b: SectorLabel, patch: Patch) -> PauliOperator:
    """Closed b-type loop encircling the patch centre."""
    c = patch.L // 2
    op = PauliOperator.identity(patch.n_bonds)
    if b.e_parity:
        loop = rectangle_loop((c - 1, c - 1), (c + 2, c + 2), patch)
        op = op * path_operator(loop, patch)
    if b.m_parity:
        loop = dual_rectangle_loop((c - 2, c - 2), (c + 2, c + 2), patch)
        op = op * path_operator(loop, patch)
    return op


def monodromy(a: SectorLabel, b: SectorLabel, patch: Patch) -> int:
    """Phase picked up hauling a b-type loop around an enclosed a-charge."""
    if patch.L < 6:
        raise NoRoomError(f"monodromy layout needs L >= 6, got {patch.L}")
    string = _monodromy_string(a, patch)
    loop = _monodromy_loop(b, patch)
    return commutation_sign(loop, string)


def is_degenerate(a: SectorLabel, patch: Patch) -> bool:
    """Whether a braids trivially with every sector."""
    return all(monodromy(a, b, patch) == 1 for b in SECTOR_ORDER)


@dataclass(frozen=True)
class SMatrix:
    """Exact rational braiding matrix in sector order (1, e, m, eps)."""

    entries: tuple[tuple[Fraction, ...], ...]

    def determinant_scaled(self) -> int:
        """Integer determinant of 2S."""
        m = [[int(2 * v) for v in row] for row in self.entries]
        return _det4(m)

    def is_symmetric(self) -> bool:
        return all(
            self.entries[i][j] == self.entries[j][i] for i in range(4) for j in range(4)
        )

    def times_transpose_is_identity(self) -> bool:
        for i in range(4):
            for j in range(4):
                acc = sum(self.entries[i][k] * self.entries[j][k] for k in range(4))
                if acc != (1 if i == j else 0):
                    return False
        return True

    def is_invertible(self) -> bool:
        return self.determinant_scaled() != 0


def _det4(m) -> int:
    def det3(a):
        return (
            a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1])
            - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0])
            + a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0])
        )

    total = 0
    for j in range(4):
        minor = [[m[i][k] for k in range(4) if k != j] for i in range(1, 4)]
        total += (-1) ** j * m[0][j] * det3(minor)
    return total


def s_matrix(patch: Patch) -> SMatrix:
    """Assemble S from quantum dimensions and the monodromy pairing.

    All dimensions are 1 and the total dimension is 2, so the entries are
    monodromy phases over two.
    """
    rows = []
    for a in SECTOR_ORDER:
        rows.append(
            tuple(Fraction(monodromy(a, b, patch), 2) for b in SECTOR_ORDER)
        )
    return SMatrix(tuple(rows))
