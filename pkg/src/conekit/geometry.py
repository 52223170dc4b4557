"""Finite-patch lattice geometry.

A patch of side length L is the square grid with vertices (x, y),
0 <= x, y <= L.  Qubits live on bonds (edges).  An East bond at (x, y)
joins (x, y) to (x+1, y); a North bond joins (x, y) to (x, y+1), so a
patch carries exactly 2*L*(L+1) bonds.  Faces (plaquettes) are labelled
by their lower-left corner, 0 <= x, y <= L-1.

Everything here is an immutable value; all operations are pure functions
and safe to share between threads.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, NamedTuple

from .errors import (
    ConsistencyError,
    EmptyRegionError,
    GeometryError,
    InvalidSizeError,
    NoRoomError,
)

EAST = "E"
NORTH = "N"

PRIMAL = "primal"
DUAL = "dual"

Vertex = tuple[int, int]
Face = tuple[int, int]


class Bond(NamedTuple):
    """A lattice edge: origin vertex plus orientation (EAST or NORTH)."""

    x: int
    y: int
    kind: str

    def endpoints(self) -> tuple[Vertex, Vertex]:
        if self.kind == EAST:
            return (self.x, self.y), (self.x + 1, self.y)
        return (self.x, self.y), (self.x, self.y + 1)

    def faces(self, patch: "Patch") -> tuple[Face, ...]:
        """Interior faces bordered by this bond (1 on the patch rim, else 2)."""
        if self.kind == EAST:
            candidates = [(self.x, self.y - 1), (self.x, self.y)]
        else:
            candidates = [(self.x - 1, self.y), (self.x, self.y)]
        return tuple(f for f in candidates if patch.is_face(f))


class Patch:
    """An L x L patch: bond enumeration and site predicates.

    Immutable after construction; ``bond_index`` is a bijection between
    bonds and ``range(2*L*(L+1))`` with East bonds enumerated first.
    """

    def __init__(self, side_length: int):
        if side_length < 2:
            raise InvalidSizeError(f"patch side length must be >= 2, got {side_length}")
        self.L = side_length
        east = [Bond(x, y, EAST) for y in range(self.L + 1) for x in range(self.L)]
        north = [Bond(x, y, NORTH) for y in range(self.L) for x in range(self.L + 1)]
        self.bonds: tuple[Bond, ...] = tuple(east + north)
        self.n_bonds = len(self.bonds)
        self._index = {b: i for i, b in enumerate(self.bonds)}
        if self.n_bonds != 2 * self.L * (self.L + 1):
            raise ConsistencyError("bond count formula violated")

    def __repr__(self) -> str:
        return f"Patch(L={self.L}, bonds={self.n_bonds})"

    def bond_index(self, bond: Bond) -> int:
        try:
            return self._index[bond]
        except KeyError:
            raise GeometryError(f"bond {bond} not on patch L={self.L}") from None

    def bond_at(self, index: int) -> Bond:
        return self.bonds[index]

    def is_bond(self, bond: Bond) -> bool:
        return bond in self._index

    def is_vertex(self, v: Vertex) -> bool:
        return 0 <= v[0] <= self.L and 0 <= v[1] <= self.L

    def is_face(self, f: Face) -> bool:
        return 0 <= f[0] <= self.L - 1 and 0 <= f[1] <= self.L - 1

    def vertices(self) -> list[Vertex]:
        return [(x, y) for y in range(self.L + 1) for x in range(self.L + 1)]

    def faces(self) -> list[Face]:
        return [(x, y) for y in range(self.L) for x in range(self.L)]

    def star_bonds(self, v: Vertex) -> tuple[Bond, ...]:
        """The 2..4 bonds meeting at vertex v (truncated on the rim)."""
        if not self.is_vertex(v):
            raise GeometryError(f"vertex {v} not on patch L={self.L}")
        x, y = v
        candidates = [
            Bond(x, y, EAST),
            Bond(x - 1, y, EAST),
            Bond(x, y, NORTH),
            Bond(x, y - 1, NORTH),
        ]
        return tuple(b for b in candidates if self.is_bond(b))

    def face_bonds(self, f: Face) -> tuple[Bond, ...]:
        """The 4 bonds around interior face f."""
        if not self.is_face(f):
            raise GeometryError(f"face {f} not on patch L={self.L}")
        x, y = f
        return (
            Bond(x, y, EAST),
            Bond(x, y + 1, EAST),
            Bond(x, y, NORTH),
            Bond(x + 1, y, NORTH),
        )


def build_patch(side_length: int) -> Patch:
    """Build a patch with 2L(L+1) bonds, (L+1)^2 stars and L^2 plaquettes."""
    return Patch(side_length)


def bond_count(side_length: int) -> int:
    """Closed-form bond count for a patch of the given side."""
    return 2 * side_length * (side_length + 1)


# ---------------------------------------------------------------------------
# Paths
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Path:
    """An ordered chain of bonds.

    For a primal path the bonds themselves form a walk between two
    vertices; for a dual path ``bonds`` are the patch bonds *crossed* by a
    walk between two faces.  ``endpoints`` are equal for a closed loop.
    """

    kind: str
    bonds: tuple[Bond, ...]
    endpoints: tuple[tuple[int, int], tuple[int, int]]

    def __len__(self) -> int:
        return len(self.bonds)


def find_path(kind: str, a: tuple[int, int], b: tuple[int, int], patch: Patch) -> Path:
    """Canonical L-shaped path from a to b: move along x first, then y."""
    if kind == PRIMAL:
        if not (patch.is_vertex(a) and patch.is_vertex(b)):
            raise GeometryError(f"path endpoints {a}, {b} must be patch vertices")
        bonds = []
        x, y = a
        while x < b[0]:
            bonds.append(Bond(x, y, EAST))
            x += 1
        while x > b[0]:
            x -= 1
            bonds.append(Bond(x, y, EAST))
        while y < b[1]:
            bonds.append(Bond(x, y, NORTH))
            y += 1
        while y > b[1]:
            y -= 1
            bonds.append(Bond(x, y, NORTH))
        return Path(PRIMAL, tuple(bonds), (a, b))
    if kind == DUAL:
        if not (patch.is_face(a) and patch.is_face(b)):
            raise GeometryError(f"dual endpoints {a}, {b} must be patch faces")
        bonds = []
        x, y = a
        while x < b[0]:
            bonds.append(Bond(x + 1, y, NORTH))
            x += 1
        while x > b[0]:
            bonds.append(Bond(x, y, NORTH))
            x -= 1
        while y < b[1]:
            bonds.append(Bond(x, y + 1, EAST))
            y += 1
        while y > b[1]:
            bonds.append(Bond(x, y, EAST))
            y -= 1
        return Path(DUAL, tuple(bonds), (a, b))
    raise GeometryError(f"unknown path kind {kind!r}")


def dual_path_through(faces: Iterable[Face], patch: Patch) -> Path:
    """Dual path visiting the given sequence of pairwise-adjacent faces."""
    seq = list(faces)
    bonds = []
    for f, g in zip(seq, seq[1:]):
        dx, dy = g[0] - f[0], g[1] - f[1]
        if abs(dx) + abs(dy) != 1:
            raise GeometryError(f"faces {f} and {g} are not adjacent")
        if dx == 1:
            shared = Bond(g[0], f[1], NORTH)
        elif dx == -1:
            shared = Bond(f[0], f[1], NORTH)
        elif dy == 1:
            shared = Bond(f[0], g[1], EAST)
        else:
            shared = Bond(f[0], f[1], EAST)
        if not patch.is_bond(shared):
            raise GeometryError(f"crossed bond {shared} not on patch")
        bonds.append(shared)
    return Path(DUAL, tuple(bonds), (seq[0], seq[-1]))


def primal_path_through(vertices: Iterable[Vertex], patch: Patch) -> Path:
    """Primal path visiting the given sequence of adjacent vertices."""
    seq = list(vertices)
    bonds = []
    for u, v in zip(seq, seq[1:]):
        dx, dy = v[0] - u[0], v[1] - u[1]
        if abs(dx) + abs(dy) != 1:
            raise GeometryError(f"vertices {u} and {v} are not adjacent")
        if dx == 1:
            bond = Bond(u[0], u[1], EAST)
        elif dx == -1:
            bond = Bond(v[0], v[1], EAST)
        elif dy == 1:
            bond = Bond(u[0], u[1], NORTH)
        else:
            bond = Bond(u[0], v[1], NORTH)
        if not patch.is_bond(bond):
            raise GeometryError(f"bond {bond} not on patch")
        bonds.append(bond)
    return Path(PRIMAL, tuple(bonds), (seq[0], seq[-1]))


def rectangle_loop(lo: Vertex, hi: Vertex, patch: Patch) -> Path:
    """Closed primal loop around the axis-aligned rectangle [lo, hi]."""
    (x0, y0), (x1, y1) = lo, hi
    if not (x0 < x1 and y0 < y1):
        raise GeometryError("rectangle corners must be strictly ordered")
    ring = [(x, y0) for x in range(x0, x1)]
    ring += [(x1, y) for y in range(y0, y1)]
    ring += [(x, y1) for x in range(x1, x0, -1)]
    ring += [(x0, y) for y in range(y1, y0, -1)]
    ring.append((x0, y0))
    return primal_path_through(ring, patch)


def dual_rectangle_loop(lo: Face, hi: Face, patch: Patch) -> Path:
    """Closed dual loop through the ring of faces bounding [lo, hi]."""
    (x0, y0), (x1, y1) = lo, hi
    if not (x0 < x1 and y0 < y1):
        raise GeometryError("face-rectangle corners must be strictly ordered")
    ring = [(x, y0) for x in range(x0, x1)]
    ring += [(x1, y) for y in range(y0, y1)]
    ring += [(x, y1) for x in range(x1, x0, -1)]
    ring += [(x0, y) for y in range(y1, y0, -1)]
    ring.append((x0, y0))
    return dual_path_through(ring, patch)


def path_boundary(path: Path) -> frozenset[tuple[int, int]]:
    """GF(2) boundary of the bond chain: sites hit an odd number of times."""
    counts: dict[tuple[int, int], int] = {}
    for bond in path.bonds:
        if path.kind == PRIMAL:
            sites = bond.endpoints()
        else:
            if bond.kind == NORTH:
                sites = ((bond.x - 1, bond.y), (bond.x, bond.y))
            else:
                sites = ((bond.x, bond.y - 1), (bond.x, bond.y))
        for s in sites:
            counts[s] = counts.get(s, 0) + 1
    return frozenset(s for s, c in counts.items() if c % 2 == 1)


# ---------------------------------------------------------------------------
# Regions and cones
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ConeDescriptor:
    """A truncated angular sector: apex, two direction vectors, radii.

    The sector sweeps counterclockwise from direction ``d_low`` to
    ``d_high``; the opening angle must be strictly less than pi.  Radii
    are measured from the apex; membership is decided exactly over the
    rationals.
    """

    apex: Vertex
    d_low: tuple[int, int]
    d_high: tuple[int, int]
    r_min: Fraction
    r_max: Fraction

    def to_json_dict(self) -> dict:
        def enc(r: Fraction):
            return r.numerator if r.denominator == 1 else [r.numerator, r.denominator]

        return {
            "apex": list(self.apex),
            "slopes": [list(self.d_low), list(self.d_high)],
            "r": [enc(self.r_min), enc(self.r_max)],
        }

    @staticmethod
    def from_json_dict(data: dict) -> "ConeDescriptor":
        def dec(v) -> Fraction:
            if isinstance(v, list):
                return Fraction(v[0], v[1])
            return Fraction(v)

        return ConeDescriptor(
            apex=tuple(data["apex"]),
            d_low=tuple(data["slopes"][0]),
            d_high=tuple(data["slopes"][1]),
            r_min=dec(data["r"][0]),
            r_max=dec(data["r"][1]),
        )


@dataclass(frozen=True)
class Region:
    """A set of patch bonds, optionally tagged with a cone descriptor."""

    bonds: frozenset[Bond]
    descriptor: ConeDescriptor | None = None

    def __contains__(self, bond: Bond) -> bool:
        return bond in self.bonds

    def union(self, other: "Region") -> "Region":
        return Region(self.bonds | other.bonds)

    def complement(self, patch: Patch) -> "Region":
        return Region(frozenset(patch.bonds) - self.bonds)

    def vertex_box(self) -> tuple[int, int, int, int] | None:
        """Bounding box (x0, x1, y0, y1) of all bond endpoints, or None."""
        if not self.bonds:
            return None
        xs, ys = [], []
        for bond in self.bonds:
            for (x, y) in bond.endpoints():
                xs.append(x)
                ys.append(y)
        return min(xs), max(xs), min(ys), max(ys)


def box_region(patch: Patch, lo: Vertex, hi: Vertex) -> Region:
    """All bonds with both endpoints inside the vertex box [lo, hi]."""
    (x0, y0), (x1, y1) = lo, hi
    picked = []
    for bond in patch.bonds:
        (ax, ay), (bx, by) = bond.endpoints()
        if x0 <= ax and bx <= x1 and y0 <= ay and by <= y1 and x0 <= bx and y0 <= by:
            picked.append(bond)
    if not picked:
        raise EmptyRegionError(f"box {lo}..{hi} contains no bonds")
    return Region(frozenset(picked))


def _cross(u: tuple, v: tuple):
    return u[0] * v[1] - u[1] * v[0]


def _halfplane_interval(c0: Fraction, c1: Fraction, lo: Fraction, hi: Fraction):
    """Intersect {t : c0 + c1*t >= 0} with [lo, hi]; None if empty."""
    if c1 == 0:
        return None if c0 < 0 else (lo, hi)
    t = Fraction(-c0, c1)
    if c1 > 0:
        lo = max(lo, t)
    else:
        hi = min(hi, t)
    return None if lo > hi else (lo, hi)


def _segment_meets_sector(
    a: Vertex, b: Vertex, cone: ConeDescriptor
) -> bool:
    """Exact test: does the open segment (a, b) meet the truncated sector?

    The segment is parametrised as a + t*(b - a), t in (0, 1); the sector
    constraints are two closed half-planes through the apex plus the
    closed radial band r_min <= |p - apex| <= r_max.  Unit-length bonds
    keep the quadratic radial constraint monic, so every comparison below
    stays rational.
    """
    ax, ay = a
    ex, ey = b[0] - a[0], b[1] - a[1]
    wx, wy = Fraction(ax - cone.apex[0]), Fraction(ay - cone.apex[1])

    lo, hi = Fraction(0), Fraction(1)
    # cross(d_low, p - apex) >= 0
    got = _halfplane_interval(
        _cross(cone.d_low, (wx, wy)), _cross(cone.d_low, (ex, ey)), lo, hi
    )
    if got is None:
        return False
    lo, hi = got
    # cross(p - apex, d_high) >= 0
    got = _halfplane_interval(
        _cross((wx, wy), cone.d_high), _cross((ex, ey), cone.d_high), lo, hi
    )
    if got is None:
        return False
    lo, hi = got

    rmin2 = cone.r_min * cone.r_min
    rmax2 = cone.r_max * cone.r_max
    # g(t) = |w + t e|^2 = t^2 + 2 (w.e) t + |w|^2   (|e| = 1 for a bond)
    we = wx * ex + wy * ey
    ww = wx * wx + wy * wy
    g = lambda t: t * t + 2 * we * t + ww

    def in_open_unit(t: Fraction) -> bool:
        return 0 < t < 1

    if lo == hi:
        return in_open_unit(lo) and rmin2 <= g(lo) <= rmax2

    t_star = min(max(-we, lo), hi)
    g_min = g(t_star)
    if g_min > rmax2:
        return False
    if g_min == rmax2:
        # single tangency point; must avoid the excluded endpoints
        return in_open_unit(t_star)
    # the sub-band {g <= rmax2} now has positive length inside [lo, hi]
    if g(lo) > rmax2 or g(hi) > rmax2:
        # band edge reaches g = rmax2 > rmin2 at an interior point
        return True
    g_lo, g_hi = g(lo), g(hi)
    peak = max(g_lo, g_hi)
    if peak > rmin2:
        return True
    if peak < rmin2:
        return False
    # peak == rmin2: only the maximising closed endpoint(s) qualify
    if g_lo == rmin2 and in_open_unit(lo):
        return True
    if g_hi == rmin2 and in_open_unit(hi):
        return True
    return False


def cone_region(
    apex: Vertex,
    slope_low: tuple[int, int],
    slope_high: tuple[int, int],
    r_min,
    r_max,
    patch: Patch,
) -> Region:
    """Bonds whose open segment meets the truncated angular sector.

    ``slope_low`` and ``slope_high`` are integer direction vectors; the
    sector opens counterclockwise from the first to the second, strictly
    less than a half turn.
    """
    r_min, r_max = Fraction(r_min), Fraction(r_max)
    if r_min < 0 or r_min >= r_max:
        raise EmptyRegionError(f"need 0 <= r_min < r_max, got [{r_min}, {r_max}]")
    if _cross(slope_low, slope_high) <= 0:
        raise GeometryError(
            "sector directions must open counterclockwise by less than a half turn"
        )
    cone = ConeDescriptor(apex, tuple(slope_low), tuple(slope_high), r_min, r_max)
    picked = [
        bond
        for bond in patch.bonds
        if _segment_meets_sector(*bond.endpoints(), cone)
    ]
    if not picked:
        raise EmptyRegionError(f"cone at {apex} contains no bonds")
    return Region(frozenset(picked), descriptor=cone)


# ---------------------------------------------------------------------------
# Detection loops
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DetectionLoop:
    """A closed charge detector surrounding a region.

    ``star_set``/``plaquette_set`` are the enclosed stabilizer sites; the
    two Wilson-loop observables (product of the enclosed star operators,
    product of the enclosed plaquette operators) are supported on
    ``annulus_bonds`` only, disjoint from the enclosed region's bonds.
    Sites adjacent to the annulus cannot be classified as inside or
    outside; they are listed as ambiguous.
    """

    star_set: frozenset[Vertex]
    plaquette_set: frozenset[Face]
    annulus_bonds: frozenset[Bond]
    ambiguous_stars: frozenset[Vertex]
    ambiguous_plaquettes: frozenset[Face]

    def star_is_inside(self, v: Vertex) -> bool:
        return v in self.star_set

    def plaquette_is_inside(self, f: Face) -> bool:
        return f in self.plaquette_set

    def interior_bonds(self, patch: Patch) -> frozenset[Bond]:
        """Bonds all of whose incident sites are unambiguously inside."""
        good_star = self.star_set - self.ambiguous_stars
        good_plaq = self.plaquette_set - self.ambiguous_plaquettes
        picked = []
        for bond in patch.bonds:
            u, v = bond.endpoints()
            if u not in good_star or v not in good_star:
                continue
            if all(f in good_plaq for f in bond.faces(patch)):
                picked.append(bond)
        return frozenset(picked)


def detection_loop(region: Region, patch: Patch) -> DetectionLoop:
    """Build the tight detector around the region's vertex bounding box.

    The enclosed stars are exactly the box vertices; the enclosed
    plaquettes are the faces overlapping the box.  Requires one plaquette
    of clearance between the box and the patch rim so both Wilson loops
    close up.
    """
    box = region.vertex_box()
    if box is None:
        return DetectionLoop(
            frozenset(), frozenset(), frozenset(), frozenset(), frozenset()
        )
    x0, x1, y0, y1 = box
    if x0 < 1 or y0 < 1 or x1 > patch.L - 1 or y1 > patch.L - 1:
        raise NoRoomError(
            f"region box [{x0},{x1}]x[{y0},{y1}] touches the rim of patch L={patch.L}"
        )
    stars = frozenset(
        (x, y) for x in range(x0, x1 + 1) for y in range(y0, y1 + 1)
    )
    plaquettes = frozenset(
        (x, y) for x in range(x0 - 1, x1 + 1) for y in range(y0 - 1, y1 + 1)
    )

    # support of prod A_s over the box: bonds with exactly one endpoint inside
    cut = []
    for bond in patch.bonds:
        u, v = bond.endpoints()
        if (u in stars) != (v in stars):
            cut.append(bond)
    # support of prod B_p over the face box: bonds bordering exactly one face
    perim = []
    for bond in patch.bonds:
        inside = [f for f in bond.faces(patch) if f in plaquettes]
        if len(inside) == 1 and len(bond.faces(patch)) == 2:
            perim.append(bond)
        elif len(bond.faces(patch)) == 1 and bond.faces(patch)[0] in plaquettes:
            perim.append(bond)
    annulus = frozenset(cut) | frozenset(perim)
    if annulus & region.bonds:
        raise ConsistencyError("annulus overlaps the enclosed region")

    amb_stars = frozenset(
        v
        for v in patch.vertices()
        if any(b in annulus for b in patch.star_bonds(v))
    )
    amb_plaqs = frozenset(
        f
        for f in patch.faces()
        if any(b in annulus for b in patch.face_bonds(f))
    )
    return DetectionLoop(stars, plaquettes, annulus, amb_stars, amb_plaqs)


# ---------------------------------------------------------------------------
# Cycle enumeration (used by the loop-identity checks)
# ---------------------------------------------------------------------------


def _simple_cycles(nodes, neighbours, max_len):
    """All simple cycles up to max_len, one representative per cycle."""
    order = {v: i for i, v in enumerate(sorted(nodes))}
    cycles = []

    def extend(start, path, used):
        current = path[-1]
        for nxt in neighbours(current):
            if nxt == start and len(path) >= 3:
                if order[path[1]] < order[current]:
                    cycles.append(path + [start])
                continue
            if nxt in used or order[nxt] <= order[start]:
                continue
            if len(path) + 1 > max_len:
                continue
            used.add(nxt)
            extend(start, path + [nxt], used)
            used.discard(nxt)

    for start in sorted(nodes, key=order.get):
        extend(start, [start], {start})
    return cycles


def enumerate_primal_loops(patch: Patch, max_perimeter: int) -> list[Path]:
    """All simple closed primal loops with at most max_perimeter bonds."""

    def neighbours(v):
        x, y = v
        for cand in ((x + 1, y), (x - 1, y), (x, y + 1), (x, y - 1)):
            if patch.is_vertex(cand):
                yield cand

    loops = _simple_cycles(patch.vertices(), neighbours, max_perimeter)
    return [primal_path_through(seq, patch) for seq in loops]


def enumerate_dual_loops(patch: Patch, max_perimeter: int) -> list[Path]:
    """All simple closed dual loops with at most max_perimeter crossings."""

    def neighbours(f):
        x, y = f
        for cand in ((x + 1, y), (x - 1, y), (x, y + 1), (x, y - 1)):
            if patch.is_face(cand):
                yield cand

    loops = _simple_cycles(patch.faces(), neighbours, max_perimeter)
    return [dual_path_through(seq, patch) for seq in loops]
