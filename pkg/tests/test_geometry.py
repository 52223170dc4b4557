import json
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

import conekit as ck
from conekit.geometry import (
    DUAL,
    EAST,
    NORTH,
    PRIMAL,
    Bond,
    ConeDescriptor,
    box_region,
    dual_path_through,
    enumerate_dual_loops,
    enumerate_primal_loops,
    path_boundary,
    primal_path_through,
    rectangle_loop,
)


def brute_force_bonds(L):
    """Independent enumeration: all (origin, orientation) pairs allowed."""
    out = []
    for x in range(L + 1):
        for y in range(L + 1):
            if x < L:
                out.append((x, y, EAST))
            if y < L:
                out.append((x, y, NORTH))
    return out


@pytest.mark.parametrize("L", [1, 2, 3, 4, 5, 6, 7, 8])
def test_bond_count_formula_matches_enumeration(L):
    assert ck.bond_count(L) == len(brute_force_bonds(L))


def test_build_patch_counts():
    p = ck.build_patch(2)
    assert p.n_bonds == 12
    assert len(p.vertices()) == 9
    assert len(p.faces()) == 4
    p6 = ck.build_patch(6)
    assert p6.n_bonds == 84  # enumeration oracle above gives the same


def test_build_patch_rejects_small_sizes():
    # the counting formula itself is fine down at L=1 (gives 4)...
    assert ck.bond_count(1) == 4
    # ...but patches below L=2 are rejected
    with pytest.raises(ck.InvalidSizeError):
        ck.build_patch(1)
    with pytest.raises(ck.InvalidSizeError):
        ck.build_patch(0)


def test_bond_index_is_a_bijection(patch6):
    seen = set()
    for bond in patch6.bonds:
        idx = patch6.bond_index(bond)
        assert patch6.bond_at(idx) == bond
        seen.add(idx)
    assert seen == set(range(patch6.n_bonds))


def test_star_and_face_bonds(patch6):
    assert len(patch6.star_bonds((3, 3))) == 4
    assert len(patch6.star_bonds((0, 0))) == 2
    assert len(patch6.star_bonds((0, 3))) == 3
    assert len(patch6.face_bonds((2, 2))) == 4
    with pytest.raises(ck.GeometryError):
        patch6.star_bonds((7, 0))
    with pytest.raises(ck.GeometryError):
        patch6.face_bonds((6, 0))


# ---------------------------------------------------------------------------
# find_path
# ---------------------------------------------------------------------------


def test_find_path_straight_line(patch6):
    path = ck.find_path(PRIMAL, (0, 0), (2, 0), patch6)
    assert path.bonds == (Bond(0, 0, EAST), Bond(1, 0, EAST))


def test_find_path_empty(patch6):
    path = ck.find_path(PRIMAL, (0, 0), (0, 0), patch6)
    assert path.bonds == ()
    assert path_boundary(path) == frozenset()


def test_find_path_l_shape(patch6):
    path = ck.find_path(PRIMAL, (0, 0), (1, 1), patch6)
    assert path.bonds == (Bond(0, 0, EAST), Bond(1, 0, NORTH))
    # derived check: GF(2) vertex incidence leaves exactly the endpoints
    assert path_boundary(path) == {(0, 0), (1, 1)}


def test_find_path_outside_patch(patch6):
    with pytest.raises(ck.GeometryError):
        ck.find_path(PRIMAL, (0, 0), (7, 0), patch6)
    with pytest.raises(ck.GeometryError):
        ck.find_path(DUAL, (0, 0), (6, 0), patch6)


coords = st.tuples(st.integers(0, 6), st.integers(0, 6))
face_coords = st.tuples(st.integers(0, 5), st.integers(0, 5))


@given(a=coords, b=coords)
def test_primal_path_boundary_is_endpoints(patch6, a, b):
    path = ck.find_path(PRIMAL, a, b, patch6)
    expected = frozenset() if a == b else {a, b}
    assert path_boundary(path) == expected


@given(a=face_coords, b=face_coords)
def test_dual_path_boundary_is_endpoints(patch6, a, b):
    path = ck.find_path(DUAL, a, b, patch6)
    expected = frozenset() if a == b else {a, b}
    assert path_boundary(path) == expected


@given(a=coords, b=coords)
def test_primal_path_consecutive_bonds_share_a_vertex(patch6, a, b):
    path = ck.find_path(PRIMAL, a, b, patch6)
    for u, v in zip(path.bonds, path.bonds[1:]):
        assert set(u.endpoints()) & set(v.endpoints())


# ---------------------------------------------------------------------------
# cone_region
# ---------------------------------------------------------------------------


def test_quadrant_cone_matches_direct_enumeration(patch6):
    region = ck.cone_region((3, 3), (1, 0), (0, 1), 0, 100, patch6)
    # oracle: with endpoints removed, a unit bond meets the closed
    # quadrant x,y >= 3 exactly when its origin does
    expected = {b for b in patch6.bonds if b.x >= 3 and b.y >= 3}
    assert region.bonds == frozenset(expected)


def test_cone_degenerate_radii(patch6):
    with pytest.raises(ck.EmptyRegionError):
        ck.cone_region((3, 3), (1, 0), (0, 1), 2, 2, patch6)


def test_cone_invalid_opening(patch6):
    with pytest.raises(ck.GeometryError):
        ck.cone_region((3, 3), (1, 0), (-1, 0), 0, 5, patch6)  # exactly pi
    with pytest.raises(ck.GeometryError):
        ck.cone_region((3, 3), (0, 1), (1, 0), 0, 5, patch6)  # clockwise


def test_cone_radial_truncation_excludes_far_bonds(patch6):
    near = ck.cone_region((0, 0), (1, 0), (0, 1), 0, 2, patch6)
    assert Bond(0, 0, EAST) in near.bonds
    assert Bond(5, 5, EAST) not in near.bonds
    ring = ck.cone_region((0, 0), (1, 0), (0, 1), 4, 100, patch6)
    assert Bond(0, 0, EAST) not in ring.bonds
    assert Bond(5, 5, EAST) in ring.bonds


def test_standard_cone_pair_disjoint_with_buffer(patch6):
    left, right = ck.standard_cone_pair(patch6)
    assert not (left.bonds & right.bonds)
    # derived: the two East columns between the cones touch neither
    for y in range(7):
        for x in (2, 3):
            assert Bond(x, y, EAST) not in left.bonds
            assert Bond(x, y, EAST) not in right.bonds


@given(
    r1=st.integers(1, 4),
    grow=st.integers(0, 3),
    shrink=st.fractions(min_value=0, max_value=Fraction(1, 2)),
)
def test_cone_monotone_in_radius(patch6, r1, grow, shrink):
    small = ck.cone_region((1, 1), (1, 0), (0, 1), shrink, r1, patch6)
    big = ck.cone_region((1, 1), (1, 0), (0, 1), 0, r1 + grow, patch6)
    assert small.bonds <= big.bonds


def test_cone_monotone_in_angle(patch6):
    narrow = ck.cone_region((3, 0), (1, 2), (-1, 2), 0, 20, patch6)
    wide = ck.cone_region((3, 0), (1, 1), (-1, 1), 0, 20, patch6)
    assert narrow.bonds <= wide.bonds


def test_cone_deterministic(patch6):
    a = ck.cone_region((2, 2), (1, 1), (-1, 2), Fraction(1, 2), 5, patch6)
    b = ck.cone_region((2, 2), (1, 1), (-1, 2), Fraction(1, 2), 5, patch6)
    assert a.bonds == b.bonds


def test_descriptor_json_round_trip():
    d = ConeDescriptor((2, 0), (0, 1), (-1, 1), Fraction(1, 2), Fraction(18))
    data = json.loads(json.dumps(d.to_json_dict()))
    assert ConeDescriptor.from_json_dict(data) == d
    assert data["apex"] == [2, 0]
    assert data["slopes"] == [[0, 1], [-1, 1]]
    assert data["r"] == [[1, 2], 18]


# ---------------------------------------------------------------------------
# detection_loop
# ---------------------------------------------------------------------------


def test_detection_loop_unit_block(patch6):
    # region = the four bonds of one interior face; its vertex box is a
    # 2x2 star block whose Wilson loop is the 8-bond ring around it
    region = ck.Region(frozenset(patch6.face_bonds((3, 3))))
    loop = ck.detection_loop(region, patch6)
    assert loop.star_set == {(3, 3), (4, 3), (3, 4), (4, 4)}
    # oracle: the cut of the box, computed directly
    cut = {
        b
        for b in patch6.bonds
        if ((b.endpoints()[0] in loop.star_set) != (b.endpoints()[1] in loop.star_set))
    }
    assert len(cut) == 8
    assert cut <= loop.annulus_bonds
    assert not (loop.annulus_bonds & region.bonds)


def test_detection_loop_empty_region(patch6):
    loop = ck.detection_loop(ck.Region(frozenset()), patch6)
    assert loop.star_set == frozenset()
    assert loop.annulus_bonds == frozenset()


def test_detection_loop_no_room(patch6):
    region = ck.Region(frozenset({Bond(0, 3, EAST)}))
    with pytest.raises(ck.NoRoomError):
        ck.detection_loop(region, patch6)


def test_detection_loop_observables_avoid_region(patch6):
    region = box_region(patch6, (2, 2), (4, 4))
    loop = ck.detection_loop(region, patch6)
    from conekit.anyons import _loop_observables

    wa, wb = _loop_observables(loop, patch6)
    region_mask = 0
    for bond in region.bonds:
        region_mask |= 1 << patch6.bond_index(bond)
    assert wa.support_mask & region_mask == 0
    assert wb.support_mask & region_mask == 0


# ---------------------------------------------------------------------------
# loop enumeration
# ---------------------------------------------------------------------------


def test_enumerate_primal_loops_against_networkx(patch2):
    nx = pytest.importorskip("networkx")
    graph = nx.Graph()
    for bond in patch2.bonds:
        graph.add_edge(*bond.endpoints())
    expected = sum(
        1 for cycle in nx.simple_cycles(graph, length_bound=8) if len(cycle) >= 4
    )
    loops = enumerate_primal_loops(patch2, 8)
    assert len(loops) == expected
    for loop in loops:
        assert path_boundary(loop) == frozenset()


def test_enumerate_dual_loops_closed(patch6):
    loops = enumerate_dual_loops(patch6, 6)
    assert loops
    for loop in loops:
        assert path_boundary(loop) == frozenset()


def test_rectangle_loop_matches_enumeration(patch6):
    loop = rectangle_loop((1, 1), (3, 2), patch6)
    assert len(loop.bonds) == 2 * (2 + 1)
    assert path_boundary(loop) == frozenset()
