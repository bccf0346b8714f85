import random

import pytest

from toricode.errors import (
    CoordinateOverflow,
    DegeneratePolygon,
    EmptyInput,
    NotApplicable,
)
from toricode.polygon import (
    LatticePolygon,
    convex_hull,
    lattice_equivalence,
    minkowski_sum,
    polygon_from_edges,
    sort_directions_ccw,
)

HEX9 = LatticePolygon([(1, 0), (2, 0), (0, 1), (1, 2), (3, 2), (3, 3)])
P54 = LatticePolygon([(0, 0), (1, 0), (3, 1), (2, 2), (1, 2)])
Q1 = LatticePolygon([(0, 0), (2, 1), (1, 2)])
T_1_4_4_1 = LatticePolygon([(0, 0), (1, 4), (4, 1)])


def test_hull_canonical_order():
    assert HEX9.vertices == ((0, 1), (1, 0), (2, 0), (3, 2), (3, 3), (1, 2))
    # interior and duplicate points never become vertices
    again = LatticePolygon(list(HEX9.vertices) + [(1, 1), (2, 1), (1, 0)])
    assert again == HEX9


def test_hull_degenerate():
    assert LatticePolygon([(2, 3)]).vertices == ((2, 3),)
    seg = LatticePolygon([(4, 2), (0, 0), (2, 1)])
    assert seg.vertices == ((0, 0), (4, 2))
    assert seg.dim == 1
    assert LatticePolygon([(1, 1), (1, 1)]).dim == 0
    with pytest.raises(EmptyInput):
        convex_hull([])


def test_counts_hexagon():
    assert HEX9.volume2 == 10
    assert HEX9.boundary_count == 6
    assert HEX9.interior_count == 3
    assert HEX9.num_lattice_points == 9


def test_counts_pentagon():
    assert P54.volume2 == 7
    assert P54.boundary_count == 5
    assert P54.interior_count == 2
    assert P54.num_lattice_points == 7


def test_counts_triangles():
    assert Q1.volume2 == 3
    assert Q1.interior_count == 1
    assert Q1.lattice_points() == [(0, 0), (1, 1), (1, 2), (2, 1)]
    assert T_1_4_4_1.volume2 == 15
    assert T_1_4_4_1.boundary_count == 5
    assert T_1_4_4_1.interior_count == 6
    assert T_1_4_4_1.num_lattice_points == 11


def test_counts_segment_and_point():
    seg = LatticePolygon([(0, 0), (6, 4)])
    assert seg.volume2 == 0
    assert seg.boundary_count == 3
    assert seg.num_lattice_points == 3
    assert seg.lattice_points() == [(0, 0), (3, 2), (6, 4)]
    pt = LatticePolygon([(5, -1)])
    assert pt.num_lattice_points == 1
    assert pt.lattice_points() == [(5, -1)]


def test_edge_multiset():
    assert HEX9.edge_multiset() == {
        (1, -1): 1,
        (1, 0): 1,
        (1, 2): 1,
        (0, 1): 1,
        (-2, -1): 1,
        (-1, -1): 1,
    }
    seg = LatticePolygon([(0, 0), (4, 2)])
    assert seg.edge_multiset() == {(2, 1): 2, (-2, -1): 2}
    assert LatticePolygon([(3, 3)]).edge_multiset() == {}


def test_minkowski_pentagon_splits():
    seg = LatticePolygon([(0, 0), (1, 0)])
    assert minkowski_sum(Q1, seg) == P54
    assert minkowski_sum(seg, Q1) == P54


def test_minkowski_of_segments():
    a = LatticePolygon([(0, 0), (1, 0)])
    b = LatticePolygon([(0, 0), (0, 1)])
    assert minkowski_sum(a, b).vertices == ((0, 0), (1, 0), (1, 1), (0, 1))
    assert minkowski_sum(a, a).vertices == ((0, 0), (2, 0))
    with pytest.raises(EmptyInput):
        minkowski_sum()


def test_contains():
    assert HEX9.contains((1, 1))
    assert HEX9.contains((3, 3))
    assert not HEX9.contains((0, 0))
    assert not HEX9.contains((2, 3))
    seg = LatticePolygon([(0, 0), (4, 2)])
    assert seg.contains((2, 1))
    assert not seg.contains((1, 1))
    assert not seg.contains((6, 3))


def test_transforms():
    assert HEX9.translate(2, -1).vertices[0] == (2, 0)
    assert P54.translate_to_origin() == P54
    shifted = P54.translate(3, 5)
    assert shifted.translate_to_origin() == P54
    sheared = HEX9.apply_map(((1, 1), (0, 1)))
    assert sheared.volume2 == HEX9.volume2
    assert sheared.num_lattice_points == HEX9.num_lattice_points
    with pytest.raises(ValueError):
        HEX9.apply_map(((2, 0), (0, 1)))
    tri = LatticePolygon([(0, 0), (1, 0), (0, 1)])
    assert tri.dilate(3).vertices == ((0, 0), (3, 0), (0, 3))
    assert tri.dilate(0).dim == 0


def test_fits_in_box():
    assert HEX9.fits_in_box(5) == (0, 0)
    assert HEX9.fits_in_box(4) is None
    assert HEX9.translate(2, -1).fits_in_box(5) == (-2, 1)
    assert LatticePolygon([(0, 0), (6, 0)]).fits_in_box(8) == (0, 0)
    assert LatticePolygon([(0, 0), (7, 0)]).fits_in_box(8) is None


def test_counts_record():
    assert HEX9.counts() == {"volume2": 10, "total": 9, "boundary": 6, "interior": 3}
    seg = LatticePolygon([(0, 0), (3, 0)])
    assert seg.counts() == {"volume2": 0, "total": 4, "boundary": 4, "interior": 0}


def test_genus_and_scott():
    assert HEX9.genus() == 3
    assert P54.genus() == 2
    assert LatticePolygon([(0, 0), (1, 4), (4, 1)]).genus() == 6
    d3 = LatticePolygon([(0, 0), (3, 0), (0, 3)])
    assert d3.genus() == 1
    # the full triangle of side 3 meets the bound with equality
    assert d3.num_lattice_points == 10 and d3.scott_check()
    assert HEX9.scott_check()
    with pytest.raises(DegeneratePolygon):
        LatticePolygon([(0, 0), (4, 2)]).genus()
    with pytest.raises(NotApplicable):
        LatticePolygon([(0, 0), (1, 0), (1, 1), (0, 1)]).scott_check()


def test_coordinate_overflow():
    with pytest.raises(CoordinateOverflow):
        LatticePolygon([(0, 0), (1 << 31, 2)])
    big = LatticePolygon([(0, 0), ((1 << 31) - 1, 0), (0, 1)])
    with pytest.raises(CoordinateOverflow):
        big.translate(5, 0)


def test_sort_directions_ccw():
    dirs = [(0, -1), (-1, 1), (1, 0), (-1, -1), (0, 1), (1, 1), (-1, 0), (1, -1)]
    assert sort_directions_ccw(dirs) == [
        (1, 0),
        (1, 1),
        (0, 1),
        (-1, 1),
        (-1, 0),
        (-1, -1),
        (0, -1),
        (1, -1),
    ]


def test_polygon_from_edges():
    edges = [(1, -1), (1, 0), (1, 2), (0, 1), (-2, -1), (-1, -1)]
    assert polygon_from_edges((0, 1), edges) == HEX9
    with pytest.raises(DegeneratePolygon):
        polygon_from_edges((0, 0), [(1, 0), (0, 1)])


def test_lattice_equivalence_shear():
    m = ((1, 1), (0, 1))
    img = HEX9.apply_map(m, (4, -2))
    found = lattice_equivalence(HEX9, img)
    assert found is not None
    fm, ft = found
    assert HEX9.apply_map(fm, ft) == img


def test_lattice_equivalence_reflection():
    # x <-> y swap has determinant -1
    img = Q1.apply_map(((0, 1), (1, 0)))
    found = lattice_equivalence(Q1, img)
    assert found is not None
    fm, ft = found
    assert Q1.apply_map(fm, ft) == img


def test_lattice_equivalence_rejects():
    d2 = LatticePolygon([(0, 0), (2, 0), (0, 2)])
    flat = LatticePolygon([(0, 0), (4, 0), (0, 1)])
    # same area, boundary count and vertex count, different edge lengths
    assert d2.volume2 == flat.volume2 == 4
    assert d2.boundary_count == flat.boundary_count == 6
    assert lattice_equivalence(d2, flat) is None
    assert lattice_equivalence(d2, LatticePolygon([(0, 0), (1, 0)])) is None


def test_lattice_equivalence_segments_and_points():
    a = LatticePolygon([(0, 0), (2, 4)])
    b = LatticePolygon([(1, 1), (3, 0), (5, -1)])  # collinear, same length
    found = lattice_equivalence(a, b)
    assert found is not None
    fm, ft = found
    assert a.apply_map(fm, ft) == b
    assert lattice_equivalence(a, LatticePolygon([(0, 0), (1, 2)])) is None
    pa, pb = LatticePolygon([(1, 2)]), LatticePolygon([(-3, 0)])
    assert lattice_equivalence(pa, pb) == (((1, 0), (0, 1)), (-4, -2))


def _random_polygon(rng, span=8, npts=8):
    pts = [(rng.randint(0, span), rng.randint(0, span)) for _ in range(npts)]
    return LatticePolygon(pts)


def _random_unimodular(rng):
    m = ((1, 0), (0, 1))
    for _ in range(rng.randint(1, 4)):
        k = rng.randint(-3, 3)
        if rng.random() < 0.5:
            s = ((1, k), (0, 1))
        else:
            s = ((1, 0), (k, 1))
        m = (
            (
                m[0][0] * s[0][0] + m[0][1] * s[1][0],
                m[0][0] * s[0][1] + m[0][1] * s[1][1],
            ),
            (
                m[1][0] * s[0][0] + m[1][1] * s[1][0],
                m[1][0] * s[0][1] + m[1][1] * s[1][1],
            ),
        )
    if rng.random() < 0.5:
        m = ((-m[0][0], -m[0][1]), (-m[1][0], -m[1][1]))
    if rng.random() < 0.5:
        m = (m[1], m[0])  # swap rows, flips orientation
    return m


def test_property_point_count_matches_brute_force():
    rng = random.Random(1001)
    for _ in range(600):
        p = _random_polygon(rng, span=7)
        box = [
            (x, y)
            for x in range(-1, 9)
            for y in range(-1, 9)
            if p.contains((x, y))
        ]
        assert sorted(box) == p.lattice_points()
        assert len(box) == p.num_lattice_points


def test_property_minkowski_counts_and_edges():
    rng = random.Random(1002)
    for _ in range(500):
        a = _random_polygon(rng, span=6, npts=rng.randint(1, 7))
        b = _random_polygon(rng, span=6, npts=rng.randint(1, 7))
        s = minkowski_sum(a, b)
        assert s == minkowski_sum(b, a)
        # the sum can only gain points relative to sliding one summand
        assert s.num_lattice_points >= a.num_lattice_points + b.num_lattice_points - 1
        assert s.volume2 >= a.volume2 + b.volume2
        if a.dim == 2 and b.dim == 2:
            ea, eb, es = a.edge_multiset(), b.edge_multiset(), s.edge_multiset()
            merged = dict(ea)
            for d, g in eb.items():
                merged[d] = merged.get(d, 0) + g
            assert merged == es


def test_property_minkowski_associative():
    rng = random.Random(1003)
    for _ in range(200):
        a, b, c = (_random_polygon(rng, span=5, npts=4) for _ in range(3))
        assert minkowski_sum(minkowski_sum(a, b), c) == minkowski_sum(
            a, minkowski_sum(b, c)
        )


def test_property_unimodular_invariants():
    rng = random.Random(1004)
    for _ in range(500):
        p = _random_polygon(rng)
        m = _random_unimodular(rng)
        img = p.apply_map(m, (rng.randint(-9, 9), rng.randint(-9, 9)))
        assert img.num_lattice_points == p.num_lattice_points
        assert img.boundary_count == p.boundary_count
        assert img.volume2 == p.volume2
        assert img.dim == p.dim


def test_property_equivalence_roundtrip():
    rng = random.Random(1005)
    hits = 0
    for _ in range(300):
        p = _random_polygon(rng, npts=rng.randint(2, 8))
        m = _random_unimodular(rng)
        img = p.apply_map(m, (rng.randint(-6, 6), rng.randint(-6, 6)))
        found = lattice_equivalence(p, img)
        assert found is not None
        fm, ft = found
        assert p.apply_map(fm, ft) == img
        hits += 1
    assert hits == 300


def test_property_pick_formula_directly():
    rng = random.Random(1006)
    for _ in range(500):
        p = _random_polygon(rng, span=10, npts=rng.randint(3, 10))
        if p.dim < 2:
            continue
        assert p.volume2 == 2 * p.interior_count + p.boundary_count - 2
        assert len(p.lattice_points()) == p.num_lattice_points
