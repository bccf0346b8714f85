import random

import numpy as np
import pytest

from toricode.code import (
    DistanceResult,
    SectionPoly,
    _build_suffix_table,
    _gray_steps,
    _rank,
    build_code,
    count_torus_zeros,
    min_distance_exact,
    multiply_sections,
    weight_distribution,
    weight_of_section,
)
from toricode.errors import PolygonTooLargeForField, SupportOutsidePolygon, TooLarge
from toricode.field import field_from_order
from toricode.polygon import LatticePolygon

HEX9 = LatticePolygon([(1, 0), (2, 0), (0, 1), (1, 2), (3, 2), (3, 3)])
P54 = LatticePolygon([(0, 0), (1, 0), (3, 1), (2, 2), (1, 2)])
Q1 = LatticePolygon([(0, 0), (2, 1), (1, 2)])
SKEW_TRIANGLE = LatticePolygon([(0, 0), (1, 4), (4, 1)])

WRAPPED_SECTION = SectionPoly({(1, 0): 1, (3, 3): 1, (0, 2): 1})


def x_minus(field, a):
    return SectionPoly({(1, 0): 1, (0, 0): field.neg(a)})


def y_minus(field, b):
    return SectionPoly({(0, 1): 1, (0, 0): field.neg(b)})


def test_build_hexagon_f5():
    code = build_code(HEX9, field_from_order(5))
    assert (code.n, code.k) == (16, 9)
    assert code.translation == (0, 0)
    assert code.monomials == tuple(HEX9.lattice_points())
    # row of monomial (0, 1) is g^j repeated per i-block
    r = code.monomials.index((0, 1))
    expected = [code.field.exp_table[j % 4] for i in range(4) for j in range(4)]
    assert list(code.generator[r]) == expected


def test_build_skew_triangle_f8():
    code = build_code(SKEW_TRIANGLE, field_from_order(8))
    assert (code.n, code.k) == (49, 11)


def test_build_point_polygon():
    f = field_from_order(5)
    code = build_code(LatticePolygon([(3, 2)]), f)
    assert (code.n, code.k) == (16, 1)
    assert code.translation == (-3, -2)
    assert list(code.generator[0]) == [1] * 16


def test_build_rejects_wide_polygon():
    with pytest.raises(PolygonTooLargeForField):
        build_code(HEX9, field_from_order(4))


def test_zero_count_independent_of_modulus():
    for mod in (None, (1, 1, 0, 1), (1, 0, 1, 1)):
        f = field_from_order(8, modulus=mod)
        assert count_torus_zeros(WRAPPED_SECTION, f) == 21


def test_zero_count_trivia():
    for q in (3, 5, 8, 9):
        f = field_from_order(q)
        assert count_torus_zeros(x_minus(f, 1), f) == q - 1
        assert count_torus_zeros(SectionPoly({(0, 0): 1}), f) == 0
        assert count_torus_zeros(SectionPoly({}), f) == (q - 1) ** 2


def test_section_helpers():
    f = field_from_order(5)
    s = multiply_sections(x_minus(f, 2), x_minus(f, 3), f)
    # (x-2)(x-3) = x^2 - 5x + 6 = x^2 + 1 over F_5
    assert s.terms == {(2, 0): 1, (0, 0): 1}
    assert s.newton_polygon() == LatticePolygon([(0, 0), (2, 0)])
    assert s.shift(0, 2).terms == {(2, 2): 1, (0, 2): 1}
    assert SectionPoly({(1, 1): 0, (0, 0): 3}).terms == {(0, 0): 3}


def test_weight_of_product_section_f8():
    f = field_from_order(8)
    code = build_code(HEX9, f)
    s = multiply_sections(
        x_minus(f, 1), multiply_sections(y_minus(f, 2), y_minus(f, 3), f), f
    )
    s = s.shift(1, 0)  # slide the rectangle support into the polygon
    assert weight_of_section(s, code) == 49 - (3 * 7 - 2)


def test_weight_of_constant_section():
    code = build_code(HEX9, field_from_order(7))
    assert weight_of_section(SectionPoly({(1, 1): 1}), code) == 36


def test_wrapped_section_support_leaves_the_hexagon():
    # its monomial (0,2) falls outside P; only its torus evaluation
    # matches a minimum weight codeword
    f = field_from_order(8)
    code = build_code(HEX9, f)
    with pytest.raises(SupportOutsidePolygon):
        weight_of_section(WRAPPED_SECTION, code)
    assert code.n - count_torus_zeros(WRAPPED_SECTION, f) == 28


def test_min_distance_hexagon_f5():
    code = build_code(HEX9, field_from_order(5))
    res = min_distance_exact(code)
    assert res == DistanceResult(6, True, (5**9 - 1) // 4)
    # cached on the code object afterwards
    assert min_distance_exact(code) is res


def test_min_distance_hexagon_f8():
    res = min_distance_exact(build_code(HEX9, field_from_order(8)))
    assert res.weight == 28 and res.exact


def test_min_distance_pentagon_f8():
    res = min_distance_exact(build_code(P54, field_from_order(8)))
    assert res.weight == 33 and res.exact


def test_min_distance_triangle_q1_f8():
    res = min_distance_exact(build_code(Q1, field_from_order(8)))
    assert res.weight == 40 and res.exact


def test_weight_distribution_point_polygon():
    code = build_code(LatticePolygon([(0, 0)]), field_from_order(5))
    assert weight_distribution(code) == {0: 1, 16: 4}


def test_weight_distribution_hexagon_f5():
    code = build_code(HEX9, field_from_order(5))
    dist = weight_distribution(code)
    assert dist[0] == 1
    assert sum(dist.values()) == 5**9
    assert min(w for w in dist if w) == 6


def test_weight_distribution_guard():
    code = build_code(LatticePolygon([(0, 0), (6, 0), (0, 6), (6, 6)]), field_from_order(8))
    with pytest.raises(TooLarge):
        weight_distribution(code)


def test_distribution_invariant_under_unimodular_maps():
    rng = random.Random(31001)
    checked = 0
    while checked < 60:
        q = rng.choice((3, 4, 5))
        span = q - 2
        pts = [
            (rng.randint(0, span), rng.randint(0, span))
            for _ in range(rng.randint(1, 4))
        ]
        poly = LatticePolygon(pts)
        m = ((1, 0), (0, 1))
        for _ in range(rng.randint(1, 3)):
            s = rng.randint(-2, 2)
            m = (
                ((m[0][0] + s * m[1][0], m[0][1] + s * m[1][1]), m[1])
                if rng.random() < 0.5
                else (m[0], (m[1][0] + s * m[0][0], m[1][1] + s * m[0][1]))
            )
        image = poly.apply_map(m).translate_to_origin()
        if image.fits_in_box(q) is None:
            continue
        f = field_from_order(q)
        assert weight_distribution(build_code(poly, f)) == weight_distribution(
            build_code(image, f)
        )
        checked += 1


def test_dimension_matches_point_count():
    rng = random.Random(31002)
    for _ in range(100):
        q = rng.choice((4, 5, 7, 8))
        span = q - 2
        pts = [
            (rng.randint(0, span), rng.randint(0, span))
            for _ in range(rng.randint(1, 5))
        ]
        poly = LatticePolygon(pts)
        code = build_code(poly, field_from_order(q))
        assert code.k == poly.num_lattice_points


def test_distance_equals_distribution_minimum():
    rng = random.Random(31003)
    for _ in range(25):
        q = rng.choice((3, 4, 5))
        pts = [(rng.randint(0, 1), rng.randint(0, 1)) for _ in range(rng.randint(1, 4))]
        code = build_code(LatticePolygon(pts), field_from_order(q))
        dist = weight_distribution(code)
        res = min_distance_exact(code)
        assert res.exact and res.weight == min(w for w in dist if w)


def test_section_weights_bound_distance():
    f = field_from_order(5)
    code = build_code(P54, f)
    d = min_distance_exact(code).weight
    rng = random.Random(31004)
    pts = code.polygon.lattice_points()
    for _ in range(50):
        terms = {
            pt: rng.randrange(1, 5) for pt in pts if rng.random() < 0.5
        }
        if not terms:
            continue
        assert weight_of_section(SectionPoly(terms), code) >= d


def test_threads_agree():
    code = build_code(HEX9, field_from_order(5))
    one = min_distance_exact(code)
    code2 = build_code(HEX9, field_from_order(5))
    two = min_distance_exact(code2, threads=2)
    assert (one.weight, one.exact, one.enumerated) == (two.weight, two.exact, two.enumerated)


def test_deadline_returns_upper_bound():
    code = build_code(SKEW_TRIANGLE, field_from_order(8))
    res = min_distance_exact(code, deadline=0.15)
    assert not res.exact
    assert 28 <= res.weight <= 49
    assert 0 < res.enumerated < (8**11 - 1) // 7


def test_checkpoint_resume(tmp_path):
    path = str(tmp_path / "search.json")
    code = build_code(HEX9, field_from_order(8))
    first = min_distance_exact(code, deadline=0.25, checkpoint=path)
    code2 = build_code(HEX9, field_from_order(8))
    second = min_distance_exact(code2, checkpoint=path)
    assert second.exact and second.weight == 28
    assert second.enumerated == (8**9 - 1) // 7
    if not first.exact:
        assert first.enumerated < second.enumerated


def test_gray_steps_cover_all_tuples():
    for radix, width in ((2, 4), (3, 3), (5, 2)):
        digits = [0] * width
        seen = {tuple(digits)}
        for pos, delta in _gray_steps(radix, width):
            assert delta in (-1, 1)
            digits[pos] += delta
            assert 0 <= digits[pos] < radix
            seen.add(tuple(digits))
        assert len(seen) == radix**width


def test_suffix_table_matches_messages():
    f = field_from_order(3)
    square = LatticePolygon([(0, 0), (1, 0), (0, 1), (1, 1)])
    code = build_code(square, f)
    table = _build_suffix_table(f, code.log_generator, 2)
    assert table.shape == (9, code.n)
    for idx in range(9):
        msg = [0, 0, idx // 3, idx % 3]  # digit j scales row k-1-j
        assert np.array_equal(table[idx], code.evaluate_message(msg))


def test_rank_detects_dependence():
    f = field_from_order(5)
    code = build_code(LatticePolygon([(0, 0), (2, 0)]), f)
    g = code.generator
    stacked = np.vstack([g, g[0:1]])
    assert _rank(stacked, f) == code.k
