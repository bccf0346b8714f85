"""Minimum-distance bounds for toric surface codes.

Closed-form distances for the standard polygon families, upper bounds
witnessed by explicit product sections, the decomposition lower bound
with its applicability threshold, and a report aggregator that pattern
matches a polygon against all of the above.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import gcd, isqrt
from typing import NamedTuple, Optional, Sequence

import numpy as np

from .code import (
    SectionPoly,
    build_code,
    count_torus_zeros,
    evaluate_section,
    min_distance_exact,
    multiply_sections,
)
from .decomp import DEFAULT_BUDGET, MinkowskiDecomposition, best_subpolygon_decomposition
from .errors import (
    DeadlineExceeded,
    FieldTooSmall,
    HypothesisViolated,
    InvariantViolation,
    NoDecomposition,
    PolygonTooLargeForField,
)
from .field import FieldSpec, field_from_order
from .polygon import LatticePolygon, lattice_equivalence

# exhaustive section maximization is allowed up to this many coefficient
# vectors; larger spaces fall back to the split-form catalog
DEFAULT_SECTION_BUDGET = 300_000

# cap on candidate sections kept per summand when building products
_CANDIDATE_CAP = 64

# exact search over candidate tuples is done up to this many combinations
_PAIRING_CAP = 10_000

# parameter grid limit when matching against the rank-3 families
_RANK3_SCAN_CAP = 16

# components of a decomposition are searched exhaustively only up to this
# many normalized messages unless long runs were requested
_COMPONENT_SEARCH_CAP = 5_000_000


# -- closed forms ---------------------------------------------------------------


def d_segment(a: int, q: int) -> int:
    """Distance of the code on a lattice segment of length a."""
    if a < 0:
        raise ValueError("segment length must be nonnegative")
    if q <= a + 1:
        raise FieldTooSmall(f"a length-{a} segment needs q > {a + 1}, got q = {q}")
    return (q - 1) ** 2 - a * (q - 1)


def d_full_triangle(a: int, q: int) -> int:
    """Distance for the right triangle conv{(0,0),(a,0),(0,a)}."""
    if a < 0:
        raise ValueError("side length must be nonnegative")
    if q <= a + 1:
        raise FieldTooSmall(f"a side-{a} triangle needs q > {a + 1}, got q = {q}")
    return (q - 1) ** 2 - a * (q - 1)


def d_triangle(a: int, b: int, c: int, q: int) -> int:
    """Distance for conv{(0,0),(a,0),(b,c)} when a >= b + c.

    The hypothesis is inclusive: a == b + c is allowed.  Below it the
    formula does not apply and the caller must fall back to search.
    """
    if min(a, b, c) < 0:
        raise ValueError("triangle parameters must be nonnegative")
    if a < b + c:
        raise HypothesisViolated(f"triangle form needs a >= b + c, got {a} < {b + c}")
    if q <= a + 1:
        raise FieldTooSmall(f"base length {a} needs q > {a + 1}, got q = {q}")
    return (q - 1) ** 2 - a * (q - 1)


def d_rectangle(d: int, e: int, q: int) -> int:
    """Distance for the axis box [0,d] x [0,e]."""
    if min(d, e) < 0:
        raise ValueError("box sides must be nonnegative")
    if q <= max(d, e) + 1:
        raise FieldTooSmall(f"a {d}x{e} box needs q > {max(d, e) + 1}, got q = {q}")
    return (q - 1) ** 2 - (d + e) * (q - 1) + d * e


def d_hirzebruch(d: int, e: int, r: int, q: int) -> int:
    """Distance for conv{(0,0),(d,0),(0,e),(d,e+rd)} with twist r >= 1.

    r = 0 is the untwisted case and delegates to the box formula.
    """
    if r == 0:
        return d_rectangle(d, e, q)
    if r < 0 or d < 0 or e < 0:
        raise ValueError("parameters must be nonnegative")
    if e + d * r >= q - 1:
        raise FieldTooSmall(f"need e + d*r < q - 1, got {e + d * r} >= {q - 1}")
    return (q - 1) ** 2 - (r * d + e) * (q - 1)


# -- the rank-3 families --------------------------------------------------------

_RANK3_CASES = ("I", "II", "III", "IV")


def _rank3_polygon(case: str, a: int, b: int, c: int, r: int) -> LatticePolygon:
    # s and t are the two support values that decide which edge carries
    # the longest lattice run
    s = a + b
    t = c + (r - 1) * a + r * b
    if case == "I":
        n = s + t
        return LatticePolygon([(0, 0), (n, 0), (b + c, s), (b, s), (0, a)])
    if case == "II":
        if r == 1:
            # the pentagon degenerates; which quadrilateral survives
            # depends on the sign of c - a
            if c > a:
                return LatticePolygon([(0, 0), (s, 0), (s, b + c), (0, c - a)])
            if a > c:
                return LatticePolygon([(0, 0), (a - c, 0), (s, b + c), (0, b + c)])
            return LatticePolygon([(0, 0), (s, 0), (s, s)])
        return LatticePolygon([(0, 0), (s, 0), (s, t), (b, c + r * b), (0, c)])
    if case == "III":
        return LatticePolygon([(0, 0), (1, 0), (1, 2 * b + c - a), (0, b + c)])
    if case == "IV":
        w = s + t
        return LatticePolygon([(0, 0), (w, 0), (w, a), (w - b, s), (r * s, s)])
    raise ValueError(f"unknown family case {case!r}")


def _rank3_drop(case: str, a: int, b: int, c: int, r: int) -> int:
    s = a + b
    t = c + (r - 1) * a + r * b
    if case in ("I", "IV"):
        return s + t
    if case == "II":
        return max(s, t)
    return 2 * b + c - a


def rank3_family_distance(
    case: str, a: int, b: int, c: int, r: int, q: int
) -> tuple[int, LatticePolygon]:
    """Closed-form distance for one of the four rank-3 fan families.

    Returns the distance together with the constructed polygon so the
    caller can cross-check against search.  Case III carries the extra
    hypothesis b > a; its polygon does not involve r, which is only
    validated.
    """
    case = case.strip().upper()
    if case not in _RANK3_CASES:
        raise ValueError(f"case must be one of {_RANK3_CASES}, got {case!r}")
    if min(a, b, c, r) < 1:
        raise HypothesisViolated("family parameters a, b, c, r must be >= 1")
    if case == "III" and b <= a:
        raise HypothesisViolated(f"case III needs b > a, got b = {b}, a = {a}")
    poly = _rank3_polygon(case, a, b, c, r)
    if poly.fits_in_box(q) is None:
        w, h = poly.width_height()
        raise FieldTooSmall(f"the family polygon spans {w}x{h}, needs q >= {max(w, h) + 2}")
    m = _rank3_drop(case, a, b, c, r)
    return (q - 1) ** 2 - m * (q - 1), poly


# -- bounds from decompositions -------------------------------------------------


def upper_bound_from_decomposition(
    dec: MinkowskiDecomposition, q: int, component_distances: Sequence[int]
) -> int:
    """Sum of component distances minus (ell - 1)(q-1)^2.

    Valid only under the hypothesis that maximizing sections of the
    components have pairwise disjoint zero sets, which is not checked
    here; see certified_upper_bound for the unconditional variant.
    """
    ds = list(component_distances)
    if len(ds) != dec.ell:
        raise ValueError(f"expected {dec.ell} component distances, got {len(ds)}")
    return sum(ds) - (dec.ell - 1) * (q - 1) ** 2


class MaxZeroResult(NamedTuple):
    section: SectionPoly
    zeros: int
    exhaustive: bool


def _iter_normalized_messages(k: int, q: int):
    # scalar multiples share a zero set, so fix the leading coefficient
    for lead in range(k):
        head = [0] * lead + [1]
        for tail in itertools.product(range(q), repeat=k - lead - 1):
            yield head + list(tail)


def _max_zero_exhaustive(poly, field, cap=None):
    """Maximum zero count over all sections supported on the polygon.

    Returns the count and up to `cap` distinct maximizing sections in
    enumeration order.
    """
    pts = [tuple(p) for p in poly.lattice_points()]
    rows = [evaluate_section(SectionPoly({p: 1}), field) for p in pts]
    best = -1
    winners: list[list[int]] = []
    for msg in _iter_normalized_messages(len(pts), field.q):
        word = None
        for row, coeff in zip(rows, msg):
            if not coeff:
                continue
            term = field.scale_np(row, coeff)
            word = term if word is None else field.add_np(word, term)
        zeros = int(np.count_nonzero(word == 0))
        if zeros > best:
            best = zeros
            winners = [msg]
        elif zeros == best and (cap is None or len(winners) < cap):
            winners.append(msg)
    sections = [
        SectionPoly({p: c for p, c in zip(pts, msg) if c}) for msg in winners
    ]
    return best, sections


def _best_run(ptset, u):
    # longest consecutive lattice run along u; convexity makes
    # consecutive and endpoint containment equivalent
    best, base = 0, None
    for p in sorted(ptset):
        x, y = p
        t = 0
        while (x + u[0], y + u[1]) in ptset:
            x, y, t = x + u[0], y + u[1], t + 1
        if t > best:
            best, base = t, p
    return best, base


def _run_directions(pts):
    dirs = set()
    for (x1, y1), (x2, y2) in itertools.combinations(pts, 2):
        dx, dy = x2 - x1, y2 - y1
        g = gcd(abs(dx), abs(dy))
        dx, dy = dx // g, dy // g
        if dx < 0 or (dx == 0 and dy < 0):
            dx, dy = -dx, -dy
        dirs.add((dx, dy))
    return sorted(dirs)


def _pencil_section(field, base, u, alphas) -> SectionPoly:
    """Product of (X^u - alpha) factors, shifted to start at base."""
    s = SectionPoly({(0, 0): 1})
    for al in alphas:
        s = multiply_sections(s, SectionPoly({u: 1, (0, 0): field.neg(al)}), field)
    return s.shift(*base)


def _catalog_sections(poly, field, variants=1):
    """Split-form candidate sections supported inside the polygon.

    One pencil per lattice direction with a run, plus one product of
    two pencils per unimodular direction pair that spans a cell inside
    the polygon.  `variants` rotates the root choices to give callers
    room to avoid common zeros.
    """
    q = field.q
    pts = [tuple(p) for p in poly.lattice_points()]
    ptset = set(pts)
    out = []
    runs = {}
    for u in _run_directions(pts):
        t, base = _best_run(ptset, u)
        if t:
            runs[u] = (t, base)

    def roots(length, offset):
        return [field.exp_table[(offset + i) % (q - 1)] for i in range(length)]

    for u in sorted(runs):
        t, base = runs[u]
        for j in range(max(1, min(variants, q - 1))):
            out.append(_pencil_section(field, base, u, roots(t, j)))

    for u, v in itertools.combinations(sorted(runs), 2):
        if abs(u[0] * v[1] - u[1] * v[0]) != 1:
            continue
        best = None
        for p in pts:
            t1 = 0
            x, y = p
            while (x + u[0], y + u[1]) in ptset:
                x, y, t1 = x + u[0], y + u[1], t1 + 1
            for i in range(1, t1 + 1):
                t2 = 0
                cx, cy = p[0] + i * u[0], p[1] + i * u[1]
                while (
                    (p[0] + v[0] * (t2 + 1), p[1] + v[1] * (t2 + 1)) in ptset
                    and (cx + v[0] * (t2 + 1), cy + v[1] * (t2 + 1)) in ptset
                ):
                    t2 += 1
                if t2 < 1:
                    continue
                score = (i + t2) * (q - 1) - i * t2
                if best is None or score > best[0]:
                    best = (score, p, i, t2)
        if best is not None:
            _, p, t1, t2 = best
            sec = multiply_sections(
                _pencil_section(field, (0, 0), u, roots(t1, 0)),
                _pencil_section(field, (0, 0), v, roots(t2, 0)),
                field,
            )
            out.append(sec.shift(*p))
    return out


def max_zero_section(
    poly: LatticePolygon, field: FieldSpec, budget: int = DEFAULT_SECTION_BUDGET
) -> MaxZeroResult:
    """Section with the most torus zeros among those supported on poly.

    Exhaustive over all coefficient vectors when q^#(P) fits in the
    budget; otherwise the best member of a catalog of split forms, with
    exhaustive=False to flag that the count is only a lower estimate of
    the true maximum.
    """
    q = field.q
    shift = poly.fits_in_box(q)
    if shift is None:
        w, h = poly.width_height()
        raise PolygonTooLargeForField(f"polygon spans {w}x{h}, too large for q = {q}")
    boxed = poly.translate(*shift)
    if q ** boxed.num_lattice_points <= budget:
        zeros, sections = _max_zero_exhaustive(boxed, field, cap=1)
        section, exhaustive = sections[0], True
    else:
        best = None
        for i, cand in enumerate(_catalog_sections(boxed, field)):
            z = count_torus_zeros(cand, field)
            if best is None or z > best[0]:
                best = (z, i, cand)
        if best is None:
            pt = boxed.vertices[0]
            best = (0, 0, SectionPoly({pt: 1}))
        zeros, _, section = best
        exhaustive = False
    return MaxZeroResult(section.shift(-shift[0], -shift[1]), zeros, exhaustive)


def _max_zero_candidates(poly, field, budget=DEFAULT_SECTION_BUDGET, cap=_CANDIDATE_CAP):
    # candidate sections for one summand, highest zero counts first
    q = field.q
    if q ** poly.num_lattice_points <= budget:
        _, sections = _max_zero_exhaustive(poly, field, cap=cap)
        return sections
    scored = []
    for i, cand in enumerate(_catalog_sections(poly, field, variants=q - 1)):
        scored.append((-count_torus_zeros(cand, field), i, cand))
    scored.sort(key=lambda s: s[:2])
    return [cand for _, _, cand in scored[:cap]]


def _best_product_section(dec, field):
    """Product over the parts of a decomposition maximizing total zeros.

    Candidate tuples are searched exactly when the combination count is
    small, else by greedy accumulation restarted from every choice of
    the first factor.  Returns (zeros, section) or None.
    """
    cand_lists = [_max_zero_candidates(p, field) for p in dec.parts]
    if any(not lst for lst in cand_lists):
        return None
    masks = [
        [evaluate_section(s, field) == 0 for s in lst] for lst in cand_lists
    ]
    sizes = [len(lst) for lst in cand_lists]
    total = 1
    for s in sizes:
        total *= s

    best_count, best_pick = -1, None
    if total <= _PAIRING_CAP:
        for pick in itertools.product(*(range(s) for s in sizes)):
            union = masks[0][pick[0]]
            for part, idx in enumerate(pick[1:], start=1):
                union = union | masks[part][idx]
            count = int(np.count_nonzero(union))
            if count > best_count:
                best_count, best_pick = count, pick
    else:
        for first in range(sizes[0]):
            pick = [first]
            union = masks[0][first]
            for part in range(1, len(sizes)):
                gains = [
                    int(np.count_nonzero(union | masks[part][i]))
                    for i in range(sizes[part])
                ]
                idx = max(range(sizes[part]), key=lambda i: (gains[i], -i))
                pick.append(idx)
                union = union | masks[part][idx]
            count = int(np.count_nonzero(union))
            if count > best_count:
                best_count, best_pick = count, tuple(pick)

    section = cand_lists[0][best_pick[0]]
    for part, idx in enumerate(best_pick[1:], start=1):
        section = multiply_sections(section, cand_lists[part][idx], field)
    section = section.shift(*dec.translation)
    zeros = count_torus_zeros(section, field)
    # a product vanishes exactly where some factor does
    assert zeros == best_count, "product zero count disagrees with the mask union"
    assert all(dec.parent.contains(pt) for pt in section.terms)
    return zeros, section


def certified_upper_bound(
    P: LatticePolygon, F: FieldSpec, decs: Sequence[MinkowskiDecomposition]
) -> tuple[int, SectionPoly]:
    """Upper bound on the distance with an explicit witness section.

    Builds product sections over each decomposition, choosing factors
    to maximize the union of their zero sets, and counts the product's
    torus zeros exactly.  The result (q-1)^2 - zeros is unconditionally
    valid: the witness evaluates to a codeword of that weight.  A
    single catalog section on the whole polygon is kept as fallback.
    """
    q = F.q
    if P.fits_in_box(q) is None:
        w, h = P.width_height()
        raise PolygonTooLargeForField(f"polygon spans {w}x{h}, too large for q = {q}")
    base = max_zero_section(P, F)
    best_zeros, best_section = base.zeros, base.section
    for dec in decs:
        got = _best_product_section(dec, F)
        if got is None:
            continue
        zeros, section = got
        if zeros > best_zeros:
            best_zeros, best_section = zeros, section
    return (q - 1) ** 2 - best_zeros, best_section


def hasse_weil_interval(g: int, q: int) -> tuple[int, int]:
    """Integer range allowed for the point count of a genus-g curve.

    Exact integer arithmetic: the irrational 2g*sqrt(q) is compared via
    isqrt(4 g^2 q), and the lower end is clamped at zero.
    """
    if g < 0:
        raise ValueError("genus must be nonnegative")
    s = isqrt(4 * g * g * q)
    return max(0, 1 + q - s), 1 + q + s


class LowerBound(NamedTuple):
    value: int
    applicable: bool
    threshold: int


def _closed_component(poly, q):
    # cheap closed forms for decomposition components; None = no match
    if poly.dim == 0:
        return (q - 1) ** 2
    if poly.dim == 1:
        a = poly.num_lattice_points - 1
        return d_segment(a, q) if q > a + 1 else None
    a = _match_full_triangle(poly)
    if a is not None and q > a + 1:
        return d_full_triangle(a, q)
    tri = _match_triangle(poly)
    if tri is not None and q > tri[0] + 1:
        return (q - 1) ** 2 - tri[0] * (q - 1)
    box = _match_rectangle(poly)
    if box is not None and q > max(box) + 1:
        return d_rectangle(box[0], box[1], q)
    hz = _match_hirzebruch(poly)
    if hz is not None and hz[1] + hz[0] * hz[2] < q - 1:
        return d_hirzebruch(hz[0], hz[1], hz[2], q)
    return None


def _component_distance(part, q, cache, threads=1, deadline=None, long_runs=False):
    key = part.translate_to_origin().vertices
    if key in cache:
        return cache[key]
    val = _closed_component(part, q)
    if val is None:
        field = cache.get("__field__")
        if field is None:
            field = cache["__field__"] = field_from_order(q)
        code = build_code(part, field)
        messages = (q**code.k - 1) // (q - 1)
        if messages > _COMPONENT_SEARCH_CAP and not long_runs:
            raise DeadlineExceeded(
                f"component needs {messages} messages; rerun with long runs enabled"
            )
        res = min_distance_exact(code, threads=threads, deadline=deadline)
        if not res.exact:
            raise DeadlineExceeded("component distance search was cut short")
        val = res.weight
    cache[key] = val
    return val


def mainthm_lower_bound(
    P: LatticePolygon,
    q: int,
    decs: Sequence[MinkowskiDecomposition],
    threads: int = 1,
    deadline: Optional[float] = None,
    long_runs: bool = False,
    _cache: Optional[dict] = None,
) -> LowerBound:
    """Decomposition lower bound with its applicability threshold.

    The value is the minimum over all maximal decompositions of the sum
    of component distances minus (ell-1)(q-1)^2; the bound is only
    guaranteed at the minimizer, so every maximal decomposition must be
    supplied.  It applies once q >= (4 I(P) + 3)^2, or already for
    q > #(P) + ell when every component is one-dimensional or a point.
    Below the threshold the value is still reported, as conditional.
    """
    decs = [d for d in decs if d.ell >= 1]
    if not decs:
        raise NoDecomposition("no decomposition supplied")
    ell = max(d.ell for d in decs)
    decs = [d for d in decs if d.ell == ell]
    cache = _cache if _cache is not None else {}
    values = []
    for dec in decs:
        comps = [
            _component_distance(p, q, cache, threads, deadline, long_runs)
            for p in dec.parts
        ]
        values.append(upper_bound_from_decomposition(dec, q, comps))
    value = min(values)

    interior = P.interior_count
    strong = (4 * interior + 3) ** 2
    all_flat = all(p.interior_count == 0 for d in decs for p in d.parts)
    relaxed = P.num_lattice_points + ell + 1
    threshold = min(strong, relaxed) if all_flat else strong
    applicable = q >= strong or (all_flat and q >= relaxed)
    return LowerBound(value, applicable, threshold)


# -- pattern matchers -----------------------------------------------------------


def _xgcd(a, b):
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        quo = old_r // r
        old_r, r = r, old_r - quo * r
        old_s, s = s, old_s - quo * s
        old_t, t = t, old_t - quo * t
    return old_r, old_s, old_t


def _match_full_triangle(poly):
    """Side length a if poly is equivalent to conv{(0,0),(a,0),(0,a)}."""
    if poly.dim != 2 or len(poly.vertices) != 3:
        return None
    a = isqrt(poly.volume2)
    if a * a != poly.volume2:
        return None
    model = LatticePolygon([(0, 0), (a, 0), (0, a)])
    return a if lattice_equivalence(poly, model) is not None else None


def _match_triangle(poly):
    """Parameters (a, b, c), a >= b + c, for a triangle, else None.

    Tries every edge as the base; b is sheared into [0, c) so the
    hypothesis gets its best chance.
    """
    vs = poly.vertices
    if poly.dim != 2 or len(vs) != 3:
        return None
    hits = []
    for i in range(3):
        for j in range(3):
            if i == j:
                continue
            k = 3 - i - j
            ex, ey = vs[j][0] - vs[i][0], vs[j][1] - vs[i][1]
            a = gcd(abs(ex), abs(ey))
            px, py = ex // a, ey // a
            _, u, v = _xgcd(px, py)
            wx, wy = vs[k][0] - vs[i][0], vs[k][1] - vs[i][1]
            c = px * wy - py * wx
            if c <= 0:
                continue
            b = (u * wx + v * wy) % c
            if a >= b + c:
                hits.append((a, b, c))
    return min(hits) if hits else None


def _match_rectangle(poly):
    if poly.dim != 2 or len(poly.vertices) != 4 or poly.volume2 % 2:
        return None
    area = poly.volume2 // 2
    for d in range(1, isqrt(area) + 1):
        if area % d:
            continue
        e = area // d
        model = LatticePolygon([(0, 0), (d, 0), (d, e), (0, e)])
        if lattice_equivalence(poly, model) is not None:
            return d, e
    return None


def _match_hirzebruch(poly):
    """(d, e, r) with r >= 1 for a twisted box, else None."""
    if poly.dim != 2 or len(poly.vertices) != 4:
        return None
    v2 = poly.volume2
    for d in range(1, isqrt(v2) + 1):
        for r in range(1, v2 // (d * d) + 1):
            rest = v2 - r * d * d
            if rest <= 0:
                break
            if rest % (2 * d):
                continue
            e = rest // (2 * d)
            model = LatticePolygon([(0, 0), (d, 0), (0, e), (d, e + r * d)])
            if lattice_equivalence(poly, model) is not None:
                return d, e, r
    return None


def _rank3_volume2(case, a, b, c, r):
    # closed shoelace values; lets the matcher filter on integers alone
    s = a + b
    t = c + (r - 1) * a + r * b
    if case == "I":
        return s * (s + t) + c * s + a * b
    if case == "II":
        if r == 1:
            if c > a:
                return s * (b + 2 * c - a)
            if a > c:
                return (2 * a + b - c) * (b + c)
            return s * s
        return s * t + s * c + s * r * b - b * t + b * c
    if case == "III":
        return 3 * b + 2 * c - a
    w = s + t
    return 2 * w * s - s * b - r * s * s + a * b


def _match_rank3(poly, case):
    """Family parameters (a, b, c, r) matching poly, else None."""
    if poly.dim != 2:
        return None
    v2 = poly.volume2
    tgt = (v2, poly.num_lattice_points, poly.interior_count)
    r_range = (1,) if case == "III" else range(1, _RANK3_SCAN_CAP)
    for a in range(1, _RANK3_SCAN_CAP):
        for b in range(a + 1 if case == "III" else 1, _RANK3_SCAN_CAP):
            for c in range(1, _RANK3_SCAN_CAP):
                for r in r_range:
                    cv = _rank3_volume2(case, a, b, c, r)
                    if cv > v2 and case != "III":
                        break
                    if cv != v2:
                        continue
                    cand = _rank3_polygon(case, a, b, c, r)
                    assert cand.volume2 == cv
                    if (cand.num_lattice_points, cand.interior_count) != tgt[1:]:
                        continue
                    if lattice_equivalence(poly, cand) is not None:
                        return a, b, c, r
    return None


# -- the aggregate report -------------------------------------------------------


@dataclass
class BoundEntry:
    """One named bound with its applicability flag and witness.

    kind is "upper", "lower", or "exact-formula".  Entries with
    applicable=False are reported but excluded from consistency
    checking: they hold only under unverified hypotheses.
    """

    name: str
    kind: str
    value: int
    applicable: bool
    provenance: str
    witness: object = None

    def as_dict(self) -> dict:
        return {
            "name": self.name,
            "kind": self.kind,
            "value": self.value,
            "applicable": self.applicable,
            "provenance": self.provenance,
            "witness": _witness_dict(self.witness),
        }


def _witness_dict(w):
    if w is None:
        return None
    if isinstance(w, SectionPoly):
        return {
            "type": "section",
            "terms": [[a, b, c] for (a, b), c in sorted(w.terms.items())],
        }
    if isinstance(w, MinkowskiDecomposition):
        return {
            "type": "decomposition",
            "subpolygon": [list(v) for v in w.subpolygon.vertices],
            "translation": list(w.translation),
            "parts": [[list(v) for v in p.vertices] for p in w.parts],
        }
    raise TypeError(f"cannot serialize witness of type {type(w).__name__}")


@dataclass
class BoundReport:
    polygon: LatticePolygon
    q: int
    exact_d: Optional[int]
    entries: tuple

    def as_dict(self) -> dict:
        return {
            "polygon": [list(v) for v in self.polygon.vertices],
            "q": self.q,
            "exact_d": self.exact_d,
            "entries": [e.as_dict() for e in self.entries],
        }


def _closed_form_entries(boxed, q):
    out = []
    qm = q - 1
    if boxed.dim == 0:
        out.append(
            BoundEntry(
                "point",
                "exact-formula",
                qm * qm,
                True,
                "single monomial: every nonzero codeword has full weight",
            )
        )
        return out
    if boxed.dim == 1:
        a = boxed.num_lattice_points - 1
        out.append(
            BoundEntry(
                "segment",
                "exact-formula",
                d_segment(a, q),
                True,
                f"lattice segment of length {a}",
            )
        )
        return out
    a = _match_full_triangle(boxed)
    if a is not None and q > a + 1:
        out.append(
            BoundEntry(
                "standard-triangle",
                "exact-formula",
                d_full_triangle(a, q),
                True,
                f"equivalent to the right triangle of side {a}",
            )
        )
    tri = _match_triangle(boxed)
    if tri is not None and q > tri[0] + 1:
        out.append(
            BoundEntry(
                "triangle",
                "exact-formula",
                qm * qm - tri[0] * qm,
                True,
                f"triangle form (a,b,c)={tri} with a >= b+c",
            )
        )
    box = _match_rectangle(boxed)
    if box is not None and q > max(box) + 1:
        out.append(
            BoundEntry(
                "rectangle",
                "exact-formula",
                d_rectangle(box[0], box[1], q),
                True,
                f"equivalent to the {box[0]}x{box[1]} box",
            )
        )
    hz = _match_hirzebruch(boxed)
    if hz is not None and hz[1] + hz[0] * hz[2] < q - 1:
        out.append(
            BoundEntry(
                "hirzebruch",
                "exact-formula",
                d_hirzebruch(hz[0], hz[1], hz[2], q),
                True,
                f"equivalent to the twisted box (d,e,r)={hz}",
            )
        )
    for case in _RANK3_CASES:
        params = _match_rank3(boxed, case)
        if params is None:
            continue
        try:
            value, _ = rank3_family_distance(case, *params, q)
        except (FieldTooSmall, HypothesisViolated):
            continue
        out.append(
            BoundEntry(
                f"family-{case}",
                "exact-formula",
                value,
                True,
                f"rank-3 fan family, configuration {case}, parameters (a,b,c,r)={params}",
            )
        )
    return out


def _check_consistency(entries, exact_d):
    uppers = [e for e in entries if e.applicable and e.kind in ("upper", "exact-formula")]
    lowers = [e for e in entries if e.applicable and e.kind in ("lower", "exact-formula")]
    for lo in lowers:
        for hi in uppers:
            if lo.value > hi.value:
                raise InvariantViolation(
                    f"{lo.name} = {lo.value} exceeds {hi.name} = {hi.value}"
                )
    formulas = [e for e in entries if e.applicable and e.kind == "exact-formula"]
    for e, f in itertools.combinations(formulas, 2):
        if e.value != f.value:
            raise InvariantViolation(
                f"exact formulas disagree: {e.name} = {e.value}, {f.name} = {f.value}"
            )
    if exact_d is not None:
        for lo in lowers:
            if lo.value > exact_d:
                raise InvariantViolation(f"{lo.name} = {lo.value} exceeds exact {exact_d}")
        for hi in uppers:
            if hi.value < exact_d:
                raise InvariantViolation(f"{hi.name} = {hi.value} is below exact {exact_d}")


def full_report(
    P: LatticePolygon,
    F: FieldSpec,
    exact: bool = False,
    long_runs: bool = False,
    threads: int = 1,
    deadline: Optional[float] = None,
    budget: Optional[int] = None,
) -> BoundReport:
    """Aggregate every applicable bound on the polygon's code distance.

    Pattern matchers contribute closed forms, the decomposition search
    feeds the certified and hypothetical upper bounds plus the lower
    bound, and exact=True adds an exhaustive search.  All applicable
    entries are cross-checked before the report is returned; witness
    sections are given in box-normalized coordinates.
    """
    q = F.q
    shift = P.fits_in_box(q)
    if shift is None:
        w, h = P.width_height()
        raise PolygonTooLargeForField(f"polygon spans {w}x{h}, too large for q = {q}")
    boxed = P.translate(*shift)
    entries = _closed_form_entries(boxed, q)

    decs = [] if boxed.dim == 0 else best_subpolygon_decomposition(
        boxed, budget if budget is not None else DEFAULT_BUDGET
    )

    exact_d = None
    partial_upper = None
    partial_scanned = 0
    if exact:
        code = build_code(boxed, F)
        res = min_distance_exact(code, threads=threads, deadline=deadline)
        if res.exact:
            exact_d = res.weight
        else:
            partial_upper = res.weight
            partial_scanned = res.enumerated

    value, witness = certified_upper_bound(boxed, F, decs)
    entries.append(
        BoundEntry(
            "certified-upper",
            "upper",
            value,
            True,
            f"explicit section with {(q - 1) ** 2 - value} torus zeros",
            witness,
        )
    )

    ell = max((d.ell for d in decs), default=0)
    if ell >= 2:
        maximal = [d for d in decs if d.ell == ell]
        cache: dict = {}
        product_values: dict[int, MinkowskiDecomposition] = {}
        computable = True
        for dec in maximal:
            try:
                comps = [
                    _component_distance(p, q, cache, threads, deadline, long_runs)
                    for p in dec.parts
                ]
            except DeadlineExceeded:
                computable = False
                break
            val = upper_bound_from_decomposition(dec, q, comps)
            if val not in product_values:
                product_values[val] = dec
        if computable:
            for i, (val, dec) in enumerate(sorted(product_values.items())):
                entries.append(
                    BoundEntry(
                        f"product-bound[{i}]",
                        "upper",
                        val,
                        False,
                        "component distance sum minus (ell-1)(q-1)^2; "
                        "assumes the factors have disjoint zero sets",
                        dec,
                    )
                )
            lb = mainthm_lower_bound(
                boxed, q, maximal, threads=threads, deadline=deadline,
                long_runs=long_runs, _cache=cache,
            )
            status = "applicable" if lb.applicable else f"conditional at q = {q}"
            entries.append(
                BoundEntry(
                    "decomposition-lower",
                    "lower",
                    lb.value,
                    lb.applicable,
                    f"minimum over {len(maximal)} maximal decompositions; "
                    f"guaranteed for q >= {lb.threshold}, {status}",
                )
            )

    if partial_upper is not None:
        entries.append(
            BoundEntry(
                "search-upper",
                "upper",
                partial_upper,
                True,
                f"smallest weight seen in a stopped enumeration of "
                f"{partial_scanned} messages",
            )
        )

    _check_consistency(entries, exact_d)
    return BoundReport(P, q, exact_d, tuple(entries))
