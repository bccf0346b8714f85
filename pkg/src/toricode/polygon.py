"""Exact integer geometry for convex lattice polygons.

Everything here is exact: hulls and point counts use integer or
Fraction arithmetic, never floats.  Polygons may degenerate to a
segment or a single point; those cases stay representable because
Minkowski summands are often segments.
"""

from __future__ import annotations

import math
from fractions import Fraction
from math import gcd

from .errors import CoordinateOverflow, DegeneratePolygon, EmptyInput, NotApplicable

Point = tuple[int, int]

MAX_COORD = 1 << 31


def _check_points(pts):
    for x, y in pts:
        if abs(x) >= MAX_COORD or abs(y) >= MAX_COORD:
            raise CoordinateOverflow(f"coordinate out of range at ({x}, {y})")


def _cross(o: Point, a: Point, b: Point) -> int:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def convex_hull(points) -> tuple[Point, ...]:
    """Strict convex hull, counterclockwise, starting at the lex-min vertex.

    Collinear points never appear as vertices.  Degenerate inputs give a
    single point or the two endpoints of a segment.
    """
    pts = sorted({(int(x), int(y)) for x, y in points})
    if not pts:
        raise EmptyInput("convex hull of no points")
    _check_points(pts)
    if len(pts) == 1:
        return (pts[0],)
    lower = []
    for p in pts:
        while len(lower) >= 2 and _cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    upper = []
    for p in reversed(pts):
        while len(upper) >= 2 and _cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    if len(lower) == 2 and len(upper) == 2:
        return (pts[0], pts[-1])  # collinear input
    hull = lower[:-1] + upper[:-1]
    # monotone chain already starts at the lex-min point
    return tuple(hull)


class LatticePolygon:
    """Immutable convex lattice polygon (possibly a segment or point).

    Vertices are stored counterclockwise starting from the
    lexicographically smallest one, so equal polygons compare equal.
    """

    __slots__ = ("vertices", "_points", "_edges")

    def __init__(self, points):
        self.vertices = convex_hull(points)
        self._points = None
        self._edges = None

    @property
    def dim(self) -> int:
        if len(self.vertices) == 1:
            return 0
        if len(self.vertices) == 2:
            return 1
        return 2

    # -- counting ----------------------------------------------------------

    @property
    def volume2(self) -> int:
        """Twice the euclidean area (always an integer)."""
        vs = self.vertices
        n = len(vs)
        if n < 3:
            return 0
        s = 0
        for i in range(n):
            x0, y0 = vs[i]
            x1, y1 = vs[(i + 1) % n]
            s += x0 * y1 - x1 * y0
        assert s > 0, "hull must be counterclockwise"
        return s

    @property
    def boundary_count(self) -> int:
        """Number of lattice points on the boundary."""
        vs = self.vertices
        if len(vs) == 1:
            return 1
        if len(vs) == 2:
            (x0, y0), (x1, y1) = vs
            return gcd(abs(x1 - x0), abs(y1 - y0)) + 1
        n = len(vs)
        return sum(
            gcd(abs(vs[(i + 1) % n][0] - vs[i][0]), abs(vs[(i + 1) % n][1] - vs[i][1]))
            for i in range(n)
        )

    @property
    def interior_count(self) -> int:
        """Number of interior lattice points, from the area and boundary."""
        if self.dim < 2:
            return 0
        # volume2 = 2*interior + boundary - 2
        i2 = self.volume2 - self.boundary_count + 2
        assert i2 % 2 == 0 and i2 >= 0
        return i2 // 2

    @property
    def num_lattice_points(self) -> int:
        return self.interior_count + self.boundary_count

    def lattice_points(self) -> list[Point]:
        """All lattice points of the polygon, sorted lexicographically."""
        if self._points is not None:
            return self._points
        vs = self.vertices
        if len(vs) == 1:
            pts = [vs[0]]
        elif len(vs) == 2:
            (x0, y0), (x1, y1) = vs
            g = gcd(abs(x1 - x0), abs(y1 - y0))
            dx, dy = (x1 - x0) // g, (y1 - y0) // g
            pts = sorted((x0 + t * dx, y0 + t * dy) for t in range(g + 1))
        else:
            pts = self._scanline()
        assert len(pts) == self.num_lattice_points
        self._points = pts
        return pts

    def _scanline(self):
        vs = self.vertices
        n = len(vs)
        xmin = min(x for x, _ in vs)
        xmax = max(x for x, _ in vs)
        pts = []
        for x in range(xmin, xmax + 1):
            lo = hi = None
            for i in range(n):
                (ax, ay), (bx, by) = vs[i], vs[(i + 1) % n]
                if ax == bx:
                    if ax != x:
                        continue
                    ys = (Fraction(ay), Fraction(by))
                else:
                    if not (min(ax, bx) <= x <= max(ax, bx)):
                        continue
                    ys = (ay + Fraction((x - ax) * (by - ay), bx - ax),)
                for y in ys:
                    lo = y if lo is None or y < lo else lo
                    hi = y if hi is None or y > hi else hi
            assert lo is not None
            pts.extend((x, y) for y in range(math.ceil(lo), math.floor(hi) + 1))
        return pts

    # -- edges ---------------------------------------------------------------

    def edge_multiset(self) -> dict[tuple[int, int], int]:
        """Primitive edge directions with their lattice lengths.

        Counterclockwise orientation for a 2-dim polygon.  A segment
        contributes both directions so that multisets stay additive
        under Minkowski sums.  A point has no edges.
        """
        if self._edges is not None:
            return dict(self._edges)
        vs = self.vertices
        out: dict[tuple[int, int], int] = {}
        if len(vs) == 2:
            (x0, y0), (x1, y1) = vs
            g = gcd(abs(x1 - x0), abs(y1 - y0))
            d = ((x1 - x0) // g, (y1 - y0) // g)
            out[d] = g
            out[(-d[0], -d[1])] = g
        elif len(vs) > 2:
            n = len(vs)
            for i in range(n):
                (ax, ay), (bx, by) = vs[i], vs[(i + 1) % n]
                g = gcd(abs(bx - ax), abs(by - ay))
                d = ((bx - ax) // g, (by - ay) // g)
                out[d] = out.get(d, 0) + g
        self._edges = dict(out)
        return out

    # -- transforms ----------------------------------------------------------

    def translate(self, dx: int, dy: int) -> "LatticePolygon":
        return LatticePolygon([(x + dx, y + dy) for x, y in self.vertices])

    def translate_to_origin(self) -> "LatticePolygon":
        """Translate so the bounding box corner sits at (0, 0)."""
        xmin = min(x for x, _ in self.vertices)
        ymin = min(y for _, y in self.vertices)
        return self.translate(-xmin, -ymin)

    def apply_map(self, m, shift=(0, 0)) -> "LatticePolygon":
        """Image under x -> M x + shift where M has determinant +-1."""
        (a, b), (c, d) = m
        if abs(a * d - b * c) != 1:
            raise ValueError(f"matrix {m} is not unimodular")
        sx, sy = shift
        return LatticePolygon(
            [(a * x + b * y + sx, c * x + d * y + sy) for x, y in self.vertices]
        )

    def dilate(self, k: int) -> "LatticePolygon":
        if k < 0:
            raise ValueError("dilation factor must be nonnegative")
        if k == 0:
            return LatticePolygon([(0, 0)])
        return LatticePolygon([(k * x, k * y) for x, y in self.vertices])

    # -- queries ---------------------------------------------------------------

    def contains(self, pt) -> bool:
        x, y = pt
        vs = self.vertices
        if len(vs) == 1:
            return (x, y) == vs[0]
        if len(vs) == 2:
            (x0, y0), (x1, y1) = vs
            if _cross((x0, y0), (x1, y1), (x, y)) != 0:
                return False
            return min(x0, x1) <= x <= max(x0, x1) and min(y0, y1) <= y <= max(y0, y1)
        n = len(vs)
        return all(_cross(vs[i], vs[(i + 1) % n], (x, y)) >= 0 for i in range(n))

    def bounding_box(self) -> tuple[int, int, int, int]:
        xs = [x for x, _ in self.vertices]
        ys = [y for _, y in self.vertices]
        return min(xs), min(ys), max(xs), max(ys)

    def width_height(self) -> tuple[int, int]:
        x0, y0, x1, y1 = self.bounding_box()
        return x1 - x0, y1 - y0

    def fits_in_box(self, q: int):
        """Translation placing the polygon inside [0, q-2]^2, or None.

        Fitting in the box means all lattice points have distinct
        exponent pairs mod q-1, which the evaluation code needs.
        """
        w, h = self.width_height()
        if w > q - 2 or h > q - 2:
            return None
        x0, y0, _, _ = self.bounding_box()
        return (-x0, -y0)

    def counts(self) -> dict:
        """Doubled area plus lattice point tallies, as one record."""
        return {
            "volume2": self.volume2,
            "total": self.num_lattice_points,
            "boundary": self.boundary_count,
            "interior": self.interior_count,
        }

    def genus(self) -> int:
        """Genus of a smooth curve with this Newton polygon.

        Equals volume2 + 2 - #(P), which Pick's theorem makes the same
        as the interior point count.
        """
        if self.dim < 2:
            raise DegeneratePolygon("genus needs a 2-dimensional polygon")
        g = self.volume2 + 2 - self.num_lattice_points
        assert g == self.interior_count
        return g

    def scott_check(self) -> bool:
        """Verify #(P) <= 3 I(P) + 7; needs at least one interior point."""
        i = self.interior_count
        if i == 0:
            raise NotApplicable("no interior lattice points")
        return self.num_lattice_points <= 3 * i + 7

    # -- identity ----------------------------------------------------------------

    def __eq__(self, other):
        return isinstance(other, LatticePolygon) and self.vertices == other.vertices

    def __hash__(self):
        return hash(self.vertices)

    def __repr__(self):
        return f"LatticePolygon({list(self.vertices)})"


def minkowski_sum(*polys: LatticePolygon) -> LatticePolygon:
    """Minkowski sum, as the hull of pairwise vertex sums."""
    if not polys:
        raise EmptyInput("Minkowski sum of no polygons")
    acc = polys[0]
    for nxt in polys[1:]:
        acc = LatticePolygon(
            [
                (ax + bx, ay + by)
                for ax, ay in acc.vertices
                for bx, by in nxt.vertices
            ]
        )
    return acc


def polygon_from_edges(start: Point, edges) -> LatticePolygon:
    """Walk edge vectors from a start point and take the hull.

    The edges must sum to zero; the walk closes up and its hull is the
    polygon they bound when taken in angular order.
    """
    x, y = start
    pts = [(x, y)]
    for dx, dy in edges:
        x, y = x + dx, y + dy
        pts.append((x, y))
    if (x, y) != start:
        raise DegeneratePolygon("edge vectors do not close up")
    return LatticePolygon(pts)


def _angle_key(v):
    # counterclockwise from (1, 0): half-plane index, then -cot of the angle,
    # which increases strictly within each open half-plane
    x, y = v
    if y == 0:
        return (0 if x > 0 else 1, Fraction(-(1 << 62)))
    return (0 if y > 0 else 1, Fraction(-x, y))


def sort_directions_ccw(dirs):
    """Sort direction vectors counterclockwise starting from (1, 0)."""
    return sorted(dirs, key=_angle_key)


def _extend_to_basis(d):
    # returns a unimodular matrix with first column d (d primitive)
    x, y = d
    g, a, b = _xgcd(x, y)
    assert g == 1
    return ((x, -b), (y, a))


def _xgcd(a, b):
    if b == 0:
        return (a, 1, 0) if a >= 0 else (-a, -1, 0)
    g, x, y = _xgcd(b, a % b)
    return g, y, x - (a // b) * y


def _mat_mul(m, n):
    (a, b), (c, d) = m
    (e, f), (g, h) = n
    return ((a * e + b * g, a * f + b * h), (c * e + d * g, c * f + d * h))


def _mat_apply(m, v):
    (a, b), (c, d) = m
    return (a * v[0] + b * v[1], c * v[0] + d * v[1])


def _mat_inv_unimodular(m):
    (a, b), (c, d) = m
    det = a * d - b * c
    assert det in (1, -1)
    return ((d * det, -b * det), (-c * det, a * det))


def lattice_equivalence(p: LatticePolygon, q: LatticePolygon):
    """Find (M, t) with q = M p + t, M unimodular, or return None.

    Checks every rotation of q's vertex cycle and the reflected cycle,
    so orientation-reversing equivalences are found too.
    """
    if p.dim != q.dim:
        return None
    if p.dim == 0:
        px, py = p.vertices[0]
        qx, qy = q.vertices[0]
        return ((1, 0), (0, 1)), (qx - px, qy - py)
    if p.dim == 1:
        return _segment_equivalence(p, q)
    if (
        len(p.vertices) != len(q.vertices)
        or p.volume2 != q.volume2
        or p.boundary_count != q.boundary_count
    ):
        return None
    vp = p.vertices
    n = len(vp)
    ep = [_sub(vp[(i + 1) % n], vp[i]) for i in range(n)]
    for cycle in _candidate_cycles(q.vertices):
        eq = [_sub(cycle[(i + 1) % n], cycle[i]) for i in range(n)]
        m = _solve_map(ep[0], ep[1], eq[0], eq[1])
        if m is None:
            continue
        t = _sub(cycle[0], _mat_apply(m, vp[0]))
        if all(
            _add(_mat_apply(m, vp[i]), t) == cycle[i] for i in range(n)
        ):
            return m, t
    return None


def _sub(a, b):
    return (a[0] - b[0], a[1] - b[1])


def _add(a, b):
    return (a[0] + b[0], a[1] + b[1])


def _candidate_cycles(vs):
    n = len(vs)
    fwd = list(vs)
    rev = [vs[0]] + list(reversed(vs[1:]))
    for r in range(n):
        yield fwd[r:] + fwd[:r]
        yield rev[r:] + rev[:r]


def _solve_map(a0, a1, b0, b1):
    # M [a0 a1] = [b0 b1], integral with |det| = 1, or None
    det = a0[0] * a1[1] - a0[1] * a1[0]
    if det == 0:
        return None
    # M = B adj(A) / det(A)
    num = (
        (b0[0] * a1[1] - b1[0] * a0[1], -b0[0] * a1[0] + b1[0] * a0[0]),
        (b0[1] * a1[1] - b1[1] * a0[1], -b0[1] * a1[0] + b1[1] * a0[0]),
    )
    if any(x % det for row in num for x in row):
        return None
    m = tuple(tuple(x // det for x in row) for row in num)
    if abs(m[0][0] * m[1][1] - m[0][1] * m[1][0]) != 1:
        return None
    return m


def _segment_equivalence(p, q):
    (px0, py0), (px1, py1) = p.vertices
    (qx0, qy0), (qx1, qy1) = q.vertices
    gp = gcd(abs(px1 - px0), abs(py1 - py0))
    gq = gcd(abs(qx1 - qx0), abs(qy1 - qy0))
    if gp != gq:
        return None
    dp = ((px1 - px0) // gp, (py1 - py0) // gp)
    dq = ((qx1 - qx0) // gq, (qy1 - qy0) // gq)
    ep = _extend_to_basis(dp)
    for target in (dq, (-dq[0], -dq[1])):
        m = _mat_mul(_extend_to_basis(target), _mat_inv_unimodular(ep))
        img = [_mat_apply(m, v) for v in p.vertices]
        # translate first image point onto the right endpoint
        cand = LatticePolygon(img)
        t = _sub(q.vertices[0], cand.vertices[0])
        if {_add(v, t) for v in img} == set(q.vertices):
            return m, t
    return None
