"""Toric evaluation codes and their exact minimum distance.

A code is built by evaluating the monomials of a lattice polygon at
every point of the torus (F_q*)^2.  The distance search enumerates the
q^k messages in generalized Gray order, so consecutive codewords
differ by one scaled generator row; messages are normalized to leading
coordinate 1 and split across workers by their high-order digits.
"""

from __future__ import annotations

import hashlib
import json
import multiprocessing
import os
import tempfile
import time
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import PolygonTooLargeForField, SupportOutsidePolygon, TooLarge
from .field import FieldSpec, make_field
from .polygon import LatticePolygon

# suffix tables hold one precomputed codeword per row; these caps keep
# a table under ~32 MB and keep odd-characteristic lookups cheap
_SUFFIX_ROWS_CHAR2 = 1 << 17
_SUFFIX_ROWS_ODD = 1 << 15
_SUFFIX_BYTES = 32 << 20

_GENERATOR_ENTRY_CAP = 1 << 26


class SectionPoly:
    """A polynomial section: exponent vectors mapped to nonzero coefficients."""

    __slots__ = ("terms",)

    def __init__(self, terms):
        clean = {}
        for (a, b), c in dict(terms).items():
            c = int(c)
            if c:
                clean[(int(a), int(b))] = c
        self.terms = clean

    def newton_polygon(self) -> LatticePolygon:
        """Convex hull of the support."""
        return LatticePolygon(list(self.terms))

    def shift(self, dx: int, dy: int) -> "SectionPoly":
        """Multiply by the monomial x^dx y^dy."""
        return SectionPoly({(a + dx, b + dy): c for (a, b), c in self.terms.items()})

    def __eq__(self, other):
        return isinstance(other, SectionPoly) and self.terms == other.terms

    def __repr__(self):
        inner = ", ".join(f"{m}: {c}" for m, c in sorted(self.terms.items()))
        return f"SectionPoly({{{inner}}})"


def multiply_sections(a: SectionPoly, b: SectionPoly, field: FieldSpec) -> SectionPoly:
    out: dict = {}
    for (ax, ay), ac in a.terms.items():
        for (bx, by), bc in b.terms.items():
            m = (ax + bx, ay + by)
            out[m] = field.add(out.get(m, 0), field.mul(ac, bc))
    return SectionPoly(out)


@lru_cache(maxsize=None)
def _torus_exponents(qm: int):
    # row-major over exponent pairs, second exponent fastest
    i_idx = np.repeat(np.arange(qm, dtype=np.int64), qm)
    j_idx = np.tile(np.arange(qm, dtype=np.int64), qm)
    return i_idx, j_idx


def evaluate_section(s: SectionPoly, field: FieldSpec) -> np.ndarray:
    """Values of the section at all torus points, in torus_points order."""
    qm = field.q - 1
    i_idx, j_idx = _torus_exponents(qm)
    acc = np.zeros(qm * qm, dtype=field.dtype)
    for (a, b), c in sorted(s.terms.items()):
        logs = (i_idx * a + j_idx * b + field.log_table[c]) % qm
        acc = field.add_np(acc, field.exp_np[logs])
    return acc


def count_torus_zeros(s: SectionPoly, field: FieldSpec) -> int:
    """Number of torus points where the section vanishes."""
    return int(np.count_nonzero(evaluate_section(s, field) == 0))


@dataclass(frozen=True)
class DistanceResult:
    """Outcome of a distance search.

    weight is exact when the enumeration finished; under a deadline it
    is the best upper bound seen so far.
    """

    weight: int
    exact: bool
    enumerated: int


class ToricCode:
    """Evaluation code of a polygon's monomials on the torus (F_q*)^2.

    Immutable after construction.  The polygon is stored translated
    into [0, q-2]^2 with the applied translation recorded, monomials
    are its lattice points in lexicographic order, and generator row r
    holds the values of monomial r at the (q-1)^2 torus points.
    """

    def __init__(self, polygon, field, translation, monomials, generator, log_generator):
        self.polygon = polygon
        self.field = field
        self.translation = translation
        self.monomials = monomials
        self.generator = generator
        self.log_generator = log_generator
        self.n = generator.shape[1]
        self.k = generator.shape[0]
        self._distance: DistanceResult | None = None

    def evaluate_message(self, message) -> np.ndarray:
        """Codeword for a length-k coefficient vector over the monomials."""
        assert len(message) == self.k
        word = np.zeros(self.n, dtype=self.field.dtype)
        for r, c in enumerate(message):
            if c:
                word = self.field.add_np(word, self.field.scale_np(self.generator[r], c))
        return word

    def __repr__(self):
        return (
            f"ToricCode(n={self.n}, k={self.k}, q={self.field.q}, "
            f"polygon={list(self.polygon.vertices)})"
        )


def _rank(matrix: np.ndarray, field: FieldSpec) -> int:
    """Rank over F_q by Gaussian elimination on a copy."""
    rows = [r.copy() for r in matrix]
    k = len(rows)
    n = rows[0].shape[0] if k else 0
    rank = 0
    for col in range(n):
        piv = next((r for r in range(rank, k) if rows[r][col]), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        inv = field.inv(int(rows[rank][col]))
        rows[rank] = field.scale_np(rows[rank], inv)
        for r in range(rank + 1, k):
            f = int(rows[r][col])
            if f:
                rows[r] = field.add_np(
                    rows[r], field.neg_np(field.scale_np(rows[rank], f))
                )
        rank += 1
        if rank == k:
            break
    return rank


def build_code(polygon: LatticePolygon, field: FieldSpec) -> ToricCode:
    """Evaluate the polygon's monomials on the torus of the field.

    The polygon may sit anywhere in the plane; it is translated into
    [0, q-2]^2 first so all monomial exponent pairs are distinct mod
    q-1.  The rank of the generator matrix is verified to equal #(P).
    """
    q = field.q
    shift = polygon.fits_in_box(q)
    if shift is None:
        w, h = polygon.width_height()
        raise PolygonTooLargeForField(
            f"polygon spans {w}x{h}, exceeding the {q - 2}x{q - 2} box for q={q}"
        )
    placed = polygon.translate(*shift)
    monomials = tuple(placed.lattice_points())
    k, qm = len(monomials), q - 1
    n = qm * qm
    if k * n > _GENERATOR_ENTRY_CAP:
        raise TooLarge(f"generator matrix with {k}x{n} entries is too large")
    i_idx, j_idx = _torus_exponents(qm)
    log_generator = np.empty((k, n), dtype=np.int64)
    generator = np.empty((k, n), dtype=field.dtype)
    for r, (m1, m2) in enumerate(monomials):
        logs = (i_idx * m1 + j_idx * m2) % qm
        log_generator[r] = logs
        generator[r] = field.exp_np[logs]
    code = ToricCode(placed, field, shift, monomials, generator, log_generator)
    assert _rank(generator, field) == k, "monomial evaluations are dependent"
    return code


def weight_of_section(s: SectionPoly, code: ToricCode) -> int:
    """Hamming weight of the codeword a section evaluates to."""
    for pt in s.terms:
        if not code.polygon.contains(pt):
            raise SupportOutsidePolygon(f"monomial {pt} lies outside the polygon")
    values = evaluate_section(s, code.field)
    zeros = int(np.count_nonzero(values == 0))
    # same codeword through the generator matrix; the two must agree
    message = [s.terms.get(m, 0) for m in code.monomials]
    assert np.array_equal(code.evaluate_message(message), values)
    return code.n - zeros


# -- exhaustive distance search ------------------------------------------------


def _gray_steps(radix, width):
    """Single-digit steps visiting all radix^width tuples.

    Yields (position, delta) pairs with delta +-1; an odometer whose
    digits reverse direction instead of wrapping.
    """
    digits = [0] * width
    dirs = [1] * width
    while True:
        for i in range(width):
            nd = digits[i] + dirs[i]
            if 0 <= nd < radix:
                digits[i] = nd
                yield i, dirs[i]
                break
            dirs[i] = -dirs[i]
        else:
            return


def _suffix_rows_cap(field, n):
    cap = _SUFFIX_ROWS_CHAR2 if field.p == 2 else _SUFFIX_ROWS_ODD
    while cap > 1 and cap * n > _SUFFIX_BYTES:
        cap >>= 1
    return cap


def _suffix_depth(field, k, n):
    q = field.q
    cap = _suffix_rows_cap(field, n)
    t = 0
    while t < k - 1 and q ** (t + 1) <= cap:
        t += 1
    return t


def _build_suffix_table(field, log_generator, depth):
    """Codewords of all coefficient choices on the last `depth` rows.

    Table row sum(v_j q^j) holds the codeword with coefficient v_j on
    generator row k-1-j; prefixes of the table serve smaller depths.
    """
    q = field.q
    k, n = log_generator.shape
    table = np.zeros((1, n), dtype=field.dtype)
    for j in range(depth):
        row = k - 1 - j
        blocks = [table]
        for v in range(1, q):
            scaled = field.exp_np[log_generator[row] + field.log_table[v]]
            blocks.append(field.add_np(table, scaled[None, :]))
        table = np.concatenate(blocks, axis=0)
    return table


class _SearchContext:
    """Per-process state for distance tasks."""

    def __init__(self, p, e, modulus, log_generator, depth):
        self.field = make_field(p, e, modulus)
        self.log_generator = log_generator
        self.k, self.n = log_generator.shape
        self.depth = depth
        self.suffix = _build_suffix_table(self.field, log_generator, depth)
        self.row_step = {}
        for r in range(self.k):
            plus = self.field.exp_np[log_generator[r]]
            self.row_step[(r, 1)] = plus
            self.row_step[(r, -1)] = self.field.neg_np(plus)
        self.match_buf = np.empty(self.suffix.shape, dtype=bool)

    def run_task(self, task, deadline, want_hist):
        """Scan one (h, v) slice of the normalized message space.

        Returns (max zeros seen or zero-count histogram, rows scanned,
        completed flag).
        """
        h, v = task
        field, q, k, n = self.field, self.field.q, self.k, self.n
        free = k - 1 - h
        depth = min(free, self.depth)
        table = self.suffix[: q**depth]
        buf = self.match_buf[: q**depth]
        base = field.exp_np[self.log_generator[h]].copy()
        walked = free - depth
        if v is not None:
            base = field.add_np(base, field.scale_np(self.generator_row(h + 1), v))
            walked -= 1
        hist = np.zeros(n + 1, dtype=np.int64) if want_hist else None
        best = 0
        scanned = 0
        # Gray digit i drives generator row k-1-depth-i
        steps = _gray_steps(q, walked) if walked else iter(())
        while True:
            target = field.neg_np(base)
            np.equal(table, target[None, :], out=buf)
            counts = np.count_nonzero(buf, axis=1)
            scanned += table.shape[0]
            if want_hist:
                hist += np.bincount(counts, minlength=n + 1)
            else:
                m = int(counts.max())
                if m > best:
                    best = m
            if deadline is not None and time.time() > deadline:
                return (hist if want_hist else best), scanned, False
            step = next(steps, None)
            if step is None:
                return (hist if want_hist else best), scanned, True
            pos, delta = step
            base = field.add_np(base, self.row_step[(k - 1 - depth - pos, delta)])

    def generator_row(self, r):
        return self.field.exp_np[self.log_generator[r]]


_WORKER_CTX: _SearchContext | None = None


def _worker_init(p, e, modulus, log_generator, depth):
    global _WORKER_CTX
    _WORKER_CTX = _SearchContext(p, e, modulus, log_generator, depth)


def _worker_run(args):
    task, deadline, want_hist = args
    result, scanned, completed = _WORKER_CTX.run_task(task, deadline, want_hist)
    return task, result, scanned, completed


def _task_list(q, k, depth):
    """(h, v) slices covering every normalized message exactly once.

    h is the leading nonzero coordinate (fixed to 1); when more than
    depth coordinates remain free, the next digit v is pinned per task
    so workers partition by high-order digits.
    """
    tasks = []
    for h in range(k):
        free = k - 1 - h
        if free - min(free, depth) >= 1:
            tasks.extend((h, v) for v in range(q))
        else:
            tasks.append((h, None))
    return tasks


def _checkpoint_key(code: ToricCode, want_hist: bool) -> str:
    payload = json.dumps(
        {
            "q": code.field.q,
            "modulus": list(code.field.modulus),
            "vertices": [list(v) for v in code.polygon.vertices],
            "mode": "hist" if want_hist else "min",
        },
        sort_keys=True,
    )
    return hashlib.sha256(payload.encode()).hexdigest()


def _load_checkpoint(path, key, n, want_hist):
    if not path or not os.path.exists(path):
        return None
    try:
        with open(path) as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError):
        return None
    if data.get("key") != key:
        return None
    state = {
        "done": {tuple(t) if t[1] is not None else (t[0], None) for t in map(tuple, data["done"])},
        "scanned": int(data["scanned"]),
    }
    if want_hist:
        state["hist"] = np.array(data["hist"], dtype=np.int64)
        if state["hist"].shape != (n + 1,):
            return None
    else:
        state["best"] = int(data["best"])
    return state


def _save_checkpoint(path, key, done, scanned, best, hist):
    data = {
        "key": key,
        "done": [[h, v] for h, v in sorted(done, key=lambda t: (t[0], -1 if t[1] is None else t[1]))],
        "scanned": scanned,
    }
    if hist is not None:
        data["hist"] = [int(x) for x in hist]
    else:
        data["best"] = best
    fd, tmp = tempfile.mkstemp(dir=os.path.dirname(os.path.abspath(path)) or ".")
    try:
        with os.fdopen(fd, "w") as fh:
            json.dump(data, fh)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _enumerate(code, threads, deadline_s, checkpoint, want_hist):
    field = code.field
    q, k, n = field.q, code.k, code.n
    depth = _suffix_depth(field, k, n)
    tasks = _task_list(q, k, depth)
    key = _checkpoint_key(code, want_hist)
    state = _load_checkpoint(checkpoint, key, n, want_hist)
    done = set(state["done"]) if state else set()
    scanned = state["scanned"] if state else 0
    best = state.get("best", 0) if state else 0
    hist = state["hist"] if (state and want_hist) else (
        np.zeros(n + 1, dtype=np.int64) if want_hist else None
    )
    pending = [t for t in tasks if t not in done]
    deadline = time.time() + deadline_s if deadline_s is not None else None
    completed_all = True

    def absorb(task, result, rows, completed):
        nonlocal best, scanned, completed_all, hist
        scanned += rows
        if want_hist:
            hist = hist + result
        elif result > best:
            best = result
        if completed:
            done.add(task)
            if checkpoint:
                _save_checkpoint(checkpoint, key, done, scanned, best, hist)
        else:
            completed_all = False

    if threads <= 1 or len(pending) <= 1:
        ctx = _SearchContext(field.p, field.e, field.modulus, code.log_generator, depth)
        for task in pending:
            if deadline is not None and time.time() > deadline:
                completed_all = False
                break
            result, rows, ok = ctx.run_task(task, deadline, want_hist)
            absorb(task, result, rows, ok)
    else:
        init_args = (field.p, field.e, field.modulus, code.log_generator, depth)
        with multiprocessing.Pool(threads, _worker_init, init_args) as pool:
            jobs = [(t, deadline, want_hist) for t in pending]
            for task, result, rows, ok in pool.imap_unordered(_worker_run, jobs):
                absorb(task, result, rows, ok)
                if deadline is not None and time.time() > deadline:
                    completed_all = False
                    pool.terminate()
                    break
    if pending and completed_all:
        completed_all = all(t in done for t in tasks)
    return (hist if want_hist else best), scanned, completed_all


def min_distance_exact(
    code: ToricCode,
    threads: int = 1,
    deadline: float | None = None,
    checkpoint: str | None = None,
) -> DistanceResult:
    """Minimum Hamming weight over all nonzero codewords.

    Scalar multiples share a weight, so only messages with leading
    coordinate 1 are enumerated: (q^k - 1)/(q - 1) of them.  When the
    deadline cuts the run short the result carries exact=False and the
    smallest weight seen, which is still a valid upper bound.
    """
    if code._distance is not None:
        return code._distance
    best_zeros, scanned, completed = _enumerate(
        code, threads, deadline, checkpoint, want_hist=False
    )
    result = DistanceResult(code.n - best_zeros, completed, scanned)
    if completed:
        q = code.field.q
        assert scanned == (q**code.k - 1) // (q - 1)
        code._distance = result
    return result


def weight_distribution(code: ToricCode, threads: int = 1) -> dict[int, int]:
    """Weight enumerator as a map weight -> number of codewords."""
    q, k, n = code.field.q, code.k, code.n
    if q**k > 10**8:
        raise TooLarge(f"q^k = {q}^{k} codewords exceed the enumeration guard")
    hist, scanned, completed = _enumerate(code, threads, None, None, want_hist=True)
    assert completed and scanned == (q**k - 1) // (q - 1)
    dist = {0: 1}
    for zeros, cnt in enumerate(hist):
        if cnt:
            dist[n - zeros] = dist.get(n - zeros, 0) + int(cnt) * (q - 1)
    assert sum(dist.values()) == q**k
    return dict(sorted(dist.items()))
