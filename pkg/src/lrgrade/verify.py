"""Checkable forms of the non-nested-support characterization, the grading
bounds and the spanning condition."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .bsplines import LRBSpline, LRSet, bspline_1d_exact, evaluate, evaluate_set
from .mesh import FULL, Box, LRMesh, crossing_count

SIDES = ("left", "right", "bottom", "top")


@dataclass(frozen=True)
class NestedPair:
    outer: LRBSpline
    inner: LRBSpline
    shared_sides: tuple[tuple[str, int, int], ...]  # (side, inner mult, outer mult)


def _side_mults(b: LRBSpline) -> dict[str, tuple[int, int]]:
    kx, ky = b.knots_x, b.knots_y
    return {"left": (kx[0], kx.count(kx[0])), "right": (kx[-1], kx.count(kx[-1])),
            "bottom": (ky[0], ky.count(ky[0])), "top": (ky[-1], ky.count(ky[-1]))}


def nested_in(inner: LRBSpline, outer: LRBSpline):
    """Shared-side witness if ``inner`` is nested in ``outer``, else None."""
    if inner.key == outer.key or not outer.support.contains(inner.support):
        return None
    si, so = _side_mults(inner), _side_mults(outer)
    shared = []
    for side in SIDES:
        (vi, mi), (vo, mo) = si[side], so[side]
        if vi == vo:
            if mi > mo:
                return None
            shared.append((side, mi, mo))
    return tuple(shared)


def find_nested_pairs(lrset: LRSet) -> list[NestedPair]:
    """All ordered pairs (outer, inner) with inner nested in outer."""
    members = lrset.splines
    sup = lrset.supports
    out = []
    for j, inner in enumerate(members):
        x0, y0, x1, y1 = sup[j]
        cand = np.flatnonzero((sup[:, 0] <= x0) & (sup[:, 1] <= y0) & (sup[:, 2] >= x1) & (sup[:, 3] >= y1))
        for i in cand:
            if i == j:
                continue
            w = nested_in(inner, members[i])
            if w is not None:
                out.append(NestedPair(members[i], inner, w))
    return out


def box_support_counts(lrset: LRSet) -> dict[Box, int]:
    """Number of member supports containing each box of the mesh."""
    boxes = lrset.mesh.box_array
    sup = lrset.supports
    counts = np.zeros(len(boxes), dtype=np.int64)
    for x0, y0, x1, y1 in sup:
        counts += (boxes[:, 0] >= x0) & (boxes[:, 1] >= y0) & (boxes[:, 2] <= x1) & (boxes[:, 3] <= y1)
    return {b: int(c) for b, c in zip(lrset.mesh.boxes, counts)}


def partition_of_unity_deviation(lrset: LRSet, points) -> float:
    """Max ``|1 - sum_B w_B B(x)|`` over real-coordinate points."""
    vals = evaluate_set(lrset, points)
    return float(np.max(np.abs(1.0 - vals))) if len(vals) else 0.0


def covering_splines(lrset: LRSet, box: Box) -> list[LRBSpline]:
    sup = lrset.supports
    hit = (sup[:, 0] <= box.x0) & (sup[:, 1] <= box.y0) & (sup[:, 2] >= box.x1) & (sup[:, 3] >= box.y1)
    members = lrset.splines
    return [members[i] for i in np.flatnonzero(hit)]


def _interior_nodes(lo: int, hi: int, n: int) -> list[Fraction]:
    return [lo + Fraction((hi - lo) * (2 * i + 1), 2 * n) for i in range(n)]


def restriction_matrix(lrset: LRSet, box: Box, exact: bool = False):
    """Values of the covering splines at a unisolvent tensor grid in ``box``.

    Each restriction is a polynomial of bidegree ``p``; on ``(p1+1)(p2+1)``
    distinct interior tensor nodes the value vector determines it, so the
    row rank equals the dimension of their span.
    """
    p1, p2 = lrset.mesh.degree
    xs = _interior_nodes(box.x0, box.x1, p1 + 1)
    ys = _interior_nodes(box.y0, box.y1, p2 + 1)
    members = covering_splines(lrset, box)
    if exact:
        return [[bspline_1d_exact(b.knots_x, x) * bspline_1d_exact(b.knots_y, y) for x in xs for y in ys]
                for b in members]
    pts = np.array([(float(x), float(y)) for x in xs for y in ys])
    return np.array([evaluate(b, pts) for b in members]).reshape(len(members), len(pts))


def _exact_rank(rows: list[list[Fraction]]) -> int:
    m = [list(r) for r in rows]
    rank = 0
    ncol = len(m[0]) if m else 0
    for c in range(ncol):
        piv = next((r for r in range(rank, len(m)) if m[r][c] != 0), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        for r in range(len(m)):
            if r != rank and m[r][c] != 0:
                f = m[r][c] / m[rank][c]
                m[r] = [a - f * b for a, b in zip(m[r], m[rank])]
        rank += 1
    return rank


def local_independence_bruteforce(lrset: LRSet, box: Box, exact: bool = False, rtol: float = 1e-9) -> bool:
    """Restrictions of the covering splines to ``box`` are linearly independent.

    Floating-point rank with relative tolerance ``rtol``; ``exact=True``
    uses rational elimination on exact B-spline values instead.
    """
    mat = restriction_matrix(lrset, box, exact)
    n = len(mat)
    if n == 0:
        return True
    if exact:
        return _exact_rank(mat) == n
    s = np.linalg.svd(mat, compute_uv=False)
    return int(np.sum(s > rtol * s[0])) == n


# --------------------------------------------------------------------------
# grading and spanning
# --------------------------------------------------------------------------


@dataclass
class GradingReport:
    max_shape_sq: Fraction  # max diam^2 / area
    max_neighbor_sq: Fraction  # max area ratio of edge-adjacent boxes
    aspect_histogram: Counter
    shape_violations: list[Box] = field(default_factory=list)
    neighbor_violations: list[tuple[Box, Box]] = field(default_factory=list)

    shape_bound = Fraction(5, 2)
    neighbor_bound = Fraction(4)

    @property
    def ok(self) -> bool:
        return not self.shape_violations and not self.neighbor_violations

    @property
    def max_shape_ratio(self) -> float:
        return float(self.max_shape_sq) ** 0.5

    @property
    def max_neighbor_ratio(self) -> float:
        return float(self.max_neighbor_sq) ** 0.5


def adjacent_pairs(mesh: LRMesh) -> list[tuple[Box, Box]]:
    """Box pairs sharing an edge piece of positive length."""
    arr = mesh.box_array
    boxes = mesh.boxes
    out = []
    for i, b in enumerate(boxes):
        right = np.flatnonzero((arr[:, 0] == b.x1) & (arr[:, 1] < b.y1) & (arr[:, 3] > b.y0))
        above = np.flatnonzero((arr[:, 1] == b.y1) & (arr[:, 0] < b.x1) & (arr[:, 2] > b.x0))
        out += [(b, boxes[j]) for j in right]
        out += [(b, boxes[j]) for j in above]
    return out


def grading_report(mesh: LRMesh) -> GradingReport:
    shape_max = Fraction(0)
    hist: Counter = Counter()
    shape_bad = []
    for b in mesh.boxes:
        r = Fraction(b.diam_sq, b.area)
        shape_max = max(shape_max, r)
        w, h = b.width, b.height
        hist[str(Fraction(max(w, h), min(w, h)))] += 1
        if r > GradingReport.shape_bound:
            shape_bad.append(b)
    nb_max = Fraction(1)
    nb_bad = []
    for a, b in adjacent_pairs(mesh):
        r = Fraction(max(a.area, b.area), min(a.area, b.area))
        nb_max = max(nb_max, r)
        if r > GradingReport.neighbor_bound:
            nb_bad.append((a, b))
    return GradingReport(shape_max, nb_max, hist, shape_bad, nb_bad)


def short_lines(mesh: LRMesh):
    """Interior maximal lines crossing fewer than ``p_k + 2`` orthogonal lines."""
    out = []
    for ln in mesh.lines():
        if ln.fixed in (0, FULL):
            continue
        need = mesh.degree_along(ln.direction) + 2
        got = crossing_count(mesh, ln.direction, ln.fixed, (ln.lo, ln.hi))
        if got < need:
            out.append((ln, got, need))
    return out


def spanning_condition(mesh: LRMesh) -> bool:
    """Every interior line crosses at least ``p_k + 2`` orthogonal meshlines."""
    return not short_lines(mesh)


# --------------------------------------------------------------------------
# battery
# --------------------------------------------------------------------------


def sample_points(mesh: LRMesh, n: int, rng: np.random.Generator) -> np.ndarray:
    a, b = float(mesh.domain.a), float(mesh.domain.b)
    return rng.uniform(a, b, size=(n, 2))


def run_checks(lrset: LRSet, *, n_points: int = 1000, seed: int = 0, local_independence: bool = True) -> dict:
    """Full verification battery as a JSON-ready dictionary."""
    mesh = lrset.mesh
    p1, p2 = mesh.degree
    target = (p1 + 1) * (p2 + 1)
    rng = np.random.default_rng(seed)
    checks: dict[str, dict] = {}

    pairs = find_nested_pairs(lrset)
    checks["n2s"] = {"pass": not pairs, "nested_pairs": len(pairs),
                     "witnesses": [[_key_text(p.outer), _key_text(p.inner)] for p in pairs[:20]]}

    counts = box_support_counts(lrset)
    bad = {b: c for b, c in counts.items() if c != target}
    checks["box_support_counts"] = {"pass": not bad, "expected": target,
                                    "histogram": {str(k): v for k, v in sorted(Counter(counts.values()).items())},
                                    "witnesses": [list(b) + [c] for b, c in sorted(bad.items())[:20]]}

    dev = partition_of_unity_deviation(lrset, sample_points(mesh, n_points, rng))
    wdev = max((abs(w - 1.0) for w in lrset.weights.values()), default=0.0)
    checks["partition_of_unity"] = {"pass": dev <= 1e-10 and wdev <= 1e-12, "max_deviation": dev,
                                    "max_weight_deviation": wdev}

    if local_independence:
        dep = [b for b in mesh.boxes if not local_independence_bruteforce(lrset, b)]
        checks["local_independence"] = {"pass": not dep, "dependent_boxes": [list(b) for b in dep[:20]]}

    g = grading_report(mesh)
    checks["grading"] = {"pass": g.ok, "max_shape_sq": str(g.max_shape_sq),
                         "max_neighbor_sq": str(g.max_neighbor_sq),
                         "aspect_histogram": dict(sorted(g.aspect_histogram.items())),
                         "witnesses": [list(b) for b in g.shape_violations[:20]]
                         + [[list(a), list(b)] for a, b in g.neighbor_violations[:20]]}

    short = short_lines(mesh)
    checks["spanning"] = {"pass": not short,
                          "witnesses": [[ln.direction, ln.fixed, ln.lo, ln.hi, got, need] for ln, got, need in short[:20]]}

    return {"pass": all(c["pass"] for c in checks.values()), "boxes": len(mesh.boxes),
            "bsplines": len(lrset), "checks": checks}


def _key_text(b: LRBSpline) -> str:
    return f"x{list(b.knots_x)} y{list(b.knots_y)}"
