"""LR B-splines: local knot vectors, minimal support, knot insertion and the
refinement cascade that keeps a B-spline set in sync with its mesh."""

from __future__ import annotations

import heapq
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, Mapping

import numpy as np

from .mesh import (FULL, Box, Direction, LRMesh, MeshError, MeshFormatError, format_decimal,
                   parse_decimal)

Knots = tuple[int, ...]
Key = tuple[Knots, Knots]


@dataclass(frozen=True)
class LRBSpline:
    """Tensor B-spline on local knot vectors (integer units), with weight."""

    knots_x: Knots
    knots_y: Knots
    weight: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "knots_x", tuple(int(k) for k in self.knots_x))
        object.__setattr__(self, "knots_y", tuple(int(k) for k in self.knots_y))
        for kv in (self.knots_x, self.knots_y):
            if len(kv) < 2:
                raise ValueError("a local knot vector needs at least two knots")
            if any(a > b for a, b in zip(kv, kv[1:])):
                raise ValueError(f"knots must be nondecreasing: {kv}")
            if kv[0] == kv[-1]:
                raise ValueError(f"degenerate support: {kv}")
            if max(Counter(kv).values()) > len(kv) - 1:
                raise ValueError(f"knot repeated more than p+1 times: {kv}")

    @property
    def degree(self) -> tuple[int, int]:
        return len(self.knots_x) - 2, len(self.knots_y) - 2

    @property
    def key(self) -> Key:
        return self.knots_x, self.knots_y

    @property
    def support(self) -> Box:
        return Box(self.knots_x[0], self.knots_y[0], self.knots_x[-1], self.knots_y[-1])

    def knots(self, direction: Direction) -> Knots:
        """Knots crossed by lines of ``direction``: vertical lines are x-knots."""
        return self.knots_x if direction == "V" else self.knots_y


# --------------------------------------------------------------------------
# evaluation
# --------------------------------------------------------------------------


def bspline_1d(t: Knots, x, closed_right: bool = False):
    """Univariate B-spline on local knots ``t`` at ``x`` (array or scalar).

    Cox-de Boor recursion on half-open knot spans.  With ``closed_right`` the
    last nonempty span is closed, so the function is left-continuous at
    ``t[-1]`` (used at the right end of the domain).
    """
    x = np.asarray(x, dtype=float)
    p = len(t) - 2
    last = max(j for j in range(p + 1) if t[j] < t[j + 1])
    n = [((t[j] <= x) & (x < t[j + 1])).astype(float) for j in range(p + 1)]
    if closed_right:
        n[last] = np.where(x == t[-1], 1.0, n[last]) if t[last + 1] == t[-1] else n[last]
    for k in range(1, p + 1):
        for j in range(p + 1 - k):
            val = 0.0
            if t[j + k] > t[j]:
                val = (x - t[j]) / (t[j + k] - t[j]) * n[j]
            if t[j + k + 1] > t[j + 1]:
                val = val + (t[j + k + 1] - x) / (t[j + k + 1] - t[j + 1]) * n[j + 1]
            n[j] = val
    return n[0]


def bspline_1d_exact(t: Knots, x: Fraction) -> Fraction:
    """Exact rational value of the univariate B-spline (half-open spans)."""
    p = len(t) - 2
    n = [Fraction(int(t[j] <= x < t[j + 1])) for j in range(p + 1)]
    for k in range(1, p + 1):
        for j in range(p + 1 - k):
            val = Fraction(0)
            if t[j + k] > t[j]:
                val += Fraction(x - t[j], t[j + k] - t[j]) * n[j]
            if t[j + k + 1] > t[j + 1]:
                val += Fraction(t[j + k + 1] - x, t[j + k + 1] - t[j + 1]) * n[j + 1]
            n[j] = val
    return n[0]


def evaluate(b: LRBSpline, point, *, right_end: int | None = FULL):
    """Value of the (unweighted) bivariate B-spline at ``point``.

    ``point`` is in the same integer-unit frame as the knots; arrays of
    shape ``(..., 2)`` evaluate elementwise.  Supports touching ``right_end``
    are treated as closed there so that sums of B-splines stay a partition
    of unity on the closed domain.
    """
    pts = np.asarray(point, dtype=float)
    x, y = pts[..., 0], pts[..., 1]
    cx = right_end is not None and b.knots_x[-1] == right_end
    cy = right_end is not None and b.knots_y[-1] == right_end
    out = bspline_1d(b.knots_x, x, cx) * bspline_1d(b.knots_y, y, cy)
    return float(out) if out.ndim == 0 else out


# --------------------------------------------------------------------------
# local tensor mesh
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class LocalMesh:
    """Knot-line grid of one B-spline over its support."""

    xs: tuple[int, ...]
    ys: tuple[int, ...]
    mult_x: tuple[int, ...]
    mult_y: tuple[int, ...]

    @property
    def cells(self) -> list[Box]:
        """Nonempty cells of the grid (zero-width columns/rows are collapsed)."""
        return [Box(x0, y0, x1, y1)
                for x0, x1 in zip(self.xs, self.xs[1:])
                for y0, y1 in zip(self.ys, self.ys[1:])]

    def multiplicity(self, direction: Direction, fixed: int) -> int:
        vals, mults = (self.xs, self.mult_x) if direction == "V" else (self.ys, self.mult_y)
        return dict(zip(vals, mults)).get(fixed, 0)


def local_mesh(b: LRBSpline) -> LocalMesh:
    cx, cy = Counter(b.knots_x), Counter(b.knots_y)
    xs, ys = tuple(sorted(cx)), tuple(sorted(cy))
    return LocalMesh(xs, ys, tuple(cx[v] for v in xs), tuple(cy[v] for v in ys))


def _violations(b: LRBSpline, mesh: LRMesh) -> Iterator[tuple[Direction, int, int, int]]:
    """Lines across the open support whose multiplicity disagrees with the knots.

    Yields ``(direction, value, mesh_mult, knot_mult)`` in the order x-knots
    (vertical lines) first, increasing coordinate.
    """
    sup = b.support
    for d, lo, hi, t0, t1, kv in (("V", sup.x0, sup.x1, sup.y0, sup.y1, b.knots_x),
                                   ("H", sup.y0, sup.y1, sup.x0, sup.x1, b.knots_y)):
        counts = Counter(kv)
        values = set(mesh.fixed_values(d, lo, hi)) | {v for v in counts if lo < v < hi}
        for v in sorted(values):
            m = mesh.multiplicity_over(d, v, t0, t1)
            if m != counts.get(v, 0):
                yield d, v, m, counts.get(v, 0)


def has_minimal_support(b: LRBSpline, mesh: LRMesh) -> bool:
    """No mesh line traverses the open support unless it is a knot line of
    ``b`` with matching multiplicity, and every interior knot line is a
    traversing meshline.  The support edges must lie on meshlines of at
    least the edge knot multiplicity."""
    s = b.support
    for d, v, lo, hi, kv in (("V", s.x0, s.y0, s.y1, b.knots_x), ("V", s.x1, s.y0, s.y1, b.knots_x),
                             ("H", s.y0, s.x0, s.x1, b.knots_y), ("H", s.y1, s.x0, s.x1, b.knots_y)):
        if mesh.multiplicity_over(d, v, lo, hi) < kv.count(v):
            return False
    return next(_violations(b, mesh), None) is None


# --------------------------------------------------------------------------
# knot insertion
# --------------------------------------------------------------------------


def insertion_coefficients(t: Knots, value: int) -> tuple[Fraction, Fraction]:
    """Exact Boehm coefficients for inserting ``value`` into local knots ``t``."""
    p = len(t) - 2
    if value >= t[p]:
        lo = Fraction(1)
    else:
        lo = Fraction(value - t[0], t[p] - t[0])
    if value <= t[1]:
        hi = Fraction(1)
    else:
        hi = Fraction(t[p + 1] - value, t[p + 1] - t[1])
    return lo, hi


def knot_insert(b: LRBSpline, direction: Direction, value: int):
    """Split ``b`` by inserting ``value`` into its knots.

    ``direction`` is that of the inserted line: ``"V"`` inserts an x-knot.
    Returns ``(b_low, b_high, alpha_low, alpha_high)`` with
    ``b == alpha_low * b_low + alpha_high * b_high`` pointwise; the returned
    B-splines carry weight 1.
    """
    t = b.knots(direction)
    p = len(t) - 2
    if not t[0] < value < t[-1]:
        raise ValueError(f"knot {value} outside the open support ({t[0]}, {t[-1]})")
    if t.count(value) + 1 > p + 1:
        raise ValueError(f"inserting {value} exceeds multiplicity {p + 1}")
    tau = tuple(sorted(t + (value,)))
    a_lo, a_hi = insertion_coefficients(t, value)
    if direction == "V":
        low, high = LRBSpline(tau[:-1], b.knots_y), LRBSpline(tau[1:], b.knots_y)
    else:
        low, high = LRBSpline(b.knots_x, tau[:-1]), LRBSpline(b.knots_x, tau[1:])
    return low, high, float(a_lo), float(a_hi)


# --------------------------------------------------------------------------
# the LR B-spline set
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class LRSet:
    """Immutable collection of weighted LR B-splines living on ``mesh``."""

    mesh: LRMesh
    weights: Mapping[Key, float]
    _arrays: dict = field(default_factory=dict, repr=False, compare=False)

    def __iter__(self) -> Iterator[LRBSpline]:
        return iter(self.splines)

    def __len__(self) -> int:
        return len(self.weights)

    def __contains__(self, key) -> bool:
        if isinstance(key, LRBSpline):
            key = key.key
        return key in self.weights

    @property
    def splines(self) -> list[LRBSpline]:
        """Members in sorted-key order (shared list; do not mutate)."""
        if "splines" not in self._arrays:
            self._arrays["splines"] = [LRBSpline(kx, ky, self.weights[(kx, ky)]) for kx, ky in sorted(self.weights)]
        return self._arrays["splines"]

    @property
    def supports(self) -> np.ndarray:
        """``(n, 4)`` array of supports in sorted-key order."""
        if "supports" not in self._arrays:
            keys = sorted(self.weights)
            self._arrays["supports"] = np.array(
                [(kx[0], ky[0], kx[-1], ky[-1]) for kx, ky in keys], dtype=np.int64).reshape(-1, 4)
        return self._arrays["supports"]

    def evaluate(self, points) -> np.ndarray:
        """Weighted sum at real-coordinate points of shape ``(n, 2)``."""
        return evaluate_set(self, points)


def initial_lr_set(mesh: LRMesh) -> LRSet:
    """All tensor B-splines of an open tensor mesh, weight 1 each."""
    if not mesh.is_tensor():
        raise MeshError("initial LR set requires a tensor mesh")
    gx = _global_knots(mesh, "V")
    gy = _global_knots(mesh, "H")
    p1, p2 = mesh.degree
    if mesh.multiplicity_over("V", 0, 0, FULL) != p1 + 1 or mesh.multiplicity_over("H", 0, 0, FULL) != p2 + 1:
        raise MeshError("initial LR set requires an open tensor mesh")
    xs = [tuple(gx[i:i + p1 + 2]) for i in range(len(gx) - p1 - 1)]
    ys = [tuple(gy[j:j + p2 + 2]) for j in range(len(gy) - p2 - 1)]
    return LRSet(mesh, {(kx, ky): 1.0 for kx in xs for ky in ys})


def _global_knots(mesh: LRMesh, direction: Direction) -> list[int]:
    out = []
    for f in mesh.fixed_values(direction):
        out += [f] * mesh.segments_at(direction, f)[0][2]
    return out


def update_lr_set(lrset: LRSet, new_mesh: LRMesh) -> LRSet:
    """Refine the set onto ``new_mesh`` by cascading knot insertion.

    Members without minimal support are split on their lowest violating
    line (x-knots first) until every member has minimal support; weights
    multiply by the insertion coefficients and add on duplicates.
    """
    if not new_mesh.refines(lrset.mesh):
        raise MeshError("new mesh does not refine the mesh of the LR set")
    weights: dict[Key, float] = dict(lrset.weights)
    heap = list(weights)
    heapq.heapify(heap)
    while heap:
        key = heapq.heappop(heap)
        if key not in weights:
            continue
        b = LRBSpline(*key)
        bad = next(_violations(b, new_mesh), None)
        if bad is None:
            continue
        d, v, m, k = bad
        if m < k:
            raise MeshError(f"knot line {v} of {b} is no longer traversing; mesh is not a refinement")
        w = weights.pop(key)
        low, high, a_lo, a_hi = knot_insert(b, d, v)
        for child, a in ((low, a_lo), (high, a_hi)):
            if child.key in weights:
                weights[child.key] += w * a
            else:
                weights[child.key] = w * a
                heapq.heappush(heap, child.key)
    return LRSet(new_mesh, weights)


def evaluate_set(lrset: LRSet, points) -> np.ndarray:
    """Weighted sum of all members at real-coordinate points ``(n, 2)``."""
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    u = lrset.mesh.domain.from_float(pts)
    total = np.zeros(len(u))
    sup = lrset.supports
    for i, key in enumerate(sorted(lrset.weights)):
        x0, y0, x1, y1 = sup[i]
        inside = (u[:, 0] >= x0) & (u[:, 0] <= x1) & (u[:, 1] >= y0) & (u[:, 1] <= y1)
        if not inside.any():
            continue
        b = LRBSpline(*key)
        total[inside] += lrset.weights[key] * evaluate(b, u[inside])
    return total


# --------------------------------------------------------------------------
# LRSET v1 text format
# --------------------------------------------------------------------------

SET_MAGIC = "LRSET v1"


def format_set(lrset: LRSet) -> str:
    dom = lrset.mesh.domain
    rows = [SET_MAGIC]
    for b in lrset:
        xs = " ".join(format_decimal(dom.to_real(k)) for k in b.knots_x)
        ys = " ".join(format_decimal(dom.to_real(k)) for k in b.knots_y)
        rows.append(f"bspline x: {xs} y: {ys} w: {b.weight!r}")
    return "\n".join(rows) + "\n"


def parse_set(text: str, mesh: LRMesh, *, check: bool = True) -> LRSet:
    """Parse an LRSET text whose coordinates live on ``mesh``'s domain.

    With ``check`` every member must have the mesh's bidegree and minimal
    support on it; otherwise a :class:`MeshFormatError` reports the mismatch.
    """
    rows = [(i + 1, r.split()) for i, r in enumerate(text.splitlines())]
    rows = [(i, r) for i, r in rows if r and not r[0].startswith("#")]
    if not rows or " ".join(rows[0][1]) != SET_MAGIC:
        raise MeshFormatError(f"missing '{SET_MAGIC}' header", rows[0][0] if rows else 1)
    dom = mesh.domain
    p1, p2 = mesh.degree
    weights: dict[Key, float] = {}
    for lineno, tok in rows[1:]:
        if tok[0] != "bspline" or "x:" not in tok or "y:" not in tok or "w:" not in tok:
            raise MeshFormatError("expected 'bspline x: ... y: ... w: <weight>'", lineno)
        ix, iy, iw = tok.index("x:"), tok.index("y:"), tok.index("w:")
        if not ix < iy < iw or len(tok) != iw + 2:
            raise MeshFormatError("malformed bspline record", lineno)
        try:
            kx = tuple(dom.to_units(parse_decimal(t, lineno)) for t in tok[ix + 1:iy])
            ky = tuple(dom.to_units(parse_decimal(t, lineno)) for t in tok[iy + 1:iw])
            w = float(tok[iw + 1])
            b = LRBSpline(kx, ky, w)
        except (MeshError, ValueError) as exc:
            raise MeshFormatError(str(exc), lineno) from None
        if check:
            if b.degree != (p1, p2):
                raise MeshFormatError(f"bidegree {b.degree} does not match mesh degree {(p1, p2)}", lineno)
            if not has_minimal_support(b, mesh):
                raise MeshFormatError("B-spline lacks minimal support on the mesh (mesh/set mismatch)", lineno)
        if b.key in weights:
            raise MeshFormatError("duplicate B-spline", lineno)
        weights[b.key] = w
    return LRSet(mesh, weights)
