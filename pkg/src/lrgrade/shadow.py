"""Shadow maps of box regions.

The generalized shadow works on any LR mesh: from every point of the
region boundary, walk both ways along the shadow direction and stop at the
``(p_k + 1)``-th orthogonal meshline met (counting multiplicity, a line
through the start point counting first).  The boxes whose interior meets
the region or one of these segments form the shadow.

The classic shadow is defined on tensor meshes through the separation
distance and serves as an independent reference for the generalized one.
"""

from __future__ import annotations

import bisect
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

import numpy as np

from .mesh import Box, Direction, LRMesh, MeshError


@dataclass(frozen=True)
class Region:
    """A set of boxes of one mesh snapshot."""

    mesh: LRMesh
    boxes: frozenset[Box]

    def __post_init__(self):
        object.__setattr__(self, "boxes", frozenset(Box(*b) for b in self.boxes))
        stale = self.boxes - self.mesh.box_set()
        if stale:
            raise MeshError(f"{len(stale)} region boxes are not boxes of the mesh, e.g. {min(stale)}")

    def __iter__(self):
        return iter(sorted(self.boxes))

    def __len__(self):
        return len(self.boxes)

    def __bool__(self):
        return bool(self.boxes)

    def __le__(self, other: "Region") -> bool:
        return self.boxes <= other.boxes

    @property
    def area(self) -> int:
        return sum(b.area for b in self.boxes)


def as_region(mesh: LRMesh, boxes) -> Region:
    return boxes if isinstance(boxes, Region) else Region(mesh, frozenset(boxes))


# --------------------------------------------------------------------------
# generalized shadow
# --------------------------------------------------------------------------


def _stop(crossings: list[tuple[int, int]], start: int, sign: int, count: int) -> int:
    """Position of the ``count``-th line met walking from ``start``.

    ``crossings`` are sorted ``(position, multiplicity)`` pairs; lines at
    ``start`` itself are met first.  Falls back to the last line if fewer
    than ``count`` lines lie that way.
    """
    seq = [c for c in crossings if (c[0] >= start if sign > 0 else c[0] <= start)]
    if sign < 0:
        seq.reverse()
    if not seq:
        return start
    met = 0
    for pos, m in seq:
        met += m
        if met >= count:
            return pos
    return seq[-1][0]


def _walk(mesh: LRMesh, direction: Direction, lo: int, hi: int, start: int, sign: int, count: int) -> int:
    """:func:`_stop` without materializing the crossings: scan orthogonal
    line positions outward from ``start`` until ``count`` knots are met."""
    orth = "V" if direction == "H" else "H"
    keys = mesh.fixed_values(orth)
    if sign > 0:
        seq = keys[bisect.bisect_left(keys, start):]
    else:
        seq = reversed(keys[:bisect.bisect_right(keys, start)])
    met, last = 0, start
    for f in seq:
        m = mesh.multiplicity_over(orth, f, lo, hi) if lo != hi else mesh.multiplicity_at(orth, f, lo)
        if m:
            met += m
            last = f
            if met >= count:
                break
    return last


def shadow_endpoints(mesh: LRMesh, q, direction: Direction, degree: int | None = None):
    """Endpoints ``(q*1, q*2)`` of the shadow segment through point ``q``.

    ``q`` is ``(x, y)`` in integer units; ``direction`` is that of the
    half-lines (``"H"`` walks along x and meets vertical lines).
    """
    if degree is None:
        degree = mesh.degree_along(direction)
    x, y = q
    if direction == "H":
        return (_walk(mesh, "H", y, y, x, -1, degree + 1), y), (_walk(mesh, "H", y, y, x, +1, degree + 1), y)
    return (x, _walk(mesh, "V", x, x, y, -1, degree + 1)), (x, _walk(mesh, "V", x, x, y, +1, degree + 1))


def boundary_edges(region: Region) -> list[tuple[Direction, int, int, int]]:
    """Maximal pieces of the region boundary as ``(direction, fixed, lo, hi)``.

    An edge of a member box belongs to the boundary where it is not shared
    with another member box (so parts on the domain boundary are included).
    """
    boxes = region.boxes
    by_x0: dict[int, list[Box]] = {}
    by_x1: dict[int, list[Box]] = {}
    by_y0: dict[int, list[Box]] = {}
    by_y1: dict[int, list[Box]] = {}
    for b in boxes:
        by_x0.setdefault(b.x0, []).append(b)
        by_x1.setdefault(b.x1, []).append(b)
        by_y0.setdefault(b.y0, []).append(b)
        by_y1.setdefault(b.y1, []).append(b)
    out = []
    for b in boxes:
        # left / right sides are vertical edges
        for fixed, nbrs in ((b.x0, by_x1.get(b.x0, ())), (b.x1, by_x0.get(b.x1, ()))):
            covered = [(n.y0, n.y1) for n in nbrs]
            out += [("V", fixed, lo, hi) for lo, hi in _subtract((b.y0, b.y1), covered)]
        for fixed, nbrs in ((b.y0, by_y1.get(b.y0, ())), (b.y1, by_y0.get(b.y1, ()))):
            covered = [(n.x0, n.x1) for n in nbrs]
            out += [("H", fixed, lo, hi) for lo, hi in _subtract((b.x0, b.x1), covered)]
    merged: list[tuple[Direction, int, int, int]] = []
    for e in sorted(out):
        if merged and merged[-1][:2] == e[:2] and merged[-1][3] == e[2]:
            merged[-1] = (*e[:2], merged[-1][2], e[3])
        else:
            merged.append(e)
    return merged


def _subtract(span: tuple[int, int], covered: Iterable[tuple[int, int]]) -> list[tuple[int, int]]:
    lo, hi = span
    pieces = []
    cur = lo
    for a, b in sorted(covered):
        if b <= cur or a >= hi:
            continue
        if a > cur:
            pieces.append((cur, a))
        cur = max(cur, b)
    if cur < hi:
        pieces.append((cur, hi))
    return pieces


def _shadow_rects(mesh: LRMesh, region: Region, direction: Direction, degree: int):
    """Open rectangles and segments swept by shadow segments.

    Yields ``(along_lo, along_hi, across_lo, across_hi)`` in shadow-relative
    coordinates: ``along`` runs in ``direction``; ``across_lo == across_hi``
    marks a segment rather than a strip.
    """
    count = degree + 1
    for edir, fixed, lo, hi in boundary_edges(region):
        if edir == direction:
            # every point shares the same transversal coordinate; the two
            # extreme points bound the union of their segments
            yield (_walk(mesh, direction, fixed, fixed, lo, -1, count),
                   _walk(mesh, direction, fixed, fixed, hi, +1, count), fixed, fixed)
            continue
        inner = mesh.fixed_values(direction, lo, hi)
        pts = [lo, *inner, hi]
        for t in pts:
            yield _walk(mesh, direction, t, t, fixed, -1, count), _walk(mesh, direction, t, t, fixed, +1, count), t, t
        for a, b in zip(pts, pts[1:]):
            yield _walk(mesh, direction, a, b, fixed, -1, count), _walk(mesh, direction, a, b, fixed, +1, count), a, b


def generalized_shadow(mesh: LRMesh, region, direction: Direction, degree: int | None = None) -> Region:
    """Generalized shadow of a box region along ``direction``.

    ``degree`` defaults to the degree of the variable running along
    ``direction`` (``p1`` for a horizontal shadow).
    """
    region = as_region(mesh, region)
    if degree is None:
        degree = mesh.degree_along(direction)
    if not region:
        return region
    arr = mesh.box_array
    if direction == "H":
        a0, a1, c0, c1 = arr[:, 0], arr[:, 2], arr[:, 1], arr[:, 3]
    else:
        a0, a1, c0, c1 = arr[:, 1], arr[:, 3], arr[:, 0], arr[:, 2]
    rects = np.array(sorted(set(_shadow_rects(mesh, region, direction, degree))), dtype=np.int64)
    # prefilter on the bounding window of all swept pieces
    cand = np.flatnonzero((a1 >= rects[:, 0].min()) & (a0 <= rects[:, 1].max())
                          & (c1 >= rects[:, 2].min()) & (c0 <= rects[:, 3].max()))
    a0, a1, c0, c1 = a0[cand], a1[cand], c0[cand], c1[cand]
    hit = np.zeros(len(cand), dtype=bool)
    for lo, hi, t0, t1 in rects:
        along = (a0 < hi) & (a1 > lo) if lo < hi else (a0 < lo) & (a1 > lo)
        across = (c0 < t1) & (c1 > t0) if t0 < t1 else (c0 < t0) & (c1 > t0)
        hit |= along & across
    boxes = {mesh.boxes[i] for i in cand[hit]}
    return Region(mesh, frozenset(boxes | region.boxes))


# --------------------------------------------------------------------------
# separation distance and the classic shadow
# --------------------------------------------------------------------------


def separation_distance(mesh: LRMesh, p, q, direction: Direction) -> float:
    """Orthogonal meshline points on the segment from ``p`` (excluded) to
    ``q`` (included), counting multiplicity; ``inf`` unless the points are
    aligned along ``direction``."""
    (px, py), (qx, qy) = p, q
    if direction == "H":
        if py != qy:
            return math.inf
        s, e, t, lines = px, qx, py, "V"
    else:
        if px != qx:
            return math.inf
        s, e, t, lines = py, qy, px, "H"
    if s == e:
        return 0
    total = 0
    for ln in mesh.lines():
        if ln.direction != lines or not ln.lo <= t <= ln.hi:
            continue
        if (s < ln.fixed <= e) if s < e else (e <= ln.fixed < s):
            total += ln.multiplicity
    return total


def _sep_to_region(mesh: LRMesh, pt, boxes: Iterable[Box], direction: Direction) -> float:
    """Infimum of the separation distance from ``pt`` to the closed boxes."""
    x, y = pt
    best = math.inf
    for b in boxes:
        if direction == "H":
            if not b.y0 <= y <= b.y1:
                continue
            q = (min(max(x, b.x0), b.x1), y)
        else:
            if not b.x0 <= x <= b.x1:
                continue
            q = (x, min(max(y, b.y0), b.y1))
        best = min(best, separation_distance(mesh, pt, q, direction))
    return best


def classic_shadow(mesh: LRMesh, region, direction: Direction, degree: int | None = None,
                   threshold: int | None = None) -> Region:
    """Shadow on a tensor mesh via separation distance.

    Boxes whose interior sample points lie within ``threshold`` (default:
    the degree) separation distance of the region.  Sampling uses the box
    center and four interior points; on tensor meshes the distance is
    constant on box interiors.
    """
    if not mesh.is_tensor():
        raise MeshError("classic shadow is defined on tensor meshes only")
    region = as_region(mesh, region)
    if degree is None:
        degree = mesh.degree_along(direction)
    if threshold is None:
        threshold = degree
    picked = set(region.boxes)
    for b in mesh.boxes:
        if b in picked:
            continue
        cx, cy = b.center
        w, h = Fraction(b.width, 4), Fraction(b.height, 4)
        samples = [(cx, cy), (cx - w, cy - h), (cx + w, cy - h), (cx - w, cy + h), (cx + w, cy + h)]
        if any(_sep_to_region(mesh, s, region.boxes, direction) <= threshold for s in samples):
            picked.add(b)
    return Region(mesh, frozenset(picked))
