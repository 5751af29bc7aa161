"""Refinement scenarios and rasterization of region shapes to mesh boxes.

A region specification is a small JSON object in real domain coordinates::

    {"boxes": [[x0, y0, x1, y1], ...]}      boxes overlapping these rectangles
    {"rect": [x0, y0, x1, y1]}              boxes meeting the closed rectangle
    {"disk": {"center": [x, y], "radius": r}}
    {"band": {"from": [x, y], "to": [x, y], "width": w}}
    {"curve": {"points": [[x, y], ...], "closed": false}}
    {"preset": "bean"}

Except for ``boxes`` (which selects by interior overlap, so that listing a
partition box picks exactly that box) a box enters the region iff its
closed rectangle intersects the closed shape.  Curves are treated as exact
polylines, so no box crossed by the curve is skipped.

Presets are fixed stand-in shapes written in coordinates relative to the
unit square and scaled to the domain.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

import numpy as np
import shapely
from shapely.geometry import LineString, Point, box as shapely_box

from .eg import Variant
from .mesh import Domain, LRMesh
from .shadow import Region


def _bean(n: int = 720) -> list[tuple[float, float]]:
    # wider than tall and bent, so it is not symmetric under x <-> y
    t = np.linspace(0.0, 2 * math.pi, n, endpoint=False)
    x = 0.5 + 0.34 * np.cos(t) + 0.04 * np.cos(2 * t)
    y = 0.52 + 0.2 * np.sin(t) - 0.09 * np.cos(2 * t) + 0.05 * np.sin(3 * t)
    return list(zip(x.tolist(), y.tolist()))


def _circle(n: int = 720) -> list[tuple[float, float]]:
    t = np.linspace(0.0, 2 * math.pi, n, endpoint=False)
    return list(zip((0.5 + 0.3 * np.cos(t)).tolist(), (0.5 + 0.3 * np.sin(t)).tolist()))


PRESETS: dict[str, dict] = {
    "bean": {"points": _bean(), "closed": True},
    "diagonal": {"points": [(0.0, 0.0), (1.0, 1.0)], "closed": False},
    "anti-diagonal": {"points": [(0.0, 1.0), (1.0, 0.0)], "closed": False},
    "triangle": {"points": [(0.2, 0.2), (0.8, 0.2), (0.5, 0.8)], "closed": True},
    "circle": {"points": _circle(), "closed": True},
    "square": {"points": [(0.25, 0.25), (0.75, 0.25), (0.75, 0.75), (0.25, 0.75)], "closed": True},
}


class RegionSpecError(ValueError):
    pass


def _scale(domain: Domain, pts) -> list[tuple[float, float]]:
    a, length = float(domain.a), float(domain.length)
    return [(a + length * float(x), a + length * float(y)) for x, y in pts]


def region_shape(spec: dict, domain: Domain):
    """Shapely geometry of a region specification (not used for ``boxes``)."""
    if not isinstance(spec, dict) or len(spec) != 1:
        raise RegionSpecError(f"region spec must have exactly one key, got {spec!r}")
    (kind, arg), = spec.items()
    try:
        if kind == "rect":
            x0, y0, x1, y1 = map(float, arg)
            return shapely_box(min(x0, x1), min(y0, y1), max(x0, x1), max(y0, y1))
        if kind == "disk":
            return Point(*map(float, arg["center"])).buffer(float(arg["radius"]), quad_segs=64)
        if kind == "band":
            line = LineString([tuple(map(float, arg["from"])), tuple(map(float, arg["to"]))])
            return line.buffer(float(arg["width"]) / 2, cap_style="flat")
        if kind == "curve":
            pts = [tuple(map(float, p)) for p in arg["points"]]
            if arg.get("closed", False):
                pts.append(pts[0])
            return LineString(pts)
        if kind == "preset":
            if arg not in PRESETS:
                raise RegionSpecError(f"unknown preset {arg!r}; choose from {sorted(PRESETS)}")
            pre = PRESETS[arg]
            pts = _scale(domain, pre["points"])
            if pre["closed"]:
                pts.append(pts[0])
            return LineString(pts)
    except (KeyError, TypeError, ValueError) as exc:
        raise RegionSpecError(f"malformed {kind!r} region: {exc}") from None
    raise RegionSpecError(f"unknown region kind {kind!r}")


def rasterize(mesh: LRMesh, spec: dict) -> Region:
    """Boxes of ``mesh`` selected by a region specification."""
    dom = mesh.domain
    arr = dom.to_float(mesh.box_array)
    if "boxes" in spec and len(spec) == 1:
        rects = np.array(spec["boxes"], dtype=float).reshape(-1, 4)
        hit = np.zeros(len(arr), dtype=bool)
        for x0, y0, x1, y1 in rects:
            hit |= (arr[:, 0] < x1) & (arr[:, 2] > x0) & (arr[:, 1] < y1) & (arr[:, 3] > y0)
    else:
        geom = region_shape(spec, dom)
        cells = shapely.box(arr[:, 0], arr[:, 1], arr[:, 2], arr[:, 3])
        hit = shapely.intersects(cells, geom)
    return Region(mesh, frozenset(mesh.boxes[i] for i in np.flatnonzero(hit)))


def parse_domain(value) -> Domain:
    """``[a, b]`` for the square ``[a, b]**2``; ``[[a, b], [c, d]]`` or
    ``[a, b, c, d]`` are accepted only when both intervals agree."""
    vals = list(value)
    if len(vals) == 2 and all(isinstance(v, (list, tuple)) for v in vals):
        vals = [*vals[0], *vals[1]]
    if len(vals) == 4:
        if (Fraction(str(vals[0])), Fraction(str(vals[1]))) != (Fraction(str(vals[2])), Fraction(str(vals[3]))):
            raise RegionSpecError(f"non-square domain {value!r}; only [a,b]x[a,b] is supported")
        vals = vals[:2]
    if len(vals) != 2:
        raise RegionSpecError(f"malformed domain {value!r}")
    return Domain(Fraction(str(vals[0])), Fraction(str(vals[1])))


@dataclass
class Step:
    region: dict
    repeat: int = 1


@dataclass
class Scenario:
    domain: Domain
    degree: tuple[int, int]
    variant: Variant
    steps: list[Step] = field(default_factory=list)

    @classmethod
    def from_dict(cls, data: dict) -> "Scenario":
        try:
            domain = parse_domain(data.get("domain", [0, 1]))
            p1, p2 = (int(p) for p in data.get("degree", [2, 2]))
            steps = [Step(dict(s["region"]), int(s.get("repeat", 1))) for s in data.get("steps", [])]
        except (KeyError, TypeError, ValueError) as exc:
            raise RegionSpecError(f"malformed scenario: {exc}") from None
        return cls(domain, (p1, p2), Variant.parse(data.get("variant", "H")), steps)

    @classmethod
    def load(cls, path) -> "Scenario":
        return cls.from_dict(json.loads(Path(path).read_text()))

    def regions(self):
        """Region specs in execution order, with repeats unrolled."""
        for s in self.steps:
            for _ in range(s.repeat):
                yield s.region
