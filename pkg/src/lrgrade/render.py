"""Deterministic SVG drawings of LR meshes with optional overlays."""

from __future__ import annotations

from typing import Iterable

from .bsplines import LRBSpline, local_mesh
from .mesh import FULL, Box, LRMesh

SIZE = 512.0
MARGIN = 16.0

REGION_FILL = "#9ecae1"
SHADOW_FILL = "#fdd0a2"
SUPPORT_FILL = "#a1d99b"
LOCAL_STROKE = "#238b45"


def _xy(u: int, v: int) -> tuple[str, str]:
    # y grows upwards in the domain, downwards in SVG
    x = MARGIN + SIZE * u / FULL
    y = MARGIN + SIZE * (FULL - v) / FULL
    return f"{x:.3f}", f"{y:.3f}"


def _rect(b: Box, fill: str, opacity: float = 1.0) -> str:
    x, y = _xy(b.x0, b.y1)
    w = f"{SIZE * b.width / FULL:.3f}"
    h = f"{SIZE * b.height / FULL:.3f}"
    return f'<rect x="{x}" y="{y}" width="{w}" height="{h}" fill="{fill}" fill-opacity="{opacity:g}" stroke="none"/>'


def _line(direction: str, fixed: int, lo: int, hi: int, stroke: str, width: float, dash: str | None = None) -> str:
    if direction == "H":
        (x1, y1), (x2, y2) = _xy(lo, fixed), _xy(hi, fixed)
    else:
        (x1, y1), (x2, y2) = _xy(fixed, lo), _xy(fixed, hi)
    extra = f' stroke-dasharray="{dash}"' if dash else ""
    return (f'<line x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}" stroke="{stroke}" '
            f'stroke-width="{width:g}" stroke-linecap="square"{extra}/>')


def render_svg(mesh: LRMesh, *, region: Iterable[Box] = (), shadow: Iterable[Box] = (),
               bspline: LRBSpline | None = None, title: str | None = None) -> str:
    """SVG text of ``mesh``.

    ``shadow`` boxes are drawn first, then ``region`` boxes on top of them,
    then the support of ``bspline`` with its local knot grid, then the
    meshlines (boundary lines of higher multiplicity drawn thicker).
    """
    total = SIZE + 2 * MARGIN
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{total:g}" height="{total:g}" '
        f'viewBox="0 0 {total:g} {total:g}">',
    ]
    if title:
        out.append(f"<title>{title}</title>")
    out.append(f'<rect x="0" y="0" width="{total:g}" height="{total:g}" fill="white"/>')
    out += [_rect(b, SHADOW_FILL) for b in sorted(set(shadow))]
    out += [_rect(b, REGION_FILL) for b in sorted(set(region))]
    if bspline is not None:
        out.append(_rect(bspline.support, SUPPORT_FILL, 0.6))
        lm = local_mesh(bspline)
        s = bspline.support
        out += [_line("V", x, s.y0, s.y1, LOCAL_STROKE, 2.0, "6,3") for x in lm.xs]
        out += [_line("H", y, s.x0, s.x1, LOCAL_STROKE, 2.0, "6,3") for y in lm.ys]
    for ln in mesh.lines():
        width = 1.0 if ln.multiplicity == 1 else 2.0
        out.append(_line(ln.direction, ln.fixed, ln.lo, ln.hi, "black", width))
    out.append("</svg>")
    return "\n".join(out) + "\n"
