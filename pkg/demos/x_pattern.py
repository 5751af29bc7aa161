"""Refine along both diagonals, checking the mesh after every step.

Run ``python3 demos/x_pattern.py [outdir]``.
"""

import sys
from pathlib import Path

from lrgrade import eg_iterate, initial_lr_set, make_open_tensor_mesh, run_checks
from lrgrade.regions import rasterize
from lrgrade.render import render_svg


def main(out: Path = Path("demo_out")) -> None:
    out.mkdir(parents=True, exist_ok=True)
    s = initial_lr_set(make_open_tensor_mesh((0, 1), (2, 2)))
    for k, preset in enumerate(["diagonal"] * 4 + ["anti-diagonal"] * 4, start=1):
        s, mesh = eg_iterate(s, rasterize(s.mesh, {"preset": preset}), "H")
        ok = run_checks(s, local_independence=False)["pass"]
        print(f"step {k} ({preset}): {len(s):4d} B-splines, checks {'pass' if ok else 'FAIL'}")
    (out / "x_pattern.svg").write_text(render_svg(s.mesh, title="diagonal then anti-diagonal"))


if __name__ == "__main__":
    main(Path(sys.argv[1]) if len(sys.argv) > 1 else Path("demo_out"))
