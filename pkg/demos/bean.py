"""Refine toward a bean-shaped curve with both variants and compare sizes.

Run ``python3 demos/bean.py [iterations] [outdir]``.
"""

import sys
from pathlib import Path

from lrgrade import eg_iterate, initial_lr_set, make_open_tensor_mesh, run_checks
from lrgrade.regions import rasterize
from lrgrade.render import render_svg


def main(iterations: int = 10, out: Path = Path("demo_out")) -> None:
    out.mkdir(parents=True, exist_ok=True)
    for variant in "HV":
        s = initial_lr_set(make_open_tensor_mesh((0, 1), (2, 2)))
        for k in range(1, iterations + 1):
            region = rasterize(s.mesh, {"preset": "bean"})
            s, mesh = eg_iterate(s, region, variant)
            print(f"{variant}-major step {k:2d}: {len(mesh.boxes):5d} boxes, {len(s):5d} B-splines")
        report = run_checks(s, local_independence=False)
        print(f"{variant}-major checks pass: {report['pass']}")
        (out / f"bean_{variant}.svg").write_text(render_svg(s.mesh, title=f"bean, {variant}-major"))


if __name__ == "__main__":
    args = sys.argv[1:]
    main(int(args[0]) if args else 10, Path(args[1]) if len(args) > 1 else Path("demo_out"))
