"""Switch the target shape from triangle to circle to square.

Each shape is refined three times and the mesh is drawn with the next shape's
region and shadow overlaid.  Run ``python3 demos/shape_sequence.py [outdir]``.
"""

import sys
from pathlib import Path

from lrgrade import eg_iterate, generalized_shadow, initial_lr_set, make_open_tensor_mesh, run_checks
from lrgrade.regions import rasterize
from lrgrade.render import render_svg


def main(out: Path = Path("demo_out")) -> None:
    out.mkdir(parents=True, exist_ok=True)
    s = initial_lr_set(make_open_tensor_mesh((0, 1), (2, 2)))
    for preset in ("triangle", "circle", "square"):
        for _ in range(3):
            region = rasterize(s.mesh, {"preset": preset})
            shadow = generalized_shadow(s.mesh, region, "H")
            s, _ = eg_iterate(s, region, "H")
        ok = run_checks(s, local_independence=False)["pass"]
        print(f"after {preset}: {len(s.mesh.boxes)} boxes, {len(s)} B-splines, checks {'pass' if ok else 'FAIL'}")
        svg = render_svg(s.mesh, region=region, shadow=shadow, title=f"after {preset}")
        (out / f"shape_{preset}.svg").write_text(svg)


if __name__ == "__main__":
    main(Path(sys.argv[1]) if len(sys.argv) > 1 else Path("demo_out"))
