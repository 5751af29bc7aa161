"""Grade a steep mesh closest-first and batched, and compare the checks.

Halving every oversized box of a shadow at once can leave a line that
crosses too few others.  Run ``python3 demos/closest_first.py [outdir]``.
"""

import sys
from pathlib import Path

from lrgrade import eg_grader, initial_lr_set, make_open_tensor_mesh, parse_mesh, run_checks, update_lr_set
from lrgrade.render import render_svg

FIXTURE = Path(__file__).resolve().parent.parent / "tests" / "data" / "remark_input.lrmesh"


def main(out: Path = Path("demo_out")) -> None:
    out.mkdir(parents=True, exist_ok=True)
    start = parse_mesh(FIXTURE.read_text())
    base = initial_lr_set(make_open_tensor_mesh((0, 1), start.degree))
    for name, batched in (("closest-first", False), ("batched", True)):
        mesh = eg_grader(start, "V", one_at_a_time=not batched)
        report = run_checks(update_lr_set(base, mesh))
        failed = [k for k, v in report["checks"].items() if not v["pass"]]
        print(f"{name}: {len(mesh.boxes)} boxes, failing checks: {failed or 'none'}")
        if "spanning" in failed:
            for d, fixed, lo, hi, got, need in report["checks"]["spanning"]["witnesses"]:
                at, a, b = (float(mesh.domain.to_real(v)) for v in (fixed, lo, hi))
                print(f"  {d} line at {at} over [{a}, {b}] crosses {got} lines, needs {need}")
        (out / f"grader_{name}.svg").write_text(render_svg(mesh, title=name))


if __name__ == "__main__":
    main(Path(sys.argv[1]) if len(sys.argv) > 1 else Path("demo_out"))
