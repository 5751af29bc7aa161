"""``lr-grade``: build, refine, verify and draw EG-refined LR meshes.

Commands::

    lr-grade init   [--config S.json] [--degree P1 P2] --out DIR
    lr-grade refine  --config S.json [--mesh M --set S] [--variant H|V] --out DIR
    lr-grade verify  MESH SET [--out REPORT.json] [--seed N]
    lr-grade render  MESH [--set S] [--region JSON] [--shadow H|V] [--bspline I] --out FILE.svg

File formats: ``LRMESH v1`` meshes (``*.lrmesh``), ``LRSET v1`` sets
(``*.lrset``), JSON scenarios and reports, SVG drawings.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import sys
from pathlib import Path

from . import __version__
from .bsplines import LRSet, format_set, initial_lr_set, parse_set
from .eg import Variant, box_level_and_shape, eg_iterate
from .mesh import Domain, MeshError, MeshFormatError, format_mesh, make_open_tensor_mesh, parse_mesh
from .regions import RegionSpecError, Scenario, rasterize
from .render import render_svg
from .shadow import generalized_shadow
from .verify import run_checks

log = logging.getLogger("lrgrade")


class CLIError(Exception):
    pass


def _scenario(args) -> Scenario:
    if args.config:
        try:
            sc = Scenario.load(args.config)
        except json.JSONDecodeError as exc:
            raise CLIError(f"{args.config}: malformed JSON at line {exc.lineno}: {exc.msg}") from None
        except (RegionSpecError, MeshError, ValueError) as exc:
            raise CLIError(f"{args.config}: {exc}") from None
    else:
        sc = Scenario(Domain(0, 1), (2, 2), Variant.HORIZONTAL)
    if getattr(args, "degree", None):
        sc.degree = tuple(args.degree)
    if getattr(args, "variant", None):
        sc.variant = Variant.parse(args.variant)
    if min(sc.degree) < 0:
        raise CLIError(f"negative degree {sc.degree}")
    return sc


def _write_pair(out: Path, stem: str, lrset: LRSet) -> None:
    (out / f"{stem}.lrmesh").write_text(format_mesh(lrset.mesh))
    (out / f"{stem}.lrset").write_text(format_set(lrset))


def _read_pair(mesh_path, set_path) -> LRSet:
    try:
        mesh = parse_mesh(Path(mesh_path).read_text())
    except MeshFormatError as exc:
        raise CLIError(f"{mesh_path}: {exc}") from None
    try:
        return parse_set(Path(set_path).read_text(), mesh)
    except MeshFormatError as exc:
        raise CLIError(f"{set_path}: {exc}") from None


def cmd_init(args) -> int:
    sc = _scenario(args)
    lrset = initial_lr_set(make_open_tensor_mesh(sc.domain, sc.degree))
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    _write_pair(out, "initial", lrset)
    print(f"wrote {out / 'initial.lrmesh'} and {out / 'initial.lrset'} ({len(lrset)} B-splines)")
    return 0


def _stats_row(step: int, lrset: LRSet) -> dict:
    levels = [box_level_and_shape(b).level for b in lrset.mesh.boxes]
    return {"step": step, "boxes": len(levels), "bsplines": len(lrset),
            "min_level": min(levels), "max_level": max(levels)}


def cmd_refine(args) -> int:
    if not args.config:
        raise CLIError("refine needs --config")
    sc = _scenario(args)
    if bool(args.mesh) != bool(args.set):
        raise CLIError("--mesh and --set must be given together")
    if args.mesh:
        lrset = _read_pair(args.mesh, args.set)
        if lrset.mesh.degree != sc.degree:
            raise CLIError(f"input degree {lrset.mesh.degree} differs from scenario degree {sc.degree}")
    else:
        lrset = initial_lr_set(make_open_tensor_mesh(sc.domain, sc.degree))
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    _write_pair(out, "step000", lrset)
    rows = [_stats_row(0, lrset)]
    for i, spec in enumerate(sc.regions(), start=1):
        try:
            region = rasterize(lrset.mesh, spec)
        except RegionSpecError as exc:
            raise CLIError(f"step {i}: {exc}") from None
        if not region:
            raise CLIError(f"step {i}: region {json.dumps(spec)[:80]} selects no boxes")
        lrset, _ = eg_iterate(lrset, region, sc.variant)
        _write_pair(out, f"step{i:03d}", lrset)
        rows.append(_stats_row(i, lrset))
        log.info("step %d: %d boxes, %d B-splines", i, rows[-1]["boxes"], rows[-1]["bsplines"])
    _write_pair(out, "final", lrset)
    with open(out / "stats.csv", "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=list(rows[0]), lineterminator="\n")
        writer.writeheader()
        writer.writerows(rows)
    last = rows[-1]
    print(f"{len(rows) - 1} steps: {last['boxes']} boxes, {last['bsplines']} B-splines -> {out}")
    return 0


def cmd_verify(args) -> int:
    lrset = _read_pair(args.mesh, args.set)
    report = run_checks(lrset, n_points=args.points, seed=args.seed)
    text = json.dumps(report, indent=2, sort_keys=True) + "\n"
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    for name, check in report["checks"].items():
        print(f"{name:20s} {'pass' if check['pass'] else 'FAIL'}", file=sys.stderr)
    return 0 if report["pass"] else 1


def cmd_render(args) -> int:
    try:
        mesh = parse_mesh(Path(args.mesh).read_text())
    except MeshFormatError as exc:
        raise CLIError(f"{args.mesh}: {exc}") from None
    region = shadow = ()
    if args.region:
        text = Path(args.region).read_text() if Path(args.region).is_file() else args.region
        try:
            region = rasterize(mesh, json.loads(text))
        except (json.JSONDecodeError, RegionSpecError) as exc:
            raise CLIError(f"--region: {exc}") from None
        if args.shadow:
            shadow = generalized_shadow(mesh, region, args.shadow).boxes
    elif args.shadow:
        raise CLIError("--shadow needs --region")
    bspline = None
    if args.bspline is not None:
        if not args.set:
            raise CLIError("--bspline needs --set")
        try:
            members = parse_set(Path(args.set).read_text(), mesh).splines
        except MeshFormatError as exc:
            raise CLIError(f"{args.set}: {exc}") from None
        if not 0 <= args.bspline < len(members):
            raise CLIError(f"--bspline index {args.bspline} out of range 0..{len(members) - 1}")
        bspline = members[args.bspline]
    svg = render_svg(mesh, region=region, shadow=shadow, bspline=bspline, title=Path(args.mesh).name)
    Path(args.out).write_text(svg)
    print(f"wrote {args.out}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="lr-grade", description=__doc__.split("\n")[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, variant=True):
        p.add_argument("--config", help="scenario JSON")
        p.add_argument("--degree", nargs=2, type=int, metavar=("P1", "P2"))
        if variant:
            p.add_argument("--variant", choices=["H", "V"])
        p.add_argument("--seed", type=int, default=0, help="seed for sampled checks; never affects refinement")

    p = sub.add_parser("init", help="write the open tensor start mesh and its B-splines")
    common(p, variant=False)
    p.add_argument("--out", required=True, help="output directory")
    p.set_defaults(func=cmd_init)

    p = sub.add_parser("refine", help="run one EG iteration per scenario step")
    common(p)
    p.add_argument("--mesh", help="start from this mesh instead of the tensor mesh")
    p.add_argument("--set", help="LR set belonging to --mesh")
    p.add_argument("--out", required=True, help="output directory")
    p.set_defaults(func=cmd_refine)

    p = sub.add_parser("verify", help="run the check battery and write a JSON report")
    p.add_argument("mesh")
    p.add_argument("set")
    p.add_argument("--out", help="report path (default: stdout)")
    p.add_argument("--points", type=int, default=1000, help="random points for the partition-of-unity check")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("render", help="draw a mesh as SVG")
    p.add_argument("mesh")
    p.add_argument("--set", help="LR set file, needed for --bspline")
    p.add_argument("--region", help="region spec as JSON text or file")
    p.add_argument("--shadow", choices=["H", "V"], help="overlay the generalized shadow of --region")
    p.add_argument("--bspline", type=int, help="index (in file order) of a B-spline to highlight")
    p.add_argument("--out", required=True, help="SVG path")
    p.set_defaults(func=cmd_render)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        return args.func(args)
    except CLIError as exc:
        print(f"lr-grade: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
