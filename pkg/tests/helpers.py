"""Shared generators for randomized meshes and refinement scenarios."""

from __future__ import annotations

import random
from dataclasses import dataclass
from pathlib import Path

from lrgrade import LRSet, eg_iterate, initial_lr_set, make_open_tensor_mesh, parse_mesh, parse_set
from lrgrade.mesh import FULL
from lrgrade.regions import rasterize

DATA = Path(__file__).parent / "data"


def load_pair(stem: str) -> LRSet:
    mesh = parse_mesh((DATA / f"{stem}.lrmesh").read_text())
    return parse_set((DATA / f"{stem}.lrset").read_text(), mesh)


def random_region_spec(rng: random.Random, lrset: LRSet) -> dict:
    """A small window, a handful of mesh boxes, a disk or a thin band."""
    kind = rng.choice(["rect", "boxes", "disk", "band"])
    if kind == "rect":
        x0, y0 = rng.uniform(0, 0.9), rng.uniform(0, 0.9)
        return {"rect": [x0, y0, x0 + rng.uniform(0.01, 0.1), y0 + rng.uniform(0.01, 0.1)]}
    if kind == "boxes":
        dom = lrset.mesh.domain
        picked = rng.sample(lrset.mesh.boxes, min(len(lrset.mesh.boxes), rng.randint(1, 3)))
        return {"boxes": [[float(dom.to_real(v)) for v in b] for b in picked]}
    if kind == "disk":
        return {"disk": {"center": [rng.random(), rng.random()], "radius": rng.uniform(0.01, 0.08)}}
    a, b = (rng.random(), rng.random()), (rng.random(), rng.random())
    return {"band": {"from": list(a), "to": list(b), "width": 0.01}}


@dataclass
class ScenarioRun:
    seed: int
    degree: tuple[int, int]
    variant: str
    sets: list[LRSet]  # one per completed step, initial set excluded


def run_random_scenario(seed: int, degree: tuple[int, int], steps: int = 6, variant: str | None = None) -> ScenarioRun:
    """Refine the open tensor mesh ``steps`` times on random regions."""
    rng = random.Random(seed)
    variant = variant or rng.choice("HV")
    lrset = initial_lr_set(make_open_tensor_mesh((0, 1), degree))
    sets = []
    for _ in range(steps):
        region = ()
        while not region:
            region = rasterize(lrset.mesh, random_region_spec(rng, lrset))
        lrset, _ = eg_iterate(lrset, region, variant)
        sets.append(lrset)
    return ScenarioRun(seed, degree, variant, sets)


def uniform(n: int, degree=(2, 2)):
    """Open tensor mesh with ``n`` equal intervals per direction."""
    inner = [k / n for k in range(1, n)]
    return make_open_tensor_mesh((0, 1), degree, inner, inner)


def units(x) -> int:
    """Unit-square coordinate to integer units."""
    return round(x * FULL)
