"""Acceptance criteria 1-10, each recording one verdict line.

Criteria 1-5 share one batch of randomized refinement runs: 50 per
bidegree in (1,1), (2,2), (3,2), six refinement levels each, with every
intermediate mesh checked.
"""

import itertools
import random
import time
from collections import Counter
from fractions import Fraction

import numpy as np
import pytest

from lrgrade import (FULL, LRBSpline, box_support_counts, classic_shadow, eg_grader, eg_iterate, evaluate, find_nested_pairs,
                     generalized_shadow, grading_report, initial_lr_set, insert_segment, knot_insert,
                     make_open_tensor_mesh, parse_mesh, partition_of_unity_deviation, update_lr_set)
from lrgrade.mesh import Segment
from lrgrade.regions import rasterize
from lrgrade.verify import sample_points, short_lines

from helpers import DATA, run_random_scenario

DEGREES = [(1, 1), (2, 2), (3, 2)]
RUNS_PER_DEGREE = 50
LEVELS = 6
PU_POINTS = 1000
PU_TOL = 1e-10
WEIGHT_TOL = 1e-12
SPLIT_TOL = 1e-12
BUDGET_SECONDS = 300


@pytest.fixture(scope="module")
def sweep():
    """Check every mesh of every run and collect per-criterion tallies."""
    t0 = time.perf_counter()
    tally = {"meshes": 0, "bad_count": [], "nested": [], "pu": [], "weights": [], "grading": [], "span": [],
             "max_shape": Fraction(0), "max_neighbor": Fraction(0), "pu_max": 0.0, "w_max": 0.0}
    for degree in DEGREES:
        target = (degree[0] + 1) * (degree[1] + 1)
        for k in range(RUNS_PER_DEGREE):
            seed = 1000 * degree[0] + 100 * degree[1] + k
            run = run_random_scenario(seed, degree, steps=LEVELS, variant="HV"[k % 2])
            rng = np.random.default_rng(seed)
            for step, s in enumerate(run.sets, start=1):
                tag = (degree, seed, step)
                tally["meshes"] += 1
                if set(box_support_counts(s).values()) != {target}:
                    tally["bad_count"].append(tag)
                if find_nested_pairs(s):
                    tally["nested"].append(tag)
                dev = partition_of_unity_deviation(s, sample_points(s.mesh, PU_POINTS, rng))
                wdev = max(abs(w - 1.0) for w in s.weights.values())
                tally["pu_max"] = max(tally["pu_max"], dev)
                tally["w_max"] = max(tally["w_max"], wdev)
                if dev > PU_TOL:
                    tally["pu"].append(tag)
                if wdev > WEIGHT_TOL:
                    tally["weights"].append(tag)
                g = grading_report(s.mesh)
                tally["max_shape"] = max(tally["max_shape"], g.max_shape_sq)
                tally["max_neighbor"] = max(tally["max_neighbor"], g.max_neighbor_sq)
                if not g.ok:
                    tally["grading"].append(tag)
                if short_lines(s.mesh):
                    tally["span"].append(tag)
    tally["seconds"] = time.perf_counter() - t0
    return tally


def test_box_count_law(sweep, record):
    ok = not sweep["bad_count"] and sweep["seconds"] <= BUDGET_SECONDS
    record(1, ok, f"{sweep['meshes']} meshes, {len(sweep['bad_count'])} with a box count off "
                  f"(p1+1)(p2+1); sweep took {sweep['seconds']:.0f}s (budget {BUDGET_SECONDS}s)")
    assert ok, sweep["bad_count"][:5]


def test_no_nested_supports(sweep, record):
    ok = not sweep["nested"]
    record(2, ok, f"{sweep['meshes']} meshes, {len(sweep['nested'])} with nested pairs")
    assert ok, sweep["nested"][:5]


def test_partition_of_unity(sweep, record):
    ok = not sweep["pu"] and not sweep["weights"]
    record(3, ok, f"max deviation {sweep['pu_max']:.1e} (tol {PU_TOL:g}) at {PU_POINTS} points per mesh; "
                  f"max |w-1| {sweep['w_max']:.1e} (tol {WEIGHT_TOL:g})")
    assert ok, (sweep["pu"][:5], sweep["weights"][:5])


def test_grading_bounds(sweep, record):
    attained = sweep["max_shape"] == Fraction(5, 2) and sweep["max_neighbor"] == 4
    ok = not sweep["grading"] and attained
    record(4, ok, f"max diam^2/h^2 = {sweep['max_shape']} (bound 5/2), max squared neighbour ratio = "
                  f"{sweep['max_neighbor']} (bound 4), {len(sweep['grading'])} violations")
    assert ok


def test_spanning_condition(sweep, record):
    ok = not sweep["span"]
    record(5, ok, f"{sweep['meshes']} meshes, {len(sweep['span'])} with a line crossing < p+2 lines")
    assert ok, sweep["span"][:5]


# -- 6 -----------------------------------------------------------------------------------------


def _random_tensor_instance(rng: random.Random):
    grid = 32
    xs = sorted(rng.sample(range(1, grid), rng.randint(0, 8)))
    ys = sorted(rng.sample(range(1, grid), rng.randint(0, 8)))
    degree = (rng.randint(1, 3), rng.randint(1, 3))
    mesh = make_open_tensor_mesh((0, 1), degree, [Fraction(x, grid) for x in xs], [Fraction(y, grid) for y in ys])
    region = rng.sample(mesh.boxes, rng.randint(1, min(5, len(mesh.boxes))))
    return mesh, region, rng.choice("HV")


def test_shadow_equivalence(record):
    rng = random.Random(6)
    mismatches, wider, extra = 0, 0, 0
    n = 200
    for _ in range(n):
        mesh, region, d = _random_tensor_instance(rng)
        gen = generalized_shadow(mesh, region, d).boxes
        if gen != classic_shadow(mesh, region, d).boxes:
            mismatches += 1
        plus = classic_shadow(mesh, region, d, threshold=mesh.degree_along(d) + 1).boxes
        if plus != gen:
            wider += 1
            extra += len(plus - gen)
    ok = mismatches == 0
    record(6, ok, f"{n - mismatches}/{n} identical with threshold p_k; threshold p_k+1 differs on "
                  f"{wider}/{n} ({extra} extra boxes in total)")
    assert ok


# -- 7 -----------------------------------------------------------------------------------------


def _random_knots(rng: random.Random, p: int):
    while True:
        t = tuple(sorted(rng.randint(0, 16) * FULL // 16 for _ in range(p + 2)))
        if t[0] < t[-1] and max(Counter(t).values()) <= p + 1:
            return t


def test_knot_insertion_identity(record):
    rng = random.Random(7)
    worst = 0.0
    n = 0
    while n < 500:
        b = LRBSpline(_random_knots(rng, rng.randint(0, 3)), _random_knots(rng, rng.randint(0, 3)))
        d = rng.choice("HV")
        t = b.knots(d)
        v = rng.randint(t[0] + 1, t[-1] - 1) if rng.random() < 0.5 else rng.choice(t[1:-1] or (t[0],))
        if not t[0] < v < t[-1] or t.count(v) + 1 > len(t) - 1:
            continue
        n += 1
        low, high, a_lo, a_hi = knot_insert(b, d, v)
        s = b.support
        gx, gy = np.linspace(s.x0, s.x1, 20), np.linspace(s.y0, s.y1, 20)
        pts = np.stack(np.meshgrid(gx, gy, indexing="ij"), axis=-1).reshape(-1, 2)
        diff = evaluate(b, pts) - a_lo * evaluate(low, pts) - a_hi * evaluate(high, pts)
        worst = max(worst, float(np.max(np.abs(diff))))
    ok = worst <= SPLIT_TOL
    record(7, ok, f"{n} splits, max |B - a_lo B_lo - a_hi B_hi| = {worst:.1e} on 20x20 grids (tol {SPLIT_TOL:g})")
    assert ok


# -- 8 -----------------------------------------------------------------------------------------


def _random_batch(rng: random.Random):
    """A tensor start and distinct segments anchored on its full-length lines."""
    n = rng.choice([4, 8])
    degree = (rng.randint(1, 3), rng.randint(1, 3))
    mesh = make_open_tensor_mesh((0, 1), degree, [Fraction(k, n) for k in range(1, n)],
                                 [Fraction(k, n) for k in range(1, n)])
    step = FULL // n
    segs, used = [], set()
    for _ in range(rng.randint(2, 6)):
        d = rng.choice("HV")
        fixed = rng.randrange(n) * step + step // 2
        if (d, fixed) in used:
            continue
        used.add((d, fixed))
        a, b = sorted(rng.sample(range(n + 1), 2))
        segs.append(Segment(d, fixed, a * step, b * step))
    return initial_lr_set(mesh), segs


def test_order_independence(record):
    rng = random.Random(8)
    worst, perms_checked, batches = 0.0, 0, 0
    key_mismatch = 0
    while batches < 20:
        base, segs = _random_batch(rng)
        if len(segs) < 2:
            continue
        batches += 1
        orders = list(itertools.permutations(segs)) if len(segs) <= 4 else [
            rng.sample(segs, len(segs)) for _ in range(10)]
        ref = None
        for order in orders:
            s = base
            for seg in order:
                s = update_lr_set(s, insert_segment(s.mesh, seg.direction, seg.fixed, (seg.lo, seg.hi)))
            perms_checked += 1
            if ref is None:
                ref = s
                continue
            if s.weights.keys() != ref.weights.keys():
                key_mismatch += 1
                continue
            worst = max(worst, max(abs(s.weights[k] - ref.weights[k]) for k in s.weights))
    ok = key_mismatch == 0 and worst <= WEIGHT_TOL
    record(8, ok, f"{batches} batches, {perms_checked} orders; {key_mismatch} knot-set mismatches, "
                  f"max weight difference {worst:.1e} (tol {WEIGHT_TOL:g})")
    assert ok


# -- 9 -----------------------------------------------------------------------------------------


def _criteria_1_to_5(mesh):
    s = update_lr_set(initial_lr_set(make_open_tensor_mesh((0, 1), mesh.degree)), mesh)
    target = (mesh.degree[0] + 1) * (mesh.degree[1] + 1)
    rng = np.random.default_rng(9)
    return {
        1: set(box_support_counts(s).values()) == {target},
        2: not find_nested_pairs(s),
        3: partition_of_unity_deviation(s, sample_points(mesh, PU_POINTS, rng)) <= PU_TOL
        and max(abs(w - 1) for w in s.weights.values()) <= WEIGHT_TOL,
        4: grading_report(mesh).ok,
        5: not short_lines(mesh),
    }


def test_remark_fixture(record):
    start = parse_mesh((DATA / "remark_input.lrmesh").read_text())
    closest = _criteria_1_to_5(eg_grader(start, "V"))
    batched_mesh = eg_grader(start, "V", one_at_a_time=False)
    batched = _criteria_1_to_5(batched_mesh)
    short = [(ln.direction, float(start.domain.to_real(ln.fixed)), got, need)
             for ln, got, need in short_lines(batched_mesh)]
    ok = all(closest.values()) and not batched[5]
    record(9, ok, f"closest-first passes {sorted(k for k, v in closest.items() if v)}; batched fails "
                  f"{sorted(k for k, v in batched.items() if not v)} with short line(s) {short}")
    assert ok


# -- 10 ----------------------------------------------------------------------------------------


def test_variant_asymmetry(record):
    counts = {}
    for variant in "HV":
        s = initial_lr_set(make_open_tensor_mesh((0, 1), (2, 2)))
        for _ in range(10):
            s, _ = eg_iterate(s, rasterize(s.mesh, {"preset": "bean"}), variant)
        counts[variant] = len(s)
    ok = counts["H"] != counts["V"]
    record(10, ok, f"bean preset, 10 iterations at bidegree (2,2): {counts['H']} B-splines (H-major) vs "
                   f"{counts['V']} (V-major)")
    assert ok
