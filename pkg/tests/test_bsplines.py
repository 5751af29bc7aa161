"""LR B-splines: evaluation, minimal support, knot insertion and the LR set."""

import itertools
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.interpolate import BSpline

from lrgrade import (FULL, LRBSpline, LRSet, MeshError, MeshFormatError, evaluate, evaluate_set, format_set,
                     has_minimal_support, initial_lr_set, insert_segment, knot_insert, local_mesh,
                     make_open_tensor_mesh, parse_set, update_lr_set)
from lrgrade.bsplines import bspline_1d, bspline_1d_exact, insertion_coefficients

from helpers import run_random_scenario, uniform, units

E = FULL // 8  # one eighth


def scipy_basis(t, x):
    """Reference univariate B-spline, zero outside its support."""
    return np.nan_to_num(BSpline.basis_element(np.asarray(t, dtype=float), extrapolate=False)(x))


# -- evaluation -------------------------------------------------------------------


def test_uniform_quadratic_peak():
    b = LRBSpline((0, 1, 2, 3), (0, 1, 2, 3))
    assert evaluate(b, (1.5, 1.5), right_end=None) == pytest.approx(9 / 16, abs=1e-15)
    assert bspline_1d_exact((0, 1, 2, 3), Fraction(3, 2)) == Fraction(3, 4)


def test_zero_outside_and_on_boundary_of_interior_support():
    b = LRBSpline((0, 1, 2, 3), (0, 1, 2, 3))
    pts = np.array([[-1, 1], [4, 1], [1, 3.5], [0, 1.5], [3, 1.5], [1.5, 0], [1.5, 3]], dtype=float)
    assert np.all(evaluate(b, pts, right_end=None) == 0)


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(0, 6), min_size=2, max_size=6).map(sorted), st.floats(-1, 7))
def test_univariate_values_agree_with_reference(t, x):
    from collections import Counter
    if t[0] == t[-1] or max(Counter(t).values()) > len(t) - 1:
        return
    got = float(bspline_1d(tuple(t), x))
    ref = float(scipy_basis(t, x)) if t[0] <= x < t[-1] else 0.0
    assert got == pytest.approx(ref, abs=1e-13)
    exact = bspline_1d_exact(tuple(t), Fraction(x))
    assert float(exact) == pytest.approx(got, abs=1e-13)


def test_closed_right_end_keeps_value_at_domain_edge():
    t = (0, 0, 0, 1)
    assert bspline_1d(t, 1.0) == 0.0
    assert bspline_1d(t, 1.0, closed_right=True) == 0.0
    assert bspline_1d((0, 1, 1, 1), 1.0, closed_right=True) == 1.0


def test_weighted_singleton_set_scales_linearly():
    mesh = make_open_tensor_mesh((0, 1), (2, 2))
    key = ((0, 0, 0, FULL), (0, 0, 0, FULL))
    s = LRSet(mesh, {key: 2.0})
    assert evaluate_set(s, [[0.0, 0.0]])[0] == pytest.approx(2.0)
    assert evaluate_set(s, [[0.5, 0.5]])[0] == pytest.approx(2 * 0.25 * 0.25)


@pytest.mark.parametrize("degree", [(0, 0), (1, 1), (2, 2), (3, 2)])
def test_tensor_set_is_partition_of_unity(degree):
    s = initial_lr_set(make_open_tensor_mesh((0, 1), degree, [0.25, 0.5], [0.5, 0.75]))
    pts = np.random.default_rng(1).uniform(0, 1, (1000, 2))
    pts = np.vstack([pts, [[0, 0], [1, 1], [1, 0], [0.5, 1]]])
    assert np.max(np.abs(evaluate_set(s, pts) - 1)) <= 1e-12


# -- local mesh and minimal support -------------------------------------------------


def test_bernstein_local_mesh_is_single_box():
    b = LRBSpline((0, 0, 0, FULL), (0, 0, 0, FULL))
    lm = local_mesh(b)
    assert len(lm.cells) == 1
    assert lm.cells[0] == b.support


def test_double_knot_collapses_a_column():
    b = LRBSpline((0, E, E, 2 * E), (0, E, 2 * E, 3 * E))
    lm = local_mesh(b)
    assert lm.xs == (0, E, 2 * E)
    assert len(lm.cells) == 2 * 3
    assert lm.multiplicity("V", E) == 2


def test_interior_bspline_local_grid_is_three_by_three():
    b = LRBSpline((2 * E, 4 * E, 6 * E, FULL), (2 * E, 4 * E, 6 * E, FULL))
    assert len(local_mesh(b).cells) == 9


def _split_fixture():
    """4x4 quadratic mesh plus a vertical line at x=5/8 over [1/4, 1]."""
    base = initial_lr_set(uniform(4))
    b = LRBSpline((2 * E, 4 * E, 6 * E, FULL), (2 * E, 4 * E, 6 * E, FULL))
    mesh = insert_segment(base.mesh, "V", 5 * E, (2 * E, FULL))
    return base, b, mesh


def test_line_through_support_breaks_minimality_and_splits():
    base, b, mesh = _split_fixture()
    assert b in base
    assert has_minimal_support(b, base.mesh)
    assert not has_minimal_support(b, mesh)
    s = update_lr_set(base, mesh)
    lo = ((2 * E, 4 * E, 5 * E, 6 * E), b.knots_y)
    hi = ((4 * E, 5 * E, 6 * E, FULL), b.knots_y)
    assert b not in s
    assert lo in s and hi in s
    assert all(has_minimal_support(m, mesh) for m in s)


def test_tensor_members_have_minimal_support():
    s = initial_lr_set(uniform(4))
    assert all(has_minimal_support(b, s.mesh) for b in s)


def test_cascade_is_independent_of_line_order():
    base, b, v_mesh = _split_fixture()
    # horizontal line at 5/8 over [1/4, 3/4]: traverses only the lower child
    both = insert_segment(v_mesh, "H", 5 * E, (2 * E, 6 * E))
    h_first = insert_segment(base.mesh, "H", 5 * E, (2 * E, 6 * E))
    assert h_first.refines(base.mesh) and both.refines(h_first)
    one = update_lr_set(update_lr_set(base, v_mesh), both)
    two = update_lr_set(update_lr_set(base, h_first), both)
    direct = update_lr_set(base, both)
    assert one.weights.keys() == two.weights.keys() == direct.weights.keys()
    for k in one.weights:
        assert one.weights[k] == pytest.approx(two.weights[k], abs=1e-12)
    xlo, xhi = (2 * E, 4 * E, 5 * E, 6 * E), (4 * E, 5 * E, 6 * E, FULL)
    assert (xhi, b.knots_y) in one
    assert (xlo, b.knots_y) not in one
    assert (xlo, (2 * E, 4 * E, 5 * E, 6 * E)) in one
    assert (xlo, (4 * E, 5 * E, 6 * E, FULL)) in one


def test_unaffected_members_keep_their_weight():
    base, _, mesh = _split_fixture()
    s = update_lr_set(base, mesh)
    untouched = [k for k in base.weights if k[0][-1] <= 5 * E or k[0][0] >= 5 * E]
    assert untouched
    for k in untouched:
        assert s.weights[k] == base.weights[k]


def test_update_rejects_a_mesh_that_does_not_refine():
    base = initial_lr_set(uniform(4))
    with pytest.raises(MeshError):
        update_lr_set(base, uniform(2))


# -- knot insertion -------------------------------------------------------------------


@pytest.mark.parametrize("t, v, alphas", [
    ((0, 2, 4, 6), 3, (Fraction(3, 4), Fraction(3, 4))),     # (0,1,2,3) at 3/2, doubled
    ((0, 0, 0, 2), 1, (Fraction(1), Fraction(1, 2))),        # (0,0,0,1) at 1/2, doubled
])
def test_insertion_coefficients(t, v, alphas):
    assert insertion_coefficients(t, v) == alphas


@pytest.mark.parametrize("t, v", [((0, 2, 4, 6), 3), ((0, 0, 0, 2), 1)])
def test_insertion_identity_against_reference(t, v):
    a_lo, a_hi = insertion_coefficients(t, v)
    tau = sorted(t + (v,))
    x = np.linspace(t[0], t[-1], 100, endpoint=False)
    lhs = scipy_basis(t, x)
    rhs = float(a_lo) * scipy_basis(tau[:-1], x) + float(a_hi) * scipy_basis(tau[1:], x)
    assert np.max(np.abs(lhs - rhs)) <= 1e-14


def test_knot_insert_returns_children_in_the_right_direction():
    b = LRBSpline((0, 2 * E, 4 * E, 6 * E), (0, 0, 0, 2 * E))
    low, high, a_lo, a_hi = knot_insert(b, "H", E)
    assert low.knots_x == high.knots_x == b.knots_x
    assert low.knots_y == (0, 0, 0, E) and high.knots_y == (0, 0, E, 2 * E)
    assert (a_lo, a_hi) == (1.0, 0.5)


@pytest.mark.parametrize("v", [0, 6 * E, 7 * E])
def test_knot_insert_outside_open_support_raises(v):
    with pytest.raises(ValueError):
        knot_insert(LRBSpline((0, 2 * E, 4 * E, 6 * E), (0, E, 2 * E, 3 * E)), "V", v)


def test_knot_insert_beyond_full_multiplicity_raises():
    with pytest.raises(ValueError):
        knot_insert(LRBSpline((0, E, E, E), (0, E, 2 * E, 3 * E)), "V", E)


@settings(max_examples=80, deadline=None)
@given(st.lists(st.integers(0, 16), min_size=3, max_size=5).map(sorted), st.integers(0, 16),
       st.sampled_from("HV"))
def test_split_identity_on_grid(t, v, d):
    from collections import Counter
    t = tuple(k * FULL // 16 for k in t)
    v = v * FULL // 16
    if t[0] == t[-1] or max(Counter(t).values()) > len(t) - 1 or not t[0] < v < t[-1] or t.count(v) + 1 > len(t) - 1:
        return
    other = (0, FULL // 4, FULL // 2)
    b = LRBSpline(t, other) if d == "V" else LRBSpline(other, t)
    low, high, a_lo, a_hi = knot_insert(b, d, v)
    g = np.linspace(0, FULL, 20)
    pts = np.stack(np.meshgrid(g, g, indexing="ij"), axis=-1).reshape(-1, 2)
    diff = evaluate(b, pts) - a_lo * evaluate(low, pts) - a_hi * evaluate(high, pts)
    assert np.max(np.abs(diff)) <= 1e-12


# -- initial set and refinement -------------------------------------------------------


@pytest.mark.parametrize("degree, interior, count", [
    ((2, 2), [], 9),
    ((2, 2), [0.5], 16),
    ((1, 1), [], 4),
    ((3, 2), [0.25, 0.5], 6 * 5),
])
def test_initial_set_sizes(degree, interior, count):
    s = initial_lr_set(make_open_tensor_mesh((0, 1), degree, interior, interior))
    assert len(s) == count
    assert set(s.weights.values()) == {1.0}


def test_initial_set_needs_a_tensor_mesh():
    m = insert_segment(uniform(2), "V", units(0.25), (0, units(0.5)))
    with pytest.raises(MeshError):
        initial_lr_set(m)


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10_000), st.sampled_from([(1, 1), (2, 2), (3, 2)]))
def test_refined_members_are_nonnegative_and_confined(seed, degree):
    s = run_random_scenario(seed, degree, steps=2).sets[-1]
    rng = np.random.default_rng(seed)
    pts = rng.integers(0, FULL + 1, size=(400, 2))
    for b in s.splines[::5]:
        vals = evaluate(b, pts)
        assert np.all(vals >= -1e-15)
        x0, y0, x1, y1 = b.support
        outside = (pts[:, 0] < x0) | (pts[:, 0] > x1) | (pts[:, 1] < y0) | (pts[:, 1] > y1)
        assert np.all(vals[outside] == 0)


def test_refinement_preserves_the_represented_function():
    """Weights carry the cascade: the weighted sum is unchanged pointwise."""
    base, _, mesh = _split_fixture()
    mesh = insert_segment(mesh, "H", 5 * E, (2 * E, 6 * E))
    pts = np.random.default_rng(3).uniform(0, 1, (500, 2))
    assert np.allclose(evaluate_set(update_lr_set(base, mesh), pts), evaluate_set(base, pts), atol=1e-13)


# -- text format -------------------------------------------------------------------


def test_set_round_trip():
    s = run_random_scenario(7, (2, 2), steps=2).sets[-1]
    text = format_set(s)
    again = parse_set(text, s.mesh)
    assert again.weights == s.weights
    assert format_set(again) == text
    rows = text.splitlines()[1:]
    assert rows == sorted(rows, key=lambda r: [Fraction(t) for t in r.split() if t[0].isdigit()][:8])


@pytest.mark.parametrize("text", [
    "LRSET v0\n",
    "LRSET v1\nbspline x: 0 0 0 1 y: 0 0 0 1\n",
    "LRSET v1\nbspline x: 0 0 1 y: 0 0 0 1 w: 1.0\n",
    "LRSET v1\nbspline x: 0 0 0 0.5 y: 0 0 0 1 w: 1.0\n",
])
def test_malformed_set_rejected(text):
    mesh = make_open_tensor_mesh((0, 1), (2, 2))
    with pytest.raises(MeshFormatError, match="line"):
        parse_set(text, mesh)


def test_order_of_batch_lines_does_not_matter():
    base = initial_lr_set(uniform(4))
    segs = [("V", 3 * E, (0, FULL)), ("H", 5 * E, (0, FULL)), ("V", 7 * E, (2 * E, 6 * E))]
    sets = []
    for perm in itertools.permutations(segs):
        m = base.mesh
        s = base
        for seg in perm:
            m = insert_segment(m, *seg)
            s = update_lr_set(s, m)
        sets.append(s)
    for s in sets[1:]:
        assert s.weights.keys() == sets[0].weights.keys()
        assert max(abs(s.weights[k] - sets[0].weights[k]) for k in s.weights) <= 1e-12
