"""Minimizer, root-finder and gradient-check behavior on known problems."""

import math

import numpy as np
import pytest

from epqplan import (
    GenericCoefficients,
    NoSignChangeError,
    bracket_root,
    gradient_check,
    minimize_2d,
)

# Worked-instance coefficients, hand-computed from the parameter set
# (verified independently against quadrature/scipy before freezing).
COEFFS = GenericCoefficients(a=69233.32949972023, b=-190172.2301136364,
                             c_coef=137731.25, d=4090.909090909092,
                             k_total=300.0)


def _generic(t4, t):
    if t <= 0.0:
        return 1e12
    return (COEFFS.a * t + COEFFS.b * t4 + COEFFS.c_coef * t4 * t4 / t
            + COEFFS.k_total / t + COEFFS.d)


def test_minimize_known_quadratic():
    report = minimize_2d(lambda x, y: (x - 1.0) ** 2 + (y - 2.0) ** 2,
                         seed=(5.0, 5.0), tol=1e-10)
    assert report.converged
    assert report.point[0] == pytest.approx(1.0, abs=1e-8)
    assert report.point[1] == pytest.approx(2.0, abs=1e-8)
    assert report.probe_count < 1000


def test_minimize_convex_quadratics_from_random_seeds():
    """Any strictly convex quadratic, 50 random seeds: minimum to tol*10."""
    rng = np.random.default_rng(99)
    tol = 1e-10
    for _ in range(50):
        a, b = rng.uniform(0.5, 5.0, size=2)
        c = rng.uniform(-0.9, 0.9) * math.sqrt(a * b)
        x0, y0 = rng.uniform(-10.0, 10.0, size=2)

        def f(x, y):
            return a * (x - x0) ** 2 + b * (y - y0) ** 2 + c * (x - x0) * (y - y0)

        seed = (x0 + rng.uniform(-5, 5), y0 + rng.uniform(-5, 5))
        report = minimize_2d(f, seed, tol=tol)
        assert report.converged
        assert math.hypot(report.point[0] - x0, report.point[1] - y0) < tol * 10


def test_minimize_reduced_objective():
    report = minimize_2d(_generic, seed=(0.1, 0.2), tol=1e-10)
    assert report.converged
    assert report.point[0] == pytest.approx(0.1996, abs=1e-4)
    assert report.point[1] == pytest.approx(0.2891, abs=1e-4)


def test_minimize_exact_cost(plant, costs):
    """Exact-cost search from the closed-form seed reaches the oracle optimum.

    Expected point and value were frozen from an independent run
    (scipy Nelder-Mead over a brentq-based period split).
    """
    from epqplan import NoRootError, exact_cost_basic

    seed = (0.199617993768011, 0.2891445905401824)
    anchor = exact_cost_basic(seed[0], seed[1], plant, costs)

    def objective(t4, t):
        if t4 <= 0.0 or t <= t4:
            return 1e6 * anchor
        try:
            return exact_cost_basic(t4, t, plant, costs)
        except NoRootError:
            return 1e6 * anchor

    report = minimize_2d(objective, seed, tol=1e-8)
    assert report.converged
    assert report.point[0] == pytest.approx(0.17885954, abs=1e-4)
    assert report.point[1] == pytest.approx(0.26232294, abs=1e-4)
    assert report.value == pytest.approx(6375.067677164641, rel=1e-6)


def test_minimize_respects_eval_budget():
    report = minimize_2d(lambda x, y: x * x + y * y, seed=(1e6, 1e6),
                         tol=1e-300, max_evals=50)
    assert not report.converged
    assert report.probe_count <= 50 + 4  # the running step may finish its probes


def test_bracket_root_linear():
    assert bracket_root(lambda x: x - 3.0, 0.0, 10.0, tol=1e-12) == pytest.approx(3.0, abs=1e-11)


def test_bracket_root_requires_sign_change():
    with pytest.raises(NoSignChangeError):
        bracket_root(lambda x: x * x + 1.0, 0.0, 5.0, tol=1e-10)


def test_bracket_root_iteration_bound():
    """The bracket halves each step: evaluations stay within the log2 bound."""
    for lo, hi, tol in [(0.0, 10.0, 1e-9), (-3.0, 7.0, 1e-12), (0.0, 1.0, 1e-6)]:
        calls = 0

        def f(x):
            nonlocal calls
            calls += 1
            return math.tanh(x - 0.5)

        root = bracket_root(f, lo, hi, tol=tol)
        assert abs(root - 0.5) < tol
        midpoint_evals = calls - 2  # minus the endpoint evaluations
        assert midpoint_evals <= math.ceil(math.log2((hi - lo) / tol)) + 2


def test_gradient_check_linear():
    grad = gradient_check(lambda x, y: 3.0 * x - 7.0 * y, (0.4, 0.9), h=1e-6)
    assert grad[0] == pytest.approx(3.0, abs=1e-8)
    assert grad[1] == pytest.approx(-7.0, abs=1e-8)


def test_gradient_check_error_is_second_order():
    """Halving h divides the central-difference error by about four."""
    def f(x, y):
        return math.sin(x) * math.exp(y)

    point = (0.7, 0.3)
    exact = (math.cos(0.7) * math.exp(0.3), math.sin(0.7) * math.exp(0.3))
    errs = []
    for h in (1e-3, 5e-4):
        gx, gy = gradient_check(f, point, h=h)
        errs.append(math.hypot(gx - exact[0], gy - exact[1]))
    ratio = errs[0] / errs[1]
    assert 3.5 <= ratio <= 4.5


def test_gradient_near_zero_at_closed_form_optimum():
    t4, t = 0.199617993768011, 0.2891445905401824
    gx, gy = gradient_check(_generic, (t4, t), h=1e-6)
    value = _generic(t4, t)
    assert math.hypot(gx, gy) <= 1e-6 * (abs(value) + 1.0)


def test_gradient_positive_past_the_minimum():
    # Convexity in t at fixed t4: doubling t from the optimum gives a
    # strictly positive t-component.
    t4, t = 0.199617993768011, 0.2891445905401824
    _, gy = gradient_check(_generic, (t4, 2.0 * t), h=1e-6)
    assert gy > 0.0
