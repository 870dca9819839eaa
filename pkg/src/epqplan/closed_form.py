"""Reduced single-plant model and its closed-form optimizer.

The exact cost is intractable in closed form, so the model is reduced by a
small-decay series approximation of the exponential stock dynamics: the
period split becomes linear in the decision pair (t4, t), and under
complete backlogging (beta = 1) the objective collapses to the quadratic
form a*T + b*T4 + c*T4^2/T + k/T + d whose strict convexity yields an
explicit optimal pair.  Partial backlogging keeps the reduced objective but
needs the numerical minimizer.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

from . import trajectory
from .errors import MinimizerError, NegativePeriodError, NoInteriorOptimumError
from .numeric import minimize_2d
from .params import (
    CostParams,
    CycleTimes,
    GenericCoefficients,
    ProductionParams,
    Solution,
    validate,
)

# Beyond this the small-decay reduction is badly strained; solutions carry a warning.
DECAY_SPAN_WARN = 0.3

INFEASIBLE_PENALTY = 1e6   # times the seed objective, for out-of-domain probes
PARTIAL_SPAN_CAP = 10.0    # partial-path search keeps t below this multiple of the seed t


def _omega(params: ProductionParams) -> float:
    eff = params.alpha * params.p - params.beta_prime * params.lam
    return params.beta * params.lam + eff * params.p_r / ((1.0 - params.alpha) * params.p)


def approx_reduce(t4: float, t: float,
                  params: ProductionParams) -> tuple[float, float]:
    """Reduced period split (t2, t3) for the pair (t4, t).

    Solves the two linear relations left by the series approximation: the
    stock-build identity t2 = (omega*t3 + beta*lam*(t4 - t))/(alpha*p - lam)
    and the rework balance (alpha_r*p_r - lam)*t3 + (alpha*p - lam)*t2 =
    lam*(t4 + decay*t4^2/2), quadratic correction included.  Raises
    NegativePeriodError when either period comes out negative.
    """
    t2, t3 = _reduce(t4, t, params, quadratic=True)
    if t2 < 0.0 or t3 < 0.0:
        raise NegativePeriodError(
            f"pair (t4={t4}, t={t}) gives t2={t2}, t3={t3}")
    return t2, t3


def _reduce(t4: float, t: float, params: ProductionParams,
            quadratic: bool) -> tuple[float, float]:
    omega = _omega(params)
    net = params.alpha * params.p - params.lam
    net_r = params.alpha_r * params.p_r - params.lam
    correction = params.decay * t4 * t4 / 2.0 if quadratic else 0.0
    t3 = params.lam * (params.beta_prime * t4 + correction + params.beta * t) / (omega + net_r)
    t2 = (omega * t3 + params.beta * params.lam * (t4 - t)) / net
    return t2, t3


def approx_cost_partial(t4: float, t: float, params: ProductionParams,
                        costs: CostParams) -> float:
    """Reduced cost per unit time under partial backlogging.

    The periods are reduced with the same linearization that produces the
    quadratic-form coefficients (the quadratic t4 correction dropped), so at
    beta = 1 this agrees with generic_cost over coefficients_complete
    pointwise; see approx_reduce for the corrected split used to report
    period lengths.
    """
    if t <= 0.0:
        raise ValueError("t must be positive")
    t2, t3 = _reduce(t4, t, params, quadratic=False)
    if t2 < 0.0 or t3 < 0.0:
        raise NegativePeriodError(
            f"pair (t4={t4}, t={t}) gives t2={t2}, t3={t3}")

    net = params.alpha * params.p - params.lam
    net_r = params.alpha_r * params.p_r - params.lam
    eff = params.alpha * params.p - params.beta_prime * params.lam
    weighted = params.gamma * costs.c + (1.0 - params.gamma) * costs.c_d

    deterioration = weighted / t * (params.lam * params.theta * t4 * t4 / 2.0)
    holding_s = (costs.h_s / t) * (net * t2 * t2 / 2.0 + net * t2 * t3
                                   + net_r * t3 * t3 / 2.0
                                   + params.lam * t4 * t4 / 2.0)
    holding_r = (costs.h_r / t) * (
        (params.p_r ** 2 + (1.0 - params.alpha) * params.p * params.p_r)
        * t3 * t3 / (2.0 * (1.0 - params.alpha) * params.p))
    scrap = costs.c_p * (1.0 - params.alpha_r) * params.p_r * t3 / t
    rest = t - t2 - t3 - t4
    shortage = (costs.c_s / t) * net * params.beta * params.lam * rest * rest / (2.0 * eff)
    lost = (costs.c_u / t) * net * params.beta_prime * params.lam * rest / eff
    return deterioration + holding_s + holding_r + costs.K / t + scrap + shortage + lost


def coefficients_complete(params: ProductionParams,
                          costs: CostParams) -> GenericCoefficients:
    """Quadratic-form coefficients of the complete-backlog reduced objective.

    Only defined for beta = 1; eta is the rework-period fraction of the
    cycle (t3 = eta * T under the reduction).
    """
    if params.beta != 1.0:
        raise ValueError("complete-backlog coefficients require beta = 1")
    p, alpha, lam = params.p, params.alpha, params.lam
    p_r, alpha_r = params.p_r, params.alpha_r
    net = alpha * p - lam
    net_r = alpha_r * p_r - lam
    eta = (1.0 - alpha) * lam / (alpha * p_r + (1.0 - alpha) * alpha_r * p_r)
    omega = lam + alpha * p_r / (1.0 - alpha)
    mix = (1.0 - eta) * net + eta * net_r
    weighted = params.gamma * costs.c + (1.0 - params.gamma) * costs.c_d

    a = (costs.h_s * (net_r ** 2 * eta ** 2 / (2.0 * net) - net_r * eta ** 2 / 2.0)
         + costs.h_r * ((p_r ** 2 + (1.0 - alpha) * p * p_r) * eta ** 2
                        / (2.0 * (1.0 - alpha) * p))
         + costs.c_s * lam * mix ** 2 / (2.0 * alpha * p * net))
    b = (costs.h_s * (lam * eta - net_r * lam * eta / net)
         - costs.c_s * lam * mix / net)
    c_coef = (weighted * lam * params.theta / 2.0
              + costs.h_s * (lam ** 2 / (2.0 * net) + lam / 2.0)
              + costs.c_s * alpha * p * lam / (2.0 * net))
    d = costs.c_p * (1.0 - alpha_r) * p_r * eta
    return GenericCoefficients(a=a, b=b, c_coef=c_coef, d=d, k_total=costs.K,
                               eta=eta, omega=omega)


def generic_cost(coeffs: GenericCoefficients, t4: float, t: float) -> float:
    """Evaluate the quadratic-form objective a*t + b*t4 + c*t4^2/t + k/t + d."""
    if t <= 0.0:
        raise ValueError("t must be positive")
    return (coeffs.a * t + coeffs.b * t4 + coeffs.c_coef * t4 * t4 / t
            + coeffs.k_total / t + coeffs.d)


def solve_closed_form(coeffs: GenericCoefficients) -> tuple[float, float]:
    """Closed-form argmin of the quadratic-form objective.

    Exists iff b < 0 and 4*a*c > b^2 (strict convexity plus an interior
    stationary point); then t4* = -b*sqrt(k/(c*(4ac - b^2))) and
    t* = 2*sqrt(c*k/(4ac - b^2)), with the stationarity ratio
    t4*/t* = -b/(2c).
    """
    a, b, c, k = coeffs.a, coeffs.b, coeffs.c_coef, coeffs.k_total
    gap = 4.0 * a * c - b * b
    if not (b < 0.0 and gap > 0.0):
        raise NoInteriorOptimumError(
            f"need b < 0 and 4ac > b^2 (got b={b}, 4ac-b^2={gap})")
    t4 = -b * math.sqrt(k / (c * gap))
    t = 2.0 * math.sqrt(c * k / gap)
    return t4, t


@dataclass(frozen=True)
class HessianReport:
    """Leading-minor test of the quadratic-form objective's Hessian."""

    positive_definite: bool
    determinant: float
    leading_minor: float


def hessian_check(coeffs: GenericCoefficients, t4: float, t: float) -> HessianReport:
    """Hessian of the quadratic-form objective at (t4, t).

    H = [[2c/t, -2c*t4/t^2], [-2c*t4/t^2, 2k/t^3 + 2c*t4^2/t^3]]; the cross
    terms cancel in the determinant, leaving det = 4*c*k/t^4.
    """
    if t <= 0.0:
        raise ValueError("t must be positive")
    c, k = coeffs.c_coef, coeffs.k_total
    leading = 2.0 * c / t
    # The off-diagonal squares cancel against the c*t4^2 diagonal product
    # exactly, so the determinant is computed in its cancellation-free form.
    det = 4.0 * c * k / t ** 4
    return HessianReport(positive_definite=leading > 0.0 and det > 0.0,
                         determinant=det, leading_minor=leading)


def _solve_partial_pair(params: ProductionParams, costs: CostParams,
                        tol: float) -> tuple[tuple[float, float], float]:
    """Minimize the partial-backlog reduced cost, seeded at the beta=1 closed form."""
    seed_coeffs = coefficients_complete(replace(params, beta=1.0), costs)
    seed = solve_closed_form(seed_coeffs)
    seed_value = approx_cost_partial(seed[0], seed[1], params, costs)
    penalty = INFEASIBLE_PENALTY * abs(seed_value)
    t_cap = PARTIAL_SPAN_CAP * seed[1]

    def objective(t4, t):
        if t4 <= 0.0 or t <= t4 or t > t_cap:
            return penalty
        try:
            return approx_cost_partial(t4, t, params, costs)
        except NegativePeriodError:
            return penalty

    report = minimize_2d(objective, seed, tol=tol)
    if not report.converged:
        raise MinimizerError(
            f"partial-backlog search stopped after {report.probe_count} evaluations")
    return report.point, report.value


def solve_basic(params: ProductionParams, costs: CostParams, *,
                force_partial: bool = False,
                minimize_tol: float = 1e-10) -> Solution:
    """Solve the single-plant model.

    beta = 1 goes through the closed form; beta < 1 (or force_partial, for
    cross-checking) minimizes the reduced partial-backlog cost numerically.
    Reported period lengths use the quadratic-corrected reduction, and the
    production time is t1 + t2 (the flow-balance variant is reported
    alongside as t_p_flow / q_flow).
    """
    validate(params, costs)
    complete = params.beta == 1.0 and not force_partial
    if complete:
        coeffs = coefficients_complete(params, costs)
        t4_star, t_star = solve_closed_form(coeffs)
        tc = generic_cost(coeffs, t4_star, t_star)
    else:
        (t4_star, t_star), tc = _solve_partial_pair(params, costs, minimize_tol)

    t2, t3 = approx_reduce(t4_star, t_star, params)
    rest = t_star - t2 - t3 - t4_star
    eff = params.alpha * params.p - params.beta_prime * params.lam
    t1 = params.beta * params.lam * rest / eff
    t5 = (params.alpha * params.p - params.lam) * rest / eff
    times = CycleTimes(t1=t1, t2=t2, t3=t3, t4=t4_star, t5=t5, total=t_star)
    levels = trajectory.boundary_levels(times, params)

    t_p = t1 + t2
    t_p_flow = params.lam * t_star / (params.alpha * params.p
                                      + (1.0 - params.alpha) * params.alpha_r * params.p)
    warnings = []
    if params.decay * t_star > DECAY_SPAN_WARN:
        warnings.append(
            f"decay*T = {params.decay * t_star:.4g} exceeds {DECAY_SPAN_WARN}; "
            "the series reduction may be inaccurate, check against the exact cost")

    return Solution(
        t4_star=t4_star, t_star=t_star, times=times, levels=levels,
        t_p=t_p, q=params.p * t_p, tc=tc,
        case_label="basic-complete" if complete else "basic-partial",
        clamped=False,
        t_p_flow=t_p_flow, q_flow=params.p * t_p_flow,
        warnings=tuple(warnings),
    )
