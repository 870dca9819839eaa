"""n identical local plants feeding one central rework plant.

Local plants behave like the single-plant model without a rework period;
their imperfect output is pooled, reworked instantly at the central plant
and consumed by the central demand stream.  The cycle-end state of the
recovered stock splits the reduced objective into two cases — stock left
over (sold off at a discount penalty) or stock running out early (demand
lost) — each again of the closed-form quadratic type.  The solver evaluates
both case candidates, moves an out-of-case interior optimum to the case
boundary, and keeps the cheaper candidate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from . import trajectory
from .closed_form import generic_cost, solve_closed_form
from .errors import NoInteriorOptimumError
from .params import (
    AggregatedParams,
    CandidatePair,
    CycleTimes,
    GenericCoefficients,
    InventoryLevels,
    Solution,
    validate_aggregated,
)

DECAY_SPAN_WARN = 0.3

CASE_LEFTOVER = "aggregated-case-I"    # recovered stock outlasts the cycle
CASE_STOCKOUT = "aggregated-case-II"   # recovered stock depletes early


@dataclass(frozen=True)
class AggregatedCoefficients:
    """Case coefficients of the aggregated reduced objective.

    Both cases share b, c_coef and k_total = n*K + K_c and differ only in
    the cycle-length coefficient (a1/a2) and the constant (d1/d2).  t_bound
    is the cycle length at which the recovered stock exactly depletes at
    cycle end; below it the leftover case applies.  t_bound <= 0 means the
    pooled recovered inflow can never outlast the cycle.
    """

    a1: float
    a2: float
    b: float
    c_coef: float
    d1: float
    d2: float
    k_total: float
    t_bound: float

    def leftover_case(self) -> GenericCoefficients:
        return GenericCoefficients(a=self.a1, b=self.b, c_coef=self.c_coef,
                                   d=self.d1, k_total=self.k_total)

    def stockout_case(self) -> GenericCoefficients:
        return GenericCoefficients(a=self.a2, b=self.b, c_coef=self.c_coef,
                                   d=self.d2, k_total=self.k_total)


def coefficients_aggregated(agg: AggregatedParams) -> AggregatedCoefficients:
    """Quadratic-form coefficients for both aggregated cases."""
    plant, costs, n = agg.plant, agg.costs, agg.n
    p, alpha, lam = plant.p, plant.alpha, plant.lam
    x = plant.decay
    ap = alpha * p
    net = ap - lam
    weighted = plant.gamma * costs.c + (1.0 - plant.gamma) * costs.c_d
    pooled_rate = n * lam * (1.0 - alpha) / alpha  # recovered inflow per unit cycle length

    shared = (costs.h_r * (n * (1.0 - alpha) * lam ** 2 / (2.0 * alpha ** 2 * p))
              + costs.c_s * (n * net * lam / (2.0 * ap)))
    a1 = (shared + agg.h_c * (pooled_rate - lam / 2.0)
          - agg.c_v * pooled_rate * x)
    a2 = shared + agg.h_c * (n ** 2 * lam * (1.0 - alpha) ** 2 / (2.0 * alpha ** 2))
    b = -costs.c_s * n * lam
    c_coef = (weighted * n * lam * plant.theta / 2.0
              + costs.h_s * (n * lam * ap / (2.0 * net))
              + costs.c_s * (n * lam * ap / (2.0 * net)))
    d1 = agg.c_v * (pooled_rate - lam)
    d2 = costs.c_u * (lam - pooled_rate)
    t_bound = (1.0 / x) * (1.0 - alpha / (n * (1.0 - alpha)))
    return AggregatedCoefficients(a1=a1, a2=a2, b=b, c_coef=c_coef,
                                  d1=d1, d2=d2, k_total=n * costs.K + agg.K_c,
                                  t_bound=t_bound)


def recovered_stock(t4: float, t: float, agg: AggregatedParams) -> float:
    """Pooled recovered stock entering the central plant each cycle."""
    return trajectory.pooled_recovered_stock(t4, t, agg)


def _candidate(label: str, coeffs: GenericCoefficients, t_bound: float,
               ratio: float, must_clamp):
    """Interior optimum of one case, clamped to the boundary when out of case."""
    warnings: list[str] = []
    try:
        t4, t = solve_closed_form(coeffs)
        feasible = True
    except NoInteriorOptimumError:
        return None, [f"{label}: no interior optimum (existence condition fails)"]
    clamped = False
    if must_clamp(t):
        # Partial optimum along t = t_bound: the stationarity ratio pins t4.
        t4, t = ratio * t_bound, t_bound
        clamped = True
    return (CandidatePair(case_label=label, t4=t4, t=t,
                          tc=generic_cost(coeffs, t4, t),
                          clamped=clamped, feasible=feasible), warnings)


def solve_aggregated(agg: AggregatedParams) -> Solution:
    """Solve the aggregated model by the two-case boundary procedure.

    Candidates: the leftover-case interior optimum (clamped down to the
    case boundary when its cycle length exceeds t_bound) and the
    stockout-case interior optimum (clamped up to the boundary when its
    cycle length does not exceed t_bound).  With t_bound <= 0 the leftover
    case is impossible and the stockout optimum is returned directly.  The
    cheaper candidate wins; a case whose existence condition fails is
    skipped with a warning instead of failing the solve.
    """
    validate_aggregated(agg)
    plant, costs = agg.plant, agg.costs
    co = coefficients_aggregated(agg)
    ratio = -co.b / (2.0 * co.c_coef)

    candidates: list[CandidatePair] = []
    warnings: list[str] = []
    if co.t_bound <= 0.0:
        pair, notes = _candidate(CASE_STOCKOUT, co.stockout_case(), co.t_bound,
                                 ratio, must_clamp=lambda t: False)
        warnings += notes
        if pair is not None:
            candidates.append(pair)
    else:
        pair, notes = _candidate(CASE_LEFTOVER, co.leftover_case(), co.t_bound,
                                 ratio, must_clamp=lambda t: t > co.t_bound)
        warnings += notes
        if pair is not None:
            candidates.append(pair)
        pair, notes = _candidate(CASE_STOCKOUT, co.stockout_case(), co.t_bound,
                                 ratio, must_clamp=lambda t: t <= co.t_bound)
        warnings += notes
        if pair is not None:
            candidates.append(pair)
    if not candidates:
        raise NoInteriorOptimumError("no aggregated case admits an optimum")

    chosen = min(candidates, key=lambda cand: cand.tc)
    t4_star, t_star = chosen.t4, chosen.t

    x = plant.decay
    ap = plant.alpha * plant.p
    net = ap - plant.lam
    t2 = plant.lam * (t4_star + x * t4_star * t4_star / 2.0) / net
    rest = t_star - t2 - t4_star
    t1 = plant.lam * rest / ap
    t5 = net * rest / ap
    if min(t1, t2, t5) < 0.0:
        warnings.append("boundary pair yields a degenerate period split "
                        f"(t1={t1:.4g}, t2={t2:.4g}, t5={t5:.4g})")
    n_i_c = recovered_stock(t4_star, t_star, agg)
    times = CycleTimes(t1=t1, t2=t2, t3=0.0, t4=t4_star, t5=t5, total=t_star,
                       t6=trajectory.central_depletion_time(t4_star, t_star, agg))

    i_m = trajectory.peak_serviceable(t4_star, plant)
    levels = InventoryLevels(
        i_s=i_m,  # no rework period locally: production end is the peak
        i_m=i_m,
        i_b=net * t1,
        i_c=(1.0 - plant.alpha) * plant.p * (t1 + t2),
        n_i_c=n_i_c,
    )
    t_p = t1 + t2  # identical to lam/(alpha p) * (t + decay*t4^2/2)
    if x * t_star > DECAY_SPAN_WARN:
        warnings.append(
            f"decay*T = {x * t_star:.4g} exceeds {DECAY_SPAN_WARN}; "
            "the series reduction may be inaccurate")

    return Solution(
        t4_star=t4_star, t_star=t_star, times=times, levels=levels,
        t_p=t_p, q=plant.p * t_p, tc=chosen.tc,
        case_label=chosen.case_label, clamped=chosen.clamped,
        warnings=tuple(warnings), candidates=tuple(candidates),
    )
