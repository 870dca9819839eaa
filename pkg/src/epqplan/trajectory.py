"""Exact continuous-time inventory levels and the exact (non-reduced) costs.

This module is the verification oracle for the closed-form solvers: no
series approximation is applied to the single-plant cost, and the period
split for a given (t4, t) decision pair is recovered by root-finding the
stock-continuity condition instead of linearizing it.

Serviceable stock obeys dI/dt = inflow - lam - decay*I with decay =
gamma*theta (only screened-out deteriorated units leave stock on top of
demand), which makes the within-phase levels exponential in decay.  All
expressions divide by decay, so the (1 - exp(-x))/x-type factors are
evaluated by short series below a cutoff to stay accurate as theta -> 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Union

from .errors import NoRootError, NoSignChangeError
from .numeric import bracket_root
from .params import (
    AggregatedParams,
    CostParams,
    CycleTimes,
    InventoryLevels,
    ProductionParams,
    Solution,
)

SERIES_CUTOFF = 1e-6       # |decay * period| below this switches to series
RESIDUAL_TOL = 1e-12       # continuity residual allowance, relative to lam

PHASES = ("P1", "P2", "P3", "P4", "P5")


def _phi0(x: float) -> float:
    """(exp(x) - 1) / x, stable near zero."""
    if abs(x) < SERIES_CUTOFF:
        return 1.0 + x / 2.0 + x * x / 6.0
    return math.expm1(x) / x


def _phi1(x: float) -> float:
    """(1 - exp(-x)) / x, stable near zero."""
    if abs(x) < SERIES_CUTOFF:
        return 1.0 - x / 2.0 + x * x / 6.0
    return -math.expm1(-x) / x


def _phi2(x: float) -> float:
    """(exp(x) - 1 - x) / x^2, stable near zero."""
    if abs(x) < SERIES_CUTOFF:
        return 0.5 + x / 6.0 + x * x / 24.0
    return (math.expm1(x) - x) / (x * x)


@dataclass(frozen=True)
class PhasePoint:
    """One sampled instant of a cycle trajectory."""

    t: float
    phase: str                   # P1..P5, or the serviceable phase at t for exports
    serviceable: float           # signed; negative while demand is backlogged
    imperfect: float
    recovered: Optional[float] = None  # central-plant stock, aggregated only


def peak_serviceable(t4: float, params: ProductionParams) -> float:
    """Maximum serviceable stock, from the depletion-phase boundary condition."""
    x = params.decay
    return params.lam * t4 * _phi0(x * t4)


def stock_at_production_end(t2: float, params: ProductionParams) -> float:
    """Serviceable stock built during the production period of length t2."""
    x = params.decay
    return (params.alpha * params.p - params.lam) * t2 * _phi1(x * t2)


def boundary_levels(times: CycleTimes, params: ProductionParams) -> InventoryLevels:
    """Boundary stocks implied by a period split."""
    return InventoryLevels(
        i_s=stock_at_production_end(times.t2, params),
        i_m=peak_serviceable(times.t4, params),
        i_b=(params.alpha * params.p - params.lam) * times.t1,
        i_c=(1.0 - params.alpha) * params.p * (times.t1 + times.t2),
    )


def serviceable_level(t: float, times: CycleTimes, params: ProductionParams) -> float:
    """Signed serviceable stock at absolute time t within one cycle.

    Piecewise: linear backlog make-up, exponential build/rework/depletion,
    linear shortage accumulation.  Negative values are backlog.
    """
    if t < 0.0 or t > times.total * (1.0 + 1e-12):
        raise ValueError(f"t = {t} outside the cycle [0, {times.total}]")
    x = params.decay
    net = params.alpha * params.p - params.lam
    b1 = times.t1
    b2 = b1 + times.t2
    b3 = b2 + times.t3
    b4 = b3 + times.t4
    if t < b1:
        return net * (t - times.t1)
    if t < b2:
        u = t - b1
        return net * u * _phi1(x * u)
    if t < b3:
        u = t - b2
        i_s = stock_at_production_end(times.t2, params)
        return i_s * math.exp(-x * u) + (params.alpha_r * params.p_r - params.lam) * u * _phi1(x * u)
    if t < b4:
        u = t - b3
        i_m = peak_serviceable(times.t4, params)
        return i_m * math.exp(-x * u) - params.lam * u * _phi1(x * u)
    u = t - b4
    return -params.beta * params.lam * u


def imperfect_level(t: float, times: CycleTimes, params: ProductionParams) -> float:
    """Imperfect-quality stock at absolute time t (piecewise linear).

    Builds at (1-alpha)p while producing; drains at p_r during the rework
    period.  With t3 = 0 (aggregated local plants) the stock ships out the
    moment production ends.
    """
    end_build = times.t1 + times.t2
    if t < 0.0:
        raise ValueError(f"t = {t} before cycle start")
    if t <= end_build:
        return (1.0 - params.alpha) * params.p * t
    peak = (1.0 - params.alpha) * params.p * end_build
    if t <= end_build + times.t3:
        return max(0.0, peak - params.p_r * (t - end_build))
    return 0.0


def phase_at(t: float, times: CycleTimes) -> str:
    """Serviceable-stock phase containing absolute time t."""
    bounds = (times.t1,
              times.t1 + times.t2,
              times.t1 + times.t2 + times.t3,
              times.t1 + times.t2 + times.t3 + times.t4)
    for phase, bound in zip(PHASES, bounds):
        if t < bound:
            return phase
    return "P5"


def exact_reduce(t4: float, t: float, params: ProductionParams) -> CycleTimes:
    """Recover (t1, t2, t3, t5) exactly consistent with the pair (t4, t).

    The imperfect-stock balance and the backlog identity make t2 linear in
    t3; substituting that into the stock-continuity condition at the
    rework/depletion boundary leaves one transcendental equation in t3,
    solved by bisection on [0, t - t4].  Raises NoRootError when the pair
    admits no nonnegative split (no sign change in the bracket, or a
    negative production/backlog period at the root).
    """
    if not 0.0 < t4 < t:
        raise NoRootError(f"need 0 < t4 < t (got t4={t4}, t={t})")
    x = params.decay
    if x * t > 200.0:
        # far outside any meaningful cycle; the exponentials would overflow
        raise NoRootError(f"decay*t = {x * t} out of range for (t4={t4}, t={t})")
    net = params.alpha * params.p - params.lam
    net_r = params.alpha_r * params.p_r - params.lam
    eff = params.alpha * params.p - params.beta_prime * params.lam
    omega = params.beta * params.lam + eff * params.p_r / ((1.0 - params.alpha) * params.p)

    def t2_of(t3: float) -> float:
        return (omega * t3 + params.beta * params.lam * (t4 - t)) / net

    lead = params.lam * math.expm1(x * t4)

    def residual(t3: float) -> float:
        t2 = t2_of(t3)
        return (lead
                + net * math.exp(-x * t3) * math.expm1(-x * t2)
                + net_r * math.expm1(-x * t3))

    hi = t - t4
    try:
        t3 = bracket_root(residual, 0.0, hi, tol=1e-15 * max(1.0, hi))
    except NoSignChangeError as exc:
        raise NoRootError(f"no consistent split for (t4={t4}, t={t}): {exc}") from exc
    # residual scale grows with the decay-weighted rates when they dwarf demand
    scale = params.lam * max(1.0, x * (params.p + params.p_r) / params.lam)
    if abs(residual(t3)) > RESIDUAL_TOL * scale:
        raise NoRootError(f"split residual too large for (t4={t4}, t={t})")

    t2 = t2_of(t3)
    rest = t - t2 - t3 - t4
    if t2 < 0.0 or rest < 0.0:
        raise NoRootError(
            f"pair (t4={t4}, t={t}) forces a negative period (t2={t2}, t1+t5={rest})")
    t1 = params.beta * params.lam * rest / eff
    t5 = net * rest / eff
    return CycleTimes(t1=t1, t2=t2, t3=t3, t4=t4, t5=t5, total=t)


def _holding_integrals(times: CycleTimes, params: ProductionParams) -> float:
    """Time-integral of serviceable stock over the build, rework and depletion periods."""
    x = params.decay
    net = params.alpha * params.p - params.lam
    net_r = params.alpha_r * params.p_r - params.lam
    i_s = stock_at_production_end(times.t2, params)
    build = net * times.t2 ** 2 * _phi2(-x * times.t2)
    rework = i_s * times.t3 * _phi1(x * times.t3) + net_r * times.t3 ** 2 * _phi2(-x * times.t3)
    deplete = params.lam * times.t4 ** 2 * _phi2(x * times.t4)
    return build + rework + deplete


def cost_rate_from_times(times: CycleTimes, params: ProductionParams,
                         costs: CostParams) -> float:
    """Total cost per unit time for an explicit period split (no approximation).

    Deterioration is charged on the flow imbalance (input minus demand minus
    stock change), which is exactly the screened-out quantity; the leaked
    (1-gamma)/gamma multiple of it incurs the customer penalty instead.
    """
    t = times.total
    x = params.decay
    net = params.alpha * params.p - params.lam
    net_r = params.alpha_r * params.p_r - params.lam
    eff = params.alpha * params.p - params.beta_prime * params.lam

    screened = net * times.t2 + net_r * times.t3 - params.lam * times.t4
    deterioration = (costs.c + (1.0 - params.gamma) * costs.c_d / params.gamma) * screened / t

    holding_s = costs.h_s * _holding_integrals(times, params) / t
    holding_r = (costs.h_r / t) * (
        (params.p_r ** 2 + (1.0 - params.alpha) * params.p * params.p_r)
        * times.t3 ** 2 / (2.0 * (1.0 - params.alpha) * params.p))

    scrap = costs.c_p * (1.0 - params.alpha_r) * params.p_r * times.t3 / t

    rest = t - times.t2 - times.t3 - times.t4
    shortage = (costs.c_s / t) * net * params.beta * params.lam * rest ** 2 / (2.0 * eff)
    lost = (costs.c_u / t) * net * params.beta_prime * params.lam * rest / eff

    return deterioration + holding_s + holding_r + costs.K / t + scrap + shortage + lost


def exact_cost_basic(t4: float, t: float, params: ProductionParams,
                     costs: CostParams) -> float:
    """Exact single-plant cost per unit time at the decision pair (t4, t).

    Splits the cycle with exact_reduce, then evaluates the un-approximated
    cost; propagates NoRootError for infeasible pairs.  This is the oracle
    the reduced objective is measured against.
    """
    return cost_rate_from_times(exact_reduce(t4, t, params), params, costs)


def pooled_recovered_stock(t4: float, t: float, agg: AggregatedParams) -> float:
    """Recovered stock arriving at the central plant each cycle."""
    x = agg.plant.decay
    return (agg.n * agg.plant.lam * (1.0 - agg.plant.alpha) / agg.plant.alpha
            * (t + x * t4 * t4 / 2.0))


def central_depletion_time(t4: float, t: float, agg: AggregatedParams) -> float:
    """Time for the central plant's recovered stock to reach zero (linearized drain)."""
    nic = pooled_recovered_stock(t4, t, agg)
    return nic / (agg.plant.lam + nic * agg.plant.decay)


def central_cycle_cost(t4: float, t: float, agg: AggregatedParams,
                       leftover: Optional[bool] = None) -> float:
    """Per-cycle cost of the central rework plant.

    With stock outlasting the cycle (leftover case) the remainder is sold
    off at the c_v penalty; otherwise demand after the depletion time is
    lost at c_u.  leftover=None selects the case from the depletion time;
    passing it explicitly lets tests check that the two expressions agree
    at the crossover.
    """
    plant, costs = agg.plant, agg.costs
    x = plant.decay
    nic = pooled_recovered_stock(t4, t, agg)
    drain = plant.lam + nic * x
    t6 = nic / drain
    if leftover is None:
        leftover = t6 >= t
    if leftover:
        held = nic * t - drain * t * t / 2.0
        sell_off = agg.c_v * (nic * (1.0 - x * t) - plant.lam * t)
        return agg.h_c * held + sell_off + agg.K_c
    held = nic * nic / (2.0 * drain)
    return agg.h_c * held + costs.c_u * plant.lam * (t - t6) + agg.K_c


def exact_cost_aggregated(t4: float, t: float, agg: AggregatedParams) -> float:
    """Aggregated-network cost per unit time before the final coefficient reduction.

    Keeps the quadratic correction of the production period inside every
    local-plant term and selects the central plant's case from the actual
    depletion time, so it serves as the reference for the coefficient form.
    """
    plant, costs = agg.plant, agg.costs
    x = plant.decay
    ap = plant.alpha * plant.p
    net = ap - plant.lam
    weighted = plant.gamma * costs.c + (1.0 - plant.gamma) * costs.c_d

    per_plant = (
        weighted / t * (plant.lam * plant.theta * t4 * t4 / 2.0)
        + (costs.h_s / t) * (plant.lam / net) * ((ap * t4 * t4 + x * plant.lam * t4 ** 3) / 2.0)
        + (costs.h_r / t) * ((1.0 - plant.alpha) * plant.p / 2.0)
        * (plant.lam * t / ap + x * plant.lam * t4 * t4 / (2.0 * ap)) ** 2
        + costs.K / t
        + (costs.c_s / t) * (plant.lam / 2.0) * (net / ap)
        * (t - (ap * t4 + x * plant.lam * t4 * t4 / 2.0) / net) ** 2
    )
    return agg.n * per_plant + central_cycle_cost(t4, t, agg) / t


def recovered_level(t: float, n_i_c: float, params: ProductionParams) -> float:
    """Central-plant recovered stock at time t (exponential drain, floored at zero)."""
    x = params.decay
    if n_i_c <= 0.0:
        return 0.0
    level = n_i_c * math.exp(-x * t) - params.lam * t * _phi1(x * t)
    return max(0.0, level)


def recovered_zero_time(n_i_c: float, params: ProductionParams) -> float:
    """Time at which the exponential recovered-stock drain crosses zero."""
    x = params.decay
    ratio = n_i_c * x / params.lam
    if x == 0.0 or ratio < SERIES_CUTOFF:
        return n_i_c / params.lam * (1.0 - ratio / 2.0 + ratio * ratio / 3.0)
    return math.log1p(ratio) / x


def sample_trajectory(solution: Solution,
                      params: Union[ProductionParams, AggregatedParams],
                      step: float) -> list[PhasePoint]:
    """Sample one full cycle of the solution at multiples of step.

    Exact phase-boundary instants are always included (so step = total
    yields exactly the boundary points), and for aggregated solutions the
    recovered-stock zero crossing is added as well.
    """
    if step <= 0.0:
        raise ValueError("step must be positive")
    aggregated = isinstance(params, AggregatedParams)
    plant = params.plant if aggregated else params
    times = solution.times
    total = times.total

    grid = {k * step for k in range(int(total / step) + 1)}
    grid.update((0.0, times.t1, times.t1 + times.t2,
                 times.t1 + times.t2 + times.t3,
                 times.t1 + times.t2 + times.t3 + times.t4, total))
    n_i_c = solution.levels.n_i_c
    if aggregated and n_i_c:
        crossing = recovered_zero_time(n_i_c, plant)
        if crossing < total:
            grid.add(crossing)
    instants = sorted(u for u in grid if 0.0 <= u <= total)

    points = []
    for u in instants:
        rec = recovered_level(u, n_i_c, plant) if aggregated and n_i_c else None
        points.append(PhasePoint(
            t=u,
            phase=phase_at(u, times),
            serviceable=serviceable_level(u, times, plant),
            imperfect=imperfect_level(u, times, plant),
            recovered=rec,
        ))
    return points


def render_csv(points: list[PhasePoint]) -> str:
    """Trajectory CSV: t, phase, serviceable, imperfect, recovered.

    Header row, ascending time, '.' decimal separator, 9 significant
    digits; the recovered column is empty for single-plant runs.
    """
    lines = ["t,phase,serviceable,imperfect,recovered"]
    for pt in points:
        rec = "" if pt.recovered is None else f"{pt.recovered:.9g}"
        lines.append(f"{pt.t:.9g},{pt.phase},{pt.serviceable:.9g},{pt.imperfect:.9g},{rec}")
    return "\n".join(lines) + "\n"
