"""Domain types and feasibility validation for the lot-size planning models.

All types are immutable value objects and deliberately do not validate in
``__post_init__``: feasibility lives in :func:`validate` /
:func:`validate_aggregated` so that an infeasible instance can still be
constructed, inspected and reported on (the validators return the full list
of violations, not just the first).

Fractions are stored as numbers in (0, 1]; inputs quoted as percentages must
be converted by the caller.  Validation rejects fractions above 1 rather
than silently dividing by 100.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .errors import ParameterError


@dataclass(frozen=True)
class ProductionParams:
    """Physical rates and fractions for one production plant.

    beta is the fraction of customers willing to wait for backlogged
    demand; beta = 1 means every shortage is eventually served (complete
    backlogging) and selects the closed-form solver path.
    """

    p: float          # production rate (units/time)
    alpha: float      # good-quality fraction of fresh production, in (0, 1]
    lam: float        # demand rate (units/time)
    theta: float      # deterioration fraction per unit time, > 0
    gamma: float      # fraction of deteriorated stock caught by screening, in (0, 1]
    p_r: float        # rework rate (units/time)
    alpha_r: float    # rework recovery fraction, in (0, 1]
    beta: float = 1.0  # backlog-accepting customer fraction, in (0, 1]

    @property
    def beta_prime(self) -> float:
        """Lost-sales customer fraction (1 - beta); derived, never stored."""
        return 1.0 - self.beta

    @property
    def decay(self) -> float:
        """Effective stock-removal rate gamma*theta (screened-out deterioration)."""
        return self.gamma * self.theta


@dataclass(frozen=True)
class CostParams:
    """Unit costs and the per-cycle setup cost for one plant.

    c_u is kept even under complete backlogging (it then multiplies a zero
    lost-sales quantity) so one cost type serves both backlog modes.
    """

    K: float    # setup cost per cycle
    c: float    # disposal cost per screened-out deteriorated unit
    c_d: float  # penalty per deteriorated unit that leaks through to a customer
    c_p: float  # cost per unrecoverable imperfect unit
    c_s: float  # shortage cost per unit per unit time
    c_u: float  # penalty per unit of lost (never served) demand
    h_s: float  # holding cost per unit per unit time, serviceable stock
    h_r: float  # holding cost per unit per unit time, imperfect stock


@dataclass(frozen=True)
class AggregatedParams:
    """A network of n identical local plants plus one central rework plant.

    Local plants do not rework; their imperfect output is pooled at the
    central plant, which reworks instantly and serves its own demand stream
    from the recovered stock.  Local shortages are completely backlogged,
    so plant.beta must be 1.
    """

    plant: ProductionParams
    costs: CostParams
    n: int        # number of local plants, >= 1
    K_c: float    # setup cost per cycle at the central plant
    c_v: float    # discount-sale penalty per recovered unit left at cycle end
    h_c: float    # holding cost per unit per unit time at the central plant


@dataclass(frozen=True)
class CycleTimes:
    """Lengths of the cycle periods.

    Basic model: t1 (backlog make-up) + t2 (stock build) + t3 (rework) +
    t4 (depletion) + t5 (shortage build) = total.  The aggregated model has
    no local rework period (t3 = 0) and additionally carries t6, the time
    at which the central plant's recovered stock depletes.
    """

    t1: float
    t2: float
    t3: float
    t4: float
    t5: float
    total: float
    t6: Optional[float] = None

    def period_sum(self) -> float:
        return self.t1 + self.t2 + self.t3 + self.t4 + self.t5


@dataclass(frozen=True)
class InventoryLevels:
    """Boundary stock quantities of one cycle."""

    i_s: float  # serviceable stock when production ends
    i_m: float  # maximum serviceable stock (when rework ends)
    i_b: float  # backlog depth at cycle start
    i_c: float  # maximum imperfect-item stock
    n_i_c: Optional[float] = None  # pooled recovered stock at the central plant


@dataclass(frozen=True)
class GenericCoefficients:
    """Coefficients of the reduced objective a*T + b*T4 + c*T4^2/T + k/T + d.

    A closed-form interior optimum exists iff b < 0 and 4*a*c > b^2; c is a
    sum of nonnegative cost terms and is positive for any real instance.
    eta (rework-period fraction of the cycle) and omega (the stock-build
    combination from the period reduction) are carried for reporting and are
    only set when the coefficients come from the complete-backlog model.
    """

    a: float
    b: float
    c_coef: float
    d: float
    k_total: float
    eta: Optional[float] = None
    omega: Optional[float] = None


@dataclass(frozen=True)
class CandidatePair:
    """One case candidate considered by the aggregated selection procedure."""

    case_label: str
    t4: float
    t: float
    tc: float
    clamped: bool
    feasible: bool  # interior-optimum existence condition held


@dataclass(frozen=True)
class Solution:
    """Optimal plan for one scenario.

    t_p_flow / q_flow are the flow-balance variants of the production time
    and lot size (demand served over the cycle divided by effective output
    rate); they differ from t_p = t1 + t2 and q = p * t_p only by the
    series-approximation residue and are reported for comparison.
    """

    t4_star: float
    t_star: float
    times: CycleTimes
    levels: InventoryLevels
    t_p: float
    q: float
    tc: float
    case_label: str  # basic-complete | basic-partial | aggregated-case-I | aggregated-case-II
    clamped: bool
    t_p_flow: Optional[float] = None
    q_flow: Optional[float] = None
    warnings: tuple = ()
    candidates: tuple = ()


@dataclass(frozen=True)
class Violation:
    """One violated feasibility requirement."""

    field: str
    code: str         # infeasible-rates | out-of-range-fraction | nonpositive-rate | negative-cost | ...
    requirement: str  # the violated inequality, with the offending values


def _positive_rate(name: str, value: float) -> list[Violation]:
    if not value > 0.0:
        return [Violation(name, "nonpositive-rate", f"{name} > 0 (got {value})")]
    return []


def _unit_fraction(name: str, value: float) -> list[Violation]:
    if not (0.0 < value <= 1.0):
        return [Violation(name, "out-of-range-fraction", f"0 < {name} <= 1 (got {value})")]
    return []


def production_violations(params: ProductionParams) -> list[Violation]:
    """Every violated invariant of a ProductionParams instance."""
    out: list[Violation] = []
    for name in ("p", "lam", "theta", "p_r"):
        out += _positive_rate(name, getattr(params, name))
    for name in ("alpha", "gamma", "alpha_r", "beta"):
        out += _unit_fraction(name, getattr(params, name))
    # Net good output must outrun demand in both the fresh-production and
    # rework phases, or the stock-build/depletion geometry collapses.
    if not params.alpha * params.p > params.lam:
        out.append(Violation(
            "alpha", "infeasible-rates",
            f"alpha*p > lam (got {params.alpha * params.p} <= {params.lam})"))
    if not params.alpha_r * params.p_r > params.lam:
        out.append(Violation(
            "alpha_r", "infeasible-rates",
            f"alpha_r*p_r > lam (got {params.alpha_r * params.p_r} <= {params.lam})"))
    return out


def cost_violations(costs: CostParams) -> list[Violation]:
    """Every violated invariant of a CostParams instance."""
    out: list[Violation] = []
    for name in ("K", "c", "c_d", "c_p", "c_s", "c_u", "h_s", "h_r"):
        value = getattr(costs, name)
        if not value >= 0.0:
            out.append(Violation(name, "negative-cost", f"{name} >= 0 (got {value})"))
    if not costs.K > 0.0:
        out.append(Violation("K", "negative-cost", f"K > 0 (got {costs.K})"))
    return out


def aggregated_violations(agg: AggregatedParams) -> list[Violation]:
    """Every violated invariant of an AggregatedParams instance."""
    out = production_violations(agg.plant) + cost_violations(agg.costs)
    if not (isinstance(agg.n, int) and agg.n >= 1):
        out.append(Violation("n", "invalid-plant-count", f"n integer >= 1 (got {agg.n})"))
    for name in ("K_c", "c_v", "h_c"):
        value = getattr(agg, name)
        if not value >= 0.0:
            out.append(Violation(name, "negative-cost", f"{name} >= 0 (got {value})"))
    if agg.plant.beta != 1.0:
        out.append(Violation(
            "beta", "partial-backlog-unsupported",
            f"beta = 1 (aggregated plants backlog completely, got {agg.plant.beta})"))
    return out


def validate(params: ProductionParams, costs: CostParams) -> tuple[ProductionParams, CostParams]:
    """Return (params, costs) unchanged if feasible, else raise ParameterError.

    The error carries one Violation per offending field.  Validation is
    idempotent and pure.
    """
    violations = production_violations(params) + cost_violations(costs)
    if violations:
        raise ParameterError(violations)
    return params, costs


def validate_aggregated(agg: AggregatedParams) -> AggregatedParams:
    """Return agg unchanged if feasible, else raise ParameterError."""
    violations = aggregated_violations(agg)
    if violations:
        raise ParameterError(violations)
    return agg
