"""Lot-size planning for imperfect production with rework, deteriorating
stock, imperfect screening and (partially) backlogged shortages.

Closed-form solvers for the reduced single-plant and aggregated-network
models, an exact-cost oracle to measure the reduction error, trajectory
export, and an HTTP service plus CLI on top.
"""

from .aggregated import (
    AggregatedCoefficients,
    coefficients_aggregated,
    recovered_stock,
    solve_aggregated,
)
from .closed_form import (
    HessianReport,
    approx_cost_partial,
    approx_reduce,
    coefficients_complete,
    generic_cost,
    hessian_check,
    solve_basic,
    solve_closed_form,
)
from .errors import (
    MinimizerError,
    NegativePeriodError,
    NoInteriorOptimumError,
    NoRootError,
    NoSignChangeError,
    ParameterError,
    PlanningError,
)
from .numeric import MinimizeReport, bracket_root, gradient_check, minimize_2d
from .params import (
    AggregatedParams,
    CandidatePair,
    CostParams,
    CycleTimes,
    GenericCoefficients,
    InventoryLevels,
    ProductionParams,
    Solution,
    Violation,
    validate,
    validate_aggregated,
)
from .trajectory import (
    PhasePoint,
    boundary_levels,
    central_cycle_cost,
    central_depletion_time,
    exact_cost_aggregated,
    exact_cost_basic,
    exact_reduce,
    imperfect_level,
    render_csv,
    sample_trajectory,
    serviceable_level,
)

__version__ = "0.1.0"
