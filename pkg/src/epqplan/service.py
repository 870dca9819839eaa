"""HTTP service wrapping the solver library.

The scenario document is the request body of every endpoint, so a scenario
file can be POSTed as-is.  The handler functions (run_solve, run_validate,
run_export) are plain functions over Scenario; the CLI calls them in
process and the endpoints expose them over HTTP.
"""

from __future__ import annotations

import dataclasses
import math

from fastapi import FastAPI, HTTPException, Query
from fastapi.responses import PlainTextResponse

from . import aggregated as agg_mod
from . import closed_form, trajectory
from .errors import (
    MinimizerError,
    NegativePeriodError,
    NoInteriorOptimumError,
    NoRootError,
    ParameterError,
)
from .numeric import minimize_2d
from .schemas import (
    AggregatedCoefficientsOut,
    BasicCoefficientsOut,
    ErrorReport,
    PairCost,
    Scenario,
    SolutionOut,
    SolveReport,
    ValidateReport,
    ViolationOut,
)

EXACT_MINIMIZE_TOL = 1e-8   # each exact-cost probe runs a root-find, so coarser than the polynomial paths
INFEASIBLE_PENALTY = 1e6


def run_solve(scenario: Scenario, force_partial: bool = False) -> SolveReport:
    """Solve a scenario and return the full audit report."""
    if scenario.model == "aggregated":
        agg = scenario.to_aggregated_params()
        solution = agg_mod.solve_aggregated(agg)
        co = agg_mod.coefficients_aggregated(agg)
        coefficients = AggregatedCoefficientsOut(
            a1=co.a1, a2=co.a2, b=co.b, c=co.c_coef, d1=co.d1, d2=co.d2,
            k_total=co.k_total, t_bound=co.t_bound)
    else:
        production = scenario.production.to_params()
        costs = scenario.costs.to_params()
        tol = scenario.options.minimizer_tol or 1e-10
        solution = closed_form.solve_basic(production, costs,
                                           force_partial=force_partial,
                                           minimize_tol=tol)
        seed = dataclasses.replace(production, beta=1.0)
        co = closed_form.coefficients_complete(seed, costs)
        coefficients = BasicCoefficientsOut(a=co.a, b=co.b, c=co.c_coef, d=co.d,
                                            k_total=co.k_total, eta=co.eta,
                                            omega=co.omega)
    return SolveReport(model=scenario.model,
                       solution=SolutionOut.from_solution(solution),
                       coefficients=coefficients)


def run_validate(scenario: Scenario) -> ValidateReport:
    """Measure the reduced-model solution against the exact-cost optimum.

    Basic scenarios only: solves the reduced model, costs its pair with the
    exact objective, then minimizes the exact objective from that pair and
    reports the relative gap.
    """
    if scenario.model != "basic":
        raise ValueError("exact-gap validation supports basic scenarios only")
    production = scenario.production.to_params()
    costs = scenario.costs.to_params()
    solution = closed_form.solve_basic(production, costs)
    anchor = trajectory.exact_cost_basic(solution.t4_star, solution.t_star,
                                         production, costs)
    penalty = INFEASIBLE_PENALTY * abs(anchor)

    def objective(t4, t):
        if t4 <= 0.0 or t <= t4:
            return penalty
        try:
            return trajectory.exact_cost_basic(t4, t, production, costs)
        except NoRootError:
            return penalty

    tol = scenario.options.minimizer_tol or EXACT_MINIMIZE_TOL
    report = minimize_2d(objective, (solution.t4_star, solution.t_star), tol=tol)
    if not report.converged:
        raise MinimizerError(
            f"exact-cost search stopped after {report.probe_count} evaluations")
    gap = (anchor - report.value) / report.value
    return ValidateReport(
        closed_form=PairCost(t4=solution.t4_star, t=solution.t_star, tc=anchor),
        exact=PairCost(t4=report.point[0], t=report.point[1], tc=report.value),
        gap=gap, gap_percent=100.0 * gap, evaluations=report.probe_count)


def _consistent_times(solution, scenario: Scenario):
    """Refit the period split of a solved pair so the trajectory is seamless.

    The reported periods come from the series reduction; rendering them
    directly would leave small jumps at the phase boundaries.  The export
    therefore re-derives the split from the optimal pair without the
    approximation (transcendental consistency for the basic model, exact
    build-period inversion for the aggregated one).
    """
    if scenario.model == "basic":
        production = scenario.production.to_params()
        times = trajectory.exact_reduce(solution.t4_star, solution.t_star, production)
        levels = dataclasses.replace(trajectory.boundary_levels(times, production),
                                     n_i_c=solution.levels.n_i_c)
        return dataclasses.replace(solution, times=times, levels=levels), production

    agg = scenario.to_aggregated_params()
    plant = agg.plant
    x = plant.decay
    net = plant.alpha * plant.p - plant.lam
    t4, t = solution.t4_star, solution.t_star
    # Invert the peak-stock identity for the build period.
    t2 = -math.log1p(-plant.lam * math.expm1(x * t4) / net) / x
    rest = t - t2 - t4
    t1 = plant.lam * rest / (plant.alpha * plant.p)
    t5 = net * rest / (plant.alpha * plant.p)
    times = dataclasses.replace(solution.times, t1=t1, t2=t2, t5=t5)
    levels = dataclasses.replace(
        solution.levels,
        i_b=net * t1,
        i_c=(1.0 - plant.alpha) * plant.p * (t1 + t2))
    return dataclasses.replace(solution, times=times, levels=levels), agg


def run_export(scenario: Scenario, step: float | None = None) -> str:
    """Solve a scenario and render one cycle of its trajectory as CSV."""
    if scenario.model == "aggregated":
        solution = agg_mod.solve_aggregated(scenario.to_aggregated_params())
    else:
        solution = closed_form.solve_basic(scenario.production.to_params(),
                                           scenario.costs.to_params())
    refit, params = _consistent_times(solution, scenario)
    points = trajectory.sample_trajectory(refit, params, step or scenario.options.step)
    return trajectory.render_csv(points)


app = FastAPI(
    title="epqplan",
    description="Lot-size planning with rework, stock deterioration and "
                "backlogged shortages.",
)


def _http_error(status: int, name: str, exc: Exception, violations=()) -> HTTPException:
    payload = ErrorReport(
        error=name, detail=str(exc),
        violations=[ViolationOut.from_violation(v) for v in violations])
    return HTTPException(status_code=status, detail=payload.model_dump())


def _guarded(fn, *args, **kwargs):
    try:
        return fn(*args, **kwargs)
    except ParameterError as exc:
        raise _http_error(422, "invalid-parameters", exc, exc.violations) from exc
    except ValueError as exc:
        raise _http_error(422, "invalid-scenario", exc) from exc
    except (NoInteriorOptimumError, NegativePeriodError, NoRootError) as exc:
        raise _http_error(400, "no-optimum", exc) from exc
    except MinimizerError as exc:
        raise _http_error(400, "minimizer-failed", exc) from exc


@app.get("/health")
def health() -> dict:
    return {"status": "ok"}


@app.post("/solve", response_model=SolveReport)
def solve_endpoint(scenario: Scenario,
                   force_partial: bool = Query(default=False)) -> SolveReport:
    return _guarded(run_solve, scenario, force_partial)


@app.post("/validate", response_model=ValidateReport)
def validate_endpoint(scenario: Scenario) -> ValidateReport:
    return _guarded(run_validate, scenario)


@app.post("/trajectory", response_class=PlainTextResponse)
def trajectory_endpoint(scenario: Scenario,
                        step: float | None = Query(default=None, gt=0.0)) -> PlainTextResponse:
    csv_text = _guarded(run_export, scenario, step)
    return PlainTextResponse(csv_text, media_type="text/csv")
