"""Request/response models for the planning service.

The scenario document doubles as the HTTP request body and the CLI scenario
file, with field names matching the planning notation (`lambda` is aliased
because it is a Python keyword).  Fractions are plain numbers in (0, 1];
values quoted as percentages are rejected by validation, never rescaled.
"""

from __future__ import annotations

from typing import List, Literal, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, model_validator

from .params import (
    AggregatedParams,
    CostParams,
    CycleTimes,
    InventoryLevels,
    ProductionParams,
    Solution,
    Violation,
)


class ProductionSpec(BaseModel):
    model_config = ConfigDict(populate_by_name=True)

    p: float
    alpha: float
    lam: float = Field(alias="lambda")
    theta: float
    gamma: float
    p_r: float
    alpha_r: float
    beta: float = 1.0

    def to_params(self) -> ProductionParams:
        return ProductionParams(p=self.p, alpha=self.alpha, lam=self.lam,
                                theta=self.theta, gamma=self.gamma,
                                p_r=self.p_r, alpha_r=self.alpha_r, beta=self.beta)


class CostSpec(BaseModel):
    K: float
    c: float
    c_d: float
    c_p: float
    c_s: float
    c_u: float = 0.0
    h_s: float
    h_r: float

    def to_params(self) -> CostParams:
        return CostParams(K=self.K, c=self.c, c_d=self.c_d, c_p=self.c_p,
                          c_s=self.c_s, c_u=self.c_u, h_s=self.h_s, h_r=self.h_r)


class AggregatedSpec(BaseModel):
    n: int
    K_c: float
    c_v: float
    h_c: float


class ScenarioOptions(BaseModel):
    step: float = Field(default=1e-3, gt=0.0)  # trajectory sampling step
    minimizer_tol: Optional[float] = Field(default=None, gt=0.0)  # numeric-path override


class Scenario(BaseModel):
    """One solvable planning instance."""

    model: Literal["basic", "aggregated"]
    production: ProductionSpec
    costs: CostSpec
    aggregated: Optional[AggregatedSpec] = None
    options: ScenarioOptions = Field(default_factory=ScenarioOptions)

    @model_validator(mode="after")
    def _aggregated_block_matches_model(self):
        if self.model == "aggregated" and self.aggregated is None:
            raise ValueError("aggregated scenarios need the 'aggregated' block")
        if self.model == "basic" and self.aggregated is not None:
            raise ValueError("basic scenarios must not carry an 'aggregated' block")
        return self

    def to_aggregated_params(self) -> AggregatedParams:
        block = self.aggregated
        return AggregatedParams(plant=self.production.to_params(),
                                costs=self.costs.to_params(),
                                n=block.n, K_c=block.K_c, c_v=block.c_v, h_c=block.h_c)


class ViolationOut(BaseModel):
    field: str
    code: str
    requirement: str

    @classmethod
    def from_violation(cls, v: Violation) -> "ViolationOut":
        return cls(field=v.field, code=v.code, requirement=v.requirement)


class CycleTimesOut(BaseModel):
    t1: float
    t2: float
    t3: float
    t4: float
    t5: float
    t6: Optional[float] = None
    total: float

    @classmethod
    def from_times(cls, t: CycleTimes) -> "CycleTimesOut":
        return cls(t1=t.t1, t2=t.t2, t3=t.t3, t4=t.t4, t5=t.t5, t6=t.t6, total=t.total)


class LevelsOut(BaseModel):
    i_s: float
    i_m: float
    i_b: float
    i_c: float
    n_i_c: Optional[float] = None

    @classmethod
    def from_levels(cls, lv: InventoryLevels) -> "LevelsOut":
        return cls(i_s=lv.i_s, i_m=lv.i_m, i_b=lv.i_b, i_c=lv.i_c, n_i_c=lv.n_i_c)


class BasicCoefficientsOut(BaseModel):
    a: float
    b: float
    c: float
    d: float
    k_total: float
    eta: Optional[float] = None
    omega: Optional[float] = None


class AggregatedCoefficientsOut(BaseModel):
    a1: float
    a2: float
    b: float
    c: float
    d1: float
    d2: float
    k_total: float
    t_bound: float


class CandidateOut(BaseModel):
    case_label: str
    t4: float
    t: float
    tc: float
    clamped: bool
    feasible: bool


class SolutionOut(BaseModel):
    case_label: str
    clamped: bool
    t4_star: float
    t_star: float
    times: CycleTimesOut
    levels: LevelsOut
    t_p: float
    q: float
    tc: float
    t_p_flow: Optional[float] = None
    q_flow: Optional[float] = None
    warnings: List[str] = []
    candidates: List[CandidateOut] = []

    @classmethod
    def from_solution(cls, sol: Solution) -> "SolutionOut":
        return cls(
            case_label=sol.case_label, clamped=sol.clamped,
            t4_star=sol.t4_star, t_star=sol.t_star,
            times=CycleTimesOut.from_times(sol.times),
            levels=LevelsOut.from_levels(sol.levels),
            t_p=sol.t_p, q=sol.q, tc=sol.tc,
            t_p_flow=sol.t_p_flow, q_flow=sol.q_flow,
            warnings=list(sol.warnings),
            candidates=[CandidateOut(case_label=c.case_label, t4=c.t4, t=c.t,
                                     tc=c.tc, clamped=c.clamped, feasible=c.feasible)
                        for c in sol.candidates],
        )


class SolveReport(BaseModel):
    """Full audit record of one solve: the solution plus its coefficient block."""

    model: Literal["basic", "aggregated"]
    solution: SolutionOut
    coefficients: Union[BasicCoefficientsOut, AggregatedCoefficientsOut]


class PairCost(BaseModel):
    t4: float
    t: float
    tc: float


class ValidateReport(BaseModel):
    """Reduced-model solution measured against the exact-cost minimum."""

    closed_form: PairCost     # solver pair, costed with the exact objective
    exact: PairCost           # numeric minimum of the exact objective
    gap: float                # (closed_form.tc - exact.tc) / exact.tc
    gap_percent: float
    evaluations: int          # exact-cost probes spent by the minimizer


class ErrorReport(BaseModel):
    error: str
    detail: str
    violations: List[ViolationOut] = []
