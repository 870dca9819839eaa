"""Exception types shared across the solver modules."""


class PlanningError(Exception):
    """Base class for all solver errors."""


class ParameterError(PlanningError):
    """Raised when a parameter set violates a feasibility invariant.

    Carries the full list of violations so callers can report every
    offending field at once instead of failing on the first.
    """

    def __init__(self, violations):
        self.violations = list(violations)
        lines = "; ".join(v.requirement for v in self.violations)
        super().__init__(f"infeasible parameters: {lines}")


class NoSignChangeError(PlanningError):
    """Bisection bracket endpoints have the same sign."""


class NoRootError(PlanningError):
    """The exact period split has no feasible solution for this (t4, t) pair."""


class NegativePeriodError(PlanningError):
    """The reduced period split produced a negative period (infeasible pair)."""


class NoInteriorOptimumError(PlanningError):
    """The convexity/existence conditions for an interior optimum fail."""


class MinimizerError(PlanningError):
    """The derivative-free minimizer stopped without converging."""
