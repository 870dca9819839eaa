"""Generic derivative-free numerical machinery.

A 2-D simplex-descent minimizer, a bracketed bisection root-finder and a
central-difference gradient estimator.  These are deliberately free of any
model knowledge: infeasible-probe handling (large finite penalties) is the
caller's job, and objectives must be pure functions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

from .errors import NoSignChangeError

MAX_EVALS = 100_000


@dataclass
class MinimizeReport:
    """Outcome of one minimize_2d run."""

    point: tuple[float, float]
    value: float
    iterations: int
    converged: bool        # simplex diameter fell below tol
    probe_count: int       # objective evaluations


def _diameter(simplex) -> float:
    (ax, ay), (bx, by), (cx, cy) = simplex
    return max(math.hypot(ax - bx, ay - by),
               math.hypot(ax - cx, ay - cy),
               math.hypot(bx - cx, by - cy))


def minimize_2d(objective: Callable[[float, float], float],
                seed: tuple[float, float],
                tol: float = 1e-10,
                max_evals: int = MAX_EVALS) -> MinimizeReport:
    """Nelder-Mead simplex descent on a two-variable objective.

    The initial simplex is the seed plus two vertices offset by 5% along
    each axis (or an absolute 0.05 for a zero coordinate), so the start is
    scale-aware without user input.  Convergence is declared when the
    simplex diameter drops below tol.  The objective must be total: return
    a large finite penalty for infeasible probes, never raise.

    For a strictly convex objective the local minimum found is global.
    """
    if tol <= 0.0:
        raise ValueError("tol must be positive")

    x0, y0 = float(seed[0]), float(seed[1])
    dx = 0.05 * x0 if x0 != 0.0 else 0.05
    dy = 0.05 * y0 if y0 != 0.0 else 0.05
    simplex = [(x0, y0), (x0 + dx, y0), (x0, y0 + dy)]

    evals = 0

    def f(pt):
        nonlocal evals
        evals += 1
        return objective(pt[0], pt[1])

    values = [f(v) for v in simplex]
    iterations = 0
    converged = False

    while evals < max_evals:
        order = sorted(range(3), key=lambda i: values[i])
        simplex = [simplex[i] for i in order]
        values = [values[i] for i in order]

        if _diameter(simplex) < tol:
            converged = True
            break

        iterations += 1
        best, second, worst = simplex
        fb, fs, fw = values
        cx = 0.5 * (best[0] + second[0])
        cy = 0.5 * (best[1] + second[1])

        # reflection
        xr = (cx + (cx - worst[0]), cy + (cy - worst[1]))
        fr = f(xr)
        if fr < fb:
            # expansion
            xe = (cx + 2.0 * (cx - worst[0]), cy + 2.0 * (cy - worst[1]))
            fe = f(xe)
            if fe < fr:
                simplex[2], values[2] = xe, fe
            else:
                simplex[2], values[2] = xr, fr
            continue
        if fr < fs:
            simplex[2], values[2] = xr, fr
            continue

        # contraction (outside if the reflected point beats the worst)
        if fr < fw:
            xc = (cx + 0.5 * (cx - worst[0]), cy + 0.5 * (cy - worst[1]))
        else:
            xc = (cx - 0.5 * (cx - worst[0]), cy - 0.5 * (cy - worst[1]))
        fc = f(xc)
        if fc < min(fr, fw):
            simplex[2], values[2] = xc, fc
            continue

        # shrink toward the best vertex
        for i in (1, 2):
            simplex[i] = (best[0] + 0.5 * (simplex[i][0] - best[0]),
                          best[1] + 0.5 * (simplex[i][1] - best[1]))
            values[i] = f(simplex[i])

    order = sorted(range(3), key=lambda i: values[i])
    return MinimizeReport(point=simplex[order[0]], value=values[order[0]],
                          iterations=iterations, converged=converged,
                          probe_count=evals)


def bracket_root(f: Callable[[float], float], lo: float, hi: float,
                 tol: float) -> float:
    """Bisection root of f on [lo, hi]; requires a sign change.

    Halves the bracket every iteration, so at most
    ceil(log2((hi - lo) / tol)) + 2 midpoint evaluations are made; stops
    early on an exact zero or when the bracket cannot be split further in
    floating point.  The returned root lies within [lo, hi].
    """
    if not hi > lo:
        raise ValueError("bracket requires hi > lo")
    if tol <= 0.0:
        raise ValueError("tol must be positive")
    flo = f(lo)
    if flo == 0.0:
        return lo
    fhi = f(hi)
    if fhi == 0.0:
        return hi
    if flo * fhi > 0.0:
        raise NoSignChangeError(
            f"f({lo}) = {flo} and f({hi}) = {fhi} have the same sign")

    cap = max(1, math.ceil(math.log2((hi - lo) / tol))) + 2
    for _ in range(cap):
        if hi - lo < tol:
            break
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:  # float resolution floor
            break
        fmid = f(mid)
        if fmid == 0.0:
            return mid
        if flo * fmid < 0.0:
            hi, fhi = mid, fmid
        else:
            lo, flo = mid, fmid
    return 0.5 * (lo + hi)


def gradient_check(objective: Callable[[float, float], float],
                   point: tuple[float, float],
                   h: float = 1e-6) -> tuple[float, float]:
    """Central-difference gradient estimate of a two-variable objective.

    O(h^2) accurate on smooth objectives; used by the solvers' tests to
    confirm near-zero gradients at closed-form optima.
    """
    if h <= 0.0:
        raise ValueError("h must be positive")
    x, y = point
    gx = (objective(x + h, y) - objective(x - h, y)) / (2.0 * h)
    gy = (objective(x, y + h) - objective(x, y - h)) / (2.0 * h)
    return gx, gy
