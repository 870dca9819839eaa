"""Shared fixtures: the worked planning instance and randomized feasible draws."""

import numpy as np
import pytest

from epqplan import AggregatedParams, CostParams, ProductionParams


@pytest.fixture
def plant() -> ProductionParams:
    return ProductionParams(p=6000.0, alpha=0.7, lam=1000.0, theta=0.1,
                            gamma=0.6, p_r=4000.0, alpha_r=0.6, beta=1.0)


@pytest.fixture
def costs() -> CostParams:
    return CostParams(K=300.0, c=40.0, c_d=100.0, c_p=30.0, c_s=200.0,
                      c_u=0.0, h_s=5.0, h_r=4.0)


@pytest.fixture
def network(plant, costs) -> AggregatedParams:
    return AggregatedParams(plant=plant, costs=costs, n=5, K_c=250.0,
                            c_v=10.0, h_c=3.0)


def basic_scenario() -> dict:
    return {
        "model": "basic",
        "production": {"p": 6000, "alpha": 0.7, "lambda": 1000, "theta": 0.1,
                       "gamma": 0.6, "p_r": 4000, "alpha_r": 0.6, "beta": 1.0},
        "costs": {"K": 300, "c": 40, "c_d": 100, "c_p": 30, "c_s": 200,
                  "c_u": 0, "h_s": 5, "h_r": 4},
        "options": {"step": 0.001},
    }


def aggregated_scenario() -> dict:
    scn = basic_scenario()
    scn["model"] = "aggregated"
    scn["aggregated"] = {"n": 5, "K_c": 250, "c_v": 10, "h_c": 3}
    return scn


def draw_production(rng: np.random.Generator, beta: float = 1.0) -> ProductionParams:
    """A feasible random plant (net output strictly outruns demand in both phases)."""
    while True:
        p = rng.uniform(2000.0, 20000.0)
        alpha = rng.uniform(0.5, 0.95)
        lam = alpha * p * rng.uniform(0.05, 0.6)
        p_r = rng.uniform(1000.0, 10000.0)
        alpha_r = rng.uniform(0.4, 1.0)
        if alpha_r * p_r > 1.05 * lam:
            return ProductionParams(
                p=p, alpha=alpha, lam=lam,
                theta=rng.uniform(0.01, 0.25), gamma=rng.uniform(0.2, 1.0),
                p_r=p_r, alpha_r=alpha_r, beta=beta)


def draw_costs(rng: np.random.Generator) -> CostParams:
    return CostParams(
        K=rng.uniform(50.0, 2000.0),
        c=rng.uniform(1.0, 100.0), c_d=rng.uniform(1.0, 150.0),
        c_p=rng.uniform(1.0, 80.0), c_s=rng.uniform(20.0, 500.0),
        c_u=rng.uniform(0.0, 100.0),
        h_s=rng.uniform(0.5, 20.0), h_r=rng.uniform(0.5, 20.0))


def draw_aggregated(rng: np.random.Generator) -> AggregatedParams:
    return AggregatedParams(
        plant=draw_production(rng, beta=1.0), costs=draw_costs(rng),
        n=int(rng.integers(1, 11)), K_c=rng.uniform(0.0, 1000.0),
        c_v=rng.uniform(0.0, 50.0), h_c=rng.uniform(0.0, 20.0))
