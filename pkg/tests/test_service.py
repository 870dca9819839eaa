"""HTTP surface: request/response schemas, error mapping, determinism."""

import csv
import io

import pytest
from fastapi.testclient import TestClient

from epqplan.service import app
from conftest import aggregated_scenario, basic_scenario


@pytest.fixture(scope="module")
def client():
    return TestClient(app)


def test_health(client):
    response = client.get("/health")
    assert response.status_code == 200
    assert response.json() == {"status": "ok"}


class TestSolveEndpoint:
    def test_basic(self, client):
        response = client.post("/solve", json=basic_scenario())
        assert response.status_code == 200
        report = response.json()
        assert report["model"] == "basic"
        sol = report["solution"]
        assert sol["case_label"] == "basic-complete"
        assert sol["t4_star"] == pytest.approx(0.1996, abs=5e-4)
        assert sol["t_star"] == pytest.approx(0.2891, abs=5e-4)
        assert 328 <= sol["q"] <= 332
        co = report["coefficients"]
        assert co["a"] == pytest.approx(69233.33, rel=1e-6)
        assert co["eta"] == pytest.approx(0.085227, abs=1e-6)
        assert co["omega"] == pytest.approx(10333.33, rel=1e-6)

    def test_force_partial_cross_check(self, client):
        straight = client.post("/solve", json=basic_scenario()).json()
        forced = client.post("/solve", json=basic_scenario(),
                             params={"force_partial": "true"}).json()
        assert forced["solution"]["case_label"] == "basic-partial"
        assert forced["solution"]["t4_star"] == pytest.approx(
            straight["solution"]["t4_star"], rel=1e-3)
        assert forced["solution"]["t_star"] == pytest.approx(
            straight["solution"]["t_star"], rel=1e-3)

    def test_aggregated(self, client):
        response = client.post("/solve", json=aggregated_scenario())
        assert response.status_code == 200
        report = response.json()
        sol = report["solution"]
        assert sol["case_label"] == "aggregated-case-I"
        assert sol["clamped"] is False
        co = report["coefficients"]
        assert co["t_bound"] == pytest.approx(8.8889, abs=1e-4)
        assert co["b"] == pytest.approx(-1e6)
        assert co["c"] == pytest.approx(688656.25)
        by_label = {c["case_label"]: c for c in sol["candidates"]}
        assert by_label["aggregated-case-II"]["clamped"] is True
        assert by_label["aggregated-case-II"]["t"] == pytest.approx(8.8889, abs=1e-4)
        # lot size consistent with its own formula
        plant = aggregated_scenario()["production"]
        span = sol["t_star"] + 0.6 * 0.1 * sol["t4_star"] ** 2 / 2
        assert sol["q"] == pytest.approx(plant["lambda"] / plant["alpha"] * span, rel=1e-9)
        assert sol["levels"]["n_i_c"] == pytest.approx(599.05, abs=0.01)

    def test_partial_backlog_scenario(self, client):
        scn = basic_scenario()
        scn["production"]["beta"] = 0.8
        scn["costs"]["c_u"] = 50.0
        response = client.post("/solve", json=scn)
        assert response.status_code == 200
        sol = response.json()["solution"]
        assert sol["case_label"] == "basic-partial"
        assert 0.0 < sol["t4_star"] < sol["t_star"]

    def test_determinism(self, client):
        first = client.post("/solve", json=basic_scenario())
        second = client.post("/solve", json=basic_scenario())
        assert first.content == second.content

    def test_invalid_parameters_are_422_with_violations(self, client):
        scn = basic_scenario()
        scn["production"]["alpha"] = 0.1
        response = client.post("/solve", json=scn)
        assert response.status_code == 422
        detail = response.json()["detail"]
        assert detail["error"] == "invalid-parameters"
        assert any(v["code"] == "infeasible-rates" and "alpha*p > lam" in v["requirement"]
                   for v in detail["violations"])

    def test_no_interior_optimum_is_400(self, client):
        scn = basic_scenario()
        scn["costs"]["c_s"] = 0.0  # removes the incentive to stock: b >= 0
        response = client.post("/solve", json=scn)
        assert response.status_code == 400
        assert response.json()["detail"]["error"] == "no-optimum"

    def test_malformed_scenario_is_422(self, client):
        scn = basic_scenario()
        scn["model"] = "aggregated"  # missing the aggregated block
        response = client.post("/solve", json=scn)
        assert response.status_code == 422


class TestValidateEndpoint:
    def test_gap_report(self, client):
        response = client.post("/validate", json=basic_scenario())
        assert response.status_code == 200
        report = response.json()
        assert report["closed_form"]["t4"] == pytest.approx(0.1996, abs=5e-4)
        assert report["exact"]["tc"] <= report["closed_form"]["tc"]
        assert report["gap"] >= 0.0
        assert report["gap_percent"] == pytest.approx(100 * report["gap"], rel=1e-12)
        assert report["gap_percent"] < 1.0
        assert report["evaluations"] > 0

    def test_small_decay_shrinks_the_gap(self, client):
        scn = basic_scenario()
        scn["production"]["theta"] = 0.001
        report = client.post("/validate", json=scn).json()
        assert report["gap_percent"] < 0.1

    def test_setup_only_objectives_coincide(self):
        # With every cost but the setup zeroed, both cost routes collapse to
        # K/t: the approximation gap is identically zero at any pair.
        from epqplan import CostParams, ProductionParams, exact_cost_basic
        from epqplan.closed_form import approx_cost_partial

        plant = ProductionParams(p=6000, alpha=0.7, lam=1000, theta=0.1,
                                 gamma=0.6, p_r=4000, alpha_r=0.6, beta=1.0)
        bare = CostParams(K=300, c=0, c_d=0, c_p=0, c_s=0, c_u=0, h_s=0, h_r=0)
        for t4, t in [(0.2, 0.3), (0.1, 0.4)]:
            exact = exact_cost_basic(t4, t, plant, bare)
            reduced = approx_cost_partial(t4, t, plant, bare)
            assert exact == pytest.approx(300.0 / t, rel=1e-12)
            assert reduced == pytest.approx(exact, rel=1e-12)

    def test_aggregated_rejected(self, client):
        response = client.post("/validate", json=aggregated_scenario())
        assert response.status_code == 422


class TestTrajectoryEndpoint:
    def _rows(self, response):
        assert response.headers["content-type"].startswith("text/csv")
        return list(csv.DictReader(io.StringIO(response.text)))

    def test_basic_trajectory(self, client):
        response = client.post("/trajectory", json=basic_scenario(),
                               params={"step": 0.001})
        assert response.status_code == 200
        rows = self._rows(response)
        assert rows[0]["t"] == "0"
        levels = [float(r["serviceable"]) for r in rows]
        assert max(levels) == pytest.approx(201, abs=1)
        assert all(r["recovered"] == "" for r in rows)
        times = [float(r["t"]) for r in rows]
        assert times == sorted(times)

    def test_aggregated_trajectory(self, client):
        response = client.post("/trajectory", json=aggregated_scenario(),
                               params={"step": 0.001})
        rows = self._rows(response)
        recovered = [float(r["recovered"]) for r in rows]
        assert recovered[0] == pytest.approx(599.05, abs=0.01)
        assert all(b <= a + 1e-9 for a, b in zip(recovered, recovered[1:]))
        assert all(r["phase"] != "P3" for r in rows)  # no local rework period

    def test_rejects_bad_step(self, client):
        response = client.post("/trajectory", json=basic_scenario(),
                               params={"step": -1.0})
        assert response.status_code == 422
