"""HTTP service endpoints: success paths and error translation."""

import pytest
from fastapi.testclient import TestClient

from ptlattice.service import app
from ptlattice.service.schemas import ProfileModel


@pytest.fixture(scope="module")
def client():
    return TestClient(app)


TWO_SEGMENT = {"kind": "two-segment", "t0": 1.0, "tb": 1.0}


class TestHealth:
    def test_reports_version(self, client):
        reply = client.get("/health")
        assert reply.status_code == 200
        body = reply.json()
        assert body["status"] == "ok"
        assert body["version"] == "0.1.0"


class TestSpectrumEndpoint:
    def test_two_site_lattice(self, client):
        reply = client.post(
            "/spectrum",
            json={"n_sites": 2, "impurity_site": 1, "gamma": 0.6, "profile": TWO_SEGMENT},
        )
        assert reply.status_code == 200
        body = reply.json()
        assert body["n_complex"] == 0
        values = sorted(row["re"] for row in body["rows"])
        assert values == pytest.approx([-0.8, 0.8])
        assert all(row["classification"] == "real" for row in body["rows"])

    def test_domain_validation_maps_to_400(self, client):
        reply = client.post(
            "/spectrum",
            json={"n_sites": 20, "impurity_site": 15, "gamma": 0.0, "profile": TWO_SEGMENT},
        )
        assert reply.status_code == 400
        assert "m <= N//2" in reply.json()["detail"]

    def test_schema_violation_maps_to_422(self, client):
        reply = client.post("/spectrum", json={"n_sites": 2, "impurity_site": 1})
        assert reply.status_code == 422

    def test_profile_model_requires_kind_fields(self, client):
        reply = client.post(
            "/spectrum",
            json={"n_sites": 2, "impurity_site": 1, "gamma": 0.0, "profile": {"kind": "alpha", "t0": 1.0}},
        )
        assert reply.status_code == 422


class TestThresholdEndpoint:
    def test_adjacent_impurity_law(self, client):
        reply = client.post(
            "/threshold",
            json={
                "n_sites": 20,
                "impurity_site": 10,
                "profile": {"kind": "two-segment", "t0": 1.0, "tb": 0.7},
            },
        )
        assert reply.status_code == 200
        record = reply.json()["record"]
        assert record["gamma_c"] == pytest.approx(0.7, rel=1e-6)
        assert record["n_complex_above"] == 20
        assert reply.json()["n_complex_below"] == 0

    def test_bracket_failure_maps_to_409(self, client):
        reply = client.post(
            "/threshold",
            json={
                "n_sites": 4,
                "impurity_site": 2,
                "gamma_max": 0.001,
                "profile": TWO_SEGMENT,
            },
        )
        assert reply.status_code == 409
        assert "BracketFailure" in reply.json()["detail"]


class TestSweepEndpoint:
    def test_small_sweep(self, client):
        reply = client.post(
            "/sweep",
            json={
                "n_sites": 8,
                "d_list": [1],
                "tb_grid": [0.5, 1.5],
                "audit_points": 8,
            },
        )
        assert reply.status_code == 200
        body = reply.json()
        assert body["failures"] == []
        assert [r["tb"] for r in body["records"]] == [0.5, 1.5]
        for record in body["records"]:
            assert record["gamma_c"] == pytest.approx(record["tb"], rel=1e-6)

    def test_invalid_distance_maps_to_400(self, client):
        reply = client.post(
            "/sweep", json={"n_sites": 8, "d_list": [2], "tb_grid": [1.0]}
        )
        assert reply.status_code == 400


class TestFitExponentEndpoint:
    def test_unit_exponent_for_adjacent_impurities(self, client):
        reply = client.post(
            "/fit-exponent",
            json={"n_sites": 8, "d_list": [1], "points": 8,
                  "window_lo": 0.1, "window_hi": 0.4},
        )
        assert reply.status_code == 200
        fit = reply.json()["fits"][0]
        assert fit["eta"] == pytest.approx(1.0, abs=0.01)
        assert fit["n_points"] == 8

    def test_bad_window_maps_to_400(self, client):
        reply = client.post(
            "/fit-exponent",
            json={"n_sites": 8, "d_list": [1], "window_lo": 0.5, "window_hi": 1.5},
        )
        assert reply.status_code == 400


class TestVerifyEndpoint:
    def test_center_determinant_suite(self, client):
        reply = client.post("/verify", json={"suite": "eq5", "seed": 7})
        assert reply.status_code == 200
        body = reply.json()
        assert body["passed"] is True
        assert body["suite"] == "eq5"
        assert len(body["checks"]) >= 1

    def test_unknown_suite_rejected(self, client):
        reply = client.post("/verify", json={"suite": "bogus", "seed": 7})
        assert reply.status_code == 422

    def test_seed_required(self, client):
        reply = client.post("/verify", json={"suite": "eq5"})
        assert reply.status_code == 422


class TestProfileModel:
    def test_round_trip_to_domain_profile(self):
        model = ProfileModel(kind="custom", amplitudes=[1.0, 2.0, 1.0])
        assert model.to_profile().amplitudes == (1.0, 2.0, 1.0)

    def test_describe_is_deterministic(self):
        a = ProfileModel(kind="two-segment", t0=1.0, tb=0.5).describe()
        assert a == "two-segment:t0=1,tb=0.5"
