import math
import warnings

import pytest

with warnings.catch_warnings():
    warnings.simplefilter("ignore")
    from fastapi.testclient import TestClient

from simtri.service.app import app

SQUARE = [[0, 0], [1, 0], [1, 1], [0, 1]]


@pytest.fixture(scope="module")
def client():
    with TestClient(app) as c:
        yield c


def test_health(client):
    r = client.get("/health")
    assert r.status_code == 200
    body = r.json()
    assert body["schema"] == 1 and body["status"] == "ok"


class TestCount:
    def test_square(self, client):
        r = client.post(
            "/count",
            json={
                "points": SQUARE,
                "shape": {"angles_deg": [90, 45, 45]},
                "eps_deg": 1.0,
            },
        )
        assert r.status_code == 200
        assert r.json()["total"] == 4

    def test_edges_included(self, client):
        r = client.post(
            "/count",
            json={
                "points": SQUARE,
                "shape": {"angles_deg": [90, 45, 45]},
                "eps_deg": 1.0,
                "include_edges": True,
            },
        )
        assert len(r.json()["edges"]) == 4

    def test_angle_rescaling(self, client):
        # (1, 1, 1) scales to the equilateral shape
        r = client.post(
            "/count",
            json={
                "points": [[0, 0], [1, 0], [0.5, math.sqrt(3) / 2]],
                "shape": {"angles_deg": [1, 1, 1]},
                "eps_deg": 1.0,
            },
        )
        assert r.json()["total"] == 1

    def test_bad_eps_is_400(self, client):
        r = client.post(
            "/count",
            json={
                "points": SQUARE,
                "shape": {"angles_deg": [90, 45, 45]},
                "eps_deg": 60.0,
            },
        )
        assert r.status_code == 400
        assert "InvalidEpsilon" in r.json()["detail"]

    def test_both_shapes_is_422(self, client):
        r = client.post(
            "/count",
            json={
                "points": SQUARE,
                "shape": {"angles_deg": [90, 45, 45], "z": [0.3, 0.9]},
                "eps_deg": 1.0,
            },
        )
        assert r.status_code == 422


class TestHn:
    def test_small_table(self, client):
        r = client.post("/hn", json={"n_max": 9})
        rows = r.json()["rows"]
        assert rows[9] == {
            "n": 9, "h": 30, "a": 3, "b": 3, "c": 3, "upper_bound": 30, "gap": 0,
        }
        assert rows[2]["a"] is None


class TestBuild:
    def test_example_build(self, client):
        r = client.post("/build", json={"example": "rectangle", "n": 40})
        body = r.json()
        assert len(body["points"]) == 40
        assert body["recount"] == body["predicted_count"]
        assert body["rho"] > 0

    def test_custom_build(self, client):
        r = client.post(
            "/build",
            json={
                "custom": {
                    "points": [[1, 0], [-0.5, 0.866025403784], [-0.5, -0.866025403784]],
                    "shape": {"angles_deg": [60, 60, 60]},
                    "eps_deg": 1.0,
                    "weights": [1 / 3, 1 / 3, 1 / 3],
                },
                "n": 27,
            },
        )
        assert r.json()["predicted_count"] == 819

    def test_unknown_example_is_400(self, client):
        r = client.post("/build", json={"example": "nonagon", "n": 5})
        assert r.status_code == 400


class TestOptimize:
    def test_example(self, client):
        r = client.post("/optimize", json={"example": "rectangle", "starts": 50})
        body = r.json()
        assert body["value"] == pytest.approx(1 / 15, rel=1e-9)

    def test_explicit_hypergraph(self, client):
        r = client.post(
            "/optimize",
            json={
                "hypergraph": {"r": 3, "edges": [[1, 2, 3]]},
                "starts": 20,
            },
        )
        assert r.json()["value"] == pytest.approx(1 / 24, rel=1e-9)


class TestDetect:
    def test_k4_in_complete(self, client):
        r = client.post(
            "/detect",
            json={
                "hypergraph": {
                    "r": 4,
                    "edges": [[1, 2, 3], [1, 2, 4], [1, 3, 4], [2, 3, 4]],
                },
                "patterns": ["K4-", "C5"],
            },
        )
        body = r.json()
        assert body["results"]["K4-"]["found"] is True
        assert body["results"]["C5"]["found"] is False
        assert body["iterated_threepartite"] is False

    def test_single_edge_is_threepartite(self, client):
        r = client.post(
            "/detect", json={"hypergraph": {"r": 3, "edges": [[1, 2, 3]]}}
        )
        assert r.json()["iterated_threepartite"] is True


class TestRealize:
    def test_equilateral_c5_minus(self, client):
        r = client.post(
            "/realize",
            json={"pattern": "C5-", "shape": {"angles_deg": [60, 60, 60]}},
        )
        assert r.json()["found"] is False

    def test_f32_by_z(self, client):
        r = client.post(
            "/realize", json={"pattern": "F32", "shape": {"z": [0.3, 0.9]}}
        )
        body = r.json()
        assert body["found"] is True
        assert len(body["points"]) == 5


class TestScan:
    def test_f32(self, client):
        r = client.post("/scan", json={"pattern": "F32", "grid_steps": 4, "tol": 1e-9})
        assert r.json()["fraction"] == 1.0


class TestVerify:
    def test_appendix(self, client):
        r = client.post(
            "/verify/appendix", json={"n_max": 100, "f_range_samples": 200}
        )
        body = r.json()
        assert body["ok"] is True
        assert body["gamma_bounds_violations"] == 0

    def test_gridcase(self, client):
        assert client.post("/verify/gridcase").json()["ok"] is True


def test_verify_sweep(client):
    r = client.post("/verify/sweep")
    body = r.json()
    assert body["ok"] is True and body["checked"] == 1 << 20
