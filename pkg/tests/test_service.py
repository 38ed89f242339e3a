import json

import pytest
from fastapi.testclient import TestClient

from fkmm.service.app import app

client = TestClient(app)

MODEL_TEXT = (
    "format = 1\n"
    'space = "T:0,2,0"\n'
    'F0 = "sin(k1)"\n'
    'F1 = "sin(k2)"\n'
    'F2 = "m + cos(k1) + cos(k2)"\n'
    'F3 = "0"\n'
    'F4 = "0"\n'
    "\n"
    "[params]\n"
    "m = 1.0\n"
)


class TestClassifyEndpoint:
    def test_table_cell(self):
        resp = client.post("/classify", json={"space": "T:0,3,0", "rank": 2})
        assert resp.status_code == 200
        body = resp.json()
        assert body["cell"] == "Z_2^4"
        assert body["invariant"] == "FKMM"

    def test_empty_cell(self):
        body = client.post("/classify", json={"space": "S:0,4", "rank": 3}).json()
        assert body["cell"] == "EMPTY"

    def test_coset_cell(self):
        body = client.post("/classify", json={"space": "S:0,3", "rank": 3}).json()
        assert body["cell"] == "2Z+1"

    def test_unsupported_space(self):
        resp = client.post("/classify", json={"space": "S:1,5", "rank": 2})
        assert resp.status_code == 422
        assert resp.json()["error"] == "UnsupportedSpace"

    def test_malformed_space(self):
        resp = client.post("/classify", json={"space": "banana", "rank": 2})
        assert resp.status_code == 422


class TestCohomologyEndpoint:
    def test_torus_group(self):
        body = client.post(
            "/cohomology", json={"space": "T:1,1,1", "degree": 2, "twist": 1}
        ).json()
        assert body["group"] == "Z_2 (+) Z^2"
        assert body["free_rank"] == 2
        assert body["torsion"] == [2]

    def test_twist_normalized(self):
        body = client.post(
            "/cohomology", json={"space": "S:0,3", "degree": 2, "twist": 3}
        ).json()
        assert body["twist"] == 1
        assert body["group"] == "Z"


class TestInvariantEndpoint:
    def test_builtin_model(self):
        body = client.post(
            "/invariant", json={"model": "builtin:hopf-s12", "grid": 16}
        ).json()
        assert body["z2_indices"] == {"nu": -1}
        assert body["admissible"] is True

    def test_inline_model_with_params(self):
        body = client.post(
            "/invariant",
            json={"model": MODEL_TEXT, "grid": 16, "params": {"m": 3.0}},
        ).json()
        assert body["z2_indices"] == {"nu": 1}

    def test_gap_closed_maps_to_409(self):
        resp = client.post(
            "/invariant",
            json={"model": MODEL_TEXT, "grid": 16, "params": {"m": 2.0}},
        )
        assert resp.status_code == 409
        assert resp.json()["error"] == "GapClosed"

    def test_trs_violation(self):
        bad = MODEL_TEXT.replace('"sin(k1)"', '"cos(k1)"')
        resp = client.post("/invariant", json={"model": bad, "grid": 16})
        assert resp.status_code == 409
        assert resp.json()["error"] == "TRSViolation"

    def test_syntax_error(self):
        bad = MODEL_TEXT.replace('"sin(k1)"', '"sin(k1"')
        resp = client.post("/invariant", json={"model": bad, "grid": 16})
        assert resp.status_code == 422
        assert resp.json()["error"] == "ModelSyntaxError"


class TestSweepEndpoint:
    def test_rows_and_na(self):
        body = client.post(
            "/sweep",
            json={
                "model": "builtin:mass-t020",
                "param": "m",
                "start": 1.5,
                "stop": 2.5,
                "step": 0.5,
                "grid": 16,
            },
        ).json()
        assert body["columns"] == ["m", "gap_min", "nu"]
        values = [row[0] for row in body["rows"]]
        assert values == [1.5, 2.0, 2.5]
        by_m = {row[0]: row for row in body["rows"]}
        assert by_m[2.0][2] is None  # gap closed -> NA
        assert by_m[1.5][2] == -1
        assert by_m[2.5][2] == 1
        assert "NA" in body["csv"]
        assert body["csv"].splitlines()[0] == "m,gap_min,nu"

    def test_empty_range_header_only(self):
        body = client.post(
            "/sweep",
            json={
                "model": "builtin:mass-t020",
                "param": "m",
                "start": 5.0,
                "stop": 4.0,
                "step": 0.5,
                "grid": 16,
            },
        ).json()
        assert body["rows"] == []
        assert body["csv"] == "m,gap_min,nu\n"

    def test_unknown_parameter(self):
        resp = client.post(
            "/sweep",
            json={
                "model": "builtin:mass-t020",
                "param": "zz",
                "start": 0,
                "stop": 1,
                "step": 0.5,
            },
        )
        assert resp.status_code == 422


class TestVerifyEndpoint:
    def test_pass(self):
        body = client.post("/verify", json={"model": "builtin:hopf-s12", "grid": 8}).json()
        assert body["ok"] is True

    def test_fail_reports_location(self):
        bad = MODEL_TEXT.replace('"sin(k1)"', '"cos(k1)"')
        body = client.post("/verify", json={"model": bad, "grid": 8}).json()
        assert body["ok"] is False
        assert any(c["label"].startswith("F0") and c["worst"] > 1 for c in body["checks"])


class TestModelsEndpoint:
    def test_registry_listing(self):
        body = client.get("/models").json()
        names = {m["name"] for m in body}
        assert {"hopf-s12", "hopf-s03", "mass-t020", "trivial-t020"} <= names
