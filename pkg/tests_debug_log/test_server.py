"""
Tests for the FastAPI evaluation service in ``server.py``.

What we verify
--------------
1. ``/health`` reports status and version; CORS origins come from config.
2. ``/api/ccdf`` returns one row per (model, T) and lists the models that
   have no evaluator for the requested N instead of failing.
3. ``/api/critical-density`` matches the library solver.
4. ``/api/compare`` leaves ``delta_fc`` empty beyond two antennas.
5. Error mapping: body validation and ``ParameterError`` give 422,
   ``NumericalError`` gives 500 with the error class name.
"""
from __future__ import annotations

import os
import sys
import unittest
from unittest.mock import patch

from fastapi.testclient import TestClient

PROJECT_ROOT = os.path.abspath(os.path.join(os.path.dirname(__file__), ".."))
if PROJECT_ROOT not in sys.path:
    sys.path.insert(0, PROJECT_ROOT)

import server as server_module  # noqa: E402
from mrc_outage.analysis import critical_density_single  # noqa: E402
from mrc_outage.config import VERSION, get_cors_origins  # noqa: E402
from mrc_outage.core import SystemParams, single_antenna_cdf  # noqa: E402
from mrc_outage.errors import BracketFailure  # noqa: E402

PARAMS = {"lam": 1e-3, "alpha": 4.0, "d": 10.0, "n_antennas": 2}


class ServerTestCase(unittest.TestCase):

    def setUp(self):
        self.client = TestClient(server_module.app)

    def tearDown(self):
        self.client.close()

    def post(self, path: str, body: dict, expect: int = 200) -> dict:
        response = self.client.post(path, json=body)
        self.assertEqual(response.status_code, expect, response.text)
        return response.json()

    def test_health(self):
        response = self.client.get("/health")
        self.assertEqual(response.status_code, 200)
        self.assertEqual(response.json(), {"status": "healthy", "version": VERSION})

    def test_cors_origins_come_from_config(self):
        self.assertEqual(server_module.ALLOWED_CORS_ORIGINS, get_cors_origins())
        response = self.client.options("/health", headers={
            "Origin": "http://localhost:8888", "Access-Control-Request-Method": "GET"})
        self.assertEqual(response.headers.get("access-control-allow-origin"), "http://localhost:8888")

    def test_ccdf_rows(self):
        body = self.post("/api/ccdf", {"params": PARAMS, "T_list": [0.5, 1.0]})
        self.assertEqual(len(body["rows"]), 2 * len(server_module.ANALYTIC_MODELS))
        self.assertEqual(body["skipped"], [])
        single = [r for r in body["rows"] if r["model"] == "single"]
        p = SystemParams(**PARAMS)
        self.assertAlmostEqual(single[1]["cdf"], single_antenna_cdf(1.0, p), places=14)

    def test_ccdf_skips_models_without_an_evaluator(self):
        params = dict(PARAMS, n_antennas=3)
        body = self.post("/api/ccdf", {"params": params, "T_list": [1.0],
                                       "models": ["exact", "min-fading", "bogus"]})
        self.assertEqual([r["model"] for r in body["rows"]], ["min-fading"])
        self.assertEqual([s["model"] for s in body["skipped"]], ["exact", "bogus"])

    def test_critical_density(self):
        body = self.post("/api/critical-density",
                         {"epsilon": 0.05, "T": 1.0, "alpha": 4.0, "d": 15.0, "N": 1})
        expected = critical_density_single(0.05, 1.0, 4.0, 15.0)
        self.assertAlmostEqual(body["lambda_eps"] / expected, 1.0, delta=1e-9)
        self.assertEqual(body["evaluator"], "exact")
        self.assertEqual(body["n_antennas"], 1)

    def test_compare(self):
        body = self.post("/api/compare", {"params": dict(PARAMS, n_antennas=3), "T_list": [1.0]})
        row = body["rows"][0]
        self.assertIsNone(row["delta_fc"])
        self.assertGreater(row["delta_minmax"], 1.0)

        body = self.post("/api/compare", {"params": PARAMS, "T_list": [0.01]})
        self.assertGreater(body["rows"][0]["delta_fc"], 1.0)

    def test_body_validation(self):
        self.post("/api/ccdf", {"params": dict(PARAMS, alpha=2.0), "T_list": [1.0]}, expect=422)
        self.post("/api/ccdf", {"params": PARAMS, "T_list": []}, expect=422)

    def test_parameter_error_maps_to_422(self):
        body = self.post("/api/ccdf", {"params": PARAMS, "T_list": [-1.0], "models": ["single"]},
                         expect=422)
        self.assertEqual(body["error"], "NonPositive")
        body = self.post("/api/critical-density",
                         {"epsilon": 0.05, "T": 1.0, "alpha": 4.0, "d": 15.0, "N": 3}, expect=422)
        self.assertEqual(body["error"], "UnsupportedEvaluator")

    def test_numerical_error_maps_to_500(self):
        with patch("server.analysis.critical_density", side_effect=BracketFailure("no bracket")):
            body = self.post("/api/critical-density",
                             {"epsilon": 0.05, "T": 1.0, "alpha": 4.0, "d": 15.0, "N": 2}, expect=500)
        self.assertEqual(body, {"detail": "no bracket", "error": "BracketFailure"})


if __name__ == "__main__":
    unittest.main()
