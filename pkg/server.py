"""
Outage Evaluation API Server
============================
A thin FastAPI front end over the analytic outage evaluators.

Run with (from project root):
    python server.py

Or with auto-reload for development:
    uvicorn server:app --host 0.0.0.0 --port 9666 --reload

API Endpoints:
==============
Health:
    GET  /health                        - Service status and version

Evaluators:
    POST /api/ccdf                      - Analytic P(SIR <= T) per model
    POST /api/critical-density          - Critical density for one (N, evaluator)
    POST /api/compare                   - delta_fc / delta_minmax over a T list

Errors:
    422 - invalid parameters (pydantic validation or ParameterError)
    500 - numerical failure (NumericalError)
"""

from __future__ import annotations

import logging
from typing import Optional

from fastapi import FastAPI, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from pydantic import BaseModel, Field

from mrc_outage import analysis, bounds, quadrature
from mrc_outage.analysis import Evaluator
from mrc_outage.config import VERSION, get_cors_origins, get_service_port
from mrc_outage.core import ModelKind, SystemParams, single_antenna_cdf
from mrc_outage.errors import NumericalError, ParameterError, UnsupportedEvaluator
from mrc_outage.log import setup_logging

logger = logging.getLogger("mrc_outage.server")

ANALYTIC_MODELS = ("exact", "full-correlation", "min-fading", "max-fading", "single")


# ============================================================================
# Step 1: Create the FastAPI App
# ============================================================================

app = FastAPI(
    title="MRC Outage Evaluation API",
    description="Analytic SIR outage of multi-antenna MRC receivers in Poisson fields",
    version=VERSION,
)

# ============================================================================
# Step 2: Add CORS Middleware
# ============================================================================
# Local notebooks and dashboards call the API cross-origin; the list is
# resolved in ``mrc_outage.config.get_cors_origins``.

ALLOWED_CORS_ORIGINS = get_cors_origins()

app.add_middleware(
    CORSMiddleware,
    allow_origins=ALLOWED_CORS_ORIGINS,
    allow_methods=["GET", "POST", "OPTIONS"],
    allow_headers=["*"],
)


# ============================================================================
# Step 3: Error Mapping
# ============================================================================

@app.exception_handler(ParameterError)
def parameter_error_handler(request: Request, exc: ParameterError):
    return JSONResponse(status_code=422, content={"detail": str(exc), "error": type(exc).__name__})


@app.exception_handler(NumericalError)
def numerical_error_handler(request: Request, exc: NumericalError):
    logger.warning("numerical failure on %s: %s", request.url.path, exc)
    return JSONResponse(status_code=500, content={"detail": str(exc), "error": type(exc).__name__})


# ============================================================================
# Step 4: Pydantic Models (Request Bodies)
# ============================================================================

class ParamsBody(BaseModel):
    """System parameters shared by the evaluator endpoints."""
    lam: float = Field(gt=0)
    alpha: float = Field(gt=2)
    d: float = Field(gt=0)
    n_antennas: int = Field(default=2, ge=1)

    def to_params(self) -> SystemParams:
        return SystemParams(lam=self.lam, alpha=self.alpha, d=self.d, n_antennas=self.n_antennas)


class CcdfRequest(BaseModel):
    params: ParamsBody
    T_list: list[float] = Field(min_length=1)
    models: list[str] = Field(default_factory=lambda: list(ANALYTIC_MODELS), min_length=1)


class CriticalDensityRequest(BaseModel):
    epsilon: float = Field(gt=0, lt=1)
    T: float = Field(gt=0)
    alpha: float = Field(gt=2)
    d: float = Field(gt=0)
    N: int = Field(ge=1)
    evaluator: Evaluator = Evaluator.EXACT


class CompareRequest(BaseModel):
    params: ParamsBody
    T_list: list[float] = Field(min_length=1)


def _analytic_cdf(model: str, T: float, p: SystemParams) -> float:
    if model == "single":
        return single_antenna_cdf(T, p)
    if model == "exact":
        return quadrature.cdf_exact(T, p)
    try:
        kind = ModelKind(model)
    except ValueError:
        raise UnsupportedEvaluator(f"unknown model {model!r}") from None
    return bounds.cdf_bound(kind, T, p)


# ============================================================================
# Step 5: API Routes
# ============================================================================

@app.get("/health")
def health_check():
    """
    Health check endpoint for monitoring.
    Test with: curl http://localhost:9666/health
    """
    return {"status": "healthy", "version": VERSION}


@app.post("/api/ccdf")
def ccdf(request: CcdfRequest):
    """Analytic outage rows; (model, N) pairs without an evaluator are skipped."""
    p = request.params.to_params()
    rows, skipped = [], []
    for model in request.models:
        try:
            values = [(T, _analytic_cdf(model, T, p)) for T in request.T_list]
        except UnsupportedEvaluator as exc:
            skipped.append({"model": model, "reason": str(exc)})
            continue
        rows.extend({"T": T, "model": model, "cdf": cdf} for T, cdf in values)
    return {"rows": rows, "skipped": skipped}


@app.post("/api/critical-density")
def critical_density(request: CriticalDensityRequest):
    result = analysis.critical_density(request.epsilon, request.T, request.alpha, request.d,
                                       request.N, request.evaluator)
    return {
        "lambda_eps": result.lambda_eps,
        "epsilon": result.epsilon,
        "iterations": result.iterations,
        "residual": result.residual,
        "evaluator": result.evaluator,
        "n_antennas": result.n_antennas,
    }


@app.post("/api/compare")
def compare(request: CompareRequest):
    p = request.params.to_params()
    rows = []
    for T in request.T_list:
        delta_fc: Optional[float] = None
        if p.n_antennas <= 2:
            delta_fc = analysis.delta_fc(T, p)
        rows.append({"T": T, "delta_fc": delta_fc, "delta_minmax": analysis.delta_minmax(T, p)})
    return {"rows": rows}


# ============================================================================
# Step 6: Run the Server
# ============================================================================

if __name__ == "__main__":
    import uvicorn

    setup_logging()
    port = get_service_port()
    logger.warning("serving on http://0.0.0.0:%d (docs at /docs)", port)
    uvicorn.run(app, host="0.0.0.0", port=port)
