"""FastAPI application exposing the library over JSON.

Domain errors surface as 422 responses carrying the error kind and message;
numerical failures (a computation that could not certify its result) map to
500.  All endpoints are pure functions of their request bodies.
"""

from __future__ import annotations

from typing import Union

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from .. import __version__
from ..descriptors import to_operator
from ..errors import GapLabError, NumericalFailure
from ..experiments import density_rows, fuglede_rows
from ..fredholm import HomotopyPath, homotopy_path
from ..metrics import (
    gap_projection_distance,
    gap_sup_distance,
    riesz_distance,
    tilde_distance,
)
from ..suite import run_suite
from .schemas import (
    DensityRequest,
    DensityResponse,
    FugledeRequest,
    FugledeResponse,
    HealthResponse,
    HomotopyConnected,
    HomotopyNoPath,
    HomotopyRequest,
    MetricRequest,
    MetricResponse,
    SuiteRequest,
    _config_of,
)

_METRIC_FNS = {
    "gap_proj": gap_projection_distance,
    "gap_sup": gap_sup_distance,
    "riesz": riesz_distance,
    "tilde": tilde_distance,
}


def create_app() -> FastAPI:
    app = FastAPI(title="gaplab", version=__version__)

    @app.exception_handler(GapLabError)
    async def _domain_error(request: Request, exc: GapLabError) -> JSONResponse:
        status = 500 if isinstance(exc, NumericalFailure) else 422
        return JSONResponse(
            status_code=status,
            content={"error": type(exc).__name__, "message": str(exc)},
        )

    @app.get("/health", response_model=HealthResponse)
    def health() -> HealthResponse:
        return HealthResponse(status="ok", version=__version__)

    @app.post("/v1/metric", response_model=MetricResponse)
    def metric(req: MetricRequest) -> MetricResponse:
        tol = _config_of(req.tol)
        rep = _METRIC_FNS[req.which](to_operator(req.a), to_operator(req.b), tol)
        return MetricResponse(
            value=rep.value,
            certified_error=rep.certified_error,
            method=rep.method,
            truncation_index=rep.truncation_index,
        )

    @app.post("/v1/fuglede", response_model=FugledeResponse)
    def fuglede(req: FugledeRequest) -> FugledeResponse:
        return FugledeResponse(rows=fuglede_rows(req.n_max, _config_of(req.tol)))

    @app.post("/v1/density", response_model=DensityResponse)
    def density(req: DensityRequest) -> DensityResponse:
        rows, note = density_rows(
            to_operator(req.descriptor), req.n_max, _config_of(req.tol)
        )
        return DensityResponse(rows=rows, note=note)

    @app.post("/v1/homotopy", response_model=Union[HomotopyConnected, HomotopyNoPath])
    def homotopy(req: HomotopyRequest):
        result = homotopy_path(
            to_operator(req.a),
            to_operator(req.b),
            steps=req.steps,
            eps_step=req.eps_step,
            tol=_config_of(req.tol),
        )
        if isinstance(result, HomotopyPath):
            return HomotopyConnected(
                index=result.index,
                max_step_gap=result.max_step_gap,
                lambdas=list(result.lambdas),
                indices=list(result.indices),
                step_gaps=list(result.step_gaps),
            )
        return HomotopyNoPath(
            index_a=result.index_a, index_b=result.index_b, reason=result.reason
        )

    @app.post("/v1/suite")
    def suite(req: SuiteRequest) -> dict:
        return run_suite(req.seed, req.trials, req.dim_max, _config_of(req.tol))

    return app


app = create_app()
