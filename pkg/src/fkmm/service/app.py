"""HTTP front end: one POST endpoint per operation, wrapping the handlers."""

from __future__ import annotations

from fastapi import FastAPI
from fastapi.responses import JSONResponse

from ..errors import (
    FkmmError,
    GapClosed,
    ModelSyntaxError,
    NoIsolatedFixedPoints,
    NotAdmissible,
    NotFree,
    OddChernParity,
    TRSViolation,
    UnsupportedSpace,
)
from . import handlers, schemas as sc

_STATUS = {
    UnsupportedSpace: 422,
    ModelSyntaxError: 422,
    GapClosed: 409,
    NotAdmissible: 409,
    TRSViolation: 409,
    NotFree: 422,
    NoIsolatedFixedPoints: 422,
    OddChernParity: 409,
}


def create_app() -> FastAPI:
    app = FastAPI(
        title="fkmm",
        description=(
            "Equivariant cohomology and classification of low-dimensional "
            "involutive spheres/tori, plus numerical time-reversal invariants "
            "of gapped Clifford models"
        ),
    )

    @app.exception_handler(FkmmError)
    async def _domain_error(request, exc):
        status = 422
        for klass, code in _STATUS.items():
            if isinstance(exc, klass):
                status = code
                break
        body = sc.ErrorBody(error=type(exc).__name__, message=str(exc))
        return JSONResponse(status_code=status, content=body.model_dump())

    @app.post("/classify", response_model=sc.ClassifyResponse)
    def classify(req: sc.ClassifyRequest):
        return handlers.classify_handler(req)

    @app.post("/cohomology", response_model=sc.CohomologyResponse)
    def cohomology(req: sc.CohomologyRequest):
        return handlers.cohomology_handler(req)

    @app.post("/invariant", response_model=sc.InvariantResponse)
    def invariant(req: sc.InvariantRequest):
        return handlers.invariant_handler(req)

    @app.post("/sweep", response_model=sc.SweepResponse)
    def sweep(req: sc.SweepRequest):
        return handlers.sweep_handler(req)

    @app.post("/verify", response_model=sc.VerifyResponse)
    def verify(req: sc.VerifyRequest):
        return handlers.verify_handler(req)

    @app.get("/models", response_model=list[sc.ModelInfo])
    def models():
        return handlers.list_models_handler()

    return app


app = create_app()
