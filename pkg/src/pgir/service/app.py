"""FastAPI app exposing the reconstruction operations.

Domain errors map to HTTP status codes: malformed input files give 400,
violated validity/domain conditions give 422 with the one-line diagnostic
in ``detail``.
"""

from __future__ import annotations

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from .. import __version__
from ..errors import ParseError, PgirError
from . import ops, schemas


def create_app() -> FastAPI:
    app = FastAPI(
        title="pgir",
        version=__version__,
        description="Bandlimited graph-signal reconstruction from partial samples",
    )

    @app.exception_handler(ParseError)
    async def _parse_error(_: Request, exc: ParseError):
        return JSONResponse(status_code=400, content={"detail": str(exc)})

    @app.exception_handler(PgirError)
    async def _domain_error(_: Request, exc: PgirError):
        return JSONResponse(status_code=422, content={"detail": str(exc)})

    @app.exception_handler(ValueError)
    async def _value_error(_: Request, exc: ValueError):
        return JSONResponse(status_code=422, content={"detail": str(exc)})

    @app.get("/health", response_model=schemas.HealthResponse)
    def health():
        return ops.health()

    @app.post("/graphs/generate", response_model=schemas.GenGraphResponse)
    def gen_graph(req: schemas.GenGraphRequest):
        return ops.gen_graph(req)

    @app.post("/analyze", response_model=schemas.AnalyzeResponse)
    def analyze(req: schemas.AnalyzeRequest):
        return ops.analyze(req)

    @app.post("/signals/generate", response_model=schemas.GenSignalResponse)
    def gen_signal(req: schemas.GenSignalRequest):
        return ops.gen_signal(req)

    @app.post("/sampling/draw", response_model=schemas.SampleResponse)
    def sample(req: schemas.SampleRequest):
        return ops.sample(req)

    @app.post("/reconstruct", response_model=schemas.ReconstructResponse)
    def reconstruct(req: schemas.ReconstructRequest):
        return ops.reconstruct(req)

    @app.post("/benchmark", response_model=schemas.BenchmarkResponse)
    def benchmark(req: schemas.BenchmarkRequest):
        return ops.benchmark(req)

    return app


app = create_app()
