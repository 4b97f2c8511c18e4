"""The scorer HTTP service.

POST /score takes {metric_id, candidates, references?, sources?, language}
and answers {scores, metric_id}, order-aligned with candidates. Schema
violations map to 400, unsupported metric/language pairs to 422, model
failures to 500 with a diagnostic. GET /health reports loaded metrics.
"""
from __future__ import annotations

import logging
import os

import uvicorn
from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from pydantic import BaseModel, Field

from .registry import MetricRegistry, UnknownMetric

log = logging.getLogger("crossrefine_sidecar")

PORT_ENV = "CROSSREFINE_SCORER_PORT"
DEFAULT_PORT = 8901


class ScoreRequestBody(BaseModel):
    metric_id: str
    candidates: list[str] = Field(min_length=1)
    references: list[str] | None = None
    sources: list[str] | None = None
    language: str = "en"

    model_config = {"extra": "forbid"}


class ScoreResponseBody(BaseModel):
    scores: list[float]
    metric_id: str


def create_app(registry: MetricRegistry | None = None) -> FastAPI:
    registry = registry or MetricRegistry()
    app = FastAPI(title="crossrefine scorer", version="0.1.0")

    @app.exception_handler(RequestValidationError)
    async def schema_violation(_request: Request, exc: RequestValidationError):
        return JSONResponse(status_code=400, content={"error": str(exc.errors()[:3])})

    @app.get("/health")
    def health():
        return {"status": "ok", "loaded_metrics": registry.loaded_metrics()}

    @app.post("/score", response_model=ScoreResponseBody)
    def score(body: ScoreRequestBody):
        try:
            entry = registry.entry(body.metric_id)
        except UnknownMetric:
            return JSONResponse(
                status_code=422, content={"error": f"unsupported metric_id {body.metric_id!r}"}
            )
        if body.language not in ("en", "de"):
            return JSONResponse(
                status_code=422, content={"error": f"unsupported language {body.language!r}"}
            )
        if body.language not in entry.supported_languages:
            return JSONResponse(
                status_code=422,
                content={
                    "error": f"metric {body.metric_id!r} does not support language {body.language!r}"
                },
            )
        if entry.needs_references:
            if body.references is None:
                return JSONResponse(
                    status_code=400,
                    content={"error": f"metric {body.metric_id!r} requires references"},
                )
            if len(body.references) != len(body.candidates):
                return JSONResponse(
                    status_code=400,
                    content={
                        "error": f"{len(body.references)} references for "
                        f"{len(body.candidates)} candidates"
                    },
                )
        if entry.needs_sources:
            if body.sources is None:
                return JSONResponse(
                    status_code=400,
                    content={"error": f"metric {body.metric_id!r} requires sources"},
                )
            if len(body.sources) != len(body.candidates):
                return JSONResponse(
                    status_code=400,
                    content={
                        "error": f"{len(body.sources)} sources for "
                        f"{len(body.candidates)} candidates"
                    },
                )

        try:
            scores = registry.run(
                body.metric_id, body.candidates, body.references, body.sources
            )
        except Exception as exc:  # model failure -> 500 with diagnostic
            log.exception("scoring failed for %s", body.metric_id)
            return JSONResponse(
                status_code=500,
                content={"error": f"scoring failed for {body.metric_id!r}: {exc}"},
            )

        bounds = entry.score_bounds
        if body.metric_id == "bleurt" and bounds is not None:
            lo, hi = bounds
            out_of_range = [s for s in scores if not lo <= s <= hi]
            if out_of_range:  # soft bound: warn, never clamp
                log.warning(
                    "bleurt produced %d value(s) outside [%s, %s]", len(out_of_range), lo, hi
                )
        return {"scores": scores, "metric_id": body.metric_id}

    return app


def main() -> None:
    logging.basicConfig(level=logging.INFO)
    port = int(os.environ.get(PORT_ENV, DEFAULT_PORT))
    uvicorn.run(create_app(), host="0.0.0.0", port=port)


if __name__ == "__main__":
    main()
