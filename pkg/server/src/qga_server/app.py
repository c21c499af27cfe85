"""FastAPI application implementing the generation wire protocol.

Contract lives in protocol/PROTOCOL.md: POST /v1/generate and
GET /health, 400 on malformed bodies, 503 while checkpoints load.
"""

from __future__ import annotations

import threading
from contextlib import asynccontextmanager
from dataclasses import dataclass
from typing import Any, Callable, Mapping

from fastapi import Body, FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse

from .models import GenerationModel

DEFAULT_MAX_LENGTH = 64
DEFAULT_NUM_BEAMS = 4
DEFAULT_LENGTH_PENALTY = 0.0


@dataclass
class GenerateParams:
    model: str
    inputs: list[str]
    max_length: int
    num_beams: int
    length_penalty: float


def _positive_int(value: Any) -> bool:
    return isinstance(value, int) and not isinstance(value, bool) and value > 0


def validate_generate_body(body: Any) -> tuple[GenerateParams | None, str | None]:
    """Wire-level checks; unknown extra fields are ignored on purpose."""
    if not isinstance(body, dict):
        return None, "body must be a JSON object"
    model = body.get("model")
    if model not in ("qg", "qa"):
        return None, "model must be 'qg' or 'qa'"
    inputs = body.get("inputs")
    if not isinstance(inputs, list) or not inputs:
        return None, "inputs must be a non-empty list"
    if not all(isinstance(x, str) for x in inputs):
        return None, "inputs must contain only strings"
    max_length = body.get("max_length", DEFAULT_MAX_LENGTH)
    if not _positive_int(max_length):
        return None, "max_length must be a positive integer"
    num_beams = body.get("num_beams", DEFAULT_NUM_BEAMS)
    if not _positive_int(num_beams):
        return None, "num_beams must be a positive integer"
    length_penalty = body.get("length_penalty", DEFAULT_LENGTH_PENALTY)
    if isinstance(length_penalty, bool) or not isinstance(length_penalty, (int, float)):
        return None, "length_penalty must be a number"
    return GenerateParams(model, list(inputs), max_length, num_beams, float(length_penalty)), None


def create_app(
    models: Mapping[str, GenerationModel] | None = None,
    loader: Callable[[], Mapping[str, GenerationModel]] | None = None,
    max_batch_size: int = 16,
) -> FastAPI:
    """Build the service around ready models or a deferred loader.

    With only a loader, requests get 503 until the lifespan startup has
    run it. Generation is serialized by a lock so concurrent responses
    never interleave batches.
    """
    if max_batch_size < 1:
        raise ValueError("max_batch_size must be >= 1")

    @asynccontextmanager
    async def lifespan(app: FastAPI):
        if app.state.models is None and loader is not None:
            app.state.models = dict(loader())
        yield

    app = FastAPI(title="qga generation server", docs_url=None, redoc_url=None, lifespan=lifespan)
    app.state.models = dict(models) if models is not None else None
    app.state.generate_lock = threading.Lock()

    @app.exception_handler(RequestValidationError)
    async def _bad_request(request: Request, exc: RequestValidationError):
        # the wire protocol wants 400, not FastAPI's default 422
        return JSONResponse({"error": "malformed request body"}, status_code=400)

    @app.get("/health")
    def health(request: Request):
        if request.app.state.models is None:
            return JSONResponse({"error": "loading"}, status_code=503)
        return {"status": "ok"}

    @app.post("/v1/generate")
    def generate(request: Request, body: Any = Body(None)):
        ready = request.app.state.models
        if ready is None:
            return JSONResponse({"error": "loading"}, status_code=503)
        params, reason = validate_generate_body(body)
        if params is None:
            return JSONResponse({"error": reason}, status_code=400)
        model = ready.get(params.model)
        if model is None:
            return JSONResponse(
                {"error": f"model {params.model!r} is not served"}, status_code=400
            )
        outputs: list[str] = []
        with request.app.state.generate_lock:
            for i in range(0, len(params.inputs), max_batch_size):
                chunk = params.inputs[i : i + max_batch_size]
                outputs.extend(
                    model.generate(
                        chunk, params.max_length, params.num_beams, params.length_penalty
                    )
                )
        if len(outputs) != len(params.inputs):
            raise RuntimeError(
                f"model produced {len(outputs)} outputs for {len(params.inputs)} inputs"
            )
        return {"outputs": outputs}

    return app
