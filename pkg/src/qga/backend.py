"""Clients for text-to-text generation backends.

Wire protocol (shared with any conforming server, see protocol/PROTOCOL.md):

    POST /v1/generate
      {"model": "qg"|"qa", "inputs": [...], "max_length": N,
       "num_beams": N, "length_penalty": X}
    -> 200 {"outputs": [...]}   one output per input, same order
    GET /health -> 200 {"status": "ok"}
    400 malformed request, 503 model still loading

Two implementations: an HTTP client with bounded exponential backoff,
and a deterministic oracle backed by a canned input->output book for
tests and offline runs.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, replace
from typing import Callable, Protocol

import requests


@dataclass(frozen=True)
class GenerationRequest:
    """One batched generation call. `inputs` is filled per batch."""

    model: str
    inputs: tuple[str, ...] = ()
    max_length: int = 64
    num_beams: int = 4
    length_penalty: float = 0.0

    def with_inputs(self, inputs: list[str]) -> "GenerationRequest":
        return replace(self, inputs=tuple(inputs))

    def to_wire(self) -> dict:
        return {
            "model": self.model,
            "inputs": list(self.inputs),
            "max_length": self.max_length,
            "num_beams": self.num_beams,
            "length_penalty": self.length_penalty,
        }


def default_qg_params() -> GenerationRequest:
    """Question generation defaults: 4 beams, no length penalty."""
    return GenerationRequest(model="qg", max_length=64, num_beams=4, length_penalty=0.0)


def default_qa_params() -> GenerationRequest:
    """Answer generation defaults: 4 beams, length penalty -2.5.

    The negative penalty biases against padding out multi-span answers.
    max_length=128 is a working cap for sentence-level answers, not a
    reported setting.
    """
    return GenerationRequest(model="qa", max_length=128, num_beams=4, length_penalty=-2.5)


class BackendError(Exception):
    """Base class for generation failures (CLI exit code 2)."""


class TransportError(BackendError):
    """Could not reach the backend after the configured retries."""

    def __init__(self, message: str, attempts: int) -> None:
        super().__init__(f"{message} (after {attempts} attempt(s))")
        self.attempts = attempts


class ProtocolError(BackendError):
    """The backend answered, but not with a valid protocol response."""


class OracleMissError(BackendError):
    """An input string is missing from the oracle book: the test setup is wrong."""


class Backend(Protocol):
    def generate(self, request: GenerationRequest) -> list[str]: ...


class OracleBackend:
    """Deterministic backend: exact input string -> canned output.

    Book schema: {"eos_token": "</s>", "qg": {input: output},
    "qa": {input: output}}. Referentially transparent by construction.
    """

    def __init__(self, books: dict[str, dict[str, str]], eos_token: str = "</s>") -> None:
        self._books = books
        self.eos_token = eos_token

    @classmethod
    def load(cls, path: str) -> "OracleBackend":
        try:
            with open(path, encoding="utf-8") as fh:
                data = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise ProtocolError(f"cannot load oracle book {path}: {exc}") from exc
        books = {name: data.get(name, {}) for name in ("qg", "qa")}
        return cls(books, eos_token=data.get("eos_token", "</s>"))

    def generate(self, request: GenerationRequest) -> list[str]:
        book = self._books.get(request.model)
        if book is None:
            raise ProtocolError(f"oracle book has no model {request.model!r}")
        outputs = []
        for text in request.inputs:
            if text not in book:
                raise OracleMissError(
                    f"oracle book ({request.model}) has no entry for input: {text!r}"
                )
            outputs.append(book[text])
        return outputs


class HttpBackend:
    """requests-based client with bounded exponential backoff.

    Retries connection errors, timeouts, and 503 (model loading); any
    other non-200 status or a malformed body is a non-retryable
    protocol error.
    """

    def __init__(
        self,
        base_url: str,
        timeout: float = 60.0,
        max_attempts: int = 4,
        backoff: float = 0.25,
        session: requests.Session | None = None,
        sleep: Callable[[float], None] = time.sleep,
    ) -> None:
        self.base_url = base_url.rstrip("/")
        self.timeout = timeout
        self.max_attempts = max_attempts
        self.backoff = backoff
        self._session = session or requests.Session()
        self._sleep = sleep

    def health(self) -> dict:
        resp = self._session.get(f"{self.base_url}/health", timeout=self.timeout)
        if resp.status_code != 200:
            raise ProtocolError(f"health check failed with status {resp.status_code}")
        return resp.json()

    def generate(self, request: GenerationRequest) -> list[str]:
        url = f"{self.base_url}/v1/generate"
        body = request.to_wire()
        last_failure = "no attempt made"
        for attempt in range(1, self.max_attempts + 1):
            try:
                resp = self._session.post(url, json=body, timeout=self.timeout)
            except (requests.ConnectionError, requests.Timeout) as exc:
                last_failure = f"transport error: {exc}"
            else:
                if resp.status_code == 503:
                    last_failure = "backend busy (503, model loading)"
                elif resp.status_code != 200:
                    raise ProtocolError(
                        f"generate returned status {resp.status_code}: {resp.text[:200]}"
                    )
                else:
                    return self._parse_outputs(resp, len(request.inputs))
            if attempt < self.max_attempts:
                self._sleep(self.backoff * (2 ** (attempt - 1)))
        raise TransportError(last_failure, attempts=self.max_attempts)

    @staticmethod
    def _parse_outputs(resp: requests.Response, expected: int) -> list[str]:
        try:
            data = resp.json()
        except ValueError as exc:
            raise ProtocolError(f"generate response is not JSON: {exc}") from exc
        outputs = data.get("outputs") if isinstance(data, dict) else None
        if not isinstance(outputs, list) or not all(isinstance(o, str) for o in outputs):
            raise ProtocolError("generate response must carry {'outputs': [str, ...]}")
        if len(outputs) != expected:
            raise ProtocolError(f"expected {expected} outputs, got {len(outputs)}")
        return outputs


def make_backend(endpoint: str, **http_kwargs) -> Backend:
    """Build a backend from an endpoint spec.

    "oracle:<book path>" loads an oracle book; http:// and https://
    URLs get the HTTP client.
    """
    if endpoint.startswith("oracle:"):
        return OracleBackend.load(endpoint[len("oracle:") :])
    if endpoint.startswith(("http://", "https://")):
        return HttpBackend(endpoint, **http_kwargs)
    raise ValueError(f"unrecognized backend endpoint {endpoint!r}")


def generate(backend: Backend, request: GenerationRequest) -> list[str]:
    """Validated generate call: non-empty batch in, len-matched batch out."""
    if not request.inputs:
        raise ValueError("generation request must carry at least one input")
    if request.model not in ("qg", "qa"):
        raise ValueError(f"unknown model {request.model!r}")
    if request.num_beams < 1 or request.max_length < 1:
        raise ValueError("num_beams and max_length must be positive")
    outputs = backend.generate(request)
    if len(outputs) != len(request.inputs):
        raise ProtocolError(
            f"backend returned {len(outputs)} outputs for {len(request.inputs)} inputs"
        )
    return outputs
