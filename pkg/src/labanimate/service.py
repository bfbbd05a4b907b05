"""Stateless gesture service: text in, one Labanotation score out.

Endpoints (JSON bodies)::

    POST /v1/gesture   {"text": str, "seed"?: int, "trace"?: bool}
    POST /v1/compile   {"score": str, "profile": str, "seconds_per_beat"?: float, "strict"?: bool}
    GET  /v1/library
    GET  /v1/health

Speech conversion stays outside; the service only exchanges text.
"""

from __future__ import annotations

import itertools
import json
import logging
import threading
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer

import numpy as np

from .codebook import load_codebook
from .compiler import (
    SHIPPED_PROFILES,
    CompileError,
    ProfileError,
    RobotProfile,
    TimingParams,
    compile_score,
    load_profile,
)
from .config import ServiceConfig
from .engine import pick_variant, select_gesture
from .io import LabanParseError, ScoreDocument, load_library, parse_score, serialize_score
from .semantics import EmbeddingTable

log = logging.getLogger(__name__)


class RequestError(ValueError):
    def __init__(self, status: int, code: str, message: str, **extra):
        super().__init__(message)
        self.status = status
        self.code = code
        self.extra = extra

    def body(self) -> str:
        return _dumps({"error": self.code, "message": str(self), **self.extra})


def _dumps(obj) -> str:
    return json.dumps(obj, indent=2, ensure_ascii=False) + "\n"


def compile_document(
    score_text: str,
    profile: RobotProfile,
    timing: TimingParams = TimingParams(),
    codebook=None,
) -> str:
    """Score text -> trajectory JSON text. Shared by the CLI and the service."""
    doc = parse_score(score_text, codebook)
    return compile_score(doc.score, profile, timing, codebook).dumps()


class GestureService:
    """Holds the immutable library, embeddings, codebook and profiles."""

    def __init__(self, config: ServiceConfig):
        self.config = config
        self.codebook = load_codebook(config.codebook)
        self.library = load_library(config.library, self.codebook)
        if config.embeddings:
            self.table = EmbeddingTable.load(config.embeddings)
        else:
            log.warning("no embedding file configured; matching exact words only")
            self.table = None
        self.engine_config = config.engine_config()
        self.profiles: dict[str, RobotProfile] = {n: load_profile(n) for n in SHIPPED_PROFILES}
        for name, path in config.profiles.items():
            self.profiles[name] = load_profile(path)
        if config.profile not in self.profiles:
            self.profiles[config.profile] = load_profile(config.profile)
        self._counter = itertools.count()
        self._lock = threading.Lock()

    def _next_seed(self) -> int:
        with self._lock:
            return self.engine_config.seed + next(self._counter)

    def gesture(self, request: dict) -> dict:
        if not isinstance(request, dict):
            raise RequestError(400, "bad_request", "request body must be a JSON object")
        text = request.get("text")
        if not isinstance(text, str):
            raise RequestError(400, "bad_request", "'text' (string) is required")
        seed = request.get("seed")
        if seed is None:
            seed = self._next_seed()
        elif isinstance(seed, bool) or not isinstance(seed, int) or seed < 0:
            raise RequestError(400, "bad_request", "'seed' must be a non-negative integer")
        want_trace = request.get("trace", False)
        if not isinstance(want_trace, bool):
            raise RequestError(400, "bad_request", "'trace' must be a boolean")

        rng = np.random.default_rng(seed)
        result = select_gesture(text, self.library, self.table, self.engine_config, rng)
        score = pick_variant(result.pair, rng)
        body = {
            "text": text,
            "concept": result.concept,
            "category": result.pair.category.value,
            "branch": result.branch,
            "score": serialize_score(ScoreDocument(score, name=result.concept)),
        }
        if want_trace:
            body["trace"] = {"seed": seed, **result.trace.to_json()}
        return body

    def compile(self, request: dict) -> str:
        if not isinstance(request, dict):
            raise RequestError(400, "bad_request", "request body must be a JSON object")
        score_text = request.get("score")
        if not isinstance(score_text, str):
            raise RequestError(400, "bad_request", "'score' (text) is required")
        name = request.get("profile", self.config.profile)
        profile = self.profiles.get(name)
        if profile is None:
            raise RequestError(404, "profile_not_found", f"unknown profile {name!r}")
        try:
            timing = TimingParams(
                float(request.get("seconds_per_beat", self.config.seconds_per_beat)),
                bool(request.get("strict", False)),
            )
        except (TypeError, ValueError) as exc:
            raise RequestError(400, "bad_request", str(exc)) from None
        try:
            return compile_document(score_text, profile, timing, self.codebook)
        except LabanParseError as exc:
            raise RequestError(
                400, "score_parse_error", exc.message, kind=exc.kind, line=exc.line, column=exc.column
            ) from None
        except (CompileError, ProfileError) as exc:
            raise RequestError(422, "compile_error", str(exc)) from None

    def library_summary(self) -> dict:
        return {
            "count": len(self.library),
            "counts": self.library.counts(),
            "pairs": [
                {"concept": p.concept, "category": p.category.value, "words": list(p.words)}
                for p in self.library
            ],
        }

    # text-level entry points used by the HTTP layer and tests

    def handle_gesture(self, request) -> tuple[int, str]:
        try:
            return 200, _dumps(self.gesture(request))
        except RequestError as exc:
            return exc.status, exc.body()

    def handle_compile(self, request) -> tuple[int, str]:
        try:
            return 200, self.compile(request)
        except RequestError as exc:
            return exc.status, exc.body()

    def handle_library(self) -> tuple[int, str]:
        return 200, _dumps(self.library_summary())

    def handle_health(self) -> tuple[int, str]:
        return 200, _dumps({"status": "ok", "pairs": len(self.library)})


def make_handler(service: GestureService):
    class Handler(BaseHTTPRequestHandler):
        protocol_version = "HTTP/1.1"

        def _send(self, status: int, body: str):
            data = body.encode("utf-8")
            self.send_response(status)
            self.send_header("Content-Type", "application/json")
            self.send_header("Content-Length", str(len(data)))
            self.end_headers()
            self.wfile.write(data)

        def _read_json(self):
            length = int(self.headers.get("Content-Length") or 0)
            raw = self.rfile.read(length) if length else b""
            try:
                return json.loads(raw or b"null")
            except (json.JSONDecodeError, UnicodeDecodeError) as exc:
                raise RequestError(400, "bad_request", f"malformed JSON: {exc}") from None

        def do_GET(self):
            if self.path == "/v1/library":
                self._send(*service.handle_library())
            elif self.path == "/v1/health":
                self._send(*service.handle_health())
            elif self.path in ("/v1/gesture", "/v1/compile"):
                self._send(405, RequestError(405, "method_not_allowed", "use POST").body())
            else:
                self._send(404, RequestError(404, "not_found", self.path).body())

        def do_POST(self):
            routes = {"/v1/gesture": service.handle_gesture, "/v1/compile": service.handle_compile}
            route = routes.get(self.path)
            if route is None:
                self._send(404, RequestError(404, "not_found", self.path).body())
                return
            try:
                request = self._read_json()
            except RequestError as exc:
                self._send(exc.status, exc.body())
                return
            try:
                self._send(*route(request))
            except Exception:  # never leak a traceback to the client
                log.exception("request failed")
                self._send(500, RequestError(500, "internal", "internal error").body())

        def log_message(self, fmt, *args):
            log.debug("%s - %s", self.address_string(), fmt % args)

    return Handler


class _Server(ThreadingHTTPServer):
    daemon_threads = True
    # socketserver's default backlog of 5 resets bursts of concurrent clients
    request_queue_size = 128


def make_server(service: GestureService, host: str = "127.0.0.1", port: int = 0) -> ThreadingHTTPServer:
    return _Server((host, port), make_handler(service))
