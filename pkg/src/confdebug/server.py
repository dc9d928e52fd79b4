"""Read-only HTTP service exposing workspace analyses to the browser UI.

All analyses are computed on an immutable snapshot of the workspace loaded
at startup; ``POST /api/reload`` swaps in a fresh snapshot atomically and
in-flight requests finish on the old one. Report payloads are produced by
the same :class:`~confdebug.workspace.Session` the CLI uses, so responses
are byte-identical to ``confdebug <command> --format json`` output.
"""
from __future__ import annotations

import threading
from collections import OrderedDict

from fastapi import FastAPI, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse, Response

from . import serialize
from .errors import (
    MissingPrerequisite, StaleStore, UnknownConfig, WorkbenchError,
)
from .workspace import Session, Workspace

DEFAULT_PORT = 7788
REPORT_CACHE_SIZE = 64


class _ApiError(Exception):
    def __init__(self, status: int, message: str):
        self.status = status
        self.message = message


class Snapshot:
    """One immutable load of the workspace plus a bounded report cache."""

    def __init__(self, workspace_path, generation: int):
        self.workspace = Workspace.load(workspace_path)
        self.session = Session(self.workspace)
        self.generation = generation
        self.chops = {}  # chop_id -> highlights payload for /api/source
        self._cache = OrderedDict()  # (kind, args) -> serialized payload
        self._lock = threading.Lock()

    def cached(self, kind: str, args: tuple, compute) -> str:
        key = (kind, args)
        with self._lock:
            if key in self._cache:
                self._cache.move_to_end(key)
                return self._cache[key]
        payload = compute()
        with self._lock:
            self._cache[key] = payload
            while len(self._cache) > REPORT_CACHE_SIZE:
                self._cache.popitem(last=False)
        return payload

    def options_payload(self) -> str:
        return serialize.dumps([
            {"name": o.name, "values": list(o.values), "default": o.default}
            for o in self.session.program.options
        ])

    def configs_payload(self) -> str:
        ws = self.workspace
        return serialize.dumps({
            "generation": self.generation,
            "base": ws.base,
            "configurations": {
                name: {k: cfg[k] for k in sorted(cfg)}
                for name, cfg in sorted(ws.configurations.items())
            },
        })

    def influencing_options(self, from_name, to_name) -> str:
        return self.cached(
            "influencing-options", (from_name, to_name),
            lambda: serialize.dumps(
                self.session.influencing_options(from_name, to_name)))

    def option_hotspots(self, from_name, to_name, min_delta) -> str:
        return self.cached(
            "option-hotspots", (from_name, to_name, min_delta),
            lambda: serialize.dumps(
                self.session.option_hotspots(from_name, to_name,
                                             min_delta=min_delta)))

    def profile_diff(self, from_name, to_name) -> str:
        return self.cached(
            "profile-diff", (from_name, to_name),
            lambda: serialize.dumps(
                self.session.profile_diff(from_name, to_name)))

    def cause_effect(self, from_name, to_name, options, hotspots) -> str:
        def compute():
            obj = self.session.cause_effect(
                from_name, to_name,
                options=list(options) if options is not None else None,
                hotspots=list(hotspots) if hotspots is not None else None)
            self.chops[obj["chop_id"]] = obj["highlights"]
            return serialize.dumps(obj)

        args = (from_name, to_name,
                tuple(options) if options is not None else None,
                tuple(hotspots) if hotspots is not None else None)
        return self.cached("cause-effect", args, compute)

    def source_payload(self, file: str, chop_id: str) -> str:
        text = self.session.source_text(file)
        if chop_id not in self.chops:
            raise _ApiError(404, f"unknown chop id '{chop_id}'")
        highlights = self.chops[chop_id].get(file, [])
        return serialize.dumps({
            "file": file,
            "text": text,
            "highlights": highlights,
        })


def _json(payload: str, status: int = 200) -> Response:
    return Response(content=payload, status_code=status,
                    media_type="application/json")


def _require(body: dict, *fields):
    if not isinstance(body, dict):
        raise _ApiError(400, "request body must be a JSON object")
    for field in fields:
        if field not in body or not isinstance(body[field], str):
            raise _ApiError(400, f"missing or malformed field '{field}'")


def create_app(workspace_path) -> FastAPI:
    app = FastAPI(title="confdebug", docs_url=None, redoc_url=None)
    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["*"],
        allow_headers=["*"])

    state = {"snapshot": Snapshot(workspace_path, generation=1)}
    reload_lock = threading.Lock()

    def snapshot() -> Snapshot:
        return state["snapshot"]

    @app.exception_handler(_ApiError)
    async def api_error(_request, exc: _ApiError):
        return JSONResponse(status_code=exc.status,
                            content={"error": exc.message})

    @app.exception_handler(WorkbenchError)
    async def workbench_error(_request, exc: WorkbenchError):
        if isinstance(exc, (UnknownConfig, MissingPrerequisite)):
            status = 404
        elif isinstance(exc, StaleStore):
            status = 409
        else:
            status = 400
        return JSONResponse(status_code=status, content={"error": str(exc)})

    async def body_of(request: Request) -> dict:
        try:
            return await request.json()
        except Exception:
            raise _ApiError(400, "request body is not valid JSON")

    @app.get("/api/options")
    async def options():
        return _json(snapshot().options_payload())

    @app.get("/api/configs")
    async def configs():
        return _json(snapshot().configs_payload())

    @app.post("/api/influencing-options")
    async def influencing_options(request: Request):
        body = await body_of(request)
        _require(body, "from", "to")
        return _json(snapshot().influencing_options(body["from"], body["to"]))

    @app.post("/api/option-hotspots")
    async def option_hotspots(request: Request):
        body = await body_of(request)
        _require(body, "from", "to")
        min_delta = body.get("min_delta", 0.0)
        if not isinstance(min_delta, (int, float)) or min_delta < 0:
            raise _ApiError(400, "min_delta must be a non-negative number")
        return _json(snapshot().option_hotspots(body["from"], body["to"],
                                                float(min_delta)))

    @app.post("/api/profile-diff")
    async def profile_diff(request: Request):
        body = await body_of(request)
        _require(body, "from", "to")
        return _json(snapshot().profile_diff(body["from"], body["to"]))

    @app.post("/api/cause-effect")
    async def cause_effect(request: Request):
        body = await body_of(request)
        _require(body, "from", "to")
        for field in ("options", "hotspots"):
            value = body.get(field)
            if value is not None and (
                    not isinstance(value, list)
                    or not all(isinstance(x, str) for x in value)):
                raise _ApiError(400, f"'{field}' must be a list of names")
        return _json(snapshot().cause_effect(
            body["from"], body["to"], body.get("options"),
            body.get("hotspots")))

    @app.get("/api/source")
    async def source(file: str = "", chop_id: str = ""):
        if not file:
            raise _ApiError(400, "missing 'file' query parameter")
        return _json(snapshot().source_payload(file, chop_id))

    @app.post("/api/reload")
    async def reload():
        with reload_lock:
            old = state["snapshot"]
            try:
                state["snapshot"] = Snapshot(workspace_path,
                                             old.generation + 1)
            except WorkbenchError as exc:
                # keep serving the old snapshot
                return JSONResponse(status_code=409,
                                    content={"error": str(exc)})
        return _json(serialize.dumps(
            {"generation": state["snapshot"].generation}))

    return app
