"""HTTP/JSON API over datasets, sessions, views, history, and SVG export.

Sessions are in-memory with idle eviction; datasets are shared immutably
across sessions, and each session's mutations are serialized by its own
lock. View responses are emitted as canonical JSON bytes so identical
states yield byte-identical bodies.
"""

from __future__ import annotations

import json
import threading
import time
import uuid
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Mapping

from fastapi import FastAPI, Request, Response
from fastapi.exceptions import RequestValidationError
from fastapi.staticfiles import StaticFiles

from . import history
from .errors import DegenerateSizeError, InvalidConfigError
from .model import Dataset, ViewConfig, default_config, merge_config_patch
from .render.model import build_render_model
from .render.svg import render_svg
from .transform import apply_view

SESSION_TTL_SECONDS = 3600.0
EXPORT_DEFAULT_WIDTH = 1200
EXPORT_DEFAULT_HEIGHT = 900


@dataclass
class Session:
    id: str
    dataset_name: str
    stack: history.HistoryStack
    created_at: float
    last_access: float
    lock: threading.Lock = field(default_factory=threading.Lock)


class _ApiError(Exception):
    def __init__(self, status: int, error: str, detail: Any):
        super().__init__(f"{error}: {detail}")
        self.status = status
        self.error = error
        self.detail = detail


def _json_bytes(payload: Mapping[str, Any]) -> bytes:
    return json.dumps(payload, separators=(",", ":")).encode("utf-8")


def _json_response(payload: Mapping[str, Any], status: int = 200) -> Response:
    return Response(
        content=_json_bytes(payload),
        status_code=status,
        media_type="application/json",
    )


class SessionStore:
    """In-memory session registry with lazy idle eviction."""

    def __init__(self, ttl_seconds: float, clock=time.monotonic):
        self._ttl = ttl_seconds
        self._clock = clock
        self._sessions: dict[str, Session] = {}
        self._lock = threading.Lock()

    def _evict_idle(self, now: float) -> None:
        expired = [
            sid for sid, s in self._sessions.items()
            if now - s.last_access > self._ttl
        ]
        for sid in expired:
            del self._sessions[sid]

    def create(self, dataset_name: str, config: ViewConfig) -> Session:
        now = self._clock()
        session = Session(
            id=uuid.uuid4().hex,
            dataset_name=dataset_name,
            stack=history.new_stack(config),
            created_at=now,
            last_access=now,
        )
        with self._lock:
            self._evict_idle(now)
            self._sessions[session.id] = session
        return session

    def get(self, session_id: str) -> Session:
        now = self._clock()
        with self._lock:
            self._evict_idle(now)
            session = self._sessions.get(session_id)
            if session is None:
                raise _ApiError(
                    404, "unknown_session", f"no session {session_id!r}"
                )
            session.last_access = now
            return session


def create_app(
    datasets: Mapping[str, Dataset],
    ui_dir: str | Path | None = None,
    session_ttl: float = SESSION_TTL_SECONDS,
) -> FastAPI:
    """Build the API over an immutable dataset catalog."""
    app = FastAPI(title="cellpop", docs_url=None, redoc_url=None)
    store = SessionStore(session_ttl)
    catalog = dict(datasets)

    @app.exception_handler(_ApiError)
    async def _api_error(_request: Request, exc: _ApiError) -> Response:
        return _json_response(
            {"error": exc.error, "detail": exc.detail}, status=exc.status
        )

    @app.exception_handler(RequestValidationError)
    async def _bad_request(_request: Request, exc: RequestValidationError) -> Response:
        return _json_response(
            {"error": "validation_error", "detail": str(exc)}, status=422
        )

    def _dataset_for(session: Session) -> Dataset:
        return catalog[session.dataset_name]

    def _view_payload(session: Session) -> dict[str, Any]:
        dataset = _dataset_for(session)
        view = apply_view(dataset, session.stack.present)
        return build_render_model(view, session.stack.present).to_dict()

    @app.get("/health")
    async def health() -> Response:
        return _json_response({"status": "ok"})

    @app.get("/datasets")
    async def list_datasets() -> Response:
        rows = [
            {
                "name": name,
                "samples": len(catalog[name].counts.row_ids),
                "cell_types": len(catalog[name].counts.col_ids),
            }
            for name in sorted(catalog)
        ]
        return _json_response({"datasets": rows})

    @app.post("/sessions")
    async def create_session(request: Request) -> Response:
        body = await _json_body(request)
        name = body.get("dataset")
        if name not in catalog:
            raise _ApiError(404, "unknown_dataset", f"no dataset {name!r}")
        config = default_config(catalog[name])
        session = store.create(name, config)
        return _json_response({
            "session_id": session.id,
            "dataset": name,
            "config": config.to_dict(),
        })

    @app.get("/sessions/{session_id}/config")
    async def get_config(session_id: str) -> Response:
        session = store.get(session_id)
        return _json_response(session.stack.present.to_dict())

    @app.post("/sessions/{session_id}/config")
    async def patch_config(session_id: str, request: Request) -> Response:
        session = store.get(session_id)
        patch = await _json_body(request)
        dataset = _dataset_for(session)
        with session.lock:
            try:
                merged = merge_config_patch(dataset, session.stack.present, patch)
            except InvalidConfigError as exc:
                raise _ApiError(
                    422, "invalid_config",
                    [v.to_dict() for v in exc.violations],
                ) from exc
            session.stack = history.push(session.stack, merged)
            payload = _view_payload(session)
        return _json_response(payload)

    @app.get("/sessions/{session_id}/view")
    async def get_view(session_id: str) -> Response:
        session = store.get(session_id)
        return _json_response(_view_payload(session))

    @app.post("/sessions/{session_id}/undo")
    async def undo(session_id: str) -> Response:
        session = store.get(session_id)
        with session.lock:
            before = session.stack
            session.stack = history.undo(before)
            payload = {"noop": session.stack is before}
            payload.update(_view_payload(session))
        return _json_response(payload)

    @app.post("/sessions/{session_id}/redo")
    async def redo(session_id: str) -> Response:
        session = store.get(session_id)
        with session.lock:
            before = session.stack
            session.stack = history.redo(before)
            payload = {"noop": session.stack is before}
            payload.update(_view_payload(session))
        return _json_response(payload)

    @app.get("/sessions/{session_id}/export.svg")
    async def export_svg(
        session_id: str,
        width: int = EXPORT_DEFAULT_WIDTH,
        height: int = EXPORT_DEFAULT_HEIGHT,
    ) -> Response:
        session = store.get(session_id)
        dataset = _dataset_for(session)
        view = apply_view(dataset, session.stack.present)
        model = build_render_model(view, session.stack.present)
        try:
            body = render_svg(model, width, height)
        except DegenerateSizeError as exc:
            raise _ApiError(400, "degenerate_size", str(exc)) from exc
        return Response(content=body, media_type="image/svg+xml")

    if ui_dir is not None and Path(ui_dir).is_dir():
        app.mount("/ui", StaticFiles(directory=str(ui_dir), html=True), name="ui")

    return app


async def _json_body(request: Request) -> dict:
    try:
        body = await request.json()
    except Exception as exc:
        raise _ApiError(400, "bad_json", f"request body is not JSON: {exc}") from exc
    if not isinstance(body, dict):
        raise _ApiError(400, "bad_json", "request body must be a JSON object")
    return body
