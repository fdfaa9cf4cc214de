"""HTTP session service for interactive sequential diagnosis.

Endpoints: POST /sessions, GET /sessions/{id}, POST /sessions/{id}/answer,
GET /sessions/{id}/stats, DELETE /sessions/{id}.  Sessions live in memory,
expire after an idle timeout and can optionally snapshot their engine state to
disk after every step.  Requests for the same session are serialized by a
per-session lock; distinct sessions proceed concurrently.

A session normally poses heuristically selected queries; passing an optional
``script`` (list of sentences) at creation replays that fixed measurement
sequence instead, with only the outcomes supplied through the answer endpoint.
"""

from __future__ import annotations

import json
import threading
import time
import uuid
from pathlib import Path

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse, Response

from .dpi import DpiFormatError, load_dpi
from .dynamichs import state_to_json
from .formula import FormulaError, parse_formula
from .query import HEURISTICS
from .session import (AWAITING, ENGINES, FaultFreeDpiError, InteractiveSession, SessionConfig,
                      SessionError, UndiagnosableDpiError)

DEFAULT_TTL_SECONDS = 3600.0


class _Held:
    """A stored session plus its lock and idle clock."""

    def __init__(self, session: InteractiveSession):
        self.session = session
        self.lock = threading.Lock()
        self.last_used = time.monotonic()

    def touch(self) -> None:
        self.last_used = time.monotonic()


def _error(status_code: int, message: str) -> JSONResponse:
    return JSONResponse({"error": message}, status_code=status_code)


def _state_doc(session_id: str, session: InteractiveSession) -> dict:
    return {
        "sessionId": session_id,
        "status": session.status,
        "iteration": len(session.records),
        "leadingDiagnoses": session.leading_ids(),
        "weights": session.weights(),
        "query": session.current_query.text if session.current_query else None,
        "final": session.final,
    }


def create_app(static_dir: str | None = None, ttl_seconds: float = DEFAULT_TTL_SECONDS,
               snapshot_dir: str | None = None) -> FastAPI:
    app = FastAPI(title="mbdiag session service")
    sessions: dict[str, _Held] = {}
    store_lock = threading.Lock()

    def purge() -> None:
        cutoff = time.monotonic() - ttl_seconds
        with store_lock:
            for sid in [s for s, held in sessions.items() if held.last_used < cutoff]:
                del sessions[sid]

    def get_held(session_id: str) -> _Held | None:
        purge()
        with store_lock:
            held = sessions.get(session_id)
            if held is not None:
                held.touch()
            return held

    def snapshot(session_id: str, session: InteractiveSession) -> None:
        if snapshot_dir is None or session.config.engine != "dynamichs":
            return
        directory = Path(snapshot_dir)
        directory.mkdir(parents=True, exist_ok=True)
        doc = {"state": state_to_json(session.state, session.dpi0),
               "report": session.result().to_json()}
        (directory / f"{session_id}.json").write_text(json.dumps(doc))

    @app.post("/sessions")
    async def create_session(request: Request):
        purge()
        try:
            body = json.loads(await request.body())
        except json.JSONDecodeError as exc:
            return _error(400, f"invalid JSON body: {exc}")
        if not isinstance(body, dict) or "dpi" not in body:
            return _error(400, "body must be an object with a 'dpi' field")
        try:
            dpi = load_dpi(body["dpi"])
        except DpiFormatError as exc:
            return _error(400, str(exc))
        ld = body.get("ld", 5)
        engine = body.get("engine", "dynamichs")
        heuristic = body.get("heuristic", "ent")
        if not isinstance(ld, int) or isinstance(ld, bool) or ld < 2:
            return _error(400, "'ld' must be an integer >= 2")
        if engine not in ENGINES:
            return _error(400, f"'engine' must be one of {list(ENGINES)}")
        if heuristic not in HEURISTICS:
            return _error(400, f"'heuristic' must be one of {list(HEURISTICS)}")
        script = None
        if body.get("script") is not None:
            raw = body["script"]
            if not isinstance(raw, list) or not all(isinstance(s, str) for s in raw):
                return _error(400, "'script' must be a list of sentence strings")
            try:
                script = [parse_formula(s) for s in raw]
            except FormulaError as exc:
                return _error(400, f"invalid script sentence: {exc}")
        config = SessionConfig(dpi=dpi, ld=ld, engine=engine, heuristic=heuristic)
        try:
            session = InteractiveSession(config, script=script)
        except (FaultFreeDpiError, UndiagnosableDpiError) as exc:
            return _error(422, str(exc))
        except SessionError as exc:
            return _error(422, str(exc))
        session_id = uuid.uuid4().hex
        with store_lock:
            sessions[session_id] = _Held(session)
        snapshot(session_id, session)
        return JSONResponse(_state_doc(session_id, session), status_code=201)

    @app.get("/sessions/{session_id}")
    def get_session(session_id: str):
        held = get_held(session_id)
        if held is None:
            return _error(404, "unknown session")
        with held.lock:
            return _state_doc(session_id, held.session)

    @app.post("/sessions/{session_id}/answer")
    async def answer(session_id: str, request: Request):
        held = get_held(session_id)
        if held is None:
            return _error(404, "unknown session")
        try:
            body = json.loads(await request.body())
        except json.JSONDecodeError as exc:
            return _error(400, f"invalid JSON body: {exc}")
        outcome = body.get("outcome") if isinstance(body, dict) else None
        if outcome not in ("positive", "negative"):
            return _error(400, "'outcome' must be 'positive' or 'negative'")
        with held.lock:
            session = held.session
            if session.status != AWAITING:
                return _error(409, f"session is not awaiting an answer "
                                   f"(status {session.status})")
            try:
                session.answer(outcome == "positive")
            except SessionError as exc:
                return _error(409, str(exc))
            snapshot(session_id, session)
            return _state_doc(session_id, session)

    @app.get("/sessions/{session_id}/stats")
    def get_stats(session_id: str):
        held = get_held(session_id)
        if held is None:
            return _error(404, "unknown session")
        with held.lock:
            doc = held.session.result().to_json()
            doc["measurements"] = sum(1 for r in held.session.records if r.outcome is not None)
            return doc

    @app.delete("/sessions/{session_id}")
    def delete_session(session_id: str):
        with store_lock:
            if session_id not in sessions:
                return _error(404, "unknown session")
            del sessions[session_id]
        return Response(status_code=204)

    if static_dir is not None:
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=static_dir, html=True), name="static")

    return app
