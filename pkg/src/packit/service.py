"""HTTP JSON service: sessions, verdicts, solving and hints.

The service adds no game logic of its own; every mutation is the
corresponding core-rules call on the stored state, and every response
is derived from states that replay cleanly by construction.

Sessions persist as append-only transcript logs (one file per session,
``# undo`` markers included) and are replayed on startup, so restarts
lose nothing. Mutations within one session are serialized by a
per-session lock; sessions never block each other, and hint/solve work
runs outside any lock on a snapshot of the state.

Error mapping: malformed bodies 400, unknown sessions 404, rejected
moves 409 (code says why: overlap, area, bounds or turn), solver
process trouble 503. All error bodies are {code, message, detail}.
"""

from __future__ import annotations

import secrets
import threading
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from fastapi import FastAPI
from fastapi.encoders import jsonable_encoder
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel

from . import __version__
from .arithmetic import verdict
from .config import Config, load_config
from .core import (
    GameState,
    GridDims,
    PREFILLED,
    Placement,
    apply_placement,
    legal_placements,
    new_game,
    placement_to_dict,
    two_player_status,
)
from .errors import (
    EngineError,
    FormatError,
    InvalidDimsError,
    InvalidInputError,
    SessionError,
    TurnError,
)
from .search import PERFECT, completion_query, solve_perfect

SCHEMA_VERSION = 1
MODES = ("solitaire", "two-player")

_STATUS_BY_CODE = {
    "overlap": 409,
    "area": 409,
    "bounds": 409,
    "turn": 409,
    "session": 404,
    "solver": 503,
}

_FRONTEND_DIST = Path(__file__).resolve().parents[2] / "frontend" / "dist"


@dataclass
class Session:
    """One stored game plus its on-disk log."""

    id: str
    mode: str
    state: GameState
    log_path: Path
    created: float
    updated: float
    lock: threading.Lock = field(default_factory=threading.Lock)


class SessionStore:
    """Append-only persisted sessions, replayed from disk on startup."""

    def __init__(self, root: Path):
        self._root = Path(root)
        self._root.mkdir(parents=True, exist_ok=True)
        self._lock = threading.Lock()
        self._sessions: dict[str, Session] = {}
        for log_path in sorted(self._root.glob("*.log")):
            session = self._replay(log_path)
            if session is not None:
                self._sessions[session.id] = session

    def _replay(self, log_path: Path) -> Optional[Session]:
        lines = log_path.read_text(encoding="utf-8").splitlines()
        if not lines:
            return None
        header = lines[0].split()
        # header: "# packit session <schema> <rows> <cols> <mode> <created>"
        if len(header) != 8 or header[:3] != ["#", "packit", "session"]:
            return None
        try:
            rows, cols = int(header[4]), int(header[5])
            created = float(header[7])
        except ValueError:
            return None
        mode = header[6]
        if mode not in MODES:
            return None
        state = new_game(GridDims(rows, cols))
        history = [state]
        for raw in lines[1:]:
            line = raw.strip()
            if not line:
                continue
            if line == "# undo":
                if len(history) > 1:
                    history.pop()
                continue
            parts = line.split()
            if len(parts) != 5:
                raise FormatError(f"{log_path.name}: bad log line {raw!r}")
            move = Placement(*(int(p) for p in parts))
            history.append(apply_placement(history[-1], move))
        return Session(
            id=log_path.stem,
            mode=mode,
            state=history[-1],
            log_path=log_path,
            created=created,
            updated=log_path.stat().st_mtime,
        )

    def create(self, dims: GridDims, mode: str) -> Session:
        state = new_game(dims)
        now = time.time()
        with self._lock:
            while True:
                token = secrets.token_hex(8)
                if token not in self._sessions:
                    break
            log_path = self._root / f"{token}.log"
            log_path.write_text(
                f"# packit session {SCHEMA_VERSION} {dims.rows} {dims.cols} {mode} {now}\n",
                encoding="utf-8",
            )
            session = Session(
                id=token,
                mode=mode,
                state=state,
                log_path=log_path,
                created=now,
                updated=now,
            )
            self._sessions[token] = session
            return session

    def get(self, session_id: str) -> Session:
        with self._lock:
            session = self._sessions.get(session_id)
        if session is None:
            raise SessionError(f"no session {session_id!r}")
        return session

    def apply_move(self, session: Session, move: Placement) -> GameState:
        with session.lock:
            session.state = apply_placement(session.state, move)
            with open(session.log_path, "a", encoding="utf-8") as handle:
                handle.write(f"{move.turn} {move.h} {move.v} {move.x} {move.y}\n")
            session.updated = time.time()
            return session.state

    def undo(self, session: Session) -> GameState:
        with session.lock:
            if not session.state.transcript:
                raise TurnError("nothing to undo")
            state = new_game(session.state.dims)
            for move in session.state.transcript[:-1]:
                state = apply_placement(state, move)
            session.state = state
            with open(session.log_path, "a", encoding="utf-8") as handle:
                handle.write("# undo\n")
            session.updated = time.time()
            return session.state


class CreateGameBody(BaseModel):
    n: Optional[int] = None
    rows: Optional[int] = None
    cols: Optional[int] = None
    mode: str = "solitaire"


class MoveBody(BaseModel):
    t: Optional[int] = None
    turn: Optional[int] = None
    h: int
    v: int
    x: int
    y: int


class HintBody(BaseModel):
    budget_s: Optional[float] = None
    full: bool = False


class SolveBody(BaseModel):
    n: Optional[int] = None
    rows: Optional[int] = None
    cols: Optional[int] = None
    budget_s: Optional[float] = None
    retries: int = 8


def _dims_from(body) -> GridDims:
    if body.n is not None:
        if body.rows is not None or body.cols is not None:
            raise InvalidInputError("give either n or rows+cols, not both")
        return GridDims(body.n, body.n)
    if body.rows is not None and body.cols is not None:
        return GridDims(body.rows, body.cols)
    raise InvalidInputError("body needs n (square) or rows and cols")


def _state_payload(session: Session) -> dict:
    state = session.state
    dims = state.dims
    cells = [
        [state.occupied.get((r, c)) for c in range(dims.cols)]
        for r in range(dims.rows)
    ]
    payload = {
        "schema_version": SCHEMA_VERSION,
        "id": session.id,
        "mode": session.mode,
        "rows": dims.rows,
        "cols": dims.cols,
        "turn": state.turn,
        "cells": cells,
        "prefilled_tag": PREFILLED,
        "transcript": [placement_to_dict(p) for p in state.transcript],
        "covered": state.covered,
        "full": state.full,
        "perfect": state.full,
        "created": session.created,
        "updated": session.updated,
    }
    status = two_player_status(state)
    payload["movable"] = not status.finished
    if session.mode == "two-player":
        payload["mover"] = status.mover
        payload["finished"] = status.finished
        payload["loser"] = status.loser
    return payload


def _verdict_payload(m: int, n: int) -> dict:
    from .arithmetic import profile

    word = verdict(m, n)
    prof = profile(m, n)
    return {
        "kind": word.kind,
        "witness": word.witness,
        "rows": prof.dims.rows,
        "cols": prof.dims.cols,
        "area": prof.dims.area,
        "rect_count": prof.rect_count,
        "gap": prof.gap,
        "blocked_primes": list(prof.blocked_primes),
        "successor_prime": prof.successor_prime,
    }


def create_app(config: Optional[Config] = None) -> FastAPI:
    cfg = config if config is not None else load_config()
    store = SessionStore(cfg.session_dir)
    app = FastAPI(title="packit", version=__version__)
    solver_command = None
    if cfg.solver_path:
        import shlex

        solver_command = shlex.split(cfg.solver_path)

    @app.exception_handler(EngineError)
    async def engine_error(request, exc: EngineError):
        status = _STATUS_BY_CODE.get(exc.code, 400)
        return JSONResponse(status_code=status, content=jsonable_encoder(exc.to_payload()))

    @app.exception_handler(RequestValidationError)
    async def malformed(request, exc: RequestValidationError):
        return JSONResponse(
            status_code=400,
            content={
                "code": "invalid-input",
                "message": "malformed request body",
                "detail": jsonable_encoder(exc.errors()),
            },
        )

    @app.post("/games", status_code=201)
    def create_game(body: CreateGameBody):
        if body.mode not in MODES:
            raise InvalidInputError(f"mode must be one of {MODES}, got {body.mode!r}")
        dims = _dims_from(body)
        session = store.create(dims, body.mode)
        return {"id": session.id, "state": _state_payload(session)}

    @app.get("/games/{session_id}")
    def get_game(session_id: str):
        return _state_payload(store.get(session_id))

    @app.get("/games/{session_id}/legal")
    def get_legal(session_id: str):
        session = store.get(session_id)
        state = session.state
        return {
            "turn": state.turn,
            "placements": [placement_to_dict(p) for p in legal_placements(state)],
        }

    @app.post("/games/{session_id}/moves")
    def post_move(session_id: str, body: MoveBody):
        session = store.get(session_id)
        turn = body.turn if body.turn is not None else body.t
        if turn is None:
            turn = session.state.turn
        move = Placement(turn=turn, h=body.h, v=body.v, x=body.x, y=body.y)
        store.apply_move(session, move)
        return _state_payload(session)

    @app.post("/games/{session_id}/undo")
    def post_undo(session_id: str):
        session = store.get(session_id)
        store.undo(session)
        return _state_payload(session)

    @app.post("/games/{session_id}/hint")
    def post_hint(session_id: str, body: HintBody = HintBody()):
        session = store.get(session_id)
        with session.lock:
            state = session.state
        budget = body.budget_s if body.budget_s is not None else cfg.default_budget
        if budget <= 0:
            raise InvalidInputError(f"budget_s must be positive, got {budget}")
        answer = completion_query(
            state, time_budget=budget, solver_command=solver_command
        )
        suggestion = None
        if answer.witness:
            suggestion = placement_to_dict(answer.witness[0])
        payload = {
            "answer": answer.answer,
            "detail": answer.detail,
            "suggestion": suggestion,
        }
        if body.full and answer.witness is not None:
            payload["witness"] = [placement_to_dict(p) for p in answer.witness]
        return payload

    @app.get("/verdict/{m}/{n}")
    def get_verdict(m: int, n: int):
        if m < 1 or n < 1:
            raise InvalidDimsError(f"grid dimensions must be positive, got {m}x{n}")
        return _verdict_payload(m, n)

    @app.post("/solve")
    def post_solve(body: SolveBody):
        dims = _dims_from(body)
        budget = body.budget_s if body.budget_s is not None else cfg.default_budget
        result = solve_perfect(
            dims,
            time_budget=budget,
            selection_retries=body.retries,
            solver_command=solver_command,
        )
        return {
            "status": result.status,
            "seconds": result.seconds,
            "detail": result.detail,
            "transcript": [placement_to_dict(p) for p in result.transcript or ()],
            "perfect": result.status == PERFECT,
            "solver_stats": result.solver_stats,
        }

    if _FRONTEND_DIST.is_dir():
        app.mount("/", StaticFiles(directory=_FRONTEND_DIST, html=True), name="ui")
    else:

        @app.get("/")
        def index():
            return {
                "service": "packit",
                "version": __version__,
                "endpoints": [
                    "POST /games",
                    "GET /games/{id}",
                    "GET /games/{id}/legal",
                    "POST /games/{id}/moves",
                    "POST /games/{id}/undo",
                    "POST /games/{id}/hint",
                    "GET /verdict/{m}/{n}",
                    "POST /solve",
                ],
            }

    return app
