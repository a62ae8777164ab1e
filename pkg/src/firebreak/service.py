"""Turn-based play over HTTP: sessions, turns, undo, hints, health.

One session is one game. A turn applies deploy-then-spread atomically; the
response carries the full board view, so clients never simulate on their
own. Mutations on a session are serialized behind a per-session lock; an
optional append-only turn log per session allows crash recovery by replay.
"""
from __future__ import annotations

import json
import threading
import uuid
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from fastapi import Body, FastAPI, HTTPException
from fastapi.responses import RedirectResponse
from fastapi.staticfiles import StaticFiles

from .expansion import HallHypothesis, hall_lower_bound
from .lattice import (
    BoxLattice,
    LatticeSpec,
    OutsideLattice,
    box_lattice,
    spec_from_json,
    spec_to_json,
)
from .optimize import SearchBudget, build_min_burn_model, extract_strategy, solve
from .simulation import (
    FireState,
    SimulationError,
    deploy,
    is_contained,
    saved_vertices,
    spread,
)

DEFAULT_RADIUS = 6
DEFAULT_BUDGET = 2
DEFAULT_HINT_NODES = 20_000
MAX_HINT_NODES = 2_000_000
HINT_SLOTS = 2

PHASE_AWAITING = "AwaitingPlacements"
PHASE_CONTAINED = "Contained"
PHASE_BOUNDARY = "BoundaryContaminated"


@dataclass
class _Snapshot:
    state: FireState
    burn_time: dict
    defend_time: dict


@dataclass
class GameSession:
    id: str
    spec: LatticeSpec
    f: int
    outbreak: tuple
    state: FireState
    burn_time: dict
    defend_time: dict
    turns: list = field(default_factory=list)
    history: list = field(default_factory=list)
    lock: threading.Lock = field(default_factory=threading.Lock)

    @property
    def phase(self) -> str:
        if self.state.boundary_contaminated:
            return PHASE_BOUNDARY
        if is_contained(self.state):
            return PHASE_CONTAINED
        return PHASE_AWAITING


def _new_session(spec: LatticeSpec, f: int, outbreak) -> GameSession:
    state = FireState.from_outbreak(spec, outbreak)
    return GameSession(
        id=uuid.uuid4().hex,
        spec=spec,
        f=f,
        outbreak=tuple(outbreak),
        state=state,
        burn_time={v: 0 for v in state.burnt},
        defend_time={},
    )


def _session_view(session: GameSession) -> dict:
    state = session.state
    spec = session.spec
    turn = len(session.turns)
    dist = spec.distance
    shells: dict[int, int] = {}
    for v in state.burnt:
        shells[dist(v)] = shells.get(dist(v), 0) + 1
    b_shell = [shells.get(k, 0) for k in range(max(shells) + 1)] if shells else []
    reserve = sum(1 for v in state.defended if dist(v) > turn)
    return {
        "schema": 1,
        "id": session.id,
        "phase": session.phase,
        "turn": turn,
        "f": session.f,
        "spec": spec_to_json(spec),
        "burnt": sorted(
            [list(v) + [session.burn_time[v]] for v in state.burnt]
        ),
        "defended": sorted(
            [list(v) + [session.defend_time[v]] for v in state.defended]
        ),
        "counters": {
            "burnt": len(state.burnt),
            "defended": len(state.defended),
            "saved": len(saved_vertices(state)),
            "b_shell": b_shell,
            "r_reserve": reserve,
        },
    }


def _parse_placements(raw) -> list[tuple[int, ...]]:
    if not isinstance(raw, list):
        raise HTTPException(400, "placements must be a list of coordinates")
    out = []
    for item in raw:
        if not isinstance(item, list) or not all(
            isinstance(c, int) and not isinstance(c, bool) for c in item
        ):
            raise HTTPException(400, f"bad coordinate {item!r}")
        out.append(tuple(item))
    return out


def _hint_for(session: GameSession, budget: int) -> dict:
    state = session.state
    if session.phase != PHASE_AWAITING:
        return {"schema": 1, "placements": [], "note": session.phase}
    spec = session.spec
    if not isinstance(spec.geometry, BoxLattice) or spec.dimension != 2:
        doc: dict = {
            "schema": 1,
            "placements": [],
            "note": "solver hints cover two-dimensional box games only",
        }
        d = spec.dimension
        if session.f < 2 * d - 1 and d == 3 and session.f <= 4:
            hyp = HallHypothesis(4, (5, 6))
            horizon = 2 * getattr(spec.geometry, "radius", 6)
            doc["bound"] = {
                "burnt_in_shell_at": horizon,
                "at_least": hall_lower_bound(hyp, horizon, 0),
                "note": "forced shell growth: no containment within the horizon",
            }
        return doc
    radius = spec.geometry.radius
    horizon = max(1, 2 * radius - state.time)
    model = build_min_burn_model(
        radius,
        horizon,
        session.f,
        burnt0=sorted(state.burnt),
        defended0=sorted(state.defended),
    )
    solution = solve(model, SearchBudget(node_limit=budget))
    try:
        first = extract_strategy(solution, model).placements_at(1)
    except ValueError:
        first = ()
    return {
        "schema": 1,
        "placements": [list(v) for v in first],
        "status": solution.status,
        "objective": solution.objective_value,
        "lower_bound": solution.lower_bound,
        "nodes": solution.nodes,
    }


# -- persistence --------------------------------------------------------------


def _log_path(log_dir: Path, session_id: str) -> Path:
    return log_dir / f"{session_id}.jsonl"


def _append_log(log_dir: Optional[Path], session: GameSession, record: dict) -> None:
    if log_dir is None:
        return
    with _log_path(log_dir, session.id).open("a") as handle:
        handle.write(json.dumps(record, sort_keys=True) + "\n")


def _recover_sessions(log_dir: Path) -> dict[str, GameSession]:
    sessions: dict[str, GameSession] = {}
    for path in sorted(log_dir.glob("*.jsonl")):
        try:
            lines = [json.loads(line) for line in path.read_text().splitlines() if line]
        except (OSError, json.JSONDecodeError):
            continue
        if not lines or lines[0].get("event") != "create":
            continue
        head = lines[0]
        try:
            spec = spec_from_json(head["spec"])
            outbreak = [tuple(v) for v in head["outbreak"]]
            session = _new_session(spec, int(head["f"]), outbreak)
            session.id = path.stem
            for entry in lines[1:]:
                if entry.get("event") == "turn":
                    _apply_turn(session, [tuple(v) for v in entry["placements"]])
                elif entry.get("event") == "undo":
                    _apply_undo(session)
        except (SimulationError, ValueError, KeyError, IndexError):
            continue
        sessions[session.id] = session
    return sessions


# -- state transitions --------------------------------------------------------


def _apply_turn(session: GameSession, placements) -> None:
    if session.phase != PHASE_AWAITING:
        raise HTTPException(409, f"session is {session.phase}, not awaiting placements")
    staged = deploy(session.state, placements, session.f)
    advanced = spread(staged)
    session.history.append(
        _Snapshot(session.state, dict(session.burn_time), dict(session.defend_time))
    )
    turn = len(session.turns) + 1
    for v in placements:
        session.defend_time[v] = turn
    for v in advanced.frontier:
        session.burn_time[v] = advanced.time
    session.state = advanced
    session.turns.append(tuple(placements))


def _apply_undo(session: GameSession) -> None:
    if not session.history:
        raise HTTPException(409, "nothing to undo")
    snap = session.history.pop()
    session.state = snap.state
    session.burn_time = snap.burn_time
    session.defend_time = snap.defend_time
    session.turns.pop()


# -- application --------------------------------------------------------------


def create_app(
    session_log_dir: Optional[str] = None,
    static_dir: Optional[str] = None,
) -> FastAPI:
    app = FastAPI(title="firebreak", version="1")
    log_dir: Optional[Path] = None
    if session_log_dir is not None:
        log_dir = Path(session_log_dir)
        log_dir.mkdir(parents=True, exist_ok=True)
        sessions = _recover_sessions(log_dir)
    else:
        sessions = {}
    registry_lock = threading.Lock()
    hint_slots = threading.BoundedSemaphore(HINT_SLOTS)

    def get_session(session_id: str) -> GameSession:
        with registry_lock:
            session = sessions.get(session_id)
        if session is None:
            raise HTTPException(404, "no such session")
        return session

    @app.get("/healthz")
    def healthz() -> dict:
        with registry_lock:
            count = len(sessions)
        return {"status": "ok", "sessions": count}

    @app.post("/sessions", status_code=201)
    def create_session(payload: dict = Body(default={})) -> dict:
        spec_doc = payload.get("spec")
        try:
            spec = (
                spec_from_json(spec_doc)
                if spec_doc is not None
                else box_lattice(2, DEFAULT_RADIUS)
            )
        except (KeyError, ValueError) as exc:
            raise HTTPException(400, f"bad spec: {exc}") from exc
        f = payload.get("f", DEFAULT_BUDGET)
        if not isinstance(f, int) or isinstance(f, bool) or f < 0:
            raise HTTPException(400, "f must be a nonnegative integer")
        raw_outbreak = payload.get("outbreak")
        outbreak = (
            _parse_placements(raw_outbreak)
            if raw_outbreak is not None
            else [spec.root]
        )
        try:
            session = _new_session(spec, f, outbreak)
        except (SimulationError, ValueError) as exc:
            raise HTTPException(400, str(exc)) from exc
        with registry_lock:
            sessions[session.id] = session
        _append_log(
            log_dir,
            session,
            {
                "event": "create",
                "spec": spec_to_json(spec),
                "f": f,
                "outbreak": [list(v) for v in outbreak],
            },
        )
        return _session_view(session)

    @app.get("/sessions/{session_id}")
    def view_session(session_id: str) -> dict:
        return _session_view(get_session(session_id))

    @app.post("/sessions/{session_id}/turns")
    def submit_turn(session_id: str, payload: dict = Body(...)) -> dict:
        session = get_session(session_id)
        placements = _parse_placements(payload.get("placements", []))
        with session.lock:
            try:
                _apply_turn(session, placements)
            except (SimulationError, OutsideLattice) as exc:
                raise HTTPException(409, str(exc)) from exc
            _append_log(
                log_dir,
                session,
                {"event": "turn", "placements": [list(v) for v in placements]},
            )
            return _session_view(session)

    @app.post("/sessions/{session_id}/undo")
    def undo(session_id: str) -> dict:
        session = get_session(session_id)
        with session.lock:
            _apply_undo(session)
            _append_log(log_dir, session, {"event": "undo"})
            return _session_view(session)

    @app.get("/sessions/{session_id}/hint")
    def hint(session_id: str, budget: int = DEFAULT_HINT_NODES) -> dict:
        session = get_session(session_id)
        if budget < 1 or budget > MAX_HINT_NODES:
            raise HTTPException(400, f"budget must be in 1..{MAX_HINT_NODES}")
        if not hint_slots.acquire(timeout=10):
            raise HTTPException(503, "hint capacity exhausted, retry shortly")
        try:
            with session.lock:
                return _hint_for(session, budget)
        finally:
            hint_slots.release()

    if static_dir is not None and Path(static_dir).is_dir():
        app.mount("/ui", StaticFiles(directory=static_dir, html=True), name="ui")

        @app.get("/")
        def index() -> RedirectResponse:
            return RedirectResponse("/ui/")

    return app
