"""Live trial hosting over a websocket, plus health and static routes.

Protocol (one compact JSON object per websocket frame):

    client -> server
        {"type": "hello", "participant": str, "seed"?: int}
        {"type": "start_trial", "mode": "vb"|"vb-staged"|"vp", "note"?: str}
        {"type": "cursor", "x": float, "y": float, "t_client": float}
        {"type": "abort"}
    server -> client
        {"type": "hello_ok", "session_id": str}
        {"type": "trial_started", "trial_id": int, "mode": str,
         "arena": [w, h], "completion_radius": float, "max_duration": float}
        {"type": "feedback", "m1": f, "m2": f, "m3": f, "m4": f, "stage": s}
        {"type": "voice", "word": str, "freq_hz": float}
        {"type": "trial_ended", "outcome": {...}, "endpoint": [x, y]}
        {"type": "error", "code": str, "msg": str}

The endpoint is sampled server-side from the session's seeded generator
(same derivation as simulated sessions) and never leaves the server before
trial_ended: the participant plays blind. ``--reveal`` adds the endpoint to
trial_started for experimenter debugging and is refused when records are
being persisted.

Outcomes use server receipt time so they stay comparable across clients;
t_client is logged for latency analysis only. Vibration feedback is rate
limited (default 20 messages/s); intermediate cursor messages still update
the position and the trace. Each completed trial is appended to the
session's JSONL file and flushed immediately, in the same schema as
simulated records plus participant and live fields.
"""

from __future__ import annotations

import asyncio
import json
import logging
import math
import random
import time
from dataclasses import dataclass, field, replace
from pathlib import Path

from aiohttp import WSMsgType, web

from .encoding import (
    DisplacementUCS,
    GuidanceStage,
    encode_vibro,
    encode_vibro_staged,
    encode_voice,
)
from .records import record_from_run, record_to_line
from .trials import (
    FeedbackMode,
    TrialConfig,
    TrialOutcome,
    TrialTrace,
    derive_trial_seed,
    sample_endpoint,
)

logger = logging.getLogger(__name__)

SERVICE_KEY = web.AppKey("service", object)

_WIRE_MODES = {"vb": FeedbackMode.VB, "vb-staged": FeedbackMode.VB_STAGED, "vp": FeedbackMode.VP}


@dataclass
class ServiceConfig:
    host: str = "127.0.0.1"
    port: int = 8787
    out_dir: Path | None = Path("runs")
    seed: int = 0
    trial: TrialConfig = field(default_factory=TrialConfig)
    feedback_hz: float = 20.0
    reveal: bool = False
    frontend_dist: Path | None = None


class _ActiveTrial:
    def __init__(self, trial_id: int, cfg: TrialConfig, endpoint, note):
        self.trial_id = trial_id
        self.cfg = cfg
        self.endpoint = endpoint
        self.note = note
        self.started = time.monotonic()
        self.position = cfg.resolved_start()
        self.samples: list[tuple] = [(0.0, cfg.resolved_start(), None,
                                      GuidanceStage.HORIZONTAL_ALIGN
                                      if cfg.feedback_mode is FeedbackMode.VB_STAGED else None)]
        self.stage = (GuidanceStage.HORIZONTAL_ALIGN
                      if cfg.feedback_mode is FeedbackMode.VB_STAGED else None)
        self.last_cue_t: float | None = None
        self.last_emit_t: float = -math.inf
        self.watchdog: asyncio.Task | None = None

    def elapsed(self) -> float:
        return time.monotonic() - self.started


class _Session:
    def __init__(self, session_id: str, participant: str, seed: int):
        self.session_id = session_id
        self.participant = participant
        self.seed = seed
        self.trial_counter = 0
        self.active: _ActiveTrial | None = None
        self.warning_count = 0
        self.log_fh = None
        self.lock = asyncio.Lock()


class SessionService:
    """Owns all live sessions and their persistence."""

    def __init__(self, cfg: ServiceConfig):
        self.cfg = cfg
        self.session_counter = 0
        self.open_logs: list = []
        if cfg.out_dir is not None:
            cfg.out_dir.mkdir(parents=True, exist_ok=True)

    # -- lifecycle ------------------------------------------------------

    def create_session(self, participant: str, seed) -> _Session:
        self.session_counter += 1
        session_id = f"s{self.session_counter:04d}"
        session_seed = seed if seed is not None else derive_trial_seed(self.cfg.seed, self.session_counter)
        session = _Session(session_id, participant, session_seed)
        if self.cfg.out_dir is not None:
            path = self.cfg.out_dir / f"live-{session_id}.jsonl"
            session.log_fh = open(path, "a", encoding="utf-8", newline="\n")
            self.open_logs.append(session.log_fh)
        return session

    def close_session(self, session: _Session) -> None:
        if session.log_fh is not None:
            session.log_fh.flush()
            session.log_fh.close()
            if session.log_fh in self.open_logs:
                self.open_logs.remove(session.log_fh)
            session.log_fh = None

    def flush_all(self) -> None:
        for fh in self.open_logs:
            try:
                fh.flush()
            except ValueError:
                pass

    # -- trial handling --------------------------------------------------

    def start_trial(self, session: _Session, mode_name: str, note) -> dict:
        if session.active is not None:
            return _error("trial_active", "a trial is already running")
        if mode_name not in _WIRE_MODES:
            return _error("bad_mode", f"unknown mode {mode_name!r}")
        trial_seed = derive_trial_seed(session.seed, session.trial_counter)
        cfg = replace(self.cfg.trial, feedback_mode=_WIRE_MODES[mode_name], seed=trial_seed)
        endpoint = sample_endpoint(random.Random(trial_seed), cfg)
        session.active = _ActiveTrial(session.trial_counter, cfg, endpoint, note)
        session.trial_counter += 1
        msg = {
            "type": "trial_started",
            "trial_id": session.active.trial_id,
            "mode": mode_name,
            "arena": list(cfg.arena),
            "completion_radius": cfg.completion_radius,
            "max_duration": cfg.max_duration,
        }
        if self.cfg.reveal:
            msg["reveal_endpoint"] = list(endpoint)
        return msg

    def handle_cursor(self, session: _Session, x: float, y: float, t_client) -> list[dict]:
        """Update position and trace; return any feedback/end messages."""
        trial = session.active
        if trial is None:
            session.warning_count += 1
            logger.debug("session %s: cursor outside trial (count %d)",
                         session.session_id, session.warning_count)
            return []
        logger.debug("session %s trial %d: t_client=%s", session.session_id,
                     trial.trial_id, t_client)

        w, h = trial.cfg.arena
        x = min(max(x, 0.0), w)
        y = min(max(y, 0.0), h)
        trial.position = (x, y)
        t = trial.elapsed()
        disp = DisplacementUCS(trial.endpoint[0] - x, trial.endpoint[1] - y)

        if disp.d < trial.cfg.completion_radius:
            trial.samples.append((t, (x, y), None, trial.stage))
            return [self.finalize_trial(session, "completed")]
        if t >= trial.cfg.max_duration:
            trial.samples.append((t, (x, y), None, trial.stage))
            return [self.finalize_trial(session, "timeout")]

        enc = trial.cfg.effective_encoder()
        mode = trial.cfg.feedback_mode
        feedback = None
        out: list[dict] = []
        if mode is FeedbackMode.VP:
            elapsed_cue = math.inf if trial.last_cue_t is None else t - trial.last_cue_t
            cue = encode_voice(disp, elapsed_cue, enc)
            if cue is not None:
                trial.last_cue_t = t
                feedback = cue
                out.append({"type": "voice", "word": cue.word.value,
                            "freq_hz": cue.alert_freq_hz})
        else:
            if t - trial.last_emit_t >= 1.0 / self.cfg.feedback_hz:
                if mode is FeedbackMode.VB_STAGED:
                    cmd, trial.stage = encode_vibro_staged(disp, trial.stage, enc)
                else:
                    cmd = encode_vibro(disp, enc)
                trial.last_emit_t = t
                feedback = cmd
                out.append({"type": "feedback",
                            "m1": cmd.m1, "m2": cmd.m2, "m3": cmd.m3, "m4": cmd.m4,
                            "stage": trial.stage.value if trial.stage else None})
        trial.samples.append((t, (x, y), feedback, trial.stage))
        return out

    def finalize_trial(self, session: _Session, reason: str) -> dict:
        """Close the active trial, persist its record, and report the outcome."""
        trial = session.active
        session.active = None
        if trial.watchdog is not None:
            trial.watchdog.cancel()
        t = trial.elapsed()
        x, y = trial.position
        outcome = TrialOutcome(
            success=reason == "completed",
            completion_time=min(t, trial.cfg.max_duration) if reason != "completed" else t,
            final_error_x=x - trial.endpoint[0],
            final_error_y=y - trial.endpoint[1],
        )
        trace = TrialTrace(
            samples=trial.samples,
            start=trial.cfg.resolved_start(),
            endpoint=trial.endpoint,
            mode=trial.cfg.feedback_mode,
            seed=trial.cfg.seed,
        )
        record = record_from_run(
            trial.cfg, None, trace, outcome,
            session_seed=session.seed, trial_index=trial.trial_id,
            cohort="live", live=True, participant=session.participant,
            note=trial.note,
        )
        if session.log_fh is not None:
            session.log_fh.write(record_to_line(record))
            session.log_fh.write("\n")
            session.log_fh.flush()
        logger.info(
            "session %s trial %d %s: success=%s time=%.2fs",
            session.session_id, trial.trial_id, reason, outcome.success,
            outcome.completion_time,
        )
        return {
            "type": "trial_ended",
            "trial_id": trial.trial_id,
            "reason": reason,
            "outcome": {
                "success": outcome.success,
                "completion_time": outcome.completion_time,
                "final_error_x": outcome.final_error_x,
                "final_error_y": outcome.final_error_y,
            },
            "endpoint": list(trial.endpoint),
        }


def _error(code: str, msg: str) -> dict:
    return {"type": "error", "code": code, "msg": msg}


def _send(ws: web.WebSocketResponse, payload: dict):
    return ws.send_str(json.dumps(payload, separators=(",", ":")))


async def _watchdog(service: SessionService, session: _Session, ws, trial: _ActiveTrial):
    remaining = trial.cfg.max_duration - trial.elapsed()
    await asyncio.sleep(max(remaining, 0.0) + 0.05)
    async with session.lock:
        if session.active is trial:
            msg = service.finalize_trial(session, "timeout")
            try:
                await _send(ws, msg)
            except ConnectionError:
                pass


async def websocket_handler(request: web.Request) -> web.WebSocketResponse:
    service: SessionService = request.app[SERVICE_KEY]
    ws = web.WebSocketResponse()
    await ws.prepare(request)
    session: _Session | None = None

    async for raw in ws:
        if raw.type != WSMsgType.TEXT:
            break
        try:
            data = json.loads(raw.data)
            msg_type = data["type"]
        except (json.JSONDecodeError, KeyError, TypeError):
            await _send(ws, _error("bad_message", "frames must be JSON objects with a type"))
            continue

        if msg_type == "hello":
            session = service.create_session(
                str(data.get("participant", "anonymous")), data.get("seed")
            )
            await _send(ws, {"type": "hello_ok", "session_id": session.session_id})
            continue
        if session is None:
            await _send(ws, _error("no_session", "say hello first"))
            continue

        async with session.lock:
            if msg_type == "start_trial":
                reply = service.start_trial(session, data.get("mode", "vb"), data.get("note"))
                await _send(ws, reply)
                if session.active is not None:
                    session.active.watchdog = asyncio.create_task(
                        _watchdog(service, session, ws, session.active)
                    )
            elif msg_type == "cursor":
                try:
                    replies = service.handle_cursor(
                        session, float(data["x"]), float(data["y"]), data.get("t_client")
                    )
                except (KeyError, TypeError, ValueError):
                    await _send(ws, _error("bad_cursor", "cursor needs numeric x and y"))
                    continue
                for reply in replies:
                    await _send(ws, reply)
            elif msg_type == "abort":
                if session.active is None:
                    await _send(ws, _error("no_trial", "no active trial"))
                else:
                    await _send(ws, service.finalize_trial(session, "abort"))
            else:
                await _send(ws, _error("unknown_type", f"unknown message type {msg_type!r}"))

    if session is not None:
        async with session.lock:
            if session.active is not None:
                service.finalize_trial(session, "disconnect")
            service.close_session(session)
    return ws


async def healthz(_request: web.Request) -> web.Response:
    return web.Response(text="ok")


def _find_frontend(cfg: ServiceConfig) -> Path | None:
    if cfg.frontend_dist is not None:
        return cfg.frontend_dist if cfg.frontend_dist.is_dir() else None
    candidates = [
        Path.cwd() / "frontend" / "dist",
        Path(__file__).resolve().parents[2] / "frontend" / "dist",
    ]
    for cand in candidates:
        if cand.is_dir():
            return cand
    return None


def build_app(cfg: ServiceConfig) -> web.Application:
    app = web.Application()
    app[SERVICE_KEY] = SessionService(cfg)
    app.router.add_get("/healthz", healthz)
    app.router.add_get("/ws", websocket_handler)

    dist = _find_frontend(cfg)
    if dist is not None:
        async def index(_request):
            return web.FileResponse(dist / "index.html")

        app.router.add_get("/", index)
        app.router.add_static("/static", dist)

    async def flush_on_shutdown(app):
        app[SERVICE_KEY].flush_all()

    app.on_shutdown.append(flush_on_shutdown)
    return app


async def serve_forever(cfg: ServiceConfig, ready: asyncio.Event | None = None):
    app = build_app(cfg)
    runner = web.AppRunner(app)
    await runner.setup()
    site = web.TCPSite(runner, cfg.host, cfg.port)
    try:
        await site.start()  # raises OSError if the port is taken
        logger.info("serving on http://%s:%d (ws at /ws)", cfg.host, cfg.port)
        if ready is not None:
            ready.set()
        await asyncio.Event().wait()
    finally:
        service: SessionService = app[SERVICE_KEY]
        service.flush_all()
        for fh in list(service.open_logs):
            fh.close()
        await runner.cleanup()


def run_service(cfg: ServiceConfig) -> None:
    try:
        asyncio.run(serve_forever(cfg))
    except KeyboardInterrupt:
        logger.info("interrupted; trial logs flushed")
