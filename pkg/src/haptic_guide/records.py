"""Trial record schema and JSON-lines persistence.

One record per trial, one JSONL file per session. Simulated and live trials
share the same schema; live records additionally carry a participant id and
``live: true``. Field names are stable: the analysis module and the session
service both read and write this format.

Trace samples serialize as ``[t, x, y, feedback, stage]`` where feedback is
a 4-list of duty cycles (vibration modes), a ``[word, freq_hz]`` pair
(voice cues), or null (no event); stage is ``"horizontal"``/``"vertical"``
in staged mode, else null.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Iterator

from .agents import AgentModel
from .encoding import GuidanceStage, MotorCommand, VoiceCue, VoiceWord
from .trials import TrialConfig, TrialOutcome, TrialTrace

SCHEMA = "haptic-guide/trial@1"


class MalformedRecord(ValueError):
    """A JSONL line failed to parse or validate; carries the line number."""

    def __init__(self, line_no: int, reason: str):
        super().__init__(f"line {line_no}: {reason}")
        self.line_no = line_no
        self.reason = reason


@dataclass(frozen=True)
class TrialRecord:
    mode: str
    cohort: str
    session_seed: int
    trial_index: int
    trial_seed: int
    start: tuple[float, float]
    endpoint: tuple[float, float]
    arena: tuple[float, float]
    tick_rate: float
    completion_radius: float
    max_duration: float
    outcome: TrialOutcome
    trace: list[tuple]
    agent: dict | None = None
    live: bool = False
    participant: str | None = None
    note: str | None = None


def _feedback_to_json(fb):
    if fb is None:
        return None
    if isinstance(fb, MotorCommand):
        return list(fb.as_tuple())
    if isinstance(fb, VoiceCue):
        return [fb.word.value, fb.alert_freq_hz]
    raise TypeError(f"unserializable feedback {fb!r}")


def _feedback_from_json(fb):
    if fb is None:
        return None
    if len(fb) == 4:
        return MotorCommand(*fb)
    return VoiceCue(VoiceWord(fb[0]), fb[1])


_STAGE_TO_JSON = {
    None: None,
    GuidanceStage.HORIZONTAL_ALIGN: "horizontal",
    GuidanceStage.VERTICAL_ALIGN: "vertical",
}
_STAGE_FROM_JSON = {v: k for k, v in _STAGE_TO_JSON.items()}


def record_from_run(
    cfg: TrialConfig,
    agent: AgentModel | None,
    trace: TrialTrace,
    outcome: TrialOutcome,
    session_seed: int,
    trial_index: int,
    cohort: str = "synthetic",
    live: bool = False,
    participant: str | None = None,
    note: str | None = None,
) -> TrialRecord:
    agent_dict = None
    if agent is not None:
        agent_dict = {
            "kind": agent.kind.value,
            "speed": agent.speed,
            "reaction_latency": agent.reaction_latency,
            "motor_noise_sigma": agent.motor_noise_sigma,
        }
    return TrialRecord(
        mode=trace.mode.value,
        cohort=cohort,
        session_seed=session_seed,
        trial_index=trial_index,
        trial_seed=trace.seed,
        start=trace.start,
        endpoint=trace.endpoint,
        arena=cfg.arena,
        tick_rate=cfg.tick_rate,
        completion_radius=cfg.completion_radius,
        max_duration=cfg.max_duration,
        outcome=outcome,
        trace=trace.samples,
        agent=agent_dict,
        live=live,
        participant=participant,
        note=note,
    )


def record_to_dict(rec: TrialRecord) -> dict:
    return {
        "schema": SCHEMA,
        "mode": rec.mode,
        "cohort": rec.cohort,
        "session_seed": rec.session_seed,
        "trial_index": rec.trial_index,
        "trial_seed": rec.trial_seed,
        "live": rec.live,
        "participant": rec.participant,
        "note": rec.note,
        "arena": list(rec.arena),
        "start": list(rec.start),
        "endpoint": list(rec.endpoint),
        "tick_rate": rec.tick_rate,
        "completion_radius": rec.completion_radius,
        "max_duration": rec.max_duration,
        "agent": rec.agent,
        "outcome": {
            "success": rec.outcome.success,
            "completion_time": rec.outcome.completion_time,
            "final_error_x": rec.outcome.final_error_x,
            "final_error_y": rec.outcome.final_error_y,
        },
        "trace": [
            [t, xy[0], xy[1], _feedback_to_json(fb), _STAGE_TO_JSON[stage]]
            for t, xy, fb, stage in rec.trace
        ],
    }


def record_from_dict(data: dict) -> TrialRecord:
    if data.get("schema") != SCHEMA:
        raise ValueError(f"unknown schema {data.get('schema')!r}")
    out = data["outcome"]
    return TrialRecord(
        mode=data["mode"],
        cohort=data["cohort"],
        session_seed=data["session_seed"],
        trial_index=data["trial_index"],
        trial_seed=data["trial_seed"],
        start=tuple(data["start"]),
        endpoint=tuple(data["endpoint"]),
        arena=tuple(data["arena"]),
        tick_rate=data["tick_rate"],
        completion_radius=data["completion_radius"],
        max_duration=data["max_duration"],
        outcome=TrialOutcome(
            success=out["success"],
            completion_time=out["completion_time"],
            final_error_x=out["final_error_x"],
            final_error_y=out["final_error_y"],
        ),
        trace=[
            (t, (x, y), _feedback_from_json(fb), _STAGE_FROM_JSON[stage])
            for t, x, y, fb, stage in data["trace"]
        ],
        agent=data.get("agent"),
        live=data.get("live", False),
        participant=data.get("participant"),
        note=data.get("note"),
    )


def record_to_line(rec: TrialRecord) -> str:
    return json.dumps(record_to_dict(rec), sort_keys=True, separators=(",", ":"))


def write_records(path: str | Path, records: Iterable[TrialRecord]) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for rec in records:
            fh.write(record_to_line(rec))
            fh.write("\n")


def read_records(path: str | Path) -> Iterator[TrialRecord]:
    """Parse a JSONL file; raises MalformedRecord naming the bad line."""
    with open(path, "r", encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                yield record_from_dict(json.loads(line))
            except (json.JSONDecodeError, KeyError, ValueError, TypeError) as exc:
                raise MalformedRecord(line_no, str(exc)) from exc
