"""Outcome statistics, outlier flagging, path-shape metrics, and reports.

Completion-time summaries use the sample standard deviation (n-1) over
successful trials. Outliers are flagged with the quartile fence rule
(beyond quartile +/- 1.5 * IQR) but stay in the mean/std; they are reported
alongside, since discarding them would hide exactly the familiarization
effects the raw data shows. Quartiles interpolate linearly on the sorted
sample (the common "type 7" convention) - the test suite pins this against
a brute-force oracle.

Path metrics quantify route shape: total length, straightness (length over
the start-to-end chord), and the number of large heading changes between
segments resampled at a coarse time step, which suppresses tick-level
jitter and counts only deliberate turns.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import DegenerateTrace, EmptyInput
from .records import TrialRecord
from .trials import TrialOutcome, TrialTrace

RESAMPLE_DT_S = 0.5
TURN_THRESHOLD_DEG = 60.0


@dataclass(frozen=True)
class OutlierRule:
    """Quartile fences for a sample: outside [Q_L - 1.5 IQR, Q_u + 1.5 IQR]."""

    q_lower: float
    q_upper: float

    @property
    def iqr(self) -> float:
        return self.q_upper - self.q_lower

    @property
    def lower_fence(self) -> float:
        return self.q_lower - 1.5 * self.iqr

    @property
    def upper_fence(self) -> float:
        return self.q_upper + 1.5 * self.iqr

    @staticmethod
    def from_sample(values: Sequence[float]) -> "OutlierRule":
        if len(values) == 0:
            raise EmptyInput("cannot compute quartiles of an empty sample")
        q_l, q_u = np.quantile(np.asarray(values, dtype=float), [0.25, 0.75])
        return OutlierRule(float(q_l), float(q_u))

    def is_outlier(self, value: float) -> bool:
        return value > self.upper_fence or value < self.lower_fence


@dataclass(frozen=True)
class SummaryStats:
    n: int
    mean: float
    std: float
    success_rate: float
    outlier_indices: tuple[int, ...]


@dataclass(frozen=True)
class PathMetrics:
    path_length: float
    straightness: float
    right_angle_turns: int


def summarize(outcomes: Sequence[TrialOutcome]) -> SummaryStats:
    """Completion-time stats over successful trials; outliers flagged, kept."""
    if len(outcomes) == 0:
        raise EmptyInput("no outcomes to summarize")
    successes = [(i, o.completion_time) for i, o in enumerate(outcomes) if o.success]
    success_rate = len(successes) / len(outcomes)
    if not successes:
        return SummaryStats(
            n=len(outcomes), mean=math.nan, std=math.nan,
            success_rate=0.0, outlier_indices=(),
        )
    times = [t for _, t in successes]
    mean = sum(times) / len(times)
    if len(times) >= 2:
        std = math.sqrt(sum((t - mean) ** 2 for t in times) / (len(times) - 1))
    else:
        std = 0.0
    rule = OutlierRule.from_sample(times)
    outliers = tuple(i for i, t in successes if rule.is_outlier(t))
    return SummaryStats(
        n=len(outcomes), mean=mean, std=std,
        success_rate=success_rate, outlier_indices=outliers,
    )


def positioning_error(outcomes: Sequence[TrialOutcome]) -> tuple[list[float], list[float]]:
    """Signed final-error components of completed trials, per axis."""
    if len(outcomes) == 0:
        raise EmptyInput("no outcomes")
    xs = [o.final_error_x for o in outcomes if o.success]
    ys = [o.final_error_y for o in outcomes if o.success]
    return xs, ys


def _samples_of(trace) -> list[tuple]:
    return trace.samples if isinstance(trace, TrialTrace) else list(trace)


def _resample(samples: list[tuple], dt: float) -> list[tuple[float, float]]:
    points = [samples[0][1]]
    next_t = dt
    for t, pos, *_ in samples[1:]:
        if t >= next_t:
            points.append(pos)
            next_t = math.floor(t / dt + 1.0) * dt
    last = samples[-1][1]
    if points[-1] != last:
        points.append(last)
    return points


def path_metrics(
    trace,
    resample_dt: float = RESAMPLE_DT_S,
    turn_threshold_deg: float = TURN_THRESHOLD_DEG,
) -> PathMetrics:
    """Length, straightness, and coarse turn count of one trace."""
    samples = _samples_of(trace)
    if len(samples) < 2:
        raise DegenerateTrace("need at least 2 samples for path metrics")

    length = 0.0
    for a, b in zip(samples, samples[1:]):
        length += math.hypot(b[1][0] - a[1][0], b[1][1] - a[1][1])

    x0, y0 = samples[0][1]
    x1, y1 = samples[-1][1]
    chord = math.hypot(x1 - x0, y1 - y0)
    if chord <= 1e-12:
        straightness = 1.0 if length <= 1e-12 else math.inf
    else:
        straightness = length / chord

    points = _resample(samples, resample_dt)
    headings = []
    for (ax, ay), (bx, by) in zip(points, points[1:]):
        if math.hypot(bx - ax, by - ay) > 1e-12:
            headings.append(math.atan2(by - ay, bx - ax))
    turns = 0
    threshold = math.radians(turn_threshold_deg)
    for h0, h1 in zip(headings, headings[1:]):
        diff = abs(h1 - h0) % (2.0 * math.pi)
        if diff > math.pi:
            diff = 2.0 * math.pi - diff
        if diff >= threshold:
            turns += 1
    return PathMetrics(path_length=length, straightness=straightness, right_angle_turns=turns)


# --- reports ----------------------------------------------------------------

REPORT_COLUMNS = ("mode", "cohort", "n", "mean_s", "std_s", "success_rate", "outliers")


def _fmt(v: float) -> str:
    return f"{v:.6f}"


def report_rows(records: Iterable[TrialRecord]) -> list[dict]:
    """Aggregate records into one row per (mode, cohort), sorted."""
    records = list(records)
    if not records:
        raise EmptyInput("no trial records")
    groups: dict[tuple[str, str], list[TrialRecord]] = {}
    for rec in records:
        groups.setdefault((rec.mode, rec.cohort), []).append(rec)
    rows = []
    for (mode, cohort) in sorted(groups):
        stats = summarize([rec.outcome for rec in groups[(mode, cohort)]])
        rows.append(
            {
                "mode": mode,
                "cohort": cohort,
                "n": stats.n,
                "mean_s": stats.mean,
                "std_s": stats.std,
                "success_rate": stats.success_rate,
                "outliers": len(stats.outlier_indices),
            }
        )
    return rows


def report_csv(rows: list[dict]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(REPORT_COLUMNS)
    for row in rows:
        writer.writerow(
            [
                row["mode"],
                row["cohort"],
                row["n"],
                _fmt(row["mean_s"]),
                _fmt(row["std_s"]),
                _fmt(row["success_rate"]),
                row["outliers"],
            ]
        )
    return buf.getvalue()


def report_json(rows: list[dict]) -> str:
    return json.dumps({"rows": rows}, sort_keys=True, separators=(",", ":")) + "\n"


def path_metrics_rows(records: Iterable[TrialRecord]) -> list[dict]:
    """Per-trial path metrics plus reference distances, for the metrics CSV."""
    rows = []
    for rec in records:
        if len(rec.trace) < 2:
            # instant completion: no movement to measure
            pm = PathMetrics(path_length=0.0, straightness=1.0, right_angle_turns=0)
        else:
            pm = path_metrics(rec.trace)
        x0, y0 = rec.trace[0][1]
        x1, y1 = rec.trace[-1][1]
        rows.append(
            {
                "mode": rec.mode,
                "cohort": rec.cohort,
                "session_seed": rec.session_seed,
                "trial_index": rec.trial_index,
                "success": rec.outcome.success,
                "completion_time": rec.outcome.completion_time,
                "path_length": pm.path_length,
                "straightness": pm.straightness,
                "right_angle_turns": pm.right_angle_turns,
                "euclid_net": math.hypot(x1 - x0, y1 - y0),
                "manhattan_net": abs(x1 - x0) + abs(y1 - y0),
            }
        )
    return rows


def path_metrics_csv(rows: list[dict]) -> str:
    cols = (
        "mode", "cohort", "session_seed", "trial_index", "success",
        "completion_time", "path_length", "straightness",
        "right_angle_turns", "euclid_net", "manhattan_net",
    )
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(cols)
    for row in rows:
        writer.writerow(
            [
                row["mode"], row["cohort"], row["session_seed"], row["trial_index"],
                int(row["success"]), _fmt(row["completion_time"]),
                _fmt(row["path_length"]), _fmt(row["straightness"]),
                row["right_angle_turns"], _fmt(row["euclid_net"]),
                _fmt(row["manhattan_net"]),
            ]
        )
    return buf.getvalue()
