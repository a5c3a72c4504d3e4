"""Feedback encoding: four-motor vibration duty cycles and voice cues.

The vibration law maps the hand-to-target displacement, expressed in the
user frame, onto four motors (m1 right, m2 front, m3 left, m4 back). A motor
runs only when the target lies on its side of the hand, and its duty cycle
grows as the corresponding displacement component shrinks, so intensity
rises on approach:

    m1 = (d_max - x) / d_max   when x >  dead_band
    m3 = (d_max + x) / d_max   when x < -dead_band
    m2 = (d_max - y) / d_max   when y >  dead_band
    m4 = (d_max + y) / d_max   when y < -dead_band

Duties are clamped to [0, 1]; a component beyond the detection range d_max
reads as "out of range, no cue". Opposite motors are mutually exclusive by
construction and at most two motors run at once (oblique targets). The
dead band realizes the single-motor on-axis cases without chatter.

The staged variant guides one axis at a time (horizontal first), with
hysteresis on the switch-back so the stage does not oscillate around the
alignment tolerance.

The voice baseline emits a spoken direction word at a fixed 6-second
cadence plus an alert rate that widens with proximity (0.4 / 1 / 2 Hz over
thirds of the detection range).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

from .errors import InvalidConfig, InvalidPeriod

VOICE_INTERVAL_S = 6.0
VOICE_ALERT_FREQS_HZ = (0.4, 1.0, 2.0)


class GuidanceStage(Enum):
    HORIZONTAL_ALIGN = "horizontal"
    VERTICAL_ALIGN = "vertical"


class VoiceWord(Enum):
    FORWARD = "forward"
    BACKWARD = "backward"
    LEFT = "left"
    RIGHT = "right"


@dataclass(frozen=True)
class DisplacementUCS:
    """Hand-to-target vector projected on the horizontal user plane.

    x is the rightward component, y the forward component, both in meters.
    Distance d and angle theta (from +x, counterclockwise in [0, 2*pi)) are
    derived; (x, y) is canonical so there is no wrap-around ambiguity.
    """

    x: float
    y: float

    @property
    def d(self) -> float:
        return math.hypot(self.x, self.y)

    @property
    def theta(self) -> float:
        t = math.atan2(self.y, self.x)
        return t if t >= 0.0 else t + 2.0 * math.pi

    @staticmethod
    def from_polar(d: float, theta: float) -> "DisplacementUCS":
        if d < 0:
            raise ValueError("distance must be non-negative")
        return DisplacementUCS(d * math.cos(theta), d * math.sin(theta))


@dataclass(frozen=True)
class MotorCommand:
    """Duty cycles in [0, 1] for motors m1 (right), m2 (front), m3 (left), m4 (back)."""

    m1: float
    m2: float
    m3: float
    m4: float

    def __post_init__(self):
        for name, duty in self.as_dict().items():
            if not (0.0 <= duty <= 1.0):
                raise ValueError(f"{name} duty {duty!r} outside [0, 1]")
        if self.m1 * self.m3 != 0.0 or self.m2 * self.m4 != 0.0:
            raise ValueError("opposite motors must not run simultaneously")

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (self.m1, self.m2, self.m3, self.m4)

    def as_dict(self) -> dict[str, float]:
        return {"m1": self.m1, "m2": self.m2, "m3": self.m3, "m4": self.m4}

    def is_zero(self) -> bool:
        return self.as_tuple() == (0.0, 0.0, 0.0, 0.0)


ZERO_COMMAND = MotorCommand(0.0, 0.0, 0.0, 0.0)


@dataclass(frozen=True)
class VoiceCue:
    """One spoken direction word plus the proximity alert rate."""

    word: VoiceWord
    alert_freq_hz: float

    def __post_init__(self):
        if self.alert_freq_hz not in VOICE_ALERT_FREQS_HZ:
            raise ValueError(f"alert frequency must be one of {VOICE_ALERT_FREQS_HZ}")


@dataclass(frozen=True)
class EncoderConfig:
    """Tunable encoding parameters.

    d_max is the longest distance the system encodes; duties normalize
    against it. dead_band_eps silences a motor pair near the axis,
    align_tol switches the staged strategy from horizontal to vertical
    alignment, and hysteresis_factor (> 1) widens the switch-back
    threshold. voice_band_fractions splits [0, d_max] into the three alert
    bands (defaults to thirds); voice_interval_s is the word cadence.
    """

    d_max: float = 1.0
    dead_band_eps: float = 0.005
    completion_radius: float = 0.010
    align_tol: float = 0.02
    hysteresis_factor: float = 2.0
    voice_band_fractions: tuple[float, float] = (1.0 / 3.0, 2.0 / 3.0)
    voice_interval_s: float = field(default=VOICE_INTERVAL_S)

    def __post_init__(self):
        if self.d_max <= 0:
            raise InvalidConfig(f"d_max must be positive, got {self.d_max!r}")
        if not (0 <= self.dead_band_eps < self.align_tol < self.d_max):
            raise InvalidConfig(
                "need 0 <= dead_band_eps < align_tol < d_max, got "
                f"{self.dead_band_eps!r}, {self.align_tol!r}, {self.d_max!r}"
            )
        if self.completion_radius <= 0:
            raise InvalidConfig("completion_radius must be positive")
        if self.hysteresis_factor <= 1:
            raise InvalidConfig("hysteresis_factor must exceed 1")
        lo, hi = self.voice_band_fractions
        if not (0 < lo < hi < 1):
            raise InvalidConfig("voice band fractions must satisfy 0 < lo < hi < 1")
        if self.voice_interval_s <= 0:
            raise InvalidConfig("voice_interval_s must be positive")


def _clamp01(v: float) -> float:
    if v < 0.0:
        return 0.0
    if v > 1.0:
        return 1.0
    return v


def encode_vibro(disp: DisplacementUCS, cfg: EncoderConfig) -> MotorCommand:
    """Four-motor duty cycles for a displacement; all-zero once inside the
    completion radius."""
    if disp.d < cfg.completion_radius:
        return ZERO_COMMAND
    x, y = disp.x, disp.y
    m1 = _clamp01((cfg.d_max - x) / cfg.d_max) if x > cfg.dead_band_eps else 0.0
    m3 = _clamp01((cfg.d_max + x) / cfg.d_max) if x < -cfg.dead_band_eps else 0.0
    m2 = _clamp01((cfg.d_max - y) / cfg.d_max) if y > cfg.dead_band_eps else 0.0
    m4 = _clamp01((cfg.d_max + y) / cfg.d_max) if y < -cfg.dead_band_eps else 0.0
    return MotorCommand(m1, m2, m3, m4)


def encode_vibro_staged(
    disp: DisplacementUCS, stage: GuidanceStage, cfg: EncoderConfig
) -> tuple[MotorCommand, GuidanceStage]:
    """Two-stage variant: align horizontally, then vertically.

    The stage transition is evaluated first (from the input stage), then the
    full command is masked down to the active channel. Switching back from
    vertical requires |x| to exceed hysteresis_factor * align_tol so the
    stage cannot chatter at the tolerance boundary.
    """
    if disp.d < cfg.completion_radius:
        return ZERO_COMMAND, stage

    if stage is GuidanceStage.HORIZONTAL_ALIGN:
        if abs(disp.x) <= cfg.align_tol:
            stage = GuidanceStage.VERTICAL_ALIGN
    else:
        if abs(disp.x) > cfg.hysteresis_factor * cfg.align_tol:
            stage = GuidanceStage.HORIZONTAL_ALIGN

    full = encode_vibro(disp, cfg)
    if stage is GuidanceStage.HORIZONTAL_ALIGN:
        cmd = MotorCommand(full.m1, 0.0, full.m3, 0.0)
    else:
        cmd = MotorCommand(0.0, full.m2, 0.0, full.m4)
    return cmd, stage


def voice_alert_freq(d: float, cfg: EncoderConfig) -> float:
    """Alert rate for a distance: slow when far, fast when close."""
    ratio = d / cfg.d_max
    lo, hi = cfg.voice_band_fractions
    if ratio > hi:
        return VOICE_ALERT_FREQS_HZ[0]
    if ratio > lo:
        return VOICE_ALERT_FREQS_HZ[1]
    return VOICE_ALERT_FREQS_HZ[2]


def encode_voice(
    disp: DisplacementUCS, elapsed_since_last_cue: float, cfg: EncoderConfig
) -> VoiceCue | None:
    """Voice-prompt baseline: one cue per cadence window, none when done.

    The word names the dominant displacement axis (ties break toward the
    horizontal words); the alert frequency encodes the distance band.
    """
    if elapsed_since_last_cue < 0:
        raise ValueError("elapsed_since_last_cue must be non-negative")
    if elapsed_since_last_cue < cfg.voice_interval_s:
        return None
    if disp.d < cfg.completion_radius:
        return None

    if abs(disp.x) >= abs(disp.y):
        word = VoiceWord.RIGHT if disp.x > 0 else VoiceWord.LEFT
    else:
        word = VoiceWord.FORWARD if disp.y > 0 else VoiceWord.BACKWARD
    return VoiceCue(word, voice_alert_freq(disp.d, cfg))


def pwm_schedule(
    cmd: MotorCommand, period_ms: float, horizon_ms: float
) -> list[list[tuple[float, float]]]:
    """Expand duty cycles into per-motor on intervals over a horizon.

    On-time per period is duty * period rounded to the nearest 0.1 ms
    (half away from zero). Duty 0 yields no intervals; duty 1 (or an
    on-time that rounds up to the full period) yields one continuous
    interval. The final period is clipped at the horizon.
    """
    if period_ms <= 0:
        raise InvalidPeriod(f"period must be positive, got {period_ms!r}")
    if horizon_ms < period_ms:
        raise InvalidPeriod("horizon must be at least one period")

    schedule: list[list[tuple[float, float]]] = []
    for duty in cmd.as_tuple():
        on_ms = math.floor(duty * period_ms * 10.0 + 0.5) / 10.0
        intervals: list[tuple[float, float]] = []
        if on_ms >= period_ms:
            intervals.append((0.0, horizon_ms))
        elif on_ms > 0.0:
            start = 0.0
            while start < horizon_ms:
                intervals.append((start, min(start + on_ms, horizon_ms)))
                start += period_ms
        schedule.append(intervals)
    return schedule
