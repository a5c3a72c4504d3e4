"""Synthetic subjects for the virtual reaching task.

Two behavioral models stand in for human participants:

- ``VB_REACTIVE`` re-steers continuously along the active-motor direction
  (m1-m3, m2-m4), with optional per-tick heading noise. Because the motor
  pattern always points at the target's side, the result is a smooth,
  near-straight approach.

- ``VP_FOLLOWER`` hears only the cue stream. On each cue it plans a bounded
  move along the named axis and then waits for the next word, the
  move-and-wait pattern voice guidance forces on subjects. The planned
  length comes from the cue itself: the alert-frequency band gives a coarse
  distance estimate, and a repeated direction reversal on an axis halves
  that axis's step so the agent brackets the target instead of ping-ponging
  over it. Between cues the behavior depends on nothing but the last cue:
  the follower has no access to the endpoint.

Both policies consume randomness only from the trial's seeded generator, so
trials replay bit-identically.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from enum import Enum

from .encoding import EncoderConfig, MotorCommand, VoiceCue, VoiceWord


class AgentKind(Enum):
    VB_REACTIVE = "vb_reactive"
    VP_FOLLOWER = "vp_follower"


@dataclass(frozen=True)
class AgentModel:
    kind: AgentKind
    speed: float  # meters per second
    reaction_latency: float = 0.3  # seconds
    motor_noise_sigma: float = 0.0  # radians of heading noise per tick

    def __post_init__(self):
        if self.speed <= 0:
            raise ValueError("agent speed must be positive")
        if self.reaction_latency < 0:
            raise ValueError("reaction latency must be non-negative")
        if self.motor_noise_sigma < 0:
            raise ValueError("motor noise sigma must be non-negative")


# Defaults are tuning, not measured human parameters: they are chosen so
# simulated completion times land in the tens of seconds.
DEFAULT_AGENTS = {
    "vb-default": AgentModel(AgentKind.VB_REACTIVE, speed=0.025, reaction_latency=0.3,
                             motor_noise_sigma=0.1),
    "vp-default": AgentModel(AgentKind.VP_FOLLOWER, speed=0.1, reaction_latency=0.3),
}

# VP planning constants: representative distance per alert band (midpoints
# of the thirds of d_max), the conservative fraction of it to move, and the
# per-axis shrink applied when the guidance reverses direction on an axis.
VP_BAND_ESTIMATE = {0.4: 5.0 / 6.0, 1.0: 0.5, 2.0: 1.0 / 6.0}
VP_PLAN_FRACTION = 0.42
VP_FLIP_SHRINK = 0.35

_WORD_TO_AXIS = {
    VoiceWord.RIGHT: ("x", 1.0),
    VoiceWord.LEFT: ("x", -1.0),
    VoiceWord.FORWARD: ("y", 1.0),
    VoiceWord.BACKWARD: ("y", -1.0),
}


class VbReactivePolicy:
    """Moves along the direction the motor pattern indicates, every tick."""

    def __init__(self, model: AgentModel, enc: EncoderConfig, rng: random.Random):
        self.model = model
        self.rng = rng

    def step(self, t: float, dt: float, feedback: MotorCommand | None) -> tuple[float, float]:
        if feedback is None or t < self.model.reaction_latency:
            return 0.0, 0.0
        vx = feedback.m1 - feedback.m3
        vy = feedback.m2 - feedback.m4
        if vx == 0.0 and vy == 0.0:
            return 0.0, 0.0
        heading = math.atan2(vy, vx)
        if self.model.motor_noise_sigma > 0:
            heading += self.rng.gauss(0.0, self.model.motor_noise_sigma)
        step = self.model.speed * dt
        return step * math.cos(heading), step * math.sin(heading)


class VpFollowerPolicy:
    """Executes one bounded axis move per voice cue, then waits."""

    def __init__(self, model: AgentModel, enc: EncoderConfig, rng: random.Random):
        self.model = model
        self.d_max = enc.d_max
        self._dir = (0.0, 0.0)
        self._remaining = 0.0
        self._move_at = math.inf
        self._scale = {"x": 1.0, "y": 1.0}
        self._last_sign = {"x": 0.0, "y": 0.0}

    def _on_cue(self, cue: VoiceCue, t: float) -> None:
        axis, sign = _WORD_TO_AXIS[cue.word]
        if self._last_sign[axis] not in (0.0, sign):
            self._scale[axis] *= VP_FLIP_SHRINK
        self._last_sign[axis] = sign
        plan = VP_PLAN_FRACTION * VP_BAND_ESTIMATE[cue.alert_freq_hz] * self.d_max
        self._remaining = plan * self._scale[axis]
        self._dir = (sign, 0.0) if axis == "x" else (0.0, sign)
        self._move_at = t + self.model.reaction_latency

    def step(self, t: float, dt: float, feedback: VoiceCue | None) -> tuple[float, float]:
        if feedback is not None:
            self._on_cue(feedback, t)
        if t < self._move_at or self._remaining <= 0.0:
            return 0.0, 0.0
        step = min(self.model.speed * dt, self._remaining)
        self._remaining -= step
        return self._dir[0] * step, self._dir[1] * step


def make_policy(model: AgentModel, enc: EncoderConfig, rng: random.Random):
    if model.kind is AgentKind.VB_REACTIVE:
        return VbReactivePolicy(model, enc, rng)
    return VpFollowerPolicy(model, enc, rng)
