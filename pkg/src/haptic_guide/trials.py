"""Fixed-timestep virtual reaching trials.

``run_trial`` drives one subject (a synthetic agent policy) toward a hidden
endpoint under one of three feedback modes: plain vibration, staged
vibration (horizontal then vertical alignment), or the voice-prompt
baseline. The loop runs at a fixed tick rate; each tick records the cursor
position and the feedback event, the agent moves, and the trial terminates
as soon as the cursor enters the completion radius (success) or the clock
reaches max_duration (failure).

Everything is derived from the trial seed: the endpoint draw comes first,
then agent noise, so two modes run against matched endpoint sequences when
they share session seeds.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field, replace
from enum import Enum

from .agents import AgentModel, make_policy
from .encoding import (
    DisplacementUCS,
    EncoderConfig,
    GuidanceStage,
    MotorCommand,
    VoiceCue,
    encode_vibro,
    encode_vibro_staged,
    encode_voice,
)
from .errors import InvalidConfig

# Multiplier for deriving per-trial seeds from a session seed; any odd
# constant works, this one is prime and large enough to spread indexes.
_SEED_STRIDE = 1_000_003


class FeedbackMode(Enum):
    VB = "vb"
    VB_STAGED = "vb_staged"
    VP = "vp"


@dataclass(frozen=True)
class TrialConfig:
    """Arena, timing, feedback mode, and seed for one trial (or session)."""

    arena: tuple[float, float] = (1.0, 1.0)
    start: tuple[float, float] | None = None  # None -> arena center
    margin: float = 0.1
    completion_radius: float = 0.025
    max_duration: float = 60.0
    tick_rate: float = 50.0
    feedback_mode: FeedbackMode = FeedbackMode.VB
    seed: int = 0
    encoder: EncoderConfig = field(default_factory=EncoderConfig)
    endpoint: tuple[float, float] | None = None  # fixed endpoint, for directed cases

    def __post_init__(self):
        w, h = self.arena
        if w <= 0 or h <= 0:
            raise InvalidConfig("arena dimensions must be positive")
        if self.tick_rate <= 0:
            raise InvalidConfig("tick_rate must be positive")
        if self.max_duration <= 0:
            raise InvalidConfig("max_duration must be positive")
        if self.completion_radius <= 0:
            raise InvalidConfig("completion_radius must be positive")
        if not (0 <= self.margin < min(w, h) / 2):
            raise InvalidConfig("margin must be inside the arena")
        sx, sy = self.resolved_start()
        if not (0 <= sx <= w and 0 <= sy <= h):
            raise InvalidConfig("start must lie inside the arena")
        # every possible endpoint must be encodable at spawn
        far = max(
            math.hypot(cx - sx, cy - sy)
            for cx in (self.margin, w - self.margin)
            for cy in (self.margin, h - self.margin)
        )
        if self.endpoint is not None:
            ex, ey = self.endpoint
            if not (0 <= ex <= w and 0 <= ey <= h):
                raise InvalidConfig("endpoint must lie inside the arena")
            far = math.hypot(ex - sx, ey - sy)
        if far > self.encoder.d_max:
            raise InvalidConfig(
                f"spawn distance {far:.3f} can exceed encoder d_max {self.encoder.d_max}"
            )

    def resolved_start(self) -> tuple[float, float]:
        if self.start is not None:
            return self.start
        return self.arena[0] / 2.0, self.arena[1] / 2.0

    def effective_encoder(self) -> EncoderConfig:
        """Encoder parameters with the trial's completion radius applied."""
        return replace(self.encoder, completion_radius=self.completion_radius)


@dataclass(frozen=True)
class TrialOutcome:
    success: bool
    completion_time: float
    final_error_x: float
    final_error_y: float


@dataclass
class TrialTrace:
    """Per-tick samples (t, (x, y), feedback, stage) plus trial context.

    feedback is a MotorCommand (vibration modes), a VoiceCue or None (voice
    mode), or None on the timeout tick. stage is set in staged mode only.
    """

    samples: list[tuple]
    start: tuple[float, float]
    endpoint: tuple[float, float]
    mode: FeedbackMode
    seed: int


def sample_endpoint(rng: random.Random, cfg: TrialConfig) -> tuple[float, float]:
    """Uniform endpoint over the arena, inset by the margin."""
    w, h = cfg.arena
    return (
        rng.uniform(cfg.margin, w - cfg.margin),
        rng.uniform(cfg.margin, h - cfg.margin),
    )


def derive_trial_seed(session_seed: int, index: int) -> int:
    return session_seed * _SEED_STRIDE + index


def run_trial(cfg: TrialConfig, agent: AgentModel) -> tuple[TrialTrace, TrialOutcome]:
    """Run one seeded trial to completion or timeout."""
    rng = random.Random(cfg.seed)
    endpoint = cfg.endpoint if cfg.endpoint is not None else sample_endpoint(rng, cfg)
    enc = cfg.effective_encoder()
    policy = make_policy(agent, enc, rng)

    w, h = cfg.arena
    x, y = cfg.resolved_start()
    dt = 1.0 / cfg.tick_rate
    mode = cfg.feedback_mode
    stage = GuidanceStage.HORIZONTAL_ALIGN if mode is FeedbackMode.VB_STAGED else None
    last_cue_tick: int | None = None

    samples: list[tuple] = []
    k = 0
    while True:
        t = k / cfg.tick_rate
        disp = DisplacementUCS(endpoint[0] - x, endpoint[1] - y)
        done = disp.d < cfg.completion_radius
        timed_out = not done and t >= cfg.max_duration

        feedback: MotorCommand | VoiceCue | None
        if timed_out:
            feedback = None
        elif mode is FeedbackMode.VB:
            feedback = encode_vibro(disp, enc)
        elif mode is FeedbackMode.VB_STAGED:
            feedback, stage = encode_vibro_staged(disp, stage, enc)
        else:
            elapsed = math.inf if last_cue_tick is None else (k - last_cue_tick) / cfg.tick_rate
            feedback = encode_voice(disp, elapsed, enc)
            if feedback is not None:
                last_cue_tick = k

        samples.append((t, (x, y), feedback, stage))

        if done or timed_out:
            outcome = TrialOutcome(
                success=done,
                completion_time=t,
                final_error_x=x - endpoint[0],
                final_error_y=y - endpoint[1],
            )
            break

        dx, dy = policy.step(t, dt, feedback)
        if dx or dy:
            x = min(max(x + dx, 0.0), w)
            y = min(max(y + dy, 0.0), h)
        k += 1

    trace = TrialTrace(
        samples=samples,
        start=cfg.resolved_start(),
        endpoint=endpoint,
        mode=mode,
        seed=cfg.seed,
    )
    return trace, outcome


def run_session(
    cfg: TrialConfig, agent: AgentModel, n_trials: int
) -> list[tuple[TrialTrace, TrialOutcome]]:
    """n independent trials with per-trial seeds derived from cfg.seed."""
    if n_trials <= 0:
        raise InvalidConfig("n_trials must be positive")
    results = []
    for i in range(n_trials):
        trial_cfg = replace(cfg, seed=derive_trial_seed(cfg.seed, i))
        results.append(run_trial(trial_cfg, agent))
    return results
