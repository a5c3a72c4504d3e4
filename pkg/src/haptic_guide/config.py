"""INI configuration file handling.

One file configures everything; flags override file values, file values
override the built-in defaults. The path comes from --config or, failing
that, the HAPTIC_GUIDE_CONFIG environment variable.

Sections and keys (all optional):

    [trial]    arena_width arena_height margin completion_radius
               max_duration tick_rate
    [encoder]  d_max dead_band_eps align_tol hysteresis_factor
               voice_interval_s
    [agent.vb] speed reaction_latency motor_noise_sigma
    [agent.vp] speed reaction_latency motor_noise_sigma
    [service]  host port feedback_hz
"""

from __future__ import annotations

import configparser
import json
import os
from dataclasses import replace
from pathlib import Path

from .agents import DEFAULT_AGENTS, AgentKind, AgentModel
from .encoding import EncoderConfig
from .errors import InvalidConfig
from .trials import FeedbackMode, TrialConfig

ENV_CONFIG = "HAPTIC_GUIDE_CONFIG"

MODE_NAMES = {"vb": FeedbackMode.VB, "vb-staged": FeedbackMode.VB_STAGED, "vp": FeedbackMode.VP}


def default_agent_for(mode: FeedbackMode) -> AgentModel:
    return DEFAULT_AGENTS["vp-default" if mode is FeedbackMode.VP else "vb-default"]


class AppConfig:
    """Resolved configuration: trial template, agents, service settings."""

    def __init__(self, parser: configparser.ConfigParser | None = None):
        p = parser or configparser.ConfigParser()

        def get(section, key, fallback):
            try:
                raw = p.get(section, key)
            except (configparser.NoSectionError, configparser.NoOptionError):
                return fallback
            return type(fallback)(raw)

        self.encoder = EncoderConfig(
            d_max=get("encoder", "d_max", 1.0),
            dead_band_eps=get("encoder", "dead_band_eps", 0.005),
            align_tol=get("encoder", "align_tol", 0.02),
            hysteresis_factor=get("encoder", "hysteresis_factor", 2.0),
            voice_interval_s=get("encoder", "voice_interval_s", 6.0),
        )
        self.trial = TrialConfig(
            arena=(get("trial", "arena_width", 1.0), get("trial", "arena_height", 1.0)),
            margin=get("trial", "margin", 0.1),
            completion_radius=get("trial", "completion_radius", 0.025),
            max_duration=get("trial", "max_duration", 60.0),
            tick_rate=get("trial", "tick_rate", 50.0),
            encoder=self.encoder,
        )
        self.agents = {}
        for name, preset in (("vb", DEFAULT_AGENTS["vb-default"]), ("vp", DEFAULT_AGENTS["vp-default"])):
            section = f"agent.{name}"
            self.agents[name] = AgentModel(
                kind=preset.kind,
                speed=get(section, "speed", preset.speed),
                reaction_latency=get(section, "reaction_latency", preset.reaction_latency),
                motor_noise_sigma=get(section, "motor_noise_sigma", preset.motor_noise_sigma),
            )
        self.service_host = get("service", "host", "127.0.0.1")
        self.service_port = get("service", "port", 8787)
        self.feedback_hz = get("service", "feedback_hz", 20.0)

    def trial_config(self, mode: FeedbackMode, seed: int) -> TrialConfig:
        return replace(self.trial, feedback_mode=mode, seed=seed)

    def agent_for(self, mode: FeedbackMode) -> AgentModel:
        return self.agents["vp" if mode is FeedbackMode.VP else "vb"]

    def snapshot(self) -> dict:
        """Everything needed to reproduce a run, JSON-friendly."""
        return {
            "trial": {
                "arena": list(self.trial.arena),
                "margin": self.trial.margin,
                "completion_radius": self.trial.completion_radius,
                "max_duration": self.trial.max_duration,
                "tick_rate": self.trial.tick_rate,
            },
            "encoder": {
                "d_max": self.encoder.d_max,
                "dead_band_eps": self.encoder.dead_band_eps,
                "align_tol": self.encoder.align_tol,
                "hysteresis_factor": self.encoder.hysteresis_factor,
                "voice_interval_s": self.encoder.voice_interval_s,
            },
            "agents": {
                name: {
                    "kind": a.kind.value,
                    "speed": a.speed,
                    "reaction_latency": a.reaction_latency,
                    "motor_noise_sigma": a.motor_noise_sigma,
                }
                for name, a in sorted(self.agents.items())
            },
            "service": {
                "host": self.service_host,
                "port": self.service_port,
                "feedback_hz": self.feedback_hz,
            },
        }


def load_app_config(path: str | None) -> AppConfig:
    """Load the INI file from the given path or the environment fallback."""
    resolved = path or os.environ.get(ENV_CONFIG)
    if not resolved:
        return AppConfig()
    file = Path(resolved)
    if not file.is_file():
        raise InvalidConfig(f"config file not found: {resolved}")
    parser = configparser.ConfigParser()
    parser.read(file)
    return AppConfig(parser)


def resolve_agent(spec: str | None, mode: FeedbackMode, app: AppConfig) -> AgentModel:
    """--agent value: a preset name, a JSON file, or None for the mode default."""
    if spec is None:
        return app.agent_for(mode)
    if spec in DEFAULT_AGENTS:
        return DEFAULT_AGENTS[spec]
    file = Path(spec)
    if file.is_file():
        data = json.loads(file.read_text())
        return AgentModel(
            kind=AgentKind(data["kind"]),
            speed=data["speed"],
            reaction_latency=data.get("reaction_latency", 0.3),
            motor_noise_sigma=data.get("motor_noise_sigma", 0.0),
        )
    raise InvalidConfig(
        f"unknown agent {spec!r}: expected one of {sorted(DEFAULT_AGENTS)} or a JSON file"
    )
