"""Trial runner and agent behavior tests."""

import math
from dataclasses import replace

import pytest

from haptic_guide.agents import DEFAULT_AGENTS, AgentKind, AgentModel
from haptic_guide.encoding import VoiceCue
from haptic_guide.errors import InvalidConfig
from haptic_guide.records import (
    MalformedRecord,
    read_records,
    record_from_dict,
    record_from_run,
    record_to_dict,
    write_records,
)
from haptic_guide.trials import (
    FeedbackMode,
    TrialConfig,
    run_session,
    run_trial,
    sample_endpoint,
)

VB_AGENT = DEFAULT_AGENTS["vb-default"]
VP_AGENT = DEFAULT_AGENTS["vp-default"]
VB_QUIET = replace(VB_AGENT, motor_noise_sigma=0.0)


def path_length(samples):
    return sum(
        math.hypot(b[1][0] - a[1][0], b[1][1] - a[1][1])
        for a, b in zip(samples, samples[1:])
    )


class TestRunTrial:
    def test_start_on_endpoint_completes_immediately(self):
        cfg = TrialConfig(endpoint=(0.5, 0.5), seed=1)
        trace, outcome = run_trial(cfg, VB_AGENT)
        assert outcome.success
        assert outcome.completion_time == 0.0
        assert len(trace.samples) == 1
        assert trace.samples[0][0] == 0.0

    def test_deterministic_replay(self):
        cfg = TrialConfig(feedback_mode=FeedbackMode.VB, seed=99)
        a = run_trial(cfg, VB_AGENT)
        b = run_trial(cfg, VB_AGENT)
        assert a[0].samples == b[0].samples
        assert a[1] == b[1]
        assert a[0].endpoint == b[0].endpoint

    def test_kinematic_lower_bound(self):
        agent = AgentModel(AgentKind.VB_REACTIVE, speed=0.2, reaction_latency=0.3)
        cfg = TrialConfig(endpoint=(0.9, 0.5), seed=0)  # 0.4 m due right
        _, outcome = run_trial(cfg, agent)
        assert outcome.success
        expected = 2.0 + agent.reaction_latency
        assert abs(outcome.completion_time - expected) <= 0.1 * expected

    def test_tick_spacing(self):
        cfg = TrialConfig(seed=3)
        trace, _ = run_trial(cfg, VB_AGENT)
        for i, sample in enumerate(trace.samples):
            assert sample[0] == pytest.approx(i / cfg.tick_rate, abs=1e-12)

    def test_positions_stay_in_arena(self):
        cfg = TrialConfig(feedback_mode=FeedbackMode.VP, seed=17)
        trace, _ = run_trial(cfg, VP_AGENT)
        w, h = cfg.arena
        for _, (x, y), _, _ in trace.samples:
            assert 0.0 <= x <= w and 0.0 <= y <= h

    def test_success_monotone_in_max_duration(self):
        for seed in range(10):
            short = TrialConfig(feedback_mode=FeedbackMode.VP, max_duration=20.0, seed=seed)
            long = TrialConfig(feedback_mode=FeedbackMode.VP, max_duration=60.0, seed=seed)
            _, o_short = run_trial(short, VP_AGENT)
            _, o_long = run_trial(long, VP_AGENT)
            if o_short.success:
                assert o_long.success
                assert o_long.completion_time == o_short.completion_time

    def test_timeout_yields_failure_with_final_error(self):
        slow = AgentModel(AgentKind.VB_REACTIVE, speed=0.001)
        cfg = TrialConfig(endpoint=(0.9, 0.5), max_duration=2.0, seed=0)
        trace, outcome = run_trial(cfg, slow)
        assert not outcome.success
        assert outcome.completion_time == pytest.approx(2.0, abs=1 / cfg.tick_rate)
        x, y = trace.samples[-1][1]
        assert outcome.final_error_x == pytest.approx(x - 0.9)
        assert outcome.final_error_y == pytest.approx(y - 0.5)

    def test_final_error_within_completion_radius_on_success(self):
        for seed in range(10):
            cfg = TrialConfig(seed=seed)
            _, outcome = run_trial(cfg, VB_AGENT)
            assert outcome.success
            err = math.hypot(outcome.final_error_x, outcome.final_error_y)
            assert err < cfg.completion_radius


class TestVbReactivePath:
    def test_near_straight_without_noise(self):
        for seed in range(30):
            cfg = TrialConfig(feedback_mode=FeedbackMode.VB, seed=seed)
            trace, outcome = run_trial(cfg, VB_QUIET)
            assert outcome.success
            d0 = math.hypot(
                trace.endpoint[0] - trace.start[0], trace.endpoint[1] - trace.start[1]
            )
            assert path_length(trace.samples) <= 1.1 * d0

    def test_holds_position_when_feedback_silent(self):
        # endpoint inside the completion radius from the start: never moves
        cfg = TrialConfig(endpoint=(0.5 + 0.01, 0.5), seed=0)
        trace, outcome = run_trial(cfg, VB_QUIET)
        assert outcome.success and len(trace.samples) == 1


class TestVpFollowerPath:
    def test_segments_axis_parallel(self):
        for seed in range(5):
            cfg = TrialConfig(feedback_mode=FeedbackMode.VP, seed=seed)
            trace, _ = run_trial(cfg, VP_AGENT)
            for a, b in zip(trace.samples, trace.samples[1:]):
                dx = b[1][0] - a[1][0]
                dy = b[1][1] - a[1][1]
                assert min(abs(dx), abs(dy)) <= 1e-12

    def test_cue_cadence(self):
        cfg = TrialConfig(feedback_mode=FeedbackMode.VP, seed=2)
        trace, _ = run_trial(cfg, VP_AGENT)
        cue_times = [t for t, _, fb, _ in trace.samples if isinstance(fb, VoiceCue)]
        assert cue_times[0] == 0.0
        gaps = [b - a for a, b in zip(cue_times, cue_times[1:])]
        assert all(g >= 6.0 - 1e-9 for g in gaps)

    def test_timeout_trial_cue_budget(self):
        stuck = AgentModel(AgentKind.VP_FOLLOWER, speed=0.001)
        cfg = TrialConfig(feedback_mode=FeedbackMode.VP, max_duration=60.0, seed=5)
        trace, outcome = run_trial(cfg, stuck)
        assert not outcome.success
        n_cues = sum(1 for s in trace.samples if isinstance(s[2], VoiceCue))
        assert n_cues <= 60 // 6

    def test_waits_between_cues_once_plan_done(self):
        cfg = TrialConfig(feedback_mode=FeedbackMode.VP, seed=8)
        trace, _ = run_trial(cfg, VP_AGENT)
        # find a stretch strictly between two cues where position is frozen
        moves_after_plan = 0
        last_pos = None
        for t, pos, fb, _ in trace.samples:
            if isinstance(fb, VoiceCue):
                last_pos = None
            if last_pos is not None and pos == last_pos:
                moves_after_plan += 1
            last_pos = pos
        assert moves_after_plan > 0


class TestRunSession:
    def test_distinct_endpoints(self):
        cfg = TrialConfig(feedback_mode=FeedbackMode.VB, seed=12)
        results = run_session(cfg, VB_AGENT, 30)
        assert len(results) == 30
        endpoints = {trace.endpoint for trace, _ in results}
        assert len(endpoints) == 30

    def test_session_replay_identical(self):
        cfg = TrialConfig(feedback_mode=FeedbackMode.VB, seed=12)
        a = run_session(cfg, VB_AGENT, 5)
        b = run_session(cfg, VB_AGENT, 5)
        assert [o for _, o in a] == [o for _, o in b]
        assert [t.samples for t, _ in a] == [t.samples for t, _ in b]

    def test_matched_endpoints_across_modes(self):
        vb = TrialConfig(feedback_mode=FeedbackMode.VB, seed=77)
        vp = TrialConfig(feedback_mode=FeedbackMode.VP, seed=77)
        ra = run_session(vb, VB_AGENT, 10)
        rb = run_session(vp, VP_AGENT, 10)
        assert [t.endpoint for t, _ in ra] == [t.endpoint for t, _ in rb]

    def test_invalid_trial_count(self):
        with pytest.raises(InvalidConfig):
            run_session(TrialConfig(), VB_AGENT, 0)


class TestConfigValidation:
    def test_spawn_distance_must_fit_encoder_range(self):
        from haptic_guide.encoding import EncoderConfig

        with pytest.raises(InvalidConfig):
            TrialConfig(arena=(4.0, 4.0), encoder=EncoderConfig(d_max=1.0))

    def test_bad_tick_rate(self):
        with pytest.raises(InvalidConfig):
            TrialConfig(tick_rate=0.0)

    def test_endpoint_sampling_respects_margin(self):
        import random

        cfg = TrialConfig(margin=0.2, seed=0)
        rng = random.Random(0)
        for _ in range(500):
            ex, ey = sample_endpoint(rng, cfg)
            assert 0.2 <= ex <= 0.8 and 0.2 <= ey <= 0.8


class TestRecords:
    def test_round_trip(self, tmp_path):
        cfg = TrialConfig(feedback_mode=FeedbackMode.VP, seed=4)
        trace, outcome = run_trial(cfg, VP_AGENT)
        rec = record_from_run(cfg, VP_AGENT, trace, outcome, session_seed=4, trial_index=0)
        path = tmp_path / "session.jsonl"
        write_records(path, [rec])
        loaded = list(read_records(path))
        assert len(loaded) == 1
        assert record_to_dict(loaded[0]) == record_to_dict(rec)

    def test_staged_round_trip(self, tmp_path):
        cfg = TrialConfig(feedback_mode=FeedbackMode.VB_STAGED, seed=4)
        trace, outcome = run_trial(cfg, VB_AGENT)
        rec = record_from_run(cfg, VB_AGENT, trace, outcome, session_seed=4, trial_index=0)
        path = tmp_path / "session.jsonl"
        write_records(path, [rec])
        loaded = list(read_records(path))
        assert record_to_dict(loaded[0]) == record_to_dict(rec)

    def test_malformed_line_reports_line_number(self, tmp_path):
        path = tmp_path / "bad.jsonl"
        cfg = TrialConfig(seed=4)
        trace, outcome = run_trial(cfg, VB_AGENT)
        rec = record_from_run(cfg, VB_AGENT, trace, outcome, session_seed=4, trial_index=0)
        write_records(path, [rec])
        with open(path, "a") as fh:
            fh.write("{not json}\n")
        with pytest.raises(MalformedRecord) as err:
            list(read_records(path))
        assert err.value.line_no == 2

    def test_unknown_schema_rejected(self):
        with pytest.raises(ValueError):
            record_from_dict({"schema": "other@9"})
