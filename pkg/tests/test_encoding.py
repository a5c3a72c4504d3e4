"""Vibrotactile encoding and voice baseline tests.

``column_transcription`` is an independent re-derivation of the encoding
table, organized by the eight axis/quadrant regions rather than per-motor
conditionals, so agreement with encode_vibro is a real cross-check.
"""

import math
import random

import pytest

from haptic_guide.encoding import (
    DisplacementUCS,
    EncoderConfig,
    GuidanceStage,
    MotorCommand,
    VoiceCue,
    VoiceWord,
    encode_vibro,
    encode_vibro_staged,
    encode_voice,
    pwm_schedule,
    voice_alert_freq,
)
from haptic_guide.errors import InvalidConfig, InvalidPeriod

CFG = EncoderConfig()


def column_transcription(d, theta, cfg):
    """Region-by-region duty table, the oracle for encode_vibro."""
    if d < cfg.completion_radius:
        return (0.0, 0.0, 0.0, 0.0)
    x = d * math.cos(theta)
    y = d * math.sin(theta)
    eps = cfg.dead_band_eps
    clamp = lambda v: min(1.0, max(0.0, v))
    m1_f = clamp((cfg.d_max - d * math.cos(theta)) / cfg.d_max)
    m2_f = clamp((cfg.d_max - d * math.sin(theta)) / cfg.d_max)
    m3_f = clamp((cfg.d_max + d * math.cos(theta)) / cfg.d_max)
    m4_f = clamp((cfg.d_max + d * math.sin(theta)) / cfg.d_max)

    right, left = x > eps, x < -eps
    front, back = y > eps, y < -eps
    if right and not front and not back:  # X+
        return (m1_f, 0.0, 0.0, 0.0)
    if right and front:  # quadrant I
        return (m1_f, m2_f, 0.0, 0.0)
    if front and not right and not left:  # Y+
        return (0.0, m2_f, 0.0, 0.0)
    if left and front:  # quadrant II
        return (0.0, m2_f, m3_f, 0.0)
    if left and not front and not back:  # X-
        return (0.0, 0.0, m3_f, 0.0)
    if left and back:  # quadrant III
        return (0.0, 0.0, m3_f, m4_f)
    if back and not right and not left:  # Y-
        return (0.0, 0.0, 0.0, m4_f)
    if right and back:  # quadrant IV
        return (m1_f, 0.0, 0.0, m4_f)
    return (0.0, 0.0, 0.0, 0.0)  # inside the dead band on both axes


class TestEncodeVibro:
    def test_on_axis_right(self):
        cmd = encode_vibro(DisplacementUCS(0.5, 0.0), CFG)
        assert cmd.as_tuple() == (0.5, 0.0, 0.0, 0.0)

    def test_target_reached(self):
        assert encode_vibro(DisplacementUCS(0.0, 0.0), CFG).is_zero()

    def test_quadrant_one_diagonal(self):
        disp = DisplacementUCS.from_polar(0.5, math.pi / 4)
        cmd = encode_vibro(disp, CFG)
        expected = 1.0 - 0.5 * math.cos(math.pi / 4)
        assert cmd.m1 == pytest.approx(expected, abs=1e-12)
        assert cmd.m2 == pytest.approx(expected, abs=1e-12)
        assert cmd.m3 == 0.0 and cmd.m4 == 0.0
        assert cmd.m1 == pytest.approx(0.64645, abs=1e-5)

    def test_out_of_range_clamps_to_zero(self):
        cmd = encode_vibro(DisplacementUCS(1.2, 0.0), CFG)
        assert cmd.as_tuple() == (0.0, 0.0, 0.0, 0.0)

    def test_on_axis_left(self):
        cmd = encode_vibro(DisplacementUCS(-0.25, 0.0), CFG)
        assert cmd.as_tuple() == (0.0, 0.0, 0.75, 0.0)

    def test_eight_directed_columns(self):
        d = 0.5
        for theta in [k * math.pi / 4 for k in range(8)]:
            disp = DisplacementUCS.from_polar(d, theta)
            cmd = encode_vibro(disp, CFG)
            assert cmd.as_tuple() == column_transcription(d, theta, CFG)
            active = sum(1 for m in cmd.as_tuple() if m > 0)
            on_axis = theta % (math.pi / 2) == 0.0
            assert active == (1 if on_axis else 2)

    def test_matches_transcription_on_random_pairs(self):
        rng = random.Random(20240817)
        for _ in range(10_000):
            d = rng.uniform(0.0, 1.5 * CFG.d_max)
            theta = rng.uniform(0.0, 2.0 * math.pi)
            cmd = encode_vibro(DisplacementUCS.from_polar(d, theta), CFG)
            assert cmd.as_tuple() == column_transcription(d, theta, CFG)

    def test_invariants_on_random_pairs(self):
        rng = random.Random(99)
        for _ in range(2000):
            disp = DisplacementUCS(rng.uniform(-3, 3), rng.uniform(-3, 3))
            cmd = encode_vibro(disp, CFG)
            assert cmd.m1 * cmd.m3 == 0.0
            assert cmd.m2 * cmd.m4 == 0.0
            assert sum(1 for m in cmd.as_tuple() if m > 0) <= 2
            assert all(0.0 <= m <= 1.0 for m in cmd.as_tuple())

    def test_intensity_monotone_on_approach(self):
        prev = -1.0
        for i in range(1000):
            x = CFG.d_max - i * (CFG.d_max - CFG.completion_radius) / 999.0
            duty = encode_vibro(DisplacementUCS(x, 0.0), CFG).m1
            assert duty > prev
            prev = duty

    def test_mirror_symmetry(self):
        rng = random.Random(5)
        for _ in range(500):
            x, y = rng.uniform(-1.2, 1.2), rng.uniform(-1.2, 1.2)
            a = encode_vibro(DisplacementUCS(x, y), CFG)
            b = encode_vibro(DisplacementUCS(-x, y), CFG)
            assert (a.m1, a.m3) == (b.m3, b.m1)
            assert (a.m2, a.m4) == (b.m2, b.m4)
            c = encode_vibro(DisplacementUCS(x, -y), CFG)
            assert (a.m2, a.m4) == (c.m4, c.m2)
            assert (a.m1, a.m3) == (c.m1, c.m3)

    def test_dead_band_silences_off_axis_pair(self):
        cmd = encode_vibro(DisplacementUCS(0.4, CFG.dead_band_eps), CFG)
        assert cmd.m2 == 0.0 and cmd.m4 == 0.0

    def test_invalid_config_rejected(self):
        with pytest.raises(InvalidConfig):
            EncoderConfig(d_max=0.0)
        with pytest.raises(InvalidConfig):
            EncoderConfig(dead_band_eps=0.5, align_tol=0.1)


class TestEncodeVibroStaged:
    def test_horizontal_stage_suppresses_vertical(self):
        cmd, stage = encode_vibro_staged(
            DisplacementUCS(0.4, 0.6), GuidanceStage.HORIZONTAL_ALIGN, CFG
        )
        assert cmd.as_tuple() == (0.6, 0.0, 0.0, 0.0)
        assert stage is GuidanceStage.HORIZONTAL_ALIGN

    def test_transition_to_vertical(self):
        cmd, stage = encode_vibro_staged(
            DisplacementUCS(0.0, 0.6), GuidanceStage.HORIZONTAL_ALIGN, CFG
        )
        assert stage is GuidanceStage.VERTICAL_ALIGN
        assert cmd.as_tuple() == (0.0, 0.4, 0.0, 0.0)

    def test_completed_keeps_stage(self):
        cmd, stage = encode_vibro_staged(
            DisplacementUCS(0.0, 0.0), GuidanceStage.VERTICAL_ALIGN, CFG
        )
        assert cmd.is_zero()
        assert stage is GuidanceStage.VERTICAL_ALIGN

    def test_hysteresis_band_holds_vertical(self):
        x = CFG.align_tol * 1.5  # above tol, below hysteresis threshold
        cmd, stage = encode_vibro_staged(
            DisplacementUCS(x, 0.5), GuidanceStage.VERTICAL_ALIGN, CFG
        )
        assert stage is GuidanceStage.VERTICAL_ALIGN
        assert cmd.m1 == 0.0 and cmd.m3 == 0.0

    def test_hysteresis_exceeded_reverts(self):
        x = CFG.align_tol * CFG.hysteresis_factor * 1.01
        cmd, stage = encode_vibro_staged(
            DisplacementUCS(x, 0.5), GuidanceStage.VERTICAL_ALIGN, CFG
        )
        assert stage is GuidanceStage.HORIZONTAL_ALIGN
        assert cmd.m1 > 0.0 and cmd.m2 == 0.0

    def test_channels_never_mix(self):
        rng = random.Random(11)
        stage = GuidanceStage.HORIZONTAL_ALIGN
        for _ in range(2000):
            disp = DisplacementUCS(rng.uniform(-1, 1), rng.uniform(-1, 1))
            cmd, stage = encode_vibro_staged(disp, stage, CFG)
            if stage is GuidanceStage.HORIZONTAL_ALIGN:
                assert cmd.m2 == 0.0 and cmd.m4 == 0.0
            else:
                assert cmd.m1 == 0.0 and cmd.m3 == 0.0


class TestEncodeVoice:
    def test_forward_far_band(self):
        cue = encode_voice(DisplacementUCS(0.2, 0.8), 6.0, CFG)
        assert cue == VoiceCue(VoiceWord.FORWARD, 0.4)

    def test_cadence_blocks_early_cue(self):
        assert encode_voice(DisplacementUCS(0.2, 0.8), 3.0, CFG) is None

    def test_left_close_band(self):
        cue = encode_voice(DisplacementUCS(-0.1, 0.0), 10.0, CFG)
        assert cue == VoiceCue(VoiceWord.LEFT, 2.0)

    def test_tie_breaks_horizontal(self):
        cue = encode_voice(DisplacementUCS(0.3, 0.3), 6.0, CFG)
        assert cue.word is VoiceWord.RIGHT
        cue = encode_voice(DisplacementUCS(-0.3, 0.3), 6.0, CFG)
        assert cue.word is VoiceWord.LEFT

    def test_completed_silences(self):
        assert encode_voice(DisplacementUCS(0.001, 0.0), 100.0, CFG) is None

    def test_band_boundaries(self):
        assert voice_alert_freq(CFG.d_max * 2.0 / 3.0, CFG) == 1.0
        assert voice_alert_freq(CFG.d_max * 2.0 / 3.0 + 1e-9, CFG) == 0.4
        assert voice_alert_freq(CFG.d_max / 3.0, CFG) == 2.0
        assert voice_alert_freq(CFG.d_max / 3.0 + 1e-9, CFG) == 1.0

    def test_periodic_for_fixed_displacement(self):
        disp = DisplacementUCS(0.4, 0.1)
        last_cue_t = 0.0
        cue_times = [0.0]
        t = 0.0
        while t < 30.0:
            t += 0.02
            if encode_voice(disp, t - last_cue_t, CFG) is not None:
                cue_times.append(t)
                last_cue_t = t
        gaps = [b - a for a, b in zip(cue_times, cue_times[1:])]
        assert all(g >= CFG.voice_interval_s - 1e-9 for g in gaps)
        assert len(cue_times) == 5  # 0, 6, 12, 18, 24

    def test_negative_elapsed_rejected(self):
        with pytest.raises(ValueError):
            encode_voice(DisplacementUCS(0.4, 0.1), -1.0, CFG)


class TestPwmSchedule:
    def test_half_duty(self):
        sched = pwm_schedule(MotorCommand(0.5, 0.0, 0.0, 0.0), 20.0, 40.0)
        assert sched[0] == [(0.0, 10.0), (20.0, 30.0)]
        assert sched[1] == [] and sched[2] == [] and sched[3] == []

    def test_zero_duty_empty(self):
        sched = pwm_schedule(MotorCommand(0.0, 0.0, 0.0, 0.0), 20.0, 40.0)
        assert sched == [[], [], [], []]

    def test_full_duty_continuous(self):
        sched = pwm_schedule(MotorCommand(1.0, 0.0, 0.0, 0.0), 20.0, 100.0)
        assert sched[0] == [(0.0, 100.0)]

    def test_rounding_to_tenth_ms(self):
        sched = pwm_schedule(MotorCommand(0.6464, 0.0, 0.0, 0.0), 20.0, 20.0)
        start, end = sched[0][0]
        assert end - start == pytest.approx(12.9, abs=1e-9)

    def test_horizon_clips_final_period(self):
        sched = pwm_schedule(MotorCommand(0.5, 0.0, 0.0, 0.0), 20.0, 25.0)
        assert sched[0] == [(0.0, 10.0), (20.0, 25.0)]

    def test_invalid_period(self):
        with pytest.raises(InvalidPeriod):
            pwm_schedule(MotorCommand(0.5, 0, 0, 0), 0.0, 40.0)
        with pytest.raises(InvalidPeriod):
            pwm_schedule(MotorCommand(0.5, 0, 0, 0), 20.0, 10.0)


class TestMotorCommandInvariants:
    def test_rejects_out_of_range_duty(self):
        with pytest.raises(ValueError):
            MotorCommand(1.5, 0, 0, 0)

    def test_rejects_opposed_motors(self):
        with pytest.raises(ValueError):
            MotorCommand(0.5, 0.0, 0.5, 0.0)
