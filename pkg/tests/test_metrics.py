"""Metric-extraction tests against synthetic telemetry with known answers."""

import math

import pytest

from catchrig.metrics import (MetricsReport, ModeAbsent, compute_metrics,
                              force_settling_errors, recovery_rate_profile,
                              rise_time_10_90)
from catchrig.scenario import Scenario
from catchrig.telemetry import TelemetryRecord
from catchrig.waveforms import StepSchedule


def _record(t, mode="shadowing", **kw):
    base = dict(t=t, y_r=0.3, v_r=0.0, y_p=0.28, v_p=0.0, dy=-0.02, F_sp=0.0,
                F_raw=0.0, F_filt=0.0, v_motor_cmd=0.0, mode=mode,
                y_des=float("nan"), v_des=float("nan"), event="")
    base.update(kw)
    return TelemetryRecord(**base)


class TestRiseTime:
    def test_first_order_oracle(self):
        # closed form: t10-90 of A(1 - exp(-t/tauf)) is tauf*ln 9
        tauf = 0.0455
        dt = 1e-3
        ts = [i * dt for i in range(2000)]
        vs = [50.0 * (1.0 - math.exp(-t / tauf)) for t in ts]
        rise = rise_time_10_90(ts, vs, 0.0, 50.0)
        assert rise == pytest.approx(tauf * math.log(9.0), abs=2 * dt)
        assert rise == pytest.approx(0.100, abs=0.002)

    def test_falling_step(self):
        ts = [i * 1e-3 for i in range(2000)]
        vs = [30.0 + 20.0 * math.exp(-t / 0.05) for t in ts]
        rise = rise_time_10_90(ts, vs, 50.0, 30.0)
        assert rise == pytest.approx(0.05 * math.log(9.0), abs=2e-3)

    def test_never_crossing_returns_none(self):
        ts = [0.0, 1.0]
        assert rise_time_10_90(ts, [0.0, 0.5], 0.0, 50.0) is None
        assert rise_time_10_90(ts, [1.0, 1.0], 1.0, 1.0) is None


def test_constant_gap_gives_zero_deviation_and_accel():
    # 0.5 - 0.25 - 0.25 is exact in binary, so the zero really is zero
    sc = Scenario(duration=0.01)
    from dataclasses import replace as dc_replace
    sc.shadow = dc_replace(sc.shadow, d=0.25)
    tele = [_record(i * 1e-3, y_r=0.5, y_p=0.25) for i in range(11)]
    m = compute_metrics(tele, sc)
    assert m.gap_dev_max == 0.0
    assert m.gap_accel_max == 0.0
    assert m.spring_engaged_during_shadow is False
    assert m.force_rise_time_10_90 is None
    assert m.recovery_rise_time_to_safe is None


def test_recovery_rise_example():
    # robot climbs 8 cm in exactly 0.4 s after the failure tick
    sc = Scenario(duration=1.0)
    tele = [_record(i * 1e-3) for i in range(1000)]
    t_fail = 0.2
    for i, r in enumerate(tele):
        if r.t >= t_fail:
            r.mode = "recovery"
            rise = 0.08 * min(1.0, (r.t - t_fail) / 0.4)
            r.y_r = 0.3 + rise
            r.y_des = 0.3 + rise + 0.02 - 0.08 + 0.08  # anything finite
    # final set-point: make overshoot come out as zero
    setpt = tele[-1].y_r + (sc.params.g * (sc.params.M - sc.params.M_h)) / sc.params.k
    for r in tele:
        if r.mode == "recovery":
            r.y_des = setpt
    m = compute_metrics(tele, sc)
    assert m.recovery_rise_time_to_safe == pytest.approx(0.40, abs=2e-3)
    assert m.recovery_overshoot == pytest.approx(0.0, abs=1e-12)
    assert m.accel_bound_violations == 0


def test_recovery_never_reaching_safe_height():
    sc = Scenario(duration=1.0)
    tele = [_record(i * 1e-3, mode="recovery", y_des=0.32) for i in range(100)]
    m = compute_metrics(tele, sc)
    assert m.recovery_rise_time_to_safe == math.inf


def test_metric_scale_consistency():
    # pure kinematic metrics: scaling every position (and the offset)
    # by c scales gap deviation and recovery distances by c
    sc1 = Scenario(duration=1.0)
    rnd_gap = [0.02 + 0.002 * math.sin(7 * i) for i in range(400)]
    tele1 = [_record(i * 1e-3, y_r=0.3 + 0.05 * math.sin(i * 0.01),
                     y_p=0.3 + 0.05 * math.sin(i * 0.01) - rnd_gap[i])
             for i in range(400)]
    m1 = compute_metrics(tele1, sc1)

    c = 3.0
    from dataclasses import replace as dc_replace
    sc2 = Scenario(duration=1.0)
    sc2.shadow = dc_replace(sc1.shadow, d=sc1.shadow.d * c)
    tele2 = [_record(r.t, y_r=r.y_r * c, y_p=r.y_p * c) for r in tele1]
    m2 = compute_metrics(tele2, sc2)

    assert m2.gap_dev_max == pytest.approx(c * m1.gap_dev_max, rel=1e-9)
    assert m2.gap_accel_max == pytest.approx(c * m1.gap_accel_max, rel=1e-9)


def test_force_settling_errors_and_mode_absent():
    sc = Scenario(duration=2.0)
    sc.f_des = StepSchedule((0.0, 1.0), (10.0, 20.0))
    tele = []
    for i in range(2000):
        t = i * 1e-3
        level = 10.0 if t < 1.0 else 20.0
        # first-order settle toward the level after each step
        t0 = 0.0 if t < 1.0 else 1.0
        f = level - (10.0 if t >= 1.0 else 10.0) * math.exp(-(t - t0) / 0.05)
        tele.append(_record(t, mode="force", F_filt=f))
    errs = force_settling_errors(tele, sc)
    assert len(errs) == 2
    # error at 0.5 s past the step: 10*exp(-10) ~ 4.5e-4
    assert errs[1][1] == pytest.approx(10.0 * math.exp(-10.0), rel=0.02)

    with pytest.raises(ModeAbsent):
        force_settling_errors([_record(0.0)], sc)
    with pytest.raises(ModeAbsent):
        recovery_rate_profile([_record(0.0)])


def test_metrics_require_raises_for_absent_mode():
    m = MetricsReport(gap_dev_max=0.001)
    assert m.require("gap_dev_max") == 0.001
    with pytest.raises(ModeAbsent):
        m.require("force_rise_time_10_90")


def test_recovery_rate_profile_windows():
    tele = []
    for i in range(400):
        t = i * 1e-3
        if i < 50:
            dy, vp, vr = -0.01, 0.4, 0.0       # slack approach
        elif i < 200:
            dy, vp, vr = 0.01, 0.4, 0.4 - 0.45 * math.exp(-(i - 50) / 40.0)
        else:
            dy, vp, vr = 0.02, 0.3, 0.3 - 0.01  # settled lift
        tele.append(_record(t, mode="recovery", dy=dy, v_p=vp, v_r=vr))
    prof = recovery_rate_profile(tele, threshold=0.1)
    assert prof["engagement_t"] == pytest.approx(0.050, abs=2e-3)
    assert prof["peak"] == pytest.approx(0.45, abs=0.01)
    assert prof["settle_t"] is not None
    assert prof["max_after_settle"] < 0.1
