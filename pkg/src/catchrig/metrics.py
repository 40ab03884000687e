"""Performance metrics computed from telemetry.

Mirrors how the rig experiments are evaluated: offset deviation and
offset acceleration for shadowing, step rise time and steady-state
noise band for force control, rise-to-safe-height time and overshoot
for recovery. Fields are None for modes that never ran.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, fields

import numpy as np

from .scenario import Scenario
from .telemetry import TelemetryRecord

GAP_ACCEL_LP_HZ = 50.0  # low-pass on the differentiated gap; the second
                        # difference otherwise amplifies encoder-grain
                        # wiggle in the planarizer trajectory


class ModeAbsent(LookupError):
    """A metric was requested for a mode that never ran."""


@dataclass
class MetricsReport:
    gap_dev_max: float | None = None
    gap_accel_max: float | None = None
    spring_engaged_during_shadow: bool | None = None
    force_rise_time_10_90: float | None = None
    force_overshoot: float | None = None
    force_ss_noise_band: float | None = None
    recovery_rise_time_to_safe: float | None = None
    recovery_overshoot: float | None = None
    accel_bound_violations: int | None = None

    def require(self, name: str):
        value = getattr(self, name)
        if value is None:
            raise ModeAbsent(name)
        return value

    def as_dict(self) -> dict:
        return {f.name: getattr(self, f.name) for f in fields(self)}


def rise_time_10_90(times, values, level_from: float, level_to: float) -> float | None:
    """10-90% rise time of a step from level_from to level_to.

    Thresholds are measured on the commanded step, first-crossing
    semantics at the sampling resolution. None if either threshold is
    never crossed (including a zero-size step).
    """
    delta = level_to - level_from
    if delta == 0.0:
        return None
    sign = 1.0 if delta > 0 else -1.0
    lo = level_from + 0.1 * delta
    hi = level_from + 0.9 * delta
    t10 = t90 = None
    for t, v in zip(times, values):
        if t10 is None and (v - lo) * sign >= 0.0:
            t10 = t
        if (v - hi) * sign >= 0.0:
            t90 = t
            break
    if t10 is None or t90 is None:
        return None
    return t90 - t10


def _contiguous_runs(mask: np.ndarray) -> list[tuple[int, int]]:
    runs = []
    start = None
    for i, m in enumerate(mask):
        if m and start is None:
            start = i
        elif not m and start is not None:
            runs.append((start, i))
            start = None
    if start is not None:
        runs.append((start, len(mask)))
    return runs


def _lowpass(x: np.ndarray, omega: float, dt: float) -> np.ndarray:
    alpha = 1.0 - math.exp(-omega * dt)
    y = np.empty_like(x)
    acc = x[0]
    for i, v in enumerate(x):
        acc += alpha * (v - acc)
        y[i] = acc
    return y


def compute_metrics(telemetry: list[TelemetryRecord], sc: Scenario) -> MetricsReport:
    if not telemetry:
        raise ValueError("empty telemetry")
    rep = MetricsReport()
    dt = sc.dt_control
    t = np.array([r.t for r in telemetry])
    y_r = np.array([r.y_r for r in telemetry])
    y_p = np.array([r.y_p for r in telemetry])
    dy = np.array([r.dy for r in telemetry])
    f_filt = np.array([r.F_filt for r in telemetry])
    modes = [r.mode for r in telemetry]

    # ---------------------------------------------------------- shadowing
    shadow = np.array([m == "shadowing" for m in modes])
    if shadow.any():
        gap = y_r[shadow] - y_p[shadow]
        rep.gap_dev_max = float(np.max(np.abs(gap - sc.shadow.d)))
        rep.spring_engaged_during_shadow = bool(np.any(dy[shadow] > 0.0))
        accel_max = 0.0
        for i0, i1 in _contiguous_runs(shadow):
            if i1 - i0 < 3:
                continue
            g = y_r[i0:i1] - y_p[i0:i1]
            acc = (g[2:] - 2.0 * g[1:-1] + g[:-2]) / (dt * dt)
            acc = _lowpass(acc, 2.0 * math.pi * GAP_ACCEL_LP_HZ, dt)
            accel_max = max(accel_max, float(np.max(np.abs(acc))))
        rep.gap_accel_max = accel_max
        # transparency implication: a gap that never deviates by the full
        # offset cannot have loaded the spring
        if rep.gap_dev_max < sc.shadow.d:
            assert not rep.spring_engaged_during_shadow, (
                "gap deviation below the offset but the spring engaged")

    # ------------------------------------------------------ force control
    force = np.array([m == "force" for m in modes])
    if force.any():
        tf = t[force]
        ff = f_filt[force]
        span0, span1 = float(tf[0]), float(tf[-1])
        bounds = [span0] + [ts for ts in sc.f_des.times if span0 < ts <= span1] + [span1]
        best_delta = 0.0
        rise = overshoot = None
        band = 0.0
        for i in range(len(bounds) - 1):
            t0, t1 = bounds[i], bounds[i + 1]
            seg = (tf >= t0) & (tf < t1) if t1 < span1 else (tf >= t0)
            if not seg.any():
                continue
            level = sc.f_des.value(t0)
            # steady-state noise band over the late part of the segment
            w = seg & (tf >= t0 + 0.5)
            if w.any():
                band = max(band, float(np.max(np.abs(ff[w] - np.mean(ff[w])))))
            if i == 0:
                continue
            prev_level = sc.f_des.value(bounds[i - 1])
            delta = level - prev_level
            if abs(delta) > abs(best_delta):
                best_delta = delta
                rise = rise_time_10_90(tf[seg], ff[seg], prev_level, level)
                sign = 1.0 if delta > 0 else -1.0
                overshoot = max(0.0, float(np.max((ff[seg] - level) * sign)))
        rep.force_rise_time_10_90 = rise
        rep.force_overshoot = overshoot
        rep.force_ss_noise_band = band

    # ----------------------------------------------------------- recovery
    rec_or_hold = np.array([m in ("recovery", "hold") for m in modes])
    if rec_or_hold.any():
        i0 = int(np.argmax(rec_or_hold))
        t_fail = float(t[i0])
        y_fail = float(y_r[i0])
        safe = sc.recovery.safe_rise
        risen = (y_r - y_fail >= safe) & (t >= t_fail)
        rep.recovery_rise_time_to_safe = (
            float(t[np.argmax(risen)] - t_fail) if risen.any() else math.inf)
        y_des_final = telemetry[-1].y_des
        static_defl = (sc.params.g * (sc.params.M - sc.params.M_h)) / sc.params.k
        setpoint = y_des_final - static_defl
        rep.recovery_overshoot = max(
            0.0, float(np.max(y_r[rec_or_hold] - setpoint)))
        rep.accel_bound_violations = sum(
            r.event.split(";").count("violation:accel_bound")
            for r in telemetry if r.event)

    return rep


def force_settling_errors(telemetry: list[TelemetryRecord], sc: Scenario,
                          settle_after: float = 0.5) -> list[tuple[float, float]]:
    """Per force step: (step time, max |F_filt - F_des|) from settle_after
    seconds past the step until the next one."""
    ts = [r.t for r in telemetry if r.mode == "force"]
    ff = [r.F_filt for r in telemetry if r.mode == "force"]
    if not ts:
        raise ModeAbsent("force")
    out = []
    span0, span1 = ts[0], ts[-1]
    bounds = [span0] + [b for b in sc.f_des.times if span0 < b <= span1] + [span1]
    for i in range(len(bounds) - 1):
        t0, t1 = bounds[i], bounds[i + 1]
        level = sc.f_des.value(t0)
        err = [abs(f - level) for t, f in zip(ts, ff)
               if t0 + settle_after <= t < t1]
        if err:
            out.append((t0, max(err)))
    return out


def recovery_rate_profile(telemetry: list[TelemetryRecord],
                          threshold: float = 0.1) -> dict:
    """Relative-rate (v_p - v_r) history of a catch-and-lift.

    The catch transient necessarily exceeds the operating bound: the
    planarizer crosses the slack gap at a few tenths of a m/s before the
    spring can load, so the robot cannot match its velocity yet. The
    bound is therefore assessed from the first tick the magnitude drops
    below `threshold` after engagement (the controlled-lift phase).

    Returns engagement time, the transient peak, the settle time, and
    the maximum magnitude seen after settling (all on recovery/hold
    ticks; times are absolute).
    """
    rec = [r for r in telemetry if r.mode in ("recovery", "hold")]
    if not rec:
        raise ModeAbsent("recovery")
    eng = next((i for i, r in enumerate(rec) if r.dy > 0.0), None)
    if eng is None:
        return {"engagement_t": None, "peak": 0.0,
                "settle_t": None, "max_after_settle": 0.0}
    dv = [abs(r.v_p - r.v_r) for r in rec[eng:]]
    peak = max(dv)
    settle = next((j for j, v in enumerate(dv) if v < threshold), None)
    if settle is None:
        return {"engagement_t": rec[eng].t, "peak": peak,
                "settle_t": None, "max_after_settle": math.inf}
    return {
        "engagement_t": rec[eng].t,
        "peak": peak,
        "settle_t": rec[eng + settle].t,
        "max_after_settle": max(dv[settle:]),
    }
