"""Closed-loop scenario execution.

Per control tick: sample sensors, update filters and the supervisor,
evaluate the active control law, log one telemetry row, then advance the
plant by dt_control/dt_physics RK4 substeps (free dynamics) or evaluate
the scripted robot waveform (kinematic drive). Runs are deterministic:
the scenario plus its seed fully determine the telemetry bytes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

from . import backend
from .control import force_cmd, recovery_cmd, shadowing_cmd
from .filters import LowPassState, SetPointFilterState, lowpass_step, spf_init, spf_step
from .metrics import MetricsReport, compute_metrics
from .model import (ModelParams, NonFiniteState, PlantState, SpringMode,
                    accel_bound, damping_bound, modified_gravity, robot_accel)
from .scenario import Scenario
from .sensors import SensorRig
from .supervise import Mode, SupervisorState, monitor_constraints, supervisor_step
from .telemetry import TelemetryRecord
from .waveforms import StepSchedule

_NAN = float("nan")


@dataclass
class RunResult:
    telemetry: list[TelemetryRecord]
    metrics: MetricsReport
    supervisor: SupervisorState


def _fext_kernel_args(f_ext, t: float) -> tuple[int, float, float, float, float, float]:
    """Map the scenario's external-force source onto kernel arguments.

    Step schedules are sampled at the tick start and held (references
    change at the controller rate); sine waveforms are evaluated inside
    the kernel at the RK4 stage times.
    """
    if f_ext is None:
        return (0, 0.0, 0.0, 0.0, 0.0, 0.0)
    if isinstance(f_ext, StepSchedule):
        return (1, f_ext.value(t), 0.0, 0.0, 0.0, 0.0)
    if f_ext.kind == "sine":
        return (3, 0.0, f_ext.amplitude, 2.0 * math.pi * f_ext.frequency,
                f_ext.phase, f_ext.offset)
    return (1, f_ext.offset, 0.0, 0.0, 0.0, 0.0)


def _fext_value(f_ext, t: float) -> float:
    if f_ext is None:
        return 0.0
    return f_ext.value(t)


def run(sc: Scenario) -> RunResult:
    """Execute a scenario; returns telemetry, metrics and the final
    supervisor state.

    Raises NonFiniteState if the integrator blows up; the partial
    telemetry (closed by an ``error:nonfinite`` row) is attached to the
    exception as ``exc.telemetry``.
    """
    sc.validate()
    params: ModelParams = sc.params
    smode: SpringMode = sc.spring_mode
    F_g = modified_gravity(params)
    scripted = sc.robot_drive == "scripted"
    wave = sc.robot_wave
    dt = sc.dt_control
    h = sc.dt_physics
    n_ticks = sc.n_ticks()
    n_sub = sc.n_substeps()

    state = PlantState(
        t=0.0,
        y_r=wave.value(0.0) if scripted else sc.robot_y0,
        v_r=wave.rate(0.0) if scripted else sc.robot_v0,
        y_p=sc.planarizer_y0(),
        v_p=sc.plan_v0,
    )
    rig = SensorRig(sc.sensors, params, smode)
    f_filt: LowPassState | None = None
    sup = SupervisorState(mode=sc.initial_mode)
    failure_cfg = sc.failure_config()
    spf: SetPointFilterState | None = None
    spf_target = _NAN
    hold_entry_t: float | None = None
    lowered = False
    bound = accel_bound(params, damping_bound(params.b, sc.rec_dv_max))
    lag_alpha = (math.exp(-h / params.motor_lag_tau)
                 if params.motor_lag_tau > 0.0 else -1.0)
    ground_on = sc.ground_height is not None
    ground_y = sc.ground_height if ground_on else 0.0

    rows: list[TelemetryRecord] = []
    pending_events: list[str] = []

    for k in range(n_ticks + 1):
        t = k * dt
        if scripted:
            state.y_r = wave.value(t)
            state.v_r = wave.rate(t)
        state.t = t

        readings = rig.sample(state, dt)
        if f_filt is None:
            # seed the force filter at the first sample; avoids a fake
            # startup transient in the force-step metrics
            f_filt = LowPassState(readings.F_raw, sc.force.omega_c)
        else:
            f_filt = lowpass_step(f_filt, readings.F_raw, dt)

        heights = [(nm, fn(state.y_r)) for nm, fn in failure_cfg.monitored_points]
        if (sc.inject_time is not None and sc.inject_kind == "ground"
                and t >= sc.inject_time):
            heights = [(nm, hgt - sc.inject_dip if nm == sc.inject_point else hgt)
                       for nm, hgt in heights]
        angles = []
        for nm, (lo, hi) in sc.failure_joints.items():
            a = 0.5 * (lo + hi)
            if (sc.inject_time is not None and sc.inject_kind == "joint"
                    and nm == sc.inject_joint and t >= sc.inject_time):
                a = hi + 0.2
            angles.append((nm, a))
        aux = {"point_heights": heights, "joint_angles": angles}

        traj = (spf.y_des, spf.v_des, spf_target) if spf is not None else None
        prev_mode = sup.mode
        sup, actions = supervisor_step(sup, readings, aux, failure_cfg, t, traj)

        events = pending_events
        pending_events = []
        if actions.init_spf is not None:
            y0, v0 = actions.init_spf
            spf = spf_init(y0, v0, sc.rec_tau, sc.rec_v_max, sc.rec_a_max)
            spf_target = readings.y_r_meas + sc.recovery_lift()
            events.append(f"failure:{sup.failure_cause.value}")
        if actions.freeze_spf and spf is not None:
            spf = replace(spf, y_des=spf_target, v_des=0.0)
            hold_entry_t = t
        if sup.mode is not prev_mode:
            events.append(f"mode:{sup.mode.value}")

        if (sup.mode is Mode.HOLD and sc.hold_lower_offset is not None
                and not lowered and hold_entry_t is not None
                and t >= hold_entry_t + sc.hold_lower_delay):
            spf_target = spf_target - sc.hold_lower_offset
            lowered = True
            events.append("hold:lower")

        if sup.mode is Mode.SHADOWING:
            cmd = shadowing_cmd(readings.y_r_meas, readings.v_r_est,
                                readings.y_p_meas, sc.shadow)
        elif sup.mode is Mode.FORCE_CONTROL:
            cmd = force_cmd(f_filt.y, sc.f_des.value(t), readings.v_r_est, sc.force)
        else:
            cmd = recovery_cmd(spf.y_des, spf.v_des, readings.y_p_meas, sc.recovery)

        if scripted:
            accel_now = wave.accel(t)
        else:
            accel_now = robot_accel(state, _fext_value(sc.f_ext, t), params, smode)
            if (ground_on and state.y_r <= ground_y and state.v_r <= 0.0
                    and accel_now < 0.0):
                accel_now = 0.0
        n_viol = len(sup.violations)
        sup = monitor_constraints(state, accel_now, params, bound, sup, smode)
        for vt, kind, _ in sup.violations[n_viol:]:
            events.append(f"violation:{kind}")

        dy = state.deflection()
        f_sp = backend.active.spring_force_scalar(
            dy, state.deflection_rate(), params.k, params.b, params.epsilon,
            smode is SpringMode.CORRECTED)
        rows.append(TelemetryRecord(
            t=t, y_r=state.y_r, v_r=state.v_r, y_p=state.y_p, v_p=state.v_p,
            dy=dy, F_sp=f_sp, F_raw=readings.F_raw, F_filt=f_filt.y,
            v_motor_cmd=cmd, mode=sup.mode.value,
            y_des=spf.y_des if spf is not None else _NAN,
            v_des=spf.v_des if spf is not None else _NAN,
            event=";".join(events),
        ))
        if k == n_ticks:
            break

        if spf is not None and (sup.mode is Mode.RECOVERY
                                or (sup.mode is Mode.HOLD and lowered)):
            spf = spf_step(spf, spf_target, dt)

        if scripted:
            v_t = min(max(cmd, -params.v_motor_max), params.v_motor_max)
            if params.motor_lag_tau > 0.0:
                alpha = math.exp(-dt / params.motor_lag_tau)
                state.v_p = v_t + (state.v_p - v_t) * alpha
            else:
                state.v_p = v_t
            state.y_p += state.v_p * dt
            if state.y_p < 0.0:
                state.y_p = 0.0
                pending_events.append("travel:lo")
            elif state.y_p > params.y_travel:
                state.y_p = params.y_travel
                pending_events.append("travel:hi")
        else:
            fe = _fext_kernel_args(sc.f_ext, t)
            y_r, v_r, y_p, v_p, flags = backend.active.advance_tick(
                state.y_r, state.v_r, state.y_p, state.v_p, t,
                cmd, n_sub, h,
                params.M, F_g, params.k, params.b, params.epsilon,
                smode is SpringMode.CORRECTED,
                params.v_motor_max, lag_alpha,
                fe[0], fe[1], fe[2], fe[3], fe[4], fe[5],
                ground_on, ground_y,
                0.0, params.y_travel,
            )
            state.y_r, state.v_r, state.y_p, state.v_p = y_r, v_r, y_p, v_p
            if flags & backend.active.FLAG_TRAVEL_LO:
                pending_events.append("travel:lo")
            if flags & backend.active.FLAG_TRAVEL_HI:
                pending_events.append("travel:hi")
            if flags & backend.active.FLAG_NONFINITE:
                rows.append(TelemetryRecord(
                    t=(k + 1) * dt, y_r=y_r, v_r=v_r, y_p=y_p, v_p=v_p,
                    dy=_NAN, F_sp=_NAN, F_raw=_NAN, F_filt=f_filt.y,
                    v_motor_cmd=cmd, mode=sup.mode.value,
                    y_des=_NAN, v_des=_NAN, event="error:nonfinite"))
                err = NonFiniteState(
                    f"integrator produced a non-finite state near t={(k + 1) * dt:.6g}")
                err.telemetry = rows
                err.supervisor = sup
                raise err

    return RunResult(rows, compute_metrics(rows, sc), sup)
