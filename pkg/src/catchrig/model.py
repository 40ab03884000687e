"""Plant model of the vertical support rig.

A point-mass robot hangs from a cable-driven planarizer slider through a
unidirectional spring-damper. The cable can only pull, so the element
produces force solely for positive deflection dy = y_p - y_r; a small
hanging counterweight keeps the slack side tensioned and shows up only
as a reduction of the gravitational load. The motor is modeled as an
ideal velocity source with hard saturation (optional first-order lag).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from enum import Enum
from typing import Callable

from . import backend


class SpringMode(Enum):
    """Constitutive-law variant for the blend region -eps <= dy <= 0.

    CORRECTED is the default: the damping blend enters with positive
    sign and the elastic term is zero for dy <= 0, which makes the force
    continuous at both region boundaries. VERBATIM keeps the alternate
    middle case (damping blend subtracted, elastic term running through
    the blend region), which is discontinuous at dy = 0 and dy = -eps;
    it exists for comparison studies only.
    """

    CORRECTED = "corrected"
    VERBATIM = "verbatim"


class NonFiniteState(RuntimeError):
    """A plant state component became non-finite (integrator blow-up)."""


@dataclass(frozen=True)
class ModelParams:
    """Physical constants of the plant, SI units."""

    M: float = 11.07            # robot mass (kg)
    M_h: float = 0.45           # hanging counterweight mass (kg)
    g: float = 9.81             # gravitational acceleration (m/s^2)
    k: float = 5250.0           # spring stiffness (N/m)
    b: float = 300.0            # spring damping (N*s/m)
    epsilon: float = 1e-3       # blend-region width (m)
    v_motor_max: float = 2.4    # planarizer velocity limit (m/s)
    F_cable_max: float = 500.0  # cable force limit, monitored only (N)
    y_travel: float = 0.9       # vertical travel limit (m)
    motor_lag_tau: float = 0.0  # first-order motor lag, 0 disables (s)

    def validate(self) -> None:
        if not (self.M > self.M_h > 0.0):
            raise ValueError("require M > M_h > 0")
        if self.k <= 0.0:
            raise ValueError("require k > 0")
        if self.b < 0.0:
            raise ValueError("require b >= 0")
        if self.epsilon <= 0.0:
            raise ValueError("require epsilon > 0")
        if self.v_motor_max <= 0.0:
            raise ValueError("require v_motor_max > 0")
        if self.motor_lag_tau < 0.0:
            raise ValueError("require motor_lag_tau >= 0")


@dataclass
class PlantState:
    """Continuous plant state at time t."""

    t: float = 0.0
    y_r: float = 0.0   # robot vertical position (m)
    v_r: float = 0.0   # robot vertical velocity (m/s)
    y_p: float = 0.0   # planarizer position, robot coordinates (m)
    v_p: float = 0.0   # planarizer velocity (m/s)

    def deflection(self) -> float:
        return self.y_p - self.y_r

    def deflection_rate(self) -> float:
        return self.v_p - self.v_r


def modified_gravity(params: ModelParams) -> float:
    """Net gravitational load g*(M - M_h) seen through the cable system."""
    return params.g * (params.M - params.M_h)


def spring_force(dy: float, dv: float, params: ModelParams,
                 mode: SpringMode = SpringMode.CORRECTED) -> float:
    """Cable/spring force on the robot for deflection dy and rate dv."""
    return backend.active.spring_force_scalar(
        dy, dv, params.k, params.b, params.epsilon, mode is SpringMode.CORRECTED)


def spring_force_components(dy: float, dv: float, params: ModelParams,
                            mode: SpringMode = SpringMode.CORRECTED) -> tuple[float, float]:
    """(elastic, damping) split of spring_force; the two sum to the total."""
    corrected = mode is SpringMode.CORRECTED
    elastic = backend.active.spring_elastic_scalar(dy, params.k, params.epsilon, corrected)
    total = backend.active.spring_force_scalar(dy, dv, params.k, params.b, params.epsilon, corrected)
    return elastic, total - elastic


def robot_accel(state: PlantState, F_ext: float, params: ModelParams,
                mode: SpringMode = SpringMode.CORRECTED) -> float:
    """Robot acceleration from the equation of motion.

    M*a = F_spring(dy, dv) + F_ext - g*(M - M_h), with F_ext the ground
    reaction on the robot's feet.
    """
    f_sp = spring_force(state.deflection(), state.deflection_rate(), params, mode)
    return (f_sp + F_ext - modified_gravity(params)) / params.M


def damping_bound(b: float, dv_max: float) -> float:
    """Upper bound b*dv_max on the damping force when |dv| <= dv_max."""
    if b < 0.0 or dv_max < 0.0:
        raise ValueError("require b >= 0 and dv_max >= 0")
    return b * dv_max


def accel_bound(params: ModelParams, B: float) -> float:
    """Lower robot-acceleration bound that keeps the spring engaged.

    While lifting with the cable taut (dy > 0, feet unloaded), the robot
    acceleration must stay above -g*(M - M_h)/M + B/M, where B bounds the
    damping force; below it the robot would lift off the spring.
    """
    if B < 0.0:
        raise ValueError("require B >= 0")
    return -modified_gravity(params) / params.M + B / params.M


def step_physics(state: PlantState, v_motor_cmd: float,
                 F_ext_fn: Callable[[float], float], dt: float,
                 params: ModelParams,
                 mode: SpringMode = SpringMode.CORRECTED) -> PlantState:
    """Advance the plant by one classical RK4 step of size dt.

    The motor command is clamped to +-v_motor_max and held for the step;
    y_p is integrated exactly (piecewise-constant v_p). F_ext_fn is
    evaluated at the three RK4 stage times. dt must be positive and at
    most 1 ms: the spring natural frequency (~22 rad/s at defaults)
    needs no finer step, and coarser steps interact badly with the
    blend-region width.

    Raises NonFiniteState if the new state is not finite.
    """
    if not (0.0 < dt <= 1e-3):
        raise ValueError("require 0 < dt <= 1e-3 s")

    v_target = min(max(v_motor_cmd, -params.v_motor_max), params.v_motor_max)
    if params.motor_lag_tau > 0.0:
        lag = math.exp(-dt / params.motor_lag_tau)
        v_p = v_target + (state.v_p - v_target) * lag
    else:
        v_p = v_target

    fe0 = F_ext_fn(state.t)
    fe1 = F_ext_fn(state.t + 0.5 * dt)
    fe2 = F_ext_fn(state.t + dt)

    corrected = mode is SpringMode.CORRECTED
    k, b, eps = params.k, params.b, params.epsilon
    F_g = modified_gravity(params)
    spring = backend.active.spring_force_scalar

    def accel(yr, vr, y_p_s, fe):
        return (spring(y_p_s - yr, v_p - vr, k, b, eps, corrected) + fe - F_g) / params.M

    h = dt
    half = 0.5 * h
    y_r, v_r, y_p = state.y_r, state.v_r, state.y_p
    k1y, k1v = v_r, accel(y_r, v_r, y_p, fe0)
    k2y = v_r + half * k1v
    k2v = accel(y_r + half * k1y, k2y, y_p + v_p * half, fe1)
    k3y = v_r + half * k2v
    k3v = accel(y_r + half * k2y, k3y, y_p + v_p * half, fe1)
    k4y = v_r + h * k3v
    k4v = accel(y_r + h * k3y, k4y, y_p + v_p * h, fe2)

    new = replace(
        state,
        t=state.t + dt,
        y_r=y_r + h / 6.0 * (k1y + 2.0 * k2y + 2.0 * k3y + k4y),
        v_r=v_r + h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v),
        y_p=y_p + v_p * h,
        v_p=v_p,
    )
    if not all(map(math.isfinite, (new.y_r, new.v_r, new.y_p, new.v_p))):
        raise NonFiniteState(f"state non-finite at t={new.t}")
    return new
