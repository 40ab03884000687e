"""Discrete-time signal blocks used by the controllers.

All blocks are pure state-transition functions: they take a state value
and return a new one, so the caller owns the state and instances can run
in parallel freely.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace


@dataclass
class LowPassState:
    """First-order low-pass filter state; y is the filtered value."""

    y: float = 0.0
    omega_c: float = 100.0  # cutoff (rad/s)


def lowpass_step(state: LowPassState, value: float, dt: float) -> LowPassState:
    """One filter update over dt using the exact zero-order-hold form.

    y <- y + (1 - exp(-omega_c*dt)) * (value - y). Exact discretization
    keeps the filter unconditionally stable and step-invariant at any
    rate, unlike a Tustin or forward-Euler map.
    """
    if dt <= 0.0:
        raise ValueError("require dt > 0")
    alpha = 1.0 - math.exp(-state.omega_c * dt)
    return replace(state, y=state.y + alpha * (value - state.y))


@dataclass
class SetPointFilterState:
    """Nonlinear set-point filter (trajectory generator) state.

    A critically damped second-order reference shaper with the internal
    gains k = 1/tau^2, b = 2/tau, plus saturation of the acceleration
    before the velocity integrator and of the velocity before the
    position integrator. The cascade ordering makes both limits hold
    exactly in discrete time.
    """

    y_des: float
    v_des: float
    tau: float
    v_max: float
    a_max: float

    @property
    def k(self) -> float:
        return 1.0 / (self.tau * self.tau)

    @property
    def b(self) -> float:
        return 2.0 / self.tau


def spf_init(y0: float, v0: float, tau: float, v_max: float,
             a_max: float) -> SetPointFilterState:
    """Initialize the trajectory generator at (y0, v0).

    v0 is stored unclamped even if |v0| > v_max, so the generated
    trajectory starts exactly from the handed-over motion (bumpless
    transfer); the velocity limit takes hold on the first step.
    """
    if tau <= 0.0 or v_max <= 0.0 or a_max <= 0.0:
        raise ValueError("require tau, v_max, a_max > 0")
    return SetPointFilterState(y_des=y0, v_des=v0, tau=tau, v_max=v_max, a_max=a_max)


def spf_step(state: SetPointFilterState, y_in: float, dt: float) -> SetPointFilterState:
    """Advance the set-point filter one step toward the target y_in."""
    if dt <= 0.0:
        raise ValueError("require dt > 0")
    a = state.k * (y_in - state.y_des) - state.b * state.v_des
    a = min(max(a, -state.a_max), state.a_max)
    v = state.v_des + a * dt
    v = min(max(v, -state.v_max), state.v_max)
    return replace(state, v_des=v, y_des=state.y_des + v * dt)


def velocity_estimate(prev_pos: float, curr_pos: float, dt: float,
                      filt: LowPassState) -> tuple[float, LowPassState]:
    """Backward-difference velocity estimate smoothed by a low-pass.

    Encoder quantization turns the raw difference into a noisy staircase;
    the filter cutoff (default 200 rad/s in SensorConfig) trades that
    noise against estimator lag.
    """
    if dt <= 0.0:
        raise ValueError("require dt > 0")
    raw = (curr_pos - prev_pos) / dt
    filt = lowpass_step(filt, raw, dt)
    return filt.y, filt
