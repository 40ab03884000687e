"""Sensor models: incremental encoders, load cell, velocity estimators."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import backend
from .filters import LowPassState, velocity_estimate
from .model import ModelParams, PlantState, SpringMode


@dataclass(frozen=True)
class SensorConfig:
    encoder_resolution: float = 1e-5        # position quantization step (m)
    loadcell_noise_std: float = 0.0         # additive Gaussian noise (N)
    velocity_estimator_cutoff: float = 200.0  # rad/s
    rng_seed: int = 0
    # The default cell model reads the elastic cable tension k*dy only.
    # Including the damping term feeds the commanded motor velocity
    # straight through to the measurement, which roughly halves the
    # closed-loop force bandwidth; see README "Load-cell model".
    loadcell_includes_damping: bool = False

    def validate(self) -> None:
        if self.encoder_resolution < 0.0:
            raise ValueError("require encoder_resolution >= 0")
        if self.loadcell_noise_std < 0.0:
            raise ValueError("require loadcell_noise_std >= 0")
        if self.velocity_estimator_cutoff <= 0.0:
            raise ValueError("require velocity_estimator_cutoff > 0")


@dataclass
class SensorReadings:
    y_r_meas: float
    y_p_meas: float
    v_r_est: float
    v_p_est: float
    F_raw: float


def quantize_floor(x: float, resolution: float) -> float:
    """Quantize toward negative infinity, matching an incremental encoder."""
    if resolution <= 0.0:
        return x
    return math.floor(x / resolution) * resolution


class SensorRig:
    """Stateful sensor bank for one simulation run.

    Owns the seeded noise generator and the two velocity-estimator
    states. Deterministic: the same seed and the same sample sequence
    reproduce bit-identical readings.
    """

    def __init__(self, cfg: SensorConfig, params: ModelParams,
                 mode: SpringMode = SpringMode.CORRECTED):
        cfg.validate()
        self.cfg = cfg
        self.params = params
        self.mode = mode
        self.rng = np.random.Generator(np.random.PCG64(cfg.rng_seed))
        self._v_r_filt = LowPassState(0.0, cfg.velocity_estimator_cutoff)
        self._v_p_filt = LowPassState(0.0, cfg.velocity_estimator_cutoff)
        self._prev_y_r: float | None = None
        self._prev_y_p: float | None = None

    def sample(self, state: PlantState, dt: float) -> SensorReadings:
        cfg = self.cfg
        y_r_meas = quantize_floor(state.y_r, cfg.encoder_resolution)
        y_p_meas = quantize_floor(state.y_p, cfg.encoder_resolution)

        prev_r = y_r_meas if self._prev_y_r is None else self._prev_y_r
        prev_p = y_p_meas if self._prev_y_p is None else self._prev_y_p
        v_r_est, self._v_r_filt = velocity_estimate(prev_r, y_r_meas, dt, self._v_r_filt)
        v_p_est, self._v_p_filt = velocity_estimate(prev_p, y_p_meas, dt, self._v_p_filt)
        self._prev_y_r = y_r_meas
        self._prev_y_p = y_p_meas

        p = self.params
        corrected = self.mode is SpringMode.CORRECTED
        dy = state.deflection()
        if cfg.loadcell_includes_damping:
            F = backend.active.spring_force_scalar(
                dy, state.deflection_rate(), p.k, p.b, p.epsilon, corrected)
        else:
            F = backend.active.spring_elastic_scalar(dy, p.k, p.epsilon, corrected)
        if cfg.loadcell_noise_std > 0.0:
            F = F + cfg.loadcell_noise_std * self.rng.standard_normal()

        return SensorReadings(y_r_meas, y_p_meas, v_r_est, v_p_est, F)
