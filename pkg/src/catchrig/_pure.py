"""Pure-Python twin of the compiled integrator kernel.

``advance_tick`` advances the plant over one control tick (``n_sub``
fixed RK4 substeps with the motor command held). The arithmetic is kept
operation-for-operation identical to ``_kernel.pyx`` so both backends
produce bit-identical trajectories; keep the two files in sync.
"""

from __future__ import annotations

import math

BACKEND_NAME = "pure"

FLAG_NONFINITE = 1
FLAG_TRAVEL_LO = 2
FLAG_TRAVEL_HI = 4
FLAG_ON_GROUND = 8

FEXT_NONE = 0
FEXT_CONST = 1
FEXT_SINE = 3


def spring_force_scalar(dy, dv, k, b, eps, corrected):
    """Unidirectional spring-damper force for deflection dy and rate dv.

    corrected=True uses the continuous blend (damping only, elastic term
    zero for dy <= 0); corrected=False keeps the alternate discontinuous
    form (elastic term kept, blended damping subtracted).
    """
    if dy > 0.0:
        return k * dy + b * dv
    if dy >= -eps:
        u = dy / eps
        blend = 1.0 - 2.0 * (u * u * u) - 3.0 * (u * u)
        if corrected:
            return b * blend * dv
        return k * dy - b * blend * dv
    return 0.0


def spring_elastic_scalar(dy, k, eps, corrected):
    """Elastic component of the spring force (what an idealized load cell
    on the cable reads; see SensorConfig.loadcell_includes_damping)."""
    if dy > 0.0:
        return k * dy
    if not corrected and dy >= -eps:
        return k * dy
    return 0.0


def fext_eval(t, fe_kind, fe_c, fe_amp, fe_omega, fe_phase, fe_offset):
    """External-force waveform used inside the kernel (none/const/sine)."""
    if fe_kind == FEXT_CONST:
        return fe_c
    if fe_kind == FEXT_SINE:
        return fe_offset + fe_amp * math.sin(fe_omega * t + fe_phase)
    return 0.0


def advance_tick(
    y_r, v_r, y_p, v_p, t0,
    v_cmd, n_sub, h,
    M, F_g, k, b, eps, corrected,
    v_limit, lag_alpha,
    fe_kind, fe_c, fe_amp, fe_omega, fe_phase, fe_offset,
    ground_on, ground_y,
    travel_lo, travel_hi,
):
    """Advance (y_r, v_r, y_p, v_p) by n_sub RK4 substeps of size h.

    The motor is a saturated velocity source: v_cmd is clamped to
    +-v_limit and, when lag_alpha >= 0, v_p relaxes toward the clamped
    command by that factor once per substep (alpha = exp(-h/tau),
    precomputed by the caller). The planarizer position is integrated
    exactly, piecewise constant v_p per substep; only the robot states
    go through RK4. Ground contact is a unilateral projection applied
    after each substep (resting contact, inelastic landing).

    Returns (y_r, v_r, y_p, v_p, flags).
    """
    flags = 0
    v_target = v_cmd
    if v_target > v_limit:
        v_target = v_limit
    elif v_target < -v_limit:
        v_target = -v_limit

    half = 0.5 * h
    sixth = h / 6.0

    for j in range(n_sub):
        if lag_alpha >= 0.0:
            v_p = v_target + (v_p - v_target) * lag_alpha
        else:
            v_p = v_target
        t_base = t0 + j * h

        # stage 1 (s = 0)
        dy = y_p - y_r
        dv = v_p - v_r
        a = (spring_force_scalar(dy, dv, k, b, eps, corrected)
             + fext_eval(t_base, fe_kind, fe_c, fe_amp, fe_omega, fe_phase, fe_offset)
             - F_g) / M
        k1y = v_r
        k1v = a

        # stage 2 (s = h/2)
        yr2 = y_r + half * k1y
        vr2 = v_r + half * k1v
        dy = (y_p + v_p * half) - yr2
        dv = v_p - vr2
        a = (spring_force_scalar(dy, dv, k, b, eps, corrected)
             + fext_eval(t_base + half, fe_kind, fe_c, fe_amp, fe_omega, fe_phase, fe_offset)
             - F_g) / M
        k2y = vr2
        k2v = a

        # stage 3 (s = h/2)
        yr3 = y_r + half * k2y
        vr3 = v_r + half * k2v
        dy = (y_p + v_p * half) - yr3
        dv = v_p - vr3
        a = (spring_force_scalar(dy, dv, k, b, eps, corrected)
             + fext_eval(t_base + half, fe_kind, fe_c, fe_amp, fe_omega, fe_phase, fe_offset)
             - F_g) / M
        k3y = vr3
        k3v = a

        # stage 4 (s = h)
        yr4 = y_r + h * k3y
        vr4 = v_r + h * k3v
        dy = (y_p + v_p * h) - yr4
        dv = v_p - vr4
        a = (spring_force_scalar(dy, dv, k, b, eps, corrected)
             + fext_eval(t_base + h, fe_kind, fe_c, fe_amp, fe_omega, fe_phase, fe_offset)
             - F_g) / M
        k4y = vr4
        k4v = a

        y_r = y_r + sixth * (k1y + 2.0 * k2y + 2.0 * k3y + k4y)
        v_r = v_r + sixth * (k1v + 2.0 * k2v + 2.0 * k3v + k4v)
        y_p = y_p + v_p * h

        if ground_on and y_r < ground_y:
            y_r = ground_y
            if v_r < 0.0:
                v_r = 0.0

        if y_p < travel_lo:
            y_p = travel_lo
            flags |= FLAG_TRAVEL_LO
        elif y_p > travel_hi:
            y_p = travel_hi
            flags |= FLAG_TRAVEL_HI
        if y_r < travel_lo:
            y_r = travel_lo
            flags |= FLAG_TRAVEL_LO
        elif y_r > travel_hi:
            y_r = travel_hi
            flags |= FLAG_TRAVEL_HI

        if not (math.isfinite(y_r) and math.isfinite(v_r) and math.isfinite(y_p)):
            flags |= FLAG_NONFINITE
            break

    if ground_on and y_r <= ground_y:
        flags |= FLAG_ON_GROUND
    return y_r, v_r, y_p, v_p, flags
