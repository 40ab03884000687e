# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled integrator kernel.

Arithmetic twin of ``_pure.advance_tick``; the two must stay in sync
operation for operation (the backend equivalence tests compare them
bit for bit). Compiled with -ffp-contract=off so the C code rounds
exactly like CPython float arithmetic.
"""

from libc.math cimport sin, isfinite

BACKEND_NAME = "compiled"

FLAG_NONFINITE = 1
FLAG_TRAVEL_LO = 2
FLAG_TRAVEL_HI = 4
FLAG_ON_GROUND = 8

FEXT_NONE = 0
FEXT_CONST = 1
FEXT_SINE = 3


cdef inline double _spring(double dy, double dv, double k, double b,
                           double eps, bint corrected) nogil:
    cdef double u, blend
    if dy > 0.0:
        return k * dy + b * dv
    if dy >= -eps:
        u = dy / eps
        blend = 1.0 - 2.0 * (u * u * u) - 3.0 * (u * u)
        if corrected:
            return b * blend * dv
        return k * dy - b * blend * dv
    return 0.0


cdef inline double _fext(double t, int fe_kind, double fe_c, double fe_amp,
                         double fe_omega, double fe_phase, double fe_offset) nogil:
    if fe_kind == 1:
        return fe_c
    if fe_kind == 3:
        return fe_offset + fe_amp * sin(fe_omega * t + fe_phase)
    return 0.0


def spring_force_scalar(double dy, double dv, double k, double b,
                        double eps, bint corrected):
    """See _pure.spring_force_scalar."""
    return _spring(dy, dv, k, b, eps, corrected)


def spring_elastic_scalar(double dy, double k, double eps, bint corrected):
    """See _pure.spring_elastic_scalar."""
    if dy > 0.0:
        return k * dy
    if not corrected and dy >= -eps:
        return k * dy
    return 0.0


def fext_eval(double t, int fe_kind, double fe_c, double fe_amp,
              double fe_omega, double fe_phase, double fe_offset):
    """See _pure.fext_eval."""
    return _fext(t, fe_kind, fe_c, fe_amp, fe_omega, fe_phase, fe_offset)


def advance_tick(
    double y_r, double v_r, double y_p, double v_p, double t0,
    double v_cmd, int n_sub, double h,
    double M, double F_g, double k, double b, double eps, bint corrected,
    double v_limit, double lag_alpha,
    int fe_kind, double fe_c, double fe_amp, double fe_omega,
    double fe_phase, double fe_offset,
    bint ground_on, double ground_y,
    double travel_lo, double travel_hi,
):
    """See _pure.advance_tick for the contract."""
    cdef int flags = 0
    cdef int j
    cdef double v_target = v_cmd
    cdef double half, sixth, t_base, dy, dv, a
    cdef double k1y, k1v, k2y, k2v, k3y, k3v, k4y, k4v
    cdef double yr2, vr2, yr3, vr3, yr4, vr4

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
        a = (_spring(dy, dv, k, b, eps, corrected)
             + _fext(t_base, fe_kind, fe_c, fe_amp, fe_omega, fe_phase, fe_offset)
             - F_g) / M
        k1y = v_r
        k1v = a

        # stage 2 (s = h/2)
        yr2 = y_r + half * k1y
        vr2 = v_r + half * k1v
        dy = (y_p + v_p * half) - yr2
        dv = v_p - vr2
        a = (_spring(dy, dv, k, b, eps, corrected)
             + _fext(t_base + half, fe_kind, fe_c, fe_amp, fe_omega, fe_phase, fe_offset)
             - F_g) / M
        k2y = vr2
        k2v = a

        # stage 3 (s = h/2)
        yr3 = y_r + half * k2y
        vr3 = v_r + half * k2v
        dy = (y_p + v_p * half) - yr3
        dv = v_p - vr3
        a = (_spring(dy, dv, k, b, eps, corrected)
             + _fext(t_base + half, fe_kind, fe_c, fe_amp, fe_omega, fe_phase, fe_offset)
             - F_g) / M
        k3y = vr3
        k3v = a

        # stage 4 (s = h)
        yr4 = y_r + h * k3y
        vr4 = v_r + h * k3v
        dy = (y_p + v_p * h) - yr4
        dv = v_p - vr4
        a = (_spring(dy, dv, k, b, eps, corrected)
             + _fext(t_base + h, fe_kind, fe_c, fe_amp, fe_omega, fe_phase, fe_offset)
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

        if not (isfinite(y_r) and isfinite(v_r) and isfinite(y_p)):
            flags |= FLAG_NONFINITE
            break

    if ground_on and y_r <= ground_y:
        flags |= FLAG_ON_GROUND
    return y_r, v_r, y_p, v_p, flags
