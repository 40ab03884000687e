"""The three planarizer control laws.

Each law maps measurements and references to a commanded planarizer
velocity. All are proportional with velocity feed-forward; none carry
integral action (overshoot) or derivative action (load-cell noise).
The commands are returned unsaturated so telemetry can show demanded
versus achievable velocity; the motor model applies the hard limit.
"""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class ShadowGains:
    d: float = 0.02     # offset below the robot (m)
    k_p: float = 5.0    # 1/s
    k_ff: float = 1.0


@dataclass(frozen=True)
class ForceGains:
    omega_c: float = 100.0  # force-filter cutoff (rad/s)
    k_p: float = 0.002      # m/(N*s)
    k_ff: float = 1.0


@dataclass(frozen=True)
class RecoveryGains:
    k_p: float = 5.0    # 1/s
    k_ff: float = 1.0
    safe_rise: float = 0.08  # robot rise that counts as clear of danger (m)


def shadowing_cmd(y_r_meas: float, v_r_est: float, y_p_meas: float,
                  g: ShadowGains) -> float:
    """Track the robot from a fixed distance d below it."""
    return g.k_p * (y_r_meas - g.d - y_p_meas) + g.k_ff * v_r_est


def force_cmd(F_filt: float, F_des: float, v_r_est: float,
              g: ForceGains) -> float:
    """Regulate the filtered cable force to F_des."""
    return g.k_p * (F_des - F_filt) + g.k_ff * v_r_est


def recovery_cmd(y_des: float, v_des: float, y_p_meas: float,
                 g: RecoveryGains) -> float:
    """Track the set-point-filter trajectory during a catch-and-lift."""
    return g.k_p * (y_des - y_p_meas) + g.k_ff * v_des
