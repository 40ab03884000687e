"""Failure detection, mode state machine, and runtime constraint monitor.

Mode flow is one-way within a run:

    Shadowing | ForceControl  -->  Recovery  -->  Hold

A failure latches once (cause, time) and never clears; resetting is a
new run. Halting of the robot motors is tied to the latch: halted is
true exactly in Recovery and Hold.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Callable

from .model import ModelParams, PlantState, SpringMode, spring_force
from .sensors import SensorReadings


class Mode(Enum):
    SHADOWING = "shadowing"
    FORCE_CONTROL = "force"
    RECOVERY = "recovery"
    HOLD = "hold"


class FailureCause(Enum):
    GROUND_PROXIMITY = "ground_proximity"
    JOINT_FAULT = "joint_fault"


class EmptyPointList(ValueError):
    """Ground-proximity check called with no monitored points."""


class UnknownJoint(KeyError):
    """A reported joint angle has no configured safe range."""


@dataclass
class FailureConfig:
    """What counts as a failure.

    monitored_points maps each named point to a function from robot
    height to point height, so a real kinematic model can replace the
    scripted constant offsets used by the scenario harness.
    """

    monitored_points: list[tuple[str, Callable[[float], float]]]
    min_height: float = 0.05
    joint_limits: dict[str, tuple[float, float]] = field(default_factory=dict)
    # Source of the trajectory-generator initialization at the switch to
    # recovery: the planarizer state (the signal the recovery controller
    # regulates, default) or the robot state.
    spf_init_source: str = "planarizer"

    def validate(self) -> None:
        if not self.monitored_points:
            raise ValueError("require at least one monitored point")
        if self.min_height < 0.0:
            raise ValueError("require min_height >= 0")
        for name, (lo, hi) in self.joint_limits.items():
            if not lo < hi:
                raise ValueError(f"joint {name!r}: require low < high")
        if self.spf_init_source not in ("planarizer", "robot"):
            raise ValueError("spf_init_source must be 'planarizer' or 'robot'")


@dataclass
class SupervisorState:
    mode: Mode = Mode.SHADOWING
    failure_cause: FailureCause | None = None
    failure_time: float | None = None
    robot_motors_halted: bool = False
    violations: list[tuple[float, str, float]] = field(default_factory=list)
    # Set once the spring first engages during recovery; scopes the
    # lift-off (dy <= 0) violation check.
    engaged_seen: bool = False


@dataclass
class SupervisorActions:
    """Side effects the harness must apply for this tick."""

    active_mode: Mode
    halt_robot: bool = False
    init_spf: tuple[float, float] | None = None  # (y0, v0)
    freeze_spf: bool = False  # entering Hold: pin y_des at the target


def check_ground_failure(point_heights: list[float], min_height: float) -> bool:
    """True iff the lowest monitored point is strictly below min_height."""
    if not point_heights:
        raise EmptyPointList("no monitored point heights supplied")
    return min(point_heights) < min_height


def check_joint_fault(joint_angles: list[tuple[str, float]],
                      cfg: FailureConfig) -> bool:
    """True iff any joint angle is outside its configured safe range."""
    for name, angle in joint_angles:
        if name not in cfg.joint_limits:
            raise UnknownJoint(name)
        lo, hi = cfg.joint_limits[name]
        if angle < lo or angle > hi:
            return True
    return False


# Hold is entered once the generated trajectory has converged.
HOLD_POS_TOL = 1e-3   # m
HOLD_VEL_TOL = 1e-3   # m/s


def supervisor_step(
    sup: SupervisorState,
    readings: SensorReadings,
    aux_signals: dict,
    cfg: FailureConfig,
    t: float,
    traj: tuple[float, float, float] | None = None,
) -> tuple[SupervisorState, SupervisorActions]:
    """One supervisor decision per control tick.

    aux_signals carries the evaluated monitored-point heights and joint
    angles: {"point_heights": [(name, m), ...], "joint_angles":
    [(name, rad), ...]}. traj is (y_des, v_des, target) while a recovery
    trajectory is active. Failures are checked only in the two normal
    operating modes; ground proximity wins a same-tick tie with a joint
    fault (both imply identical actions).
    """
    if sup.mode in (Mode.SHADOWING, Mode.FORCE_CONTROL):
        heights = [h for _, h in aux_signals.get("point_heights", [])]
        angles = aux_signals.get("joint_angles", [])
        cause = None
        if heights and check_ground_failure(heights, cfg.min_height):
            cause = FailureCause.GROUND_PROXIMITY
        elif angles and check_joint_fault(angles, cfg):
            cause = FailureCause.JOINT_FAULT
        if cause is not None:
            new = replace(
                sup,
                mode=Mode.RECOVERY,
                failure_cause=cause,
                failure_time=t,
                robot_motors_halted=True,
                violations=list(sup.violations),
            )
            if cfg.spf_init_source == "robot":
                init = (readings.y_r_meas, readings.v_r_est)
            else:
                init = (readings.y_p_meas, readings.v_p_est)
            return new, SupervisorActions(Mode.RECOVERY, halt_robot=True, init_spf=init)
        return sup, SupervisorActions(sup.mode)

    if sup.mode is Mode.RECOVERY and traj is not None:
        y_des, v_des, target = traj
        if abs(y_des - target) < HOLD_POS_TOL and abs(v_des) < HOLD_VEL_TOL:
            new = replace(sup, mode=Mode.HOLD, violations=list(sup.violations))
            return new, SupervisorActions(Mode.HOLD, freeze_spf=True)

    return sup, SupervisorActions(sup.mode)


def monitor_constraints(
    state: PlantState,
    accel_r: float,
    params: ModelParams,
    bound: float,
    sup: SupervisorState,
    mode: SpringMode = SpringMode.CORRECTED,
) -> SupervisorState:
    """Append constraint-violation records; never takes control action.

    While in Recovery: the robot acceleration must stay above `bound`
    (from accel_bound), and once the spring has engaged the deflection
    must stay positive (otherwise the robot lifted off the spring). The
    cable force limit is monitored in every mode.
    """
    sup = replace(sup, violations=list(sup.violations))
    dy = state.deflection()
    f_sp = spring_force(dy, state.deflection_rate(), params, mode)

    if f_sp > params.F_cable_max:
        sup.violations.append((state.t, "cable_force", f_sp))

    if sup.mode is Mode.RECOVERY:
        if accel_r <= bound:
            sup.violations.append((state.t, "accel_bound", accel_r))
        if dy > 0.0 and not sup.engaged_seen:
            sup.engaged_seen = True
        elif sup.engaged_seen and dy <= 0.0:
            sup.violations.append((state.t, "liftoff", dy))
    return sup
