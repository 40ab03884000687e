"""Declarative scenario files.

Line-oriented ``key = value`` schema with dotted sections, '#' comments,
unknown keys rejected. Example::

    name = force-steps
    duration = 4.0
    initial_mode = force
    robot.drive = scripted
    robot.waveform = constant
    robot.offset = 0.30
    planarizer.y0 = 0.3019047619
    f_des.steps = 0:10, 1:20, 2:50, 3:30

Every omitted key falls back to the stock rig values (masses, spring,
gains), so a minimal scenario only names what the experiment varies.
The full key list is documented in the README.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable

from .control import ForceGains, RecoveryGains, ShadowGains
from .model import ModelParams, SpringMode
from .sensors import SensorConfig
from .supervise import FailureConfig, Mode
from .waveforms import StepSchedule, Waveform


class ParseError(ValueError):
    """Malformed scenario text; carries the line number."""

    def __init__(self, lineno: int, message: str):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


class ValidationError(ValueError):
    """A parsed value violates a scenario constraint; names the field."""

    def __init__(self, fieldname: str, message: str):
        super().__init__(f"{fieldname}: {message}")
        self.field = fieldname


# ---------------------------------------------------------------- values

def _float(s: str) -> float:
    x = float(s)
    if not math.isfinite(x):
        raise ValueError("must be finite")
    return x


def _int(s: str) -> int:
    return int(s, 0)


def _bool(s: str) -> bool:
    v = s.lower()
    if v in ("true", "yes", "on", "1"):
        return True
    if v in ("false", "no", "off", "0"):
        return False
    raise ValueError(f"expected a boolean, got {s!r}")


def _str(s: str) -> str:
    return s


def _choice(*options: str) -> Callable[[str], str]:
    def parse(s: str) -> str:
        v = s.lower()
        if v not in options:
            raise ValueError(f"expected one of {options}, got {s!r}")
        return v
    return parse


def _steps(s: str) -> StepSchedule:
    times, values = [], []
    for item in s.split(","):
        item = item.strip()
        if not item:
            continue
        t, sep, v = item.partition(":")
        if not sep:
            raise ValueError(f"expected time:value, got {item!r}")
        times.append(_float(t))
        values.append(_float(v))
    sched = StepSchedule(tuple(times), tuple(values))
    sched.validate()
    return sched


def _points(s: str) -> list[tuple[str, float]]:
    out = []
    for item in s.split(","):
        item = item.strip()
        if not item:
            continue
        name, sep, off = item.partition(":")
        if not sep or not name.strip():
            raise ValueError(f"expected name:offset, got {item!r}")
        out.append((name.strip(), _float(off)))
    if not out:
        raise ValueError("expected at least one point")
    return out


def _joints(s: str) -> dict[str, tuple[float, float]]:
    out: dict[str, tuple[float, float]] = {}
    for item in s.split(","):
        item = item.strip()
        if not item:
            continue
        parts = item.split(":")
        if len(parts) != 3 or not parts[0].strip():
            raise ValueError(f"expected name:low:high, got {item!r}")
        out[parts[0].strip()] = (_float(parts[1]), _float(parts[2]))
    return out


_SCHEMA: dict[str, Callable[[str], object]] = {
    "name": _str,
    "duration": _float,
    "dt_control": _float,
    "dt_physics": _float,
    "seed": _int,
    "initial_mode": _choice("shadowing", "force"),
    "params.m": _float,
    "params.m_h": _float,
    "params.g": _float,
    "params.k": _float,
    "params.b": _float,
    "params.epsilon": _float,
    "params.v_motor_max": _float,
    "params.f_cable_max": _float,
    "params.y_travel": _float,
    "params.motor_lag_tau": _float,
    "sensors.encoder_resolution": _float,
    "sensors.loadcell_noise_std": _float,
    "sensors.velocity_cutoff": _float,
    "sensors.loadcell_includes_damping": _bool,
    "spring.mode": _choice("corrected", "verbatim"),
    "shadow.d": _float,
    "shadow.k_p": _float,
    "shadow.k_ff": _float,
    "force.omega_c": _float,
    "force.k_p": _float,
    "force.k_ff": _float,
    "recovery.k_p": _float,
    "recovery.k_ff": _float,
    "recovery.tau": _float,
    "recovery.v_max": _float,
    "recovery.a_max": _float,
    "recovery.safe_rise": _float,
    "recovery.lift": _float,
    "recovery.dv_max": _float,
    "recovery.init_from": _choice("planarizer", "robot"),
    "robot.drive": _choice("free", "scripted"),
    "robot.y0": _float,
    "robot.v0": _float,
    "robot.waveform": _choice("constant", "sine"),
    "robot.amplitude": _float,
    "robot.frequency": _float,
    "robot.phase": _float,
    "robot.offset": _float,
    "planarizer.y0": _float,
    "planarizer.v0": _float,
    "ground.height": _float,
    "f_ext.steps": _steps,
    "f_ext.waveform": _choice("constant", "sine"),
    "f_ext.amplitude": _float,
    "f_ext.frequency": _float,
    "f_ext.phase": _float,
    "f_ext.offset": _float,
    "f_des.steps": _steps,
    "failure.min_height": _float,
    "failure.points": _points,
    "failure.joints": _joints,
    "failure.inject_time": _float,
    "failure.inject_kind": _choice("ground", "joint"),
    "failure.inject_point": _str,
    "failure.inject_joint": _str,
    "failure.inject_dip": _float,
    "hold.lower_offset": _float,
    "hold.lower_delay": _float,
}

_DEFAULT_POINTS = [("knee_left", -0.05), ("knee_right", -0.05),
                   ("body_front", 0.12), ("body_rear", 0.12)]


@dataclass
class Scenario:
    name: str = "scenario"
    duration: float = 10.0
    dt_control: float = 1e-3
    dt_physics: float = 1e-4
    seed: int = 0
    initial_mode: Mode = Mode.SHADOWING
    params: ModelParams = field(default_factory=ModelParams)
    sensors: SensorConfig = field(default_factory=SensorConfig)
    spring_mode: SpringMode = SpringMode.CORRECTED
    shadow: ShadowGains = field(default_factory=ShadowGains)
    force: ForceGains = field(default_factory=ForceGains)
    recovery: RecoveryGains = field(default_factory=RecoveryGains)
    rec_tau: float = 0.0833
    rec_v_max: float = 0.5
    rec_a_max: float = 5.0
    rec_lift: float | None = None     # planarizer lift target; None -> safe_rise
    rec_dv_max: float = 0.1           # assumed |dv| bound for the monitor
    rec_init_from: str = "planarizer"
    robot_drive: str = "free"
    robot_y0: float = 0.3
    robot_v0: float = 0.0
    robot_wave: Waveform | None = None
    plan_y0: float | None = None      # None -> robot_y0 - shadow.d
    plan_v0: float = 0.0
    ground_height: float | None = None
    f_ext: StepSchedule | Waveform | None = None
    f_des: StepSchedule = field(default_factory=lambda: StepSchedule(
        (0.0, 1.0, 2.0, 3.0), (10.0, 20.0, 50.0, 30.0)))
    failure_points: list[tuple[str, float]] = field(
        default_factory=lambda: list(_DEFAULT_POINTS))
    failure_min_height: float = 0.05
    failure_joints: dict[str, tuple[float, float]] = field(default_factory=dict)
    inject_time: float | None = None
    inject_kind: str = "ground"
    inject_point: str | None = None
    inject_joint: str | None = None
    inject_dip: float = 1.0
    hold_lower_offset: float | None = None
    hold_lower_delay: float = 0.5

    # -- derived -----------------------------------------------------

    def n_ticks(self) -> int:
        # tolerate float division residue so e.g. 10/0.001 counts 10000
        return int(math.floor(self.duration / self.dt_control + 1e-9))

    def n_substeps(self) -> int:
        return int(round(self.dt_control / self.dt_physics))

    def initial_robot_height(self) -> float:
        if self.robot_drive == "scripted" and self.robot_wave is not None:
            return self.robot_wave.value(0.0)
        return self.robot_y0

    def planarizer_y0(self) -> float:
        if self.plan_y0 is not None:
            return self.plan_y0
        return self.initial_robot_height() - self.shadow.d

    def recovery_lift(self) -> float:
        return self.recovery.safe_rise if self.rec_lift is None else self.rec_lift

    def failure_config(self) -> FailureConfig:
        points = [(nm, (lambda off: lambda y_r: y_r + off)(off))
                  for nm, off in self.failure_points]
        return FailureConfig(
            monitored_points=points,
            min_height=self.failure_min_height,
            joint_limits=dict(self.failure_joints),
            spf_init_source=self.rec_init_from,
        )

    def validate(self) -> None:
        if self.duration <= 0.0:
            raise ValidationError("duration", "must be > 0")
        if self.dt_control <= 0.0:
            raise ValidationError("dt_control", "must be > 0")
        if not 0.0 < self.dt_physics <= 1e-3:
            raise ValidationError("dt_physics", "must be in (0, 1e-3] s")
        ratio = self.dt_control / self.dt_physics
        if abs(ratio - round(ratio)) > 1e-6 or round(ratio) < 1:
            raise ValidationError(
                "dt_control", "must be an integer multiple of dt_physics")
        try:
            self.params.validate()
        except ValueError as e:
            raise ValidationError("params", str(e)) from e
        try:
            self.sensors.validate()
        except ValueError as e:
            raise ValidationError("sensors", str(e)) from e
        if self.rec_tau <= 0 or self.rec_v_max <= 0 or self.rec_a_max <= 0:
            raise ValidationError("recovery", "tau, v_max, a_max must be > 0")
        if self.rec_dv_max < 0:
            raise ValidationError("recovery.dv_max", "must be >= 0")
        if self.robot_drive == "scripted":
            if self.robot_wave is None:
                raise ValidationError("robot.waveform",
                                      "scripted drive needs a waveform")
        if self.robot_wave is not None:
            try:
                self.robot_wave.validate()
            except ValueError as e:
                raise ValidationError("robot.waveform", str(e)) from e
        if isinstance(self.f_ext, Waveform):
            try:
                self.f_ext.validate()
            except ValueError as e:
                raise ValidationError("f_ext.waveform", str(e)) from e
        self.f_des.validate()
        try:
            self.failure_config().validate()
        except ValueError as e:
            raise ValidationError("failure", str(e)) from e
        if abs(self.plan_v0) > self.params.v_motor_max:
            raise ValidationError("planarizer.v0",
                                  "exceeds the motor velocity limit")
        if self.ground_height is not None and self.ground_height > self.robot_y0:
            raise ValidationError("ground.height",
                                  "robot starts below the ground plane")
        if self.inject_time is not None:
            if self.inject_kind == "ground":
                names = [nm for nm, _ in self.failure_points]
                if self.inject_point is None or self.inject_point not in names:
                    raise ValidationError(
                        "failure.inject_point",
                        f"must name one of the monitored points {names}")
            else:
                if (self.inject_joint is None
                        or self.inject_joint not in self.failure_joints):
                    raise ValidationError(
                        "failure.inject_joint",
                        "must name one of the configured joints")
        if self.hold_lower_offset is not None and self.hold_lower_offset <= 0:
            raise ValidationError("hold.lower_offset", "must be > 0")
        if self.hold_lower_delay < 0:
            raise ValidationError("hold.lower_delay", "must be >= 0")


def _build(raw: dict) -> Scenario:
    sc = Scenario()

    def take(key, default):
        return raw.pop(key, default)

    sc.name = take("name", sc.name)
    sc.duration = take("duration", sc.duration)
    sc.dt_control = take("dt_control", sc.dt_control)
    sc.dt_physics = take("dt_physics", sc.dt_physics)
    sc.seed = take("seed", sc.seed)
    mode = take("initial_mode", "shadowing")
    sc.initial_mode = Mode.SHADOWING if mode == "shadowing" else Mode.FORCE_CONTROL

    sc.params = ModelParams(
        M=take("params.m", 11.07),
        M_h=take("params.m_h", 0.45),
        g=take("params.g", 9.81),
        k=take("params.k", 5250.0),
        b=take("params.b", 300.0),
        epsilon=take("params.epsilon", 1e-3),
        v_motor_max=take("params.v_motor_max", 2.4),
        F_cable_max=take("params.f_cable_max", 500.0),
        y_travel=take("params.y_travel", 0.9),
        motor_lag_tau=take("params.motor_lag_tau", 0.0),
    )
    sc.sensors = SensorConfig(
        encoder_resolution=take("sensors.encoder_resolution", 1e-5),
        loadcell_noise_std=take("sensors.loadcell_noise_std", 0.0),
        velocity_estimator_cutoff=take("sensors.velocity_cutoff", 200.0),
        rng_seed=sc.seed,
        loadcell_includes_damping=take("sensors.loadcell_includes_damping", False),
    )
    sc.spring_mode = (SpringMode.CORRECTED
                      if take("spring.mode", "corrected") == "corrected"
                      else SpringMode.VERBATIM)
    sc.shadow = ShadowGains(
        d=take("shadow.d", 0.02),
        k_p=take("shadow.k_p", 5.0),
        k_ff=take("shadow.k_ff", 1.0),
    )
    sc.force = ForceGains(
        omega_c=take("force.omega_c", 100.0),
        k_p=take("force.k_p", 0.002),
        k_ff=take("force.k_ff", 1.0),
    )
    sc.recovery = RecoveryGains(
        k_p=take("recovery.k_p", 5.0),
        k_ff=take("recovery.k_ff", 1.0),
        safe_rise=take("recovery.safe_rise", 0.08),
    )
    sc.rec_tau = take("recovery.tau", 0.0833)
    sc.rec_v_max = take("recovery.v_max", 0.5)
    sc.rec_a_max = take("recovery.a_max", 5.0)
    sc.rec_lift = take("recovery.lift", None)
    sc.rec_dv_max = take("recovery.dv_max", 0.1)
    sc.rec_init_from = take("recovery.init_from", "planarizer")

    sc.robot_drive = take("robot.drive", "free")
    sc.robot_y0 = take("robot.y0", 0.3)
    sc.robot_v0 = take("robot.v0", 0.0)
    wave_kind = take("robot.waveform", None)
    if wave_kind is not None:
        sc.robot_wave = Waveform(
            kind=wave_kind,
            amplitude=take("robot.amplitude", 0.0),
            frequency=take("robot.frequency", 0.0),
            phase=take("robot.phase", 0.0),
            offset=take("robot.offset", sc.robot_y0),
        )
    sc.plan_y0 = take("planarizer.y0", None)
    sc.plan_v0 = take("planarizer.v0", 0.0)
    sc.ground_height = take("ground.height", None)

    fe_steps = take("f_ext.steps", None)
    fe_kind = take("f_ext.waveform", None)
    if fe_steps is not None and fe_kind is not None:
        raise ValidationError("f_ext", "give either steps or a waveform, not both")
    if fe_steps is not None:
        sc.f_ext = fe_steps
    elif fe_kind is not None:
        sc.f_ext = Waveform(
            kind=fe_kind,
            amplitude=take("f_ext.amplitude", 0.0),
            frequency=take("f_ext.frequency", 0.0),
            phase=take("f_ext.phase", 0.0),
            offset=take("f_ext.offset", 0.0),
        )
    sc.f_des = take("f_des.steps", sc.f_des)

    sc.failure_min_height = take("failure.min_height", 0.05)
    sc.failure_points = take("failure.points", list(_DEFAULT_POINTS))
    sc.failure_joints = take("failure.joints", {})
    sc.inject_time = take("failure.inject_time", None)
    sc.inject_kind = take("failure.inject_kind", "ground")
    sc.inject_point = take("failure.inject_point", None)
    sc.inject_joint = take("failure.inject_joint", None)
    sc.inject_dip = take("failure.inject_dip", 1.0)

    sc.hold_lower_offset = take("hold.lower_offset", None)
    sc.hold_lower_delay = take("hold.lower_delay", 0.5)

    # leftovers are waveform sub-keys given without their parent
    for key in raw:
        raise ValidationError(key, "given without its enabling key")

    sc.validate()
    return sc


def load_scenario(text: str) -> Scenario:
    """Parse and validate a scenario document.

    Raises ParseError (with line number) for malformed text or unknown
    keys, ValidationError (with the field name) for constraint
    violations.
    """
    raw: dict[str, object] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        content = line.split("#", 1)[0].strip()
        if not content:
            continue
        key, sep, value = content.partition("=")
        if not sep:
            raise ParseError(lineno, f"expected 'key = value', got {content!r}")
        key = key.strip().lower()
        value = value.strip()
        if key not in _SCHEMA:
            raise ParseError(lineno, f"unknown key {key!r}")
        if key in raw:
            raise ParseError(lineno, f"duplicate key {key!r}")
        try:
            raw[key] = _SCHEMA[key](value)
        except ValueError as e:
            raise ParseError(lineno, f"{key}: {e}") from e
    return _build(raw)


def load_scenario_file(path) -> Scenario:
    return load_scenario(Path(path).read_text())
