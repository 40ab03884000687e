"""Bundled reproduction scenarios and their pass thresholds.

Three experiments: sinusoidal shadowing, a force-step sequence (run
noiseless and with load-cell noise), and a catch-and-lift after an
injected ground-proximity failure. ``run_suite`` executes all of them,
writes telemetry and metrics under an output directory, and evaluates
every threshold; the CLI ``suite`` command and the acceptance tests are
both built on it.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, replace
from pathlib import Path

from .metrics import force_settling_errors, recovery_rate_profile
from .scenario import Scenario, load_scenario
from .sim import RunResult, run
from .telemetry import write_csv

RUNTIME_LIMIT = 5.0  # wall-clock budget per scenario run (s)

SHADOWING_CFG = """\
# Transparent shadowing of a hand-moved robot: 0.1 m sinusoid at 0.25 Hz.
# Phase pi/2 starts the motion at a velocity zero crossing, as a hand
# does; starting mid-swing would charge the first milliseconds with an
# estimator cold-start jerk no real log contains.
name = shadowing
duration = 10.0
seed = 2025
initial_mode = shadowing
robot.drive = scripted
robot.waveform = sine
robot.offset = 0.3
robot.amplitude = 0.1
robot.frequency = 0.25
robot.phase = 1.5707963267948966
shadow.d = 0.02
shadow.k_p = 5.0
shadow.k_ff = 1.0
"""

FORCE_CFG = """\
# Supported robot, commanded force steps held one second each.
name = force-steps
duration = 4.0
seed = 2025
initial_mode = force
robot.drive = scripted
robot.waveform = constant
robot.offset = 0.3
# preloaded to the first commanded force: dy = 10 N / k
planarizer.y0 = 0.3019047619047619
f_des.steps = 0:10, 1:20, 2:50, 3:30
force.omega_c = 100.0
force.k_p = 0.002
force.k_ff = 1.0
"""

FORCE_NOISE_STD = 1.5  # N, load-cell noise for the noisy rerun

RECOVERY_CFG = """\
# Shadowing a robot standing on the ground; a knee dips below the
# minimum height at t = 2 s and the rig catches and lifts the robot.
name = recovery
duration = 4.0
seed = 2025
initial_mode = shadowing
robot.drive = free
robot.y0 = 0.30
ground.height = 0.30
recovery.tau = 0.0833
recovery.v_max = 0.5
recovery.a_max = 5.0
recovery.k_p = 5.0
recovery.k_ff = 1.0
recovery.safe_rise = 0.08
# planarizer travel above the failure height; covers the safe rise plus
# the static spring deflection F_g/k (~19.8 mm) with a small margin
recovery.lift = 0.105
failure.min_height = 0.05
failure.inject_time = 2.0
failure.inject_kind = ground
failure.inject_point = knee_left
failure.inject_dip = 0.3
"""

SCENARIOS = {
    "shadowing": SHADOWING_CFG,
    "force-steps": FORCE_CFG,
    "recovery": RECOVERY_CFG,
}


@dataclass
class Check:
    scenario: str
    name: str
    value: float | bool
    threshold: str
    ok: bool


def _timed_run(sc: Scenario) -> tuple[RunResult, float]:
    t0 = time.perf_counter()
    res = run(sc)
    return res, time.perf_counter() - t0


def _header_note(sc: Scenario) -> str:
    return f"scenario={sc.name} spring_mode={sc.spring_mode.value} seed={sc.seed}"


def evaluate_shadowing(res: RunResult, sc: Scenario, elapsed: float) -> list[Check]:
    m = res.metrics
    disturbance = sc.params.M_h * m.gap_accel_max
    return [
        Check("shadowing", "gap_dev_max [m]", m.gap_dev_max, "< 0.01",
              m.gap_dev_max < 0.01),
        Check("shadowing", "spring engaged", m.spring_engaged_during_shadow,
              "False", m.spring_engaged_during_shadow is False),
        Check("shadowing", "gap_accel_max [m/s^2]", m.gap_accel_max, "<= 7.0",
              m.gap_accel_max <= 7.0),
        Check("shadowing", "disturbance force [N]", disturbance, "<= 3.2",
              disturbance <= 3.2),
        Check("shadowing", "runtime [s]", elapsed, f"< {RUNTIME_LIMIT}",
              elapsed < RUNTIME_LIMIT),
    ]


def evaluate_force(res: RunResult, noisy: RunResult, sc: Scenario,
                   elapsed: float) -> list[Check]:
    m = res.metrics
    ss_err = max(e for _, e in force_settling_errors(res.telemetry, sc))
    band = noisy.metrics.force_ss_noise_band
    rise = m.force_rise_time_10_90
    return [
        Check("force-steps", "settling error [N]", ss_err, "< 0.5", ss_err < 0.5),
        Check("force-steps", "rise time 10-90 [s]", rise, "in [0.05, 0.20]",
              rise is not None and 0.05 <= rise <= 0.20),
        Check("force-steps", "noisy steady band [N]", band, "<= 3.0",
              band <= 3.0),
        Check("force-steps", "runtime [s]", elapsed, f"< {RUNTIME_LIMIT}",
              elapsed < RUNTIME_LIMIT),
    ]


def evaluate_recovery(res: RunResult, sc: Scenario, elapsed: float) -> list[Check]:
    m = res.metrics
    rise = m.recovery_rise_time_to_safe
    rate = recovery_rate_profile(res.telemetry, threshold=sc.rec_dv_max)
    liftoffs = sum(r.event.split(";").count("violation:liftoff")
                   for r in res.telemetry if r.event)
    return [
        Check("recovery", "rise to safe height [s]", rise, "in [0.30, 0.50]",
              0.30 <= rise <= 0.50),
        Check("recovery", "overshoot [m]", m.recovery_overshoot, "< 0.005",
              m.recovery_overshoot < 0.005),
        Check("recovery", "accel bound violations", m.accel_bound_violations,
              "== 0", m.accel_bound_violations == 0),
        Check("recovery", "liftoff violations", liftoffs, "== 0", liftoffs == 0),
        Check("recovery", "max |dv| after catch [m/s]", rate["max_after_settle"],
              f"< {sc.rec_dv_max}", rate["max_after_settle"] < sc.rec_dv_max),
        Check("recovery", "runtime [s]", elapsed, f"< {RUNTIME_LIMIT}",
              elapsed < RUNTIME_LIMIT),
    ]


def _write_outputs(out: Path, name: str, res: RunResult, sc: Scenario,
                   suffix: str = "") -> None:
    d = out / name
    d.mkdir(parents=True, exist_ok=True)
    write_csv(res.telemetry, d / f"telemetry{suffix}.csv", _header_note(sc))
    with open(d / f"metrics{suffix}.txt", "w") as f:
        for key, value in res.metrics.as_dict().items():
            f.write(f"{key} = {'absent' if value is None else value}\n")


def run_suite(out_dir) -> tuple[bool, list[Check]]:
    """Run the three bundled scenarios, write outputs, evaluate thresholds."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    checks: list[Check] = []

    sc = load_scenario(SHADOWING_CFG)
    res, elapsed = _timed_run(sc)
    _write_outputs(out, "shadowing", res, sc)
    (out / "shadowing" / "scenario.cfg").write_text(SHADOWING_CFG)
    checks += evaluate_shadowing(res, sc, elapsed)

    sc = load_scenario(FORCE_CFG)
    res, elapsed = _timed_run(sc)
    _write_outputs(out, "force-steps", res, sc)
    (out / "force-steps" / "scenario.cfg").write_text(FORCE_CFG)
    noisy_sc = replace_noise(sc, FORCE_NOISE_STD)
    noisy, _ = _timed_run(noisy_sc)
    _write_outputs(out, "force-steps", noisy, noisy_sc, suffix="-noisy")
    checks += evaluate_force(res, noisy, sc, elapsed)

    sc = load_scenario(RECOVERY_CFG)
    res, elapsed = _timed_run(sc)
    _write_outputs(out, "recovery", res, sc)
    (out / "recovery" / "scenario.cfg").write_text(RECOVERY_CFG)
    checks += evaluate_recovery(res, sc, elapsed)

    return all(c.ok for c in checks), checks


def replace_noise(sc: Scenario, std: float) -> Scenario:
    noisy = replace(sc, sensors=replace(sc.sensors, loadcell_noise_std=std))
    noisy.name = sc.name + "-noisy"
    return noisy


def format_checks(checks: list[Check]) -> str:
    lines = []
    width = max(len(f"{c.scenario}: {c.name}") for c in checks)
    for c in checks:
        label = f"{c.scenario}: {c.name}"
        value = f"{c.value:.6g}" if isinstance(c.value, float) else str(c.value)
        status = "PASS" if c.ok else "FAIL"
        lines.append(f"{label:<{width}}  {value:>12}  {c.threshold:<16} {status}")
    return "\n".join(lines)
