"""CLI behavior: subcommands, exit codes, output files."""

from catchrig.cli import main
from catchrig.suite import SHADOWING_CFG

BROKEN_CFG = "duration = 1.0\nkp_typo = 5\n"

BLOWUP_CFG = """
duration = 1.0
robot.drive = free
robot.y0 = 0.30
f_ext.waveform = sine
f_ext.amplitude = 1e308
f_ext.offset = 1e308
f_ext.frequency = 0.001
f_ext.phase = 1.5707963267948966
"""


def test_run_happy_path(tmp_path, capsys):
    cfg = tmp_path / "shadow.cfg"
    cfg.write_text(SHADOWING_CFG.replace("duration = 10.0", "duration = 1.0"))
    code = main(["run", "--scenario", str(cfg), "--out", str(tmp_path / "results")])
    assert code == 0
    out_dir = tmp_path / "results" / "shadowing"
    assert (out_dir / "telemetry.csv").exists()
    assert (out_dir / "metrics.txt").exists()
    text = (out_dir / "metrics.txt").read_text()
    assert "gap_dev_max" in text
    assert "force_rise_time_10_90 = absent" in text
    # the telemetry header records which spring-law variant ran
    head = (out_dir / "telemetry.csv").read_text().splitlines()[0]
    assert "spring_mode=corrected" in head and "seed=" in head


def test_run_same_invocation_same_bytes(tmp_path):
    cfg = tmp_path / "shadow.cfg"
    cfg.write_text(SHADOWING_CFG.replace("duration = 10.0", "duration = 1.0")
                   + "sensors.loadcell_noise_std = 1.0\n")
    assert main(["run", "--scenario", str(cfg), "--out", str(tmp_path / "r1")]) == 0
    assert main(["run", "--scenario", str(cfg), "--out", str(tmp_path / "r2")]) == 0
    a = (tmp_path / "r1" / "shadowing" / "telemetry.csv").read_bytes()
    b = (tmp_path / "r2" / "shadowing" / "telemetry.csv").read_bytes()
    assert a == b


def test_validate_ok(tmp_path):
    cfg = tmp_path / "ok.cfg"
    cfg.write_text(SHADOWING_CFG)
    assert main(["validate", "--scenario", str(cfg)]) == 0


def test_validate_broken_names_key(tmp_path, capsys):
    cfg = tmp_path / "broken.cfg"
    cfg.write_text(BROKEN_CFG)
    assert main(["validate", "--scenario", str(cfg)]) == 2
    assert "kp_typo" in capsys.readouterr().err


def test_missing_file_is_input_error(tmp_path, capsys):
    assert main(["validate", "--scenario", str(tmp_path / "nope.cfg")]) == 2


def test_seed_override_revalidates_and_applies(tmp_path):
    cfg = tmp_path / "s.cfg"
    cfg.write_text(SHADOWING_CFG.replace("duration = 10.0", "duration = 0.5")
                   + "sensors.loadcell_noise_std = 1.0\n")
    assert main(["run", "--scenario", str(cfg), "--seed", "1",
                 "--out", str(tmp_path / "r1")]) == 0
    assert main(["run", "--scenario", str(cfg), "--seed", "2",
                 "--out", str(tmp_path / "r2")]) == 0
    a = (tmp_path / "r1" / "shadowing" / "telemetry.csv").read_bytes()
    b = (tmp_path / "r2" / "shadowing" / "telemetry.csv").read_bytes()
    assert a != b


def test_bad_dt_override_rejected(tmp_path, capsys):
    cfg = tmp_path / "s.cfg"
    cfg.write_text(SHADOWING_CFG)
    assert main(["run", "--scenario", str(cfg), "--dt-control", "0.00037",
                 "--out", str(tmp_path / "r")]) == 2


def test_numerical_failure_exit_code(tmp_path, capsys):
    cfg = tmp_path / "blowup.cfg"
    cfg.write_text(BLOWUP_CFG)
    code = main(["run", "--scenario", str(cfg), "--out", str(tmp_path / "r")])
    assert code == 3
    tele = (tmp_path / "r" / "scenario" / "telemetry.csv").read_text()
    assert "error:nonfinite" in tele


def test_suite_passes_thresholds(tmp_path, capsys):
    code = main(["suite", "--out", str(tmp_path / "suite")])
    out = capsys.readouterr().out
    assert code == 0, out
    assert "all thresholds met" in out
    for name in ("shadowing", "force-steps", "recovery"):
        assert (tmp_path / "suite" / name / "telemetry.csv").exists()
        assert (tmp_path / "suite" / name / "scenario.cfg").exists()
    assert (tmp_path / "suite" / "force-steps" / "telemetry-noisy.csv").exists()
