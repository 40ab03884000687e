"""Control-law tests: worked examples plus affinity properties."""

import math

import pytest

from catchrig.control import (ForceGains, RecoveryGains, ShadowGains,
                              force_cmd, recovery_cmd, shadowing_cmd)

SG = ShadowGains()
FG = ForceGains()
RG = RecoveryGains()


class TestShadowing:
    def test_worked_example(self):
        assert shadowing_cmd(0.5, 0.1, 0.47, SG) == pytest.approx(0.15)

    def test_on_target_at_rest(self):
        assert shadowing_cmd(0.5, 0.0, 0.48, SG) == pytest.approx(0.0)

    def test_pure_feedforward(self):
        assert shadowing_cmd(0.5, 0.3, 0.48, SG) == pytest.approx(0.3)


class TestForce:
    def test_worked_example(self):
        assert force_cmd(40.0, 50.0, 0.0, FG) == pytest.approx(0.02)

    def test_zero_error_at_rest(self):
        assert force_cmd(50.0, 50.0, 0.0, FG) == 0.0

    def test_pure_feedforward(self):
        assert force_cmd(50.0, 50.0, -0.1, FG) == pytest.approx(-0.1)


class TestRecovery:
    def test_worked_example(self):
        assert recovery_cmd(0.40, 0.5, 0.38, RG) == pytest.approx(0.6)

    def test_on_trajectory_at_rest(self):
        assert recovery_cmd(0.38, 0.0, 0.38, RG) == 0.0

    def test_pure_feedforward(self):
        assert recovery_cmd(0.38, 0.5, 0.38, RG) == pytest.approx(0.5)


def test_proportional_terms_scale_linearly():
    # doubling the position/force error doubles the proportional part
    base = shadowing_cmd(0.52, 0.0, 0.48, SG)
    double = shadowing_cmd(0.54, 0.0, 0.48, SG)
    zero = shadowing_cmd(0.50, 0.0, 0.48, SG)
    assert double - zero == pytest.approx(2 * (base - zero), rel=1e-12)

    f1 = force_cmd(40.0, 50.0, 0.0, FG)
    f2 = force_cmd(30.0, 50.0, 0.0, FG)
    assert f2 == pytest.approx(2 * f1, rel=1e-12)

    r1 = recovery_cmd(0.40, 0.0, 0.38, RG)
    r2 = recovery_cmd(0.42, 0.0, 0.38, RG)
    assert r2 == pytest.approx(2 * r1, rel=1e-12)


def test_feedforward_superposes():
    for v in (-0.4, 0.0, 0.25):
        assert (shadowing_cmd(0.5, v, 0.47, SG)
                == pytest.approx(shadowing_cmd(0.5, 0.0, 0.47, SG) + SG.k_ff * v))
        assert (force_cmd(40.0, 50.0, v, FG)
                == pytest.approx(force_cmd(40.0, 50.0, 0.0, FG) + FG.k_ff * v))
        assert (recovery_cmd(0.4, v, 0.38, RG)
                == pytest.approx(recovery_cmd(0.4, 0.0, 0.38, RG) + RG.k_ff * v))


def test_finite_inputs_give_finite_output():
    vals = (-1e6, -0.3, 0.0, 0.7, 1e6)
    for a in vals:
        for c in vals:
            assert math.isfinite(shadowing_cmd(a, c, 0.1, SG))
            assert math.isfinite(force_cmd(a, c, 0.0, FG))
            assert math.isfinite(recovery_cmd(a, c, 0.1, RG))
