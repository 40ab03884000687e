"""Signal-block tests: low-pass, set-point filter, velocity estimator."""

import math

import pytest

from catchrig.filters import (LowPassState, lowpass_step, spf_init, spf_step,
                              velocity_estimate)


class TestLowPass:
    def test_single_step_matches_exponential(self):
        st = lowpass_step(LowPassState(0.0, 100.0), 1.0, 1e-3)
        assert st.y == pytest.approx(1.0 - math.exp(-0.1), abs=1e-12)
        assert st.y == pytest.approx(0.09516, abs=1e-5)

    def test_fixed_point(self):
        st = LowPassState(0.7, 100.0)
        assert lowpass_step(st, 0.7, 1e-3).y == st.y

    def test_convergence_to_constant(self):
        st = LowPassState(0.0, 100.0)
        for _ in range(200):
            st = lowpass_step(st, 3.5, 1e-3)
        # exp(-100 * 0.2) ~ 2e-9
        assert abs(st.y - 3.5) < 3.5 * 1e-8

    def test_contraction(self):
        for y0, u, dt in [(0.0, 1.0, 1e-3), (5.0, -2.0, 1e-2), (-1.0, -1.5, 1e-4)]:
            st = LowPassState(y0, 100.0)
            new = lowpass_step(st, u, dt)
            assert abs(new.y - u) <= abs(y0 - u)

    def test_rejects_bad_dt(self):
        with pytest.raises(ValueError):
            lowpass_step(LowPassState(), 1.0, 0.0)


TAU, VMAX, AMAX = 0.0833, 0.5, 5.0


class TestSetPointFilter:
    def test_init_keeps_handover_velocity(self):
        st = spf_init(0.3, -0.2, TAU, VMAX, AMAX)
        assert st.y_des == 0.3
        assert st.v_des == -0.2
        assert st.k == pytest.approx(1.0 / TAU ** 2)
        assert st.b == pytest.approx(2.0 / TAU)

    def test_init_zero(self):
        st = spf_init(0.0, 0.0, TAU, VMAX, AMAX)
        assert st.y_des == 0.0 and st.v_des == 0.0

    def test_overspeed_handover_clamps_on_first_step(self):
        st = spf_init(0.0, -0.9, TAU, VMAX, AMAX)
        assert st.v_des == -0.9
        st = spf_step(st, 0.0, 1e-3)
        assert st.v_des == -0.5

    def test_far_target_saturates(self):
        # the acceleration pins at a_max, so v_des reaches v_max after
        # exactly v_max/a_max seconds of stepping
        st = spf_init(0.0, 0.0, TAU, VMAX, AMAX)
        dt = 1e-3
        for i in range(100):
            prev_v = st.v_des
            st = spf_step(st, 10.0, dt)
            assert abs(st.v_des - prev_v) <= AMAX * dt + 1e-15
        assert st.v_des == pytest.approx(VMAX, abs=1e-12)

    def test_equilibrium(self):
        st = spf_init(0.4, 0.0, TAU, VMAX, AMAX)
        new = spf_step(st, 0.4, 1e-3)
        assert new.y_des == st.y_des and new.v_des == 0.0

    def test_velocity_always_bounded(self):
        st = spf_init(0.0, 0.3, TAU, VMAX, AMAX)
        targets = [10.0, -10.0, 0.2, 5.0, -0.4]
        for i in range(5000):
            st = spf_step(st, targets[i % len(targets)], 1e-3)
            assert abs(st.v_des) <= VMAX

    def test_accel_exact_within_velocity_band(self):
        st = spf_init(0.0, 0.0, TAU, VMAX, AMAX)
        dt = 1e-3
        for i in range(3000):
            prev_v = st.v_des
            st = spf_step(st, 1.0 if i < 1500 else -1.0, dt)
            assert abs(st.v_des - prev_v) / dt <= AMAX + 1e-9

    def test_small_step_matches_critically_damped_response(self):
        # no saturation active: discrete response tracks
        # step*(1 - (1 + t/tau)exp(-t/tau)) within 1% at tau, 2tau, 4tau
        step = 0.001
        dt = 1e-5
        st = spf_init(0.0, 0.0, TAU, VMAX, AMAX)
        checkpoints = {round(m * TAU / dt): m for m in (1, 2, 4)}
        for i in range(1, max(checkpoints) + 1):
            st = spf_step(st, step, dt)
            if i in checkpoints:
                t = i * dt
                expect = step * (1.0 - (1.0 + t / TAU) * math.exp(-t / TAU))
                assert st.y_des == pytest.approx(expect, rel=0.01)

    def test_linear_regime_sup_norm_match(self):
        # saturations parked far away: 1% of the step over [0, 10 tau]
        step = 0.01
        dt = 1e-3
        st = spf_init(0.0, 0.0, TAU, 1e9, 1e9)
        worst = 0.0
        n = int(round(10 * TAU / dt))
        for i in range(1, n + 1):
            st = spf_step(st, step, dt)
            t = i * dt
            expect = step * (1.0 - (1.0 + t / TAU) * math.exp(-t / TAU))
            worst = max(worst, abs(st.y_des - expect))
        assert worst < 0.01 * step

    def test_far_step_trapezoid_and_no_overshoot(self):
        # accel ramp, cruise at v_max, decel; approach without overshoot
        # beyond discretization grain
        st = spf_init(0.0, 0.0, TAU, VMAX, AMAX)
        dt = 1e-3
        cruised = False
        y_max = -1.0
        for i in range(6000):
            st = spf_step(st, 1.0, dt)
            cruised = cruised or st.v_des == VMAX
            y_max = max(y_max, st.y_des)
        assert cruised
        assert abs(st.y_des - 1.0) < 1e-3
        assert y_max <= 1.0 + 1e-4

    def test_rejects_bad_params(self):
        with pytest.raises(ValueError):
            spf_init(0.0, 0.0, 0.0, VMAX, AMAX)
        with pytest.raises(ValueError):
            spf_step(spf_init(0, 0, TAU, VMAX, AMAX), 0.0, -1e-3)


class TestVelocityEstimate:
    def test_stationary(self):
        filt = LowPassState(0.0, 200.0)
        v, filt = velocity_estimate(0.25, 0.25, 1e-3, filt)
        assert v == 0.0

    def test_ramp_settles_within_one_percent(self):
        filt = LowPassState(0.0, 200.0)
        dt = 1e-3
        v = 0.0
        for i in range(50):
            v, filt = velocity_estimate(0.1 * i * dt, 0.1 * (i + 1) * dt, dt, filt)
        assert v == pytest.approx(0.1, rel=0.01)

    def test_quantized_ramp_mean_within_two_percent(self):
        # 10 um grid; the staircase average must still be the true slope
        res = 1e-5
        filt = LowPassState(0.0, 200.0)
        dt = 1e-3
        history = []
        prev = math.floor(0.0 / res) * res
        for i in range(1, 501):
            pos = math.floor(0.1 * i * dt / res) * res
            v, filt = velocity_estimate(prev, pos, dt, filt)
            prev = pos
            history.append(v)
        mean = sum(history) / len(history)
        assert mean == pytest.approx(0.1, rel=0.02)
