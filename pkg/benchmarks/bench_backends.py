"""Compare the compiled integrator kernel against the pure-Python twin.

Runs the same workloads on both backends, times them, and verifies the
trajectories are bit-identical. Usage:

    python benchmarks/bench_backends.py
"""

import time

from catchrig import backend
from catchrig.model import ModelParams
from catchrig.scenario import load_scenario
from catchrig.sim import run
from catchrig.suite import RECOVERY_CFG

BOUNCE_TICKS = 20000  # 20 s of physics at 10 substeps/tick


def bench_bounce(kernel):
    p = ModelParams()
    f_g = p.g * (p.M - p.M_h)
    y_r, v_r, y_p, v_p = 0.505, 0.0, 0.5, 0.0
    t0 = time.perf_counter()
    for k in range(BOUNCE_TICKS):
        y_r, v_r, y_p, v_p, _ = kernel.advance_tick(
            y_r, v_r, y_p, v_p, k * 1e-3, 0.0, 10, 1e-4,
            p.M, f_g, p.k, p.b, p.epsilon, True, p.v_motor_max, -1.0,
            0, 0.0, 0.0, 0.0, 0.0, 0.0, False, 0.0, 0.0, p.y_travel)
    return time.perf_counter() - t0, (y_r, v_r, y_p, v_p)


def bench_scenario(name):
    backend.use(name)
    sc = load_scenario(RECOVERY_CFG)
    t0 = time.perf_counter()
    res = run(sc)
    dt = time.perf_counter() - t0
    return dt, [(r.y_r, r.v_r, r.y_p) for r in res.telemetry]


def main():
    from catchrig import _pure
    try:
        from catchrig import _kernel
    except ImportError:
        print("compiled kernel not built; nothing to compare")
        return

    print(f"{'workload':<28}{'pure [s]':>10}{'compiled [s]':>14}{'speedup':>9}")

    tp, sp = bench_bounce(_pure)
    tc, sc_ = bench_bounce(_kernel)
    assert sp == sc_, "bounce trajectories diverged between backends"
    print(f"{'bounce, 200k RK4 substeps':<28}{tp:>10.3f}{tc:>14.3f}{tp / tc:>8.1f}x")

    tp, rp = bench_scenario("pure")
    tc, rc = bench_scenario("compiled")
    assert rp == rc, "scenario telemetry diverged between backends"
    print(f"{'recovery scenario (4 s sim)':<28}{tp:>10.3f}{tc:>14.3f}{tp / tc:>8.1f}x")
    print("trajectories bit-identical across backends")


if __name__ == "__main__":
    main()
