"""Command-line interface.

    catchrig run --scenario shadow.cfg --out results/
    catchrig suite --out results/
    catchrig validate --scenario shadow.cfg

Exit codes: 0 success (and, for suite, all thresholds met), 1 suite ran
but a threshold failed, 2 input or usage error, 3 numerical failure
(integrator blow-up).

CATCHRIG_OUT sets the default output directory.
"""

from __future__ import annotations

import argparse
import os
import sys
from dataclasses import replace
from pathlib import Path

from .model import NonFiniteState
from .scenario import ParseError, ValidationError, load_scenario_file
from .sim import run
from .suite import format_checks, run_suite
from .telemetry import IoError, write_csv

EXIT_OK = 0
EXIT_THRESHOLDS = 1
EXIT_INPUT = 2
EXIT_NUMERIC = 3


def _build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="catchrig",
        description="Simulate the cable-spring support/recovery rig.")
    p.add_argument("-v", "--verbose", action="store_true",
                   help="chatty progress output")
    sub = p.add_subparsers(dest="command", required=True)

    default_out = os.environ.get("CATCHRIG_OUT", "results")

    run_p = sub.add_parser("run", help="run one scenario file")
    run_p.add_argument("--scenario", required=True, help="scenario .cfg path")
    run_p.add_argument("--out", default=default_out, help="output directory")
    run_p.add_argument("--seed", type=int, default=None,
                       help="override the scenario seed")
    run_p.add_argument("--dt-control", type=float, default=None,
                       help="override the control period (s)")

    suite_p = sub.add_parser(
        "suite", help="run the bundled reproduction scenarios and check thresholds")
    suite_p.add_argument("--out", default=default_out, help="output directory")

    val_p = sub.add_parser("validate", help="parse a scenario without running it")
    val_p.add_argument("--scenario", required=True, help="scenario .cfg path")
    return p


def _load(path: str, args) -> object:
    sc = load_scenario_file(path)
    if getattr(args, "seed", None) is not None:
        sc.seed = args.seed
        sc.sensors = replace(sc.sensors, rng_seed=args.seed)
    if getattr(args, "dt_control", None) is not None:
        sc.dt_control = args.dt_control
    sc.validate()
    return sc


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)

    try:
        if args.command == "validate":
            _load(args.scenario, args)
            print(f"{args.scenario}: OK")
            return EXIT_OK

        if args.command == "run":
            sc = _load(args.scenario, args)
            out = Path(args.out) / sc.name
            out.mkdir(parents=True, exist_ok=True)
            try:
                res = run(sc)
            except NonFiniteState as e:
                # flush what we have; the last row carries the error event
                write_csv(e.telemetry, out / "telemetry.csv",
                          f"scenario={sc.name} seed={sc.seed}")
                print(f"error: {e}", file=sys.stderr)
                return EXIT_NUMERIC
            note = (f"scenario={sc.name} spring_mode={sc.spring_mode.value} "
                    f"seed={sc.seed}")
            write_csv(res.telemetry, out / "telemetry.csv", note)
            with open(out / "metrics.txt", "w") as f:
                for key, value in res.metrics.as_dict().items():
                    f.write(f"{key} = {'absent' if value is None else value}\n")
            if args.verbose:
                for key, value in res.metrics.as_dict().items():
                    if value is not None:
                        print(f"{key} = {value}")
            print(f"wrote {out}/telemetry.csv and {out}/metrics.txt")
            return EXIT_OK

        # suite
        ok, checks = run_suite(args.out)
        print(format_checks(checks))
        print(f"suite: {'all thresholds met' if ok else 'THRESHOLDS FAILED'}")
        return EXIT_OK if ok else EXIT_THRESHOLDS

    except (ParseError, ValidationError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT
    except FileNotFoundError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT
    except IoError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT
    except NonFiniteState as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
