"""Command-line entry point.

Exit codes: 0 success, 2 configuration error, 3 numerical failure (exceptional
point proximity, non-finite state, step-size guard, degenerate gap).
"""

from __future__ import annotations

import argparse
import sys
from typing import Optional, Sequence

from .errors import ConfigError, EPDriveError
from .experiments import Experiment, load_config, run_experiment

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="epdrive",
        description="Simulate exceptional-point encircling with counterdiabatic driving.",
    )
    parser.add_argument(
        "--experiment",
        help="experiment name: " + ", ".join(e.value for e in Experiment),
    )
    parser.add_argument("--config", help="INI config file; flags override its values")
    parser.add_argument("--out", dest="output_dir", help="output directory (default: out)")
    parser.add_argument("--dt", type=float, help="integrator step, us")
    parser.add_argument("--period", type=float, dest="period", help="loop period T, us")
    parser.add_argument("--direction", choices=["cw", "ccw"], help="encircling direction")
    parser.add_argument(
        "--cd", dest="cd_mode", choices=["none", "hermitian", "full"],
        help="counterdiabatic drive mode",
    )
    parser.add_argument(
        "--max-drive-amp", type=float, dest="drive_clamp",
        help="saturate CD drive entries at this magnitude, rad/us",
    )
    parser.add_argument("--jmin", type=float, dest="j_min", help="minimum coupling, rad/us")
    parser.add_argument("--jmax", type=float, dest="j_max", help="maximum coupling, rad/us")
    parser.add_argument(
        "--delta-amp", type=float, dest="delta_amp",
        help="detuning amplitude magnitude, rad/us",
    )
    parser.add_argument("--gamma-e", type=float, dest="gamma_e", help="lossy-channel rate, 1/us")
    parser.add_argument("--gamma-f", type=float, dest="gamma_f", help="reference-channel rate, 1/us")
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    overrides = {k: v for k, v in vars(args).items() if k != "config"}
    try:
        config = load_config(args.config, overrides)
        written = run_experiment(config)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except EPDriveError as exc:
        print(f"numerical failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    for path in written:
        print(path)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
