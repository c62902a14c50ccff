# ---------------------------------------------------------------------
# Standard library
# ---------------------------------------------------------------------
from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Any, Sequence

# ---------------------------------------------------------------------
# Third-party libraries
# ---------------------------------------------------------------------
from logger.logger import Logger

# ---------------------------------------------------------------------
# Internal application imports
# ---------------------------------------------------------------------
from superpoint.exceptions import SuperPointError
from superpoint_cli.generate import run_generate
from superpoint_cli.runner import run_bench, run_detect
from superpoint_cli.settings import PRESETS, load_run_config


def _run_options() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", type=Path, help="key=value config file")
    common.add_argument("--preset", choices=sorted(PRESETS))
    common.add_argument("--trace", type=Path)

    sketch = common.add_argument_group("sketch")
    sketch.add_argument("--k", type=int)
    sketch.add_argument("--kprime", dest="k_prime", type=int)
    sketch.add_argument("--g", type=int)
    sketch.add_argument("--c", type=int)
    sketch.add_argument("--r", type=int)
    sketch.add_argument("--u", type=int)
    sketch.add_argument("--s", type=int)
    sketch.add_argument("--theta", type=float)
    sketch.add_argument("--seed", type=int)
    sketch.add_argument("--cap", type=int)
    sketch.add_argument("--mangle-mode", choices=["odd", "prime"])

    run = common.add_argument_group("run")
    run.add_argument("--cadence", type=int, help="slices between reported windows")
    run.add_argument("--workers", type=int, help="scan threads per slice")
    run.add_argument("--coarsen", type=int, help="merge every N slices into one")
    run.add_argument("--full-windows-only", action=argparse.BooleanOptionalAction)
    run.add_argument("--log", action=argparse.BooleanOptionalAction)
    return common


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="superpoint",
        description="Sliding-window super point detection.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    common = _run_options()

    detect = sub.add_parser("detect", parents=[common], help="report super points per window")
    detect.add_argument("--report", type=Path)
    detect.add_argument("--metrics", type=Path)
    detect.add_argument("--truth", type=Path)
    detect.add_argument("--snapshot", type=Path, help="save the cube here after the run")
    detect.add_argument("--oracle", action=argparse.BooleanOptionalAction)

    bench = sub.add_parser("bench", parents=[common], help="time ticks, scans and queries")
    bench.add_argument("--bench", type=Path)

    generate = sub.add_parser("generate", help="write a synthetic trace")
    generate.add_argument("--spec", type=Path, help="JSON trace spec")
    generate.add_argument("--out", type=Path, required=True)
    generate.add_argument("--generator", default="synthetic")
    generate.add_argument("--boundary", action="store_true", help="boundary-spanning host scenario")
    generate.add_argument("--log", action=argparse.BooleanOptionalAction)

    return parser


def _logger(enabled: bool) -> Logger | None:
    if not enabled:
        return None
    Logger().configure()
    return Logger()


def _flags(args: argparse.Namespace) -> dict[str, Any]:
    skip = {"command", "config"}
    return {k: v for k, v in vars(args).items() if k not in skip}


def main(argv: Sequence[str] | None = None) -> int:
    """
    Console entry point.

    Returns:
        0 on success, 1 on a detection error (diagnostic on stderr).
        Usage errors exit with 2 from argparse.
    """
    args = build_parser().parse_args(argv)

    try:
        if args.command == "generate":
            generator = "boundary" if args.boundary else args.generator
            written = run_generate(
                args.out,
                spec=args.spec,
                generator=generator,
                logger=_logger(args.log is not False),
            )
            print(f"events={written}")
            return 0

        config = load_run_config(_flags(args), config_file=args.config)
        logger = _logger(config.log)

        if args.command == "bench":
            bench = run_bench(config, logger=logger)
            print(
                f"slices={bench.slices} events={bench.events} "
                f"events_per_second={bench.events_per_second:.1f} "
                f"mismatched_ticks={bench.mismatched_ticks} "
                f"realtime_ratio={bench.realtime_ratio:.1f}"
            )
            return 0

        summary = run_detect(config, logger=logger)
        line = f"slices={summary.slices} windows={summary.windows} reported={summary.reported}"
        if summary.mean is not None:
            line += f" fpr={summary.mean.fpr:.4f} fnr={summary.mean.fnr:.4f} tfr={summary.mean.tfr:.4f}"
        print(line)
        return 0
    except SuperPointError as e:
        print(f"superpoint: error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
