"""
obslab command-line entry point.

    obslab <experiment> --config <path> [--seed N] [--out prefix]

Logs go to stderr through structlog; the report files under the output
prefix are the only artefacts. The process exit code is 0 without
violations, 1 with violations, 2 on a configuration error and 3 on a
numerical failure.
"""

import argparse
import logging
import sys
from collections.abc import Sequence
from pathlib import Path

import structlog

from obslab.experiments import EXPERIMENTS, run_experiment
from obslab.settings import settings

logger = structlog.get_logger(__name__)


def configure_logging(level: str) -> None:
    """Send structlog output to stderr at the given level."""
    structlog.configure(
        processors=[
            structlog.processors.add_log_level,
            structlog.processors.StackInfoRenderer(),
            structlog.processors.format_exc_info,
            structlog.dev.ConsoleRenderer(colors=False),
        ],
        wrapper_class=structlog.make_filtering_bound_logger(
            logging.getLevelNamesMapping().get(level.upper(), logging.INFO)
        ),
        logger_factory=structlog.PrintLoggerFactory(file=sys.stderr),
        cache_logger_on_first_use=True,
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="obslab",
        description="Desk-scale experiments on gauge contents and heat observability.",
    )
    parser.add_argument("experiment", choices=sorted(EXPERIMENTS))
    parser.add_argument("--config", type=Path, required=True, help="JSON config file")
    parser.add_argument("--seed", type=int, default=None, help="overrides the file")
    parser.add_argument("--out", default=None, help="report path prefix")
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    configure_logging(settings.log_level)
    logger.debug("cli_args", experiment=args.experiment, threads=settings.threads)
    return run_experiment(args.experiment, args.config, args.seed, args.out)


def start() -> None:
    """Console-script entry point."""
    sys.exit(main())


if __name__ == "__main__":
    start()
