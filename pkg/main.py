"""
Line Geometry Toolkit - Command Line Entry Point

Verbs: generate, analyze, cliques, check-map, autos.

Exit codes: 0 ok, 1 validation, 2 hypothesis violated, 3 dimension too
small, 4 budget or cap exceeded, 5 consistency alarm.
"""

import argparse
import sys
from typing import List, Optional

from src.commands import COMMANDS
from src.config import RunConfig, config
from src.errors import LineGeometryError
from src.utils.logger import setup_logging
import logging

logger = logging.getLogger(__name__)


class CliParser(argparse.ArgumentParser):
    """Argument parser that reports usage errors with exit code 1."""

    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _shared_options() -> argparse.ArgumentParser:
    shared = CliParser(add_help=False)
    shared.add_argument("--out", help="Write the result document to this path")
    shared.add_argument("--workers", type=int, help="Worker processes for searches")
    shared.add_argument("--max-lines", type=int, help="Line cap for this command")
    shared.add_argument("--node-budget", type=int, help="Search node budget (overrides LINEGEOM_BUDGET)")
    shared.add_argument(
        "--format-version", action="append",
        help="Accept only these document formats (repeatable)",
    )
    shared.add_argument("--log-level", help="Console log level (defaults to LOG_LEVEL)")
    return shared


def build_parser() -> CliParser:
    parser = CliParser(
        prog="linegeom",
        description="Finite linear spaces, their line geometry and adjacency-preserving line maps",
    )
    subparsers = parser.add_subparsers(dest="command", required=True)
    parents = [_shared_options()]
    for command in COMMANDS:
        command.register(subparsers, parents)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    setup_logging(level=args.log_level)

    try:
        config.validate()
        run_config = RunConfig.from_args(args, max_lines_default=getattr(args, "max_lines_default", None))
    except ValueError as e:
        logger.error(f"Invalid configuration: {e}")
        print(f"error: {e}", file=sys.stderr)
        return 1

    try:
        return args.handler(args, run_config)
    except LineGeometryError as e:
        logger.error(f"{type(e).__name__}: {e}")
        print(f"error: {e}", file=sys.stderr)
        return e.exit_code


if __name__ == "__main__":
    sys.exit(main())
