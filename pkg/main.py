"""
main.py: command-line entrypoint for the index-coding leakage analyzer.

Exit codes:
  0  success
  1  unexpected engine error
  2  invalid instance, code table, flag value or unreadable file
  3  a vertex, node or distribution budget was exceeded
  4  an internal invariant or a verification check failed
"""
from __future__ import annotations

import argparse
import logging
import sys
from collections.abc import Sequence

import config
from commands.common import build_config
from commands.registry import COMMANDS
from ic_engine.errors import IndexCodingError

logger = logging.getLogger(__name__)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="icleak",
        description="Exact information-leakage analysis for index coding instances.",
    )
    subparsers = parser.add_subparsers(dest="command", required=True)
    for name, command in COMMANDS.items():
        sub = subparsers.add_parser(name, help=command.help, description=command.help)
        command.add_arguments(sub)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=config.LOG_LEVEL, format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)
    try:
        run_config = build_config(args.command, args)
        return COMMANDS[args.command].run(run_config)
    except IndexCodingError as exc:
        print(f"error: {exc.detail}", file=sys.stderr)
        return exc.exit_code
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
