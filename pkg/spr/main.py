"""Command line entry point: ``python -m spr <command> ...``."""

import argparse
import sys
from typing import List, Optional

from pydantic import ValidationError

from spr import __version__
from spr.commands import CommandRouter
from spr.commands import bench, evaluate, gen, intervals, run, trials
from spr.config import get_settings
from spr.errors import SPRError
from spr.utils_logging import get_logger, set_log_level

logger = get_logger("spr")


def include_router(subparsers, router: CommandRouter) -> None:
    for command in router.commands:
        parser = subparsers.add_parser(command.name, help=command.help)
        for flags, kwargs in command.arguments:
            parser.add_argument(*flags, **kwargs)
        parser.set_defaults(handler=command.handler)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="spr", description="Steiner point removal experiments")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    subparsers = parser.add_subparsers(dest="command", required=True)
    include_router(subparsers, gen.router)
    include_router(subparsers, run.router)
    include_router(subparsers, evaluate.router)
    include_router(subparsers, trials.router)
    include_router(subparsers, bench.router)
    include_router(subparsers, intervals.router)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        # loggers are created at import, before .env has been read
        set_log_level(get_settings().log_level)
        return args.handler(args)
    except SPRError as e:
        logger.error(f"{type(e).__name__}: {e}")
        return e.exit_code
    except ValidationError as e:
        logger.error(f"invalid parameters: {e}")
        return 2


if __name__ == "__main__":
    sys.exit(main())
