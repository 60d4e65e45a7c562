"""Command-line entry point: ``lassodof <command> [options]``."""
import argparse
import logging
import sys
from typing import List, Optional

from pydantic import ValidationError

from . import config
from .commands import COMMANDS
from .commands.common import run_config
from .errors import InputError, LassoDofError

logger = logging.getLogger(__name__)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lassodof",
        description="Lasso and generalized lasso fits with unbiased degrees-of-freedom estimates.",
    )
    subparsers = parser.add_subparsers(dest="command", required=True)
    for command in COMMANDS:
        command.register(subparsers)
    return parser


def configure_logging() -> None:
    logging.basicConfig(level=config.LOG_LEVEL, format=config.LOG_FORMAT, stream=sys.stderr)


def main(argv: Optional[List[str]] = None) -> int:
    configure_logging()
    args = build_parser().parse_args(argv)
    try:
        cfg = run_config(args)
        return args.handler(cfg)
    except ValidationError as e:
        logger.error("invalid input: %s", e)
        return InputError.exit_code
    except LassoDofError as e:
        logger.error(e.detail)
        return e.exit_code


if __name__ == "__main__":
    sys.exit(main())
