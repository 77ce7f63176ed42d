import argparse
import sys
from typing import List, Optional

from app.cli.api import cli_router
from app.core.config import settings
from app.core.errors import SolverError
from app.core.logger import configure_logging, get_logger

logger = get_logger(__name__)


def _common_options() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", default=None, help="YAML run configuration")
    common.add_argument("--seed", type=int, default=None, help="top-level random seed")
    common.add_argument("--jobs", type=int, default=None, help="parallel realizations")
    common.add_argument("--output", default=None, help="output directory")
    common.add_argument("--log-level", default=None, help=f"logging level (default {settings.LOG_LEVEL})")
    return common


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="msflow",
        description=f"{settings.PROJECT_NAME} {settings.VERSION}",
    )
    cli_router.install(parser, _common_options())
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    """Entry point; returns 0, 2 (configuration), 3 (non-convergence) or 4 (I/O)."""
    args = build_parser().parse_args(argv)
    configure_logging(args.log_level.upper() if args.log_level else None)
    if args.jobs is not None and args.jobs < 1:
        print("error: --jobs must be at least 1", file=sys.stderr)
        return 2
    try:
        return args.handler(args)
    except SolverError as exc:
        logger.debug("command %s failed", args.command, exc_info=True)
        print(f"error: {exc.detail}", file=sys.stderr)
        return exc.exit_code
