"""
cgolab command line.

Usage:
    python cgolab.py <subcommand> [--config path.json] [--output dir] [--jobs N] [--dry-run]

Exit codes: 0 when every check passes, 1 on a failed check, 2 on a config error.
"""

import argparse
import logging
import sys
from pathlib import Path
from typing import List, Optional

from config.experiment import ExperimentConfig, load_config, validate_config
from src.cli import COMMANDS
from src.exceptions import ConfigError

logger = logging.getLogger("cgolab")

LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'


def parse_args(argv: Optional[List[str]] = None) -> argparse.Namespace:
    parser = argparse.ArgumentParser(
        prog="cgolab",
        description="Numerical checks of the partial-data CGO construction in the plane.",
    )
    parser.add_argument("subcommand", choices=sorted(COMMANDS), help="Pipeline to run")
    parser.add_argument("--config", type=Path, default=None,
                        help="JSON experiment config (default: built-in defaults)")
    parser.add_argument("--output", type=Path, default=None, help="Overrides the configured output_dir")
    parser.add_argument("--jobs", type=int, default=None, help="Worker cap for parallel sections")
    parser.add_argument("--db", type=Path, default=None, help="Run ledger file (default: data/cgolab_runs.db)")
    parser.add_argument("--no-ledger", action="store_true", help="Do not log the run to the ledger")
    parser.add_argument("--dry-run", action="store_true", help="Validate the config and exit")
    parser.add_argument("--verbose", action="store_true", help="Debug logging")
    return parser.parse_args(argv)


def resolve_config(args: argparse.Namespace) -> ExperimentConfig:
    """
    Raises:
        ConfigError: On an unreadable or invalid config
    """
    if args.config is not None:
        return load_config(args.config, output_dir=args.output)
    config = ExperimentConfig()
    if args.output is not None:
        config = config.with_output_dir(args.output)
    validate_config(config)
    return config


def main(argv: Optional[List[str]] = None) -> int:
    args = parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.INFO, format=LOG_FORMAT)

    try:
        config = resolve_config(args)
        if args.jobs is not None and args.jobs < 1:
            raise ConfigError(f"--jobs must be positive, got {args.jobs}")
    except ConfigError as e:
        logger.error(f"Config error: {e}")
        return 2

    if args.dry_run:
        logger.info(f"Dry run: config {config.config_hash()[:12]} is valid")
        return 0

    try:
        report = COMMANDS[args.subcommand](config, jobs=args.jobs, db_path=args.db, record=not args.no_ledger)
    except ConfigError as e:
        logger.error(f"Config error: {e}")
        return 2
    except Exception as e:
        logger.exception(f"{args.subcommand} aborted: {e}")
        return 1

    if not report.passed:
        failed = [c.name for c in report.checks if not c.passed]
        logger.error(f"[{args.subcommand}] FAIL ({len(failed)} of {len(report.checks)} checks): {failed}")
        return 1

    logger.info(f"[{args.subcommand}] OK ({len(report.checks)} checks)")
    return 0


if __name__ == "__main__":
    sys.exit(main())
