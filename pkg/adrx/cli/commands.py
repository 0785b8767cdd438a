"""
Command-line entry point: ``adrx run --config <path> [...]``
"""

import argparse
import asyncio
import sys
import uuid
from typing import List, Optional

from loguru import logger

from .. import __version__
from ..config.settings import settings
from ..models import RunMode
from ..services.experiment_runner import run_experiment
from ..services.laplace import ConvergenceFailure
from ..services.quadrature import QuadratureFailure
from ..utils.config_loader import ConfigParseError, ConfigValidationError, apply_overrides, load_config

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_VALIDATION = 2
EXIT_NUMERICS = 3

LOG_FORMAT = "{time:YYYY-MM-DD HH:mm:ss} | {level} | {name}:{function}:{line} | {message}"


def configure_logging() -> None:
    logger.remove()
    logger.add(sys.stderr, level=settings.log_level, format=LOG_FORMAT)
    if settings.log_file:
        logger.add(
            settings.log_file,
            rotation=settings.log_rotation,
            retention=settings.log_retention,
            level=settings.log_level,
            format=LOG_FORMAT,
        )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="adrx",
        description="Reversible adsorption receiver: Monte Carlo simulation and analytical channel response",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    commands = parser.add_subparsers(dest="command", required=True)

    run = commands.add_parser("run", help="run an experiment described by a config file")
    run.add_argument("--config", required=True, help="experiment config (key=value file)")
    run.add_argument("--seed", type=int, default=None, help="base seed (unsigned 64-bit)")
    run.add_argument("--trials", type=int, default=None, help="number of independent emissions")
    run.add_argument(
        "--full-scale", action="store_true", help="use ADRX_FULL_TRIALS trials unless --trials is given"
    )
    run.add_argument("--mode", choices=[m.value for m in RunMode], default=None)
    run.add_argument("--out", default=None, help="CSV output path; the .meta sidecar goes next to it")
    return parser


def run_command(args: argparse.Namespace) -> int:
    try:
        cfg = load_config(args.config)
        trials = args.trials
        if trials is None and args.full_scale:
            trials = settings.full_trials
        cfg = apply_overrides(cfg, seed=args.seed, trials=trials, mode=args.mode, output_path=args.out)
    except (ConfigParseError, ConfigValidationError) as e:
        logger.error(f"Invalid configuration: {e}")
        return EXIT_VALIDATION

    try:
        outcome = asyncio.run(run_experiment(cfg))
    except (QuadratureFailure, ConvergenceFailure) as e:
        logger.error(f"Numerical failure: {type(e).__name__}: {e}")
        return EXIT_NUMERICS
    except Exception as e:
        logger.exception(f"Experiment failed: {type(e).__name__}: {e}")
        return EXIT_FAILURE

    failed = [r for r in outcome.reports if not r.passed]
    if failed:
        logger.warning(f"{len(failed)} of {len(outcome.reports)} comparisons outside acceptance thresholds")
    logger.info(f"Results: {outcome.csv_path} (metadata {outcome.meta_path})")
    return EXIT_OK


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    configure_logging()
    run_id = uuid.uuid4().hex
    with logger.contextualize(run_id=run_id):
        logger.info(f"adrx {__version__} {args.command} (run {run_id})")
        return run_command(args)
