"""
Command-line entrypoint.

    python -m src.main run --config runs/hopf.json [--seed N] [--out path] [--record]
    python -m src.main list
    python -m src.main validate --entry hopf_example
"""

import argparse
import json
import logging
import sys

from src.errors import SoulcurvError
from src.runner.config import RunConfig, load_config
from src.runner.report import dumps
from src.runner.run import EXIT_FINDINGS, EXIT_OK, EXIT_USAGE, USAGE_ERRORS, execute, run
from src.settings import LOG_LEVEL, RECORD_RUNS
from src.zoo.catalog import zoo_catalog

logger = logging.getLogger(__name__)


def _configure_logging(verbose: bool) -> None:
    logging.basicConfig(
        level=logging.DEBUG if verbose else LOG_LEVEL,
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
        force=True,
    )


def cmd_run(args: argparse.Namespace) -> int:
    config = load_config(args.config, seed=args.seed, output=args.out)
    outcome = execute(config, config_path=args.config, record=args.record or RECORD_RUNS)
    for failure in outcome.failures:
        print(f"FAIL {failure}")
    print(f"exit {outcome.exit_code}: report at {config.output}")
    return outcome.exit_code


def cmd_list(args: argparse.Namespace) -> int:
    for entry in zoo_catalog():
        print(json.dumps(entry.summary()))
    return EXIT_OK


def cmd_validate(args: argparse.Namespace) -> int:
    """Identity suite only, report to stdout."""
    config = RunConfig(entries=(args.entry,), suites=("identities",))
    outcome = run(config)
    print(dumps(outcome.report))
    return outcome.exit_code


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="soulcurv", description="Curvature checks around souls of nonnegatively curved metrics")
    p.add_argument("--verbose", action="store_true", help="Log at DEBUG (overrides SOULCURV_LOG_LEVEL)")
    sub = p.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="Run the suites named in a config file")
    p_run.add_argument("--config", required=True, help="Path to a JSON run config")
    p_run.add_argument("--seed", type=int, default=None, help="Seed (CLI > config > env:SOULCURV_DEFAULT_SEED)")
    p_run.add_argument("--out", default=None, help="Report path (CLI > config > env:SOULCURV_REPORT_PATH)")
    p_run.add_argument("--record", action="store_true", help="Record the run in the run log database")
    p_run.set_defaults(func=cmd_run)

    p_list = sub.add_parser("list", help="List catalog entries and their metadata")
    p_list.set_defaults(func=cmd_list)

    p_val = sub.add_parser("validate", help="Run the identity suite on one entry")
    p_val.add_argument("--entry", required=True)
    p_val.set_defaults(func=cmd_validate)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    _configure_logging(args.verbose)
    try:
        return args.func(args)
    except USAGE_ERRORS as e:
        logger.error(f"{type(e).__name__}: {e}")
        return EXIT_USAGE
    except SoulcurvError as e:
        # Failures outside any suite still count as findings.
        logger.error(f"Run aborted: {type(e).__name__}: {e}")
        return EXIT_FINDINGS


if __name__ == "__main__":
    sys.exit(main())
