import argparse
import importlib
import sys
import time
from pathlib import Path

import numpy as np

from algebra.errors import ContextMismatch, HrsLabError, NotTilting, WorkspaceError
from config import Config
from constants import EXIT_FAIL, EXIT_INPUT_ERROR
from logger_config import get_logger
from report import Report
from workspace import load_workspace

logger = get_logger(__name__)

COMMANDS_DIR = Path(__file__).parent / "commands"


def build_common_parser() -> argparse.ArgumentParser:
    """Flags shared by every subcommand."""
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("workspace", help="path to a workspace JSON file")
    common.add_argument("--seed", type=int, default=None, help="random seed (default: HRS_LAB_SEED)")
    common.add_argument("--trials", type=int, default=None, help="samples per property (default: HRS_LAB_TRIALS)")
    common.add_argument("--prime-override", type=int, default=None, help="replace the workspace prime")
    common.add_argument("--format", choices=("text", "machine"), default="text")
    common.add_argument("--full-witness", action="store_true", help="do not elide large witness matrices")
    common.add_argument("--output", type=Path, default=None, help="write the report here instead of stdout")
    return common


def load_commands(subparsers, common: argparse.ArgumentParser) -> int:
    """Register every command module from the commands directory."""
    if not COMMANDS_DIR.exists():
        logger.error("./commands directory not found!")
        return 0

    loaded_count = 0
    failed_count = 0

    for file in sorted(COMMANDS_DIR.glob("*.py")):
        if file.stem.startswith("_"):
            continue

        try:
            module = importlib.import_module(f"commands.{file.stem}")
            module.setup(subparsers, common)
            logger.debug(f"Loaded command: {file.stem}")
            loaded_count += 1
        except ImportError as e:
            logger.error(f"Command import error ({file.stem}): {type(e).__name__}: {e}")
            failed_count += 1
        except AttributeError:
            logger.error(f"Command module {file.stem} has no setup()")
            failed_count += 1
        except Exception as e:
            logger.error(f"Unexpected error loading {file.stem}: {type(e).__name__}: {e}")
            failed_count += 1

    logger.debug(f"Command loading complete: {loaded_count} loaded, {failed_count} failed")
    return loaded_count


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hrs-lab", description="Tilting torsion pairs on quiver representations.")
    subparsers = parser.add_subparsers(dest="command", required=True)
    load_commands(subparsers, build_common_parser())
    return parser


def emit(report: Report, args: argparse.Namespace) -> None:
    text = report.to_json() if args.format == "machine" else report.render_text()
    if args.output is None:
        print(text)
        return
    try:
        args.output.parent.mkdir(parents=True, exist_ok=True)
        args.output.write_text(text + "\n", encoding="utf-8")
        logger.info(f"Report written to {args.output}")
    except OSError as e:
        logger.error(f"Could not write report: {type(e).__name__}: {e}")


def main(argv: list[str] | None = None) -> int:
    """Command-line entry point; returns the process exit code."""
    if not Config.load():
        logger.error("Configuration validation failed. Exiting.")
        return EXIT_INPUT_ERROR

    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_INPUT_ERROR if e.code else 0

    seed = args.seed if args.seed is not None else Config.SEED
    trials = args.trials if args.trials is not None else Config.TRIALS
    prime = args.prime_override if args.prime_override is not None else Config.PRIME_OVERRIDE
    report = Report(args.command, str(args.workspace), seed, trials)
    started = time.perf_counter()

    try:
        ws = load_workspace(args.workspace, prime)
        logger.info(f"Running {args.command} on {ws.name} (seed {seed}, trials {trials})")
        args.handler(args, ws, report, np.random.default_rng(seed))
        code = report.exit_code
    except (WorkspaceError, NotTilting, ContextMismatch) as e:
        logger.error(f"{type(e).__name__}: {e}")
        report.facts["error"] = f"{type(e).__name__}: {e}"
        code = EXIT_INPUT_ERROR
    except (HrsLabError, RuntimeError) as e:
        logger.error(f"Verification aborted: {type(e).__name__}: {e}")
        report.add("internal consistency", False, f"{type(e).__name__}: {e}")
        code = EXIT_FAIL
    except KeyboardInterrupt:
        logger.info("Interrupted by user")
        return EXIT_INPUT_ERROR

    report.timing_seconds = round(time.perf_counter() - started, 3)
    report.sample_memory()
    emit(report, args)
    logger.info(f"{args.command} finished with exit code {code}")
    return code


if __name__ == "__main__":
    sys.exit(main())
