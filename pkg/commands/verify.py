import argparse

import numpy as np

from constants import SUITES
from logger_config import get_logger
from report import Report, Status
from suites import SuiteRun, run_suites
from workspace import Workspace

logger = get_logger(__name__)


class Verify:
    """Run the property suites with a fixed seed."""

    name = "verify"
    help = "run the torsion, heart, lemma21 and theorem property suites"

    def run(self, args: argparse.Namespace, ws: Workspace, report: Report, rng: np.random.Generator) -> None:
        names = list(SUITES) if args.suite == "all" else [args.suite]
        report.facts["suites"] = names
        run_suites(names, SuiteRun(ws, rng, report.trials, report, args.full_witness))
        failed = [v.name for v in report.verdicts if v.status is Status.FAIL]
        if failed:
            logger.warning(f"{len(failed)} check(s) failed: {', '.join(failed)}")
        else:
            logger.info(f"All {len(report.verdicts)} checks passed or were skipped")


def setup(subparsers, common: argparse.ArgumentParser) -> None:
    """Register the verify command."""
    command = Verify()
    parser = subparsers.add_parser(command.name, parents=[common], help=command.help)
    parser.add_argument("--suite", choices=("all",) + tuple(SUITES), default="all")
    parser.set_defaults(handler=command.run)
