import argparse

import numpy as np

from algebra.torsion import classify, torsion_quotient
from logger_config import get_logger
from report import Report
from suites import SuiteRun, run_torsion_suite
from workspace import Workspace

logger = get_logger(__name__)


class CheckTorsion:
    """Classify the named modules and run the torsion axioms on random ones."""

    name = "check-torsion"
    help = "classify modules, test (T1)/(T2) and closure properties, and run the tilting test"

    def run(self, args: argparse.Namespace, ws: Workspace, report: Report, rng: np.random.Generator) -> None:
        TP = ws.pair
        rows, labels = [], []
        for name, X in ws.modules.items():
            c = classify(TP, X)
            labels.append(name)
            rows.append([c.kind.value, list(X.dims), list(c.radical.source.dims),
                         list(torsion_quotient(TP, X).target.dims)])
        if rows:
            report.tables["modules"] = {"columns": ["kind", "dims", "radical", "quotient"],
                                        "labels": labels, "rows": rows}
        run_torsion_suite(SuiteRun(ws, rng, report.trials, report, args.full_witness))
        report.tables["injectives"] = {"columns": ["kind"], "labels": list(report.facts["injectives"]),
                                       "rows": [[k] for k in report.facts["injectives"].values()]}
        logger.info(f"Torsion pair {TP}: tilting={report.facts['tilting']}")


def setup(subparsers, common: argparse.ArgumentParser) -> None:
    """Register the check-torsion command."""
    command = CheckTorsion()
    parser = subparsers.add_parser(command.name, parents=[common], help=command.help)
    parser.set_defaults(handler=command.run)
