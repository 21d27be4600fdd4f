import argparse

import numpy as np

from algebra.complexes import cohomology_dims, is_quasi_iso
from algebra.equivalence import t_resolve_complex
from algebra.errors import WorkspaceError
from algebra.torsion import is_torsion
from logger_config import get_logger
from report import Report, serialize_chain_map, serialize_complex
from workspace import Workspace

logger = get_logger(__name__)


class Resolve:
    """Print the torsion resolution of a named complex and verify it."""

    name = "resolve"
    help = "resolve a named complex by a complex of torsion modules"

    def run(self, args: argparse.Namespace, ws: Workspace, report: Report, rng: np.random.Generator) -> None:
        if args.complex_name not in ws.complexes:
            known = ", ".join(ws.complexes) or "none"
            raise WorkspaceError(f"unknown complex '{args.complex_name}' (known: {known})", "complexes")
        X = ws.complexes[args.complex_name]
        res = t_resolve_complex(ws.pair, X)
        full = args.full_witness
        report.facts["original"] = serialize_complex(X, full)
        report.facts["resolved"] = serialize_complex(res.resolved, full)
        report.facts["qis"] = serialize_chain_map(res.qis, full)
        report.facts["cohomology"] = {str(n): list(d) for n, d in cohomology_dims(res.resolved).items()}
        report.add("resolve: quasi-isomorphism", is_quasi_iso(res.qis))
        report.add("resolve: torsion terms", all(is_torsion(ws.pair, M) for M in res.resolved.terms.values()))
        report.add("resolve: support window", res.support_ok(),
                   f"degrees {list(X.degrees)} -> {list(res.resolved.degrees)}")
        logger.info(f"Resolved {args.complex_name}: {X!r} -> {res.resolved!r}")


def setup(subparsers, common: argparse.ArgumentParser) -> None:
    """Register the resolve command."""
    command = Resolve()
    parser = subparsers.add_parser(command.name, parents=[common], help=command.help)
    parser.add_argument("complex_name", help="name of a complex in the workspace")
    parser.set_defaults(handler=command.run)
