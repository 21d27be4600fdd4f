import argparse

import numpy as np

from algebra.heart import HeartObject, heart_hom_space, heart_object_from_module, is_stalk, shifted_heart_object
from algebra.quiver_rep import hom_dimension, standard_module
from algebra.torsion import TorsionKind, TorsionPair, classify, require_tilting
from logger_config import get_logger
from report import Report
from suites import SuiteRun, run_exactness_suite, run_heart_suite
from workspace import Workspace

logger = get_logger(__name__)


def default_objects(TP: TorsionPair) -> list[HeartObject]:
    """Simples that are torsion as stalks, simples that are torsion-free shifted."""
    objects = []
    for v in range(TP.context.vertex_count):
        S = standard_module(TP.context, "S", v)
        kind = classify(TP, S).kind
        if kind is TorsionKind.TORSION:
            objects.append(heart_object_from_module(TP, S))
        elif kind is TorsionKind.TORSION_FREE:
            objects.append(shifted_heart_object(TP, S))
    return objects


def _module_hom(B1: HeartObject, B2: HeartObject) -> int | None:
    """Hom between the underlying modules when both objects sit in one degree together."""
    if is_stalk(B1) and is_stalk(B2):
        return hom_dimension(B1.cx.term(0), B2.cx.term(0))
    if B1.cx.term(0).is_zero() and B2.cx.term(0).is_zero():
        return hom_dimension(B1.cx.term(-1), B2.cx.term(-1))
    return None


class Tilt:
    """Heart Hom table, torsion pair on the heart, and exactness in both categories."""

    name = "tilt"
    help = "tabulate Hom in the tilted heart and check the torsion pair it carries"

    def run(self, args: argparse.Namespace, ws: Workspace, report: Report, rng: np.random.Generator) -> None:
        TP = ws.pair
        require_tilting(TP)
        objects = ws.heart_objects or default_objects(TP)
        labels = [str(B) for B in objects]
        rows, mismatches = [], []
        for B1 in objects:
            row = []
            for B2 in objects:
                dim = heart_hom_space(B1, B2).dim
                expected = _module_hom(B1, B2)
                if expected is not None and expected != dim:
                    mismatches.append([str(B1), str(B2), dim, expected])
                row.append(dim)
            rows.append(row)
        report.tables["heart_hom"] = {"columns": labels, "labels": labels, "rows": rows}
        report.add("heart: Hom between stalks matches module Hom", not mismatches,
                   f"{len(objects)} objects", mismatches or None)
        logger.info(f"Heart Hom table over {labels}: {rows}")

        run = SuiteRun(ws, rng, report.trials, report, args.full_witness)
        run_heart_suite(run)
        run_exactness_suite(run)


def setup(subparsers, common: argparse.ArgumentParser) -> None:
    """Register the tilt command."""
    command = Tilt()
    parser = subparsers.add_parser(command.name, parents=[common], help=command.help)
    parser.set_defaults(handler=command.run)
