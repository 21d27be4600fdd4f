import numpy as np

from algebra.complexes import ComplexA, derived_hom_dim
from algebra.heart import is_exact_over_heart
from constants import FIXTURE_A2_FILE, HOM_TARGETS_PER_RESOLUTION
from report import Report, Status
from suites import (
    SuiteRun,
    _Check,
    _exactness,
    heart_complex_of,
    run_equivalence_suite,
    run_torsion_suite,
    tilting_summary,
)
from workspace import load_workspace


def test_tilting_summary(a2_pair):
    summary = tilting_summary(a2_pair)
    assert summary["tilting"] is True
    assert summary["injectives"] == {"I1": "torsion", "I2": "torsion"}
    assert summary["degenerate"] is None


def test_check_keeps_first_witness():
    report = Report("verify", "memory")
    check = _Check("parity")
    for n in (2, 3, 5):
        check.trial(lambda k: (k % 2 == 0, {"n": k}), n)
    check.close(report)
    verdict = report.verdict("parity")
    assert verdict.status is Status.FAIL
    assert verdict.witness == {"n": 3}
    assert verdict.detail.startswith("1/3 samples")


def test_check_turns_errors_into_failures():
    report = Report("verify", "memory")
    check = _Check("raises")

    def boom():
        raise RuntimeError("no lift")

    check.trial(boom)
    check.close(report)
    assert report.verdict("raises").witness == {"error": "RuntimeError: no lift"}


def test_check_without_samples_is_not_run():
    report = Report("verify", "memory")
    _Check("empty").close(report)
    assert report.verdict("empty").status is Status.NOT_RUN


def test_heart_complex_of_torsion_complex(a2_pair, top_map):
    objects, diffs = heart_complex_of(a2_pair, ComplexA.two_term(top_map, -1))
    assert len(objects) == 2 and len(diffs) == 1
    assert not is_exact_over_heart(a2_pair, objects, diffs)
    assert heart_complex_of(a2_pair, ComplexA.zero(a2_pair.context)) == ([], [])


def test_torsion_suite_passes_on_a2():
    ws = load_workspace(FIXTURE_A2_FILE)
    report = Report("verify", ws.name, seed=2, trials=4)
    run_torsion_suite(SuiteRun(ws, np.random.default_rng(2), 4, report))
    assert report.passed
    assert len(report.verdicts) == 6


def test_every_resolution_is_checked_against_all_targets(monkeypatch):
    import suites

    calls = []

    def counting(X, Y, n=0):
        calls.append(n)
        return derived_hom_dim(X, Y, n)

    monkeypatch.setattr(suites, "derived_hom_dim", counting)
    ws = load_workspace(FIXTURE_A2_FILE)
    report = Report("verify", ws.name, seed=4, trials=3)
    run_equivalence_suite(SuiteRun(ws, np.random.default_rng(4), 3, report))
    assert report.verdict("theorem: resolution").detail.startswith("3/3 samples")
    assert len(calls) == 3 * HOM_TARGETS_PER_RESOLUTION * 2
    assert set(calls) <= {-1, 0, 1, 2}
    assert len(set(calls)) > 1


def test_exactness_of_realized_sequences_is_verified(a2_pair, heart_objects):
    for B in heart_objects:
        for use_cover in (False, True):
            ok, witness = _exactness(a2_pair, B, use_cover)
            assert ok, witness
