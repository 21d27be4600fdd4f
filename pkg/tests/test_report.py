from algebra.exact_linalg import FpMatrix
from constants import EXIT_FAIL, EXIT_PASS, WITNESS_ELISION
from report import Report, Status, serialize_matrix


def test_exit_code_follows_verdicts():
    report = Report("verify", "a2.json", seed=7, trials=3)
    report.add("first", True)
    report.add("skipped", None, "pair is not tilting")
    assert report.passed and report.exit_code == EXIT_PASS
    report.add("second", False, "1/3 samples", {"dims": [1, 0]})
    assert not report.passed and report.exit_code == EXIT_FAIL
    assert report.verdict("skipped").status is Status.NOT_RUN


def test_machine_format_round_trip():
    report = Report("tilt", "a2.json", seed=1, trials=2)
    report.add("check", False, "detail", {"matrix": [[1, 2]]})
    report.tables["heart_hom"] = {"columns": ["A"], "labels": ["A"], "rows": [[1]]}
    report.facts["tilting"] = True
    restored = Report.from_json(report.to_json())
    assert restored.to_dict() == report.to_dict()
    assert restored.verdicts[0].status is Status.FAIL


def test_text_format_shows_failing_witness():
    report = Report("verify", "a2.json")
    report.add("broken", False, "0/1 samples", {"module": [1, 1]})
    text = report.render_text()
    assert "[FAIL] broken: 0/1 samples" in text
    assert 'witness: {"module": [1, 1]}' in text
    assert text.splitlines()[-1].startswith("FAIL")


def test_large_witness_matrices_are_elided():
    big = FpMatrix.identity(WITNESS_ELISION + 1, 5)
    assert serialize_matrix(big) == {"shape": [WITNESS_ELISION + 1, WITNESS_ELISION + 1],
                                     "rank": WITNESS_ELISION + 1}
    assert len(serialize_matrix(big, full=True)) == WITNESS_ELISION + 1
    assert serialize_matrix(FpMatrix([[1, 2]], 5)) == [[1, 2]]
