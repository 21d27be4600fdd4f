import copy
import json

import pytest

from algebra.complexes import cohomology_dims
from algebra.errors import WorkspaceError
from constants import FIXTURE_A2_FILE, FIXTURE_A3_FILE
from workspace import load_workspace, parse_expression, parse_workspace

A2 = {
    "label": "A2",
    "prime": 5,
    "quiver": {"vertices": 2, "arrows": [{"name": "a", "source": 1, "target": 2}]},
    "modules": {"M": {"dims": [1, 2], "arrows": {"a": [[1], [0]]}}},
    "torsion_generator": "P1+S1",
}


def with_changes(**changes):
    data = copy.deepcopy(A2)
    data.update(changes)
    return data


def test_load_bundled_a2():
    ws = load_workspace(FIXTURE_A2_FILE)
    assert ws.label == "FIXTURE-A2"
    assert ws.prime == 5
    assert list(ws.modules) == ["T", "F", "M"]
    assert ws.modules["T"].dims == (2, 1)
    assert ws.modules["M"].dims == (1, 2)
    assert [str(B) for B in ws.heart_objects] == ["S2[1]", "P1", "S1"]
    assert cohomology_dims(ws.complexes["torsion"]) == {-1: (0, 1)}
    assert ws.complexes["empty"].is_zero()


def test_load_bundled_a3():
    ws = load_workspace(FIXTURE_A3_FILE)
    assert ws.context.vertex_count == 3
    assert len(ws.heart_objects) == 4
    assert cohomology_dims(ws.complexes["P2toP1"]) == {1: (1, 0, 0)}


def test_prime_override():
    ws = load_workspace(FIXTURE_A2_FILE, prime_override=7)
    assert ws.prime == 7
    assert ws.modules["M"].p == 7


def test_parse_expression():
    ws = parse_workspace(A2)
    assert parse_expression(ws.context, "P1+S1", ws.modules).dims == (2, 1)
    assert parse_expression(ws.context, "M + S2", ws.modules).dims == (1, 3)
    assert parse_expression(ws.context, "0", ws.modules).is_zero()
    with pytest.raises(WorkspaceError) as excinfo:
        parse_expression(ws.context, "Q1", ws.modules, "modules.X")
    assert excinfo.value.where == "modules.X"
    with pytest.raises(WorkspaceError):
        parse_expression(ws.context, "P3", ws.modules)


def test_syntax_error_has_line_and_column(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text('{"prime": 5,\n  "quiver": }\n')
    with pytest.raises(WorkspaceError) as excinfo:
        load_workspace(path)
    assert excinfo.value.where.startswith("bad.json:2:")


def test_missing_file(tmp_path):
    with pytest.raises(WorkspaceError, match="file not found"):
        load_workspace(tmp_path / "nowhere.json")


def test_wrong_matrix_shape_names_the_key():
    data = with_changes(modules={"M": {"dims": [1, 2], "arrows": {"a": [[1, 0]]}}})
    with pytest.raises(WorkspaceError) as excinfo:
        parse_workspace(data)
    assert excinfo.value.where == "modules.M.arrows.a"


def test_unknown_arrow_names_the_key():
    data = with_changes(modules={"M": {"dims": [1, 1], "arrows": {"b": [[1]]}}})
    with pytest.raises(WorkspaceError) as excinfo:
        parse_workspace(data)
    assert excinfo.value.where == "modules.M.arrows.b"


def test_composite_prime_is_rejected():
    with pytest.raises(WorkspaceError) as excinfo:
        parse_workspace(with_changes(prime=6))
    assert excinfo.value.where == "prime"


def test_cyclic_quiver_is_rejected():
    quiver = {"vertices": 2, "arrows": [{"name": "a", "source": 1, "target": 2},
                                        {"name": "b", "source": 2, "target": 1}]}
    with pytest.raises(WorkspaceError) as excinfo:
        parse_workspace(with_changes(quiver=quiver, modules={}))
    assert excinfo.value.where == "quiver"


def test_standard_names_cannot_be_shadowed():
    with pytest.raises(WorkspaceError) as excinfo:
        parse_workspace(with_changes(modules={"P1": "S1"}))
    assert excinfo.value.where == "modules.P1"


def test_missing_generator():
    data = with_changes()
    del data["torsion_generator"]
    with pytest.raises(WorkspaceError, match="torsion_generator"):
        parse_workspace(data)


def test_non_complex_is_rejected():
    complexes = {"bad": {"terms": {"0": "P1", "1": "P1", "2": "S1"},
                         "differentials": {"0": {"1": [[1]], "2": [[1]]}, "1": {"1": [[1]]}}}}
    with pytest.raises(WorkspaceError) as excinfo:
        parse_workspace(with_changes(complexes=complexes))
    assert excinfo.value.where == "complexes.bad"


def test_heart_objects_are_checked():
    with pytest.raises(WorkspaceError) as excinfo:
        parse_workspace(with_changes(heart_objects=["S1", "S2"]))
    assert excinfo.value.where == "heart_objects[1]"
    ws = parse_workspace(with_changes(heart_objects=["S2[1]"]))
    assert ws.heart_objects[0].h_minus1.dims == (0, 1)


def test_round_trip_through_file(tmp_path):
    path = tmp_path / "ws.json"
    path.write_text(json.dumps(A2))
    ws = load_workspace(path)
    assert ws.name == "ws"
    assert ws.pair.label == "A2"
