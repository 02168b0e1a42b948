import json

import pytest

from teamsem.structures import (
    EvaluationError,
    StructureError,
    denotation,
    eval_term,
    extend,
    load_structure,
    make_structure,
    structure_from_json,
    structure_to_json,
    tarski_sat,
)
from teamsem.syntax import parse
from teamsem.syntax.ast import Const, Func, Var

from conftest import U2, U3, team


def test_eval_term_constant():
    m = make_structure(U2, {}, constants={"c": "a"})
    assert eval_term(m, {}, Const("c")) == "a"


def test_eval_term_variable():
    m = make_structure(U2, {})
    assert eval_term(m, {"x": "b"}, Var("x")) == "b"


def test_eval_term_nested_function():
    m = make_structure(U2, {}, functions={"f": {("a",): "a", ("b",): "b"}})
    assert eval_term(m, {"x": "a"}, Func("f", (Func("f", (Var("x"),)),))) == "a"


def test_eval_term_errors():
    m = make_structure(U2, {})
    with pytest.raises(EvaluationError, match="x"):
        eval_term(m, {}, Var("x"))
    with pytest.raises(EvaluationError, match="g"):
        eval_term(m, {"x": "a"}, Func("g", (Var("x"),)))


def test_extend():
    assert dict(extend({"x": "a"}, ("b",), ("x",))) == {"x": "b"}
    assert dict(extend({}, ("a", "b"), ("x", "y"))) == {"x": "a", "y": "b"}
    assert dict(extend({"x": "a", "y": "b"}, ("c",), ("y",))) == {"x": "a", "y": "c"}
    with pytest.raises(ValueError):
        extend({}, ("a",), ("x", "y"))
    with pytest.raises(ValueError):
        extend({}, ("a", "b"), ("x", "x"))


def test_tarski_basic():
    m = make_structure(U2, {"R": [("a",)]})
    assert tarski_sat(m, {"x": "a"}, parse("R(x)", "fo"))
    assert tarski_sat(m, {}, parse("exists x. x = x", "fo"))
    assert not tarski_sat(m, {}, parse("forall x. x != x", "fo"))


def test_tarski_most_type_11():
    # |A ∩ B| = 1 >= |A \ B| = 1
    m = make_structure(U3, {"A": [("a",), ("b",)], "B": [("b",), ("c",)]})
    assert tarski_sat(m, {}, parse("Q[most](x. A(x), y. B(y))", "foq"))
    m = make_structure(U3, {"A": [("a",), ("b",)], "B": [("c",)]})
    assert not tarski_sat(m, {}, parse("Q[most](x. A(x), y. B(y))", "foq"))


def test_tarski_rejects_team_atoms():
    m = make_structure(U2, {})
    with pytest.raises(EvaluationError):
        tarski_sat(m, {"x": "a", "y": "a"}, parse("dep(x, y)", "dep"))


def test_denotation_examples():
    m = make_structure(U2, {"R": [("a", "b")]})
    assert denotation(m, parse("x = x"), ("x",)) == team(["x"], [["a"], ["b"]])
    empty = denotation(m, parse("x != x"), ("x",))
    assert empty.is_empty() and empty.domain == ("x",)
    assert denotation(m, parse("R(x, y)"), ("x", "y")) == team(["x", "y"], [["a", "b"]])
    with pytest.raises(EvaluationError):
        denotation(m, parse("R(x, y)"), ("x",))


def test_json_round_trip(tmp_path):
    data = {"universe": ["a", "b"], "relations": {"R": {"arity": 2, "tuples": [["a", "b"]]}},
            "functions": {"f": {"arity": 1, "map": [[["a"], "b"], [["b"], "a"]]}},
            "constants": {"c": "a"}}
    m = structure_from_json(data)
    assert structure_from_json(structure_to_json(m)) == m
    p = tmp_path / "m.json"
    p.write_text(json.dumps(data))
    assert load_structure(p) == m


@pytest.mark.parametrize("bad, where", [
    ({"universe": []}, "universe"),
    ({"universe": ["a", "a"]}, "duplicate"),
    ({"universe": ["a"], "relations": {"R": {"arity": 2, "tuples": [["a"]]}}}, "R"),
    ({"universe": ["a"], "relations": {"R": {"arity": 1, "tuples": [["z"]]}}}, "z"),
    ({"universe": ["a", "b"], "functions": {"f": {"arity": 1, "map": [[["a"], "b"]]}}}, "f"),
])
def test_loader_rejects(bad, where):
    with pytest.raises(StructureError, match=where):
        structure_from_json(bad)
