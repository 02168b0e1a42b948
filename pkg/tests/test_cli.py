import json

import pytest

from teamsem.cli import main

MODEL = {
    "universe": ["a", "b"],
    "relations": {"P": {"arity": 1, "tuples": [["a"]]},
                  "R": {"arity": 2, "tuples": [["a", "b"], ["b", "a"]]}},
}


def write(path, data):
    path.write_text(json.dumps(data))
    return str(path)


@pytest.fixture
def model(tmp_path):
    return write(tmp_path / "m.json", MODEL)


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out.strip(), err.strip()


def test_eval_sentence(capsys, model):
    assert run(capsys, "eval", model, "exists x. x = x") == (0, "true", "")


def test_eval_dep_on_function_graph(capsys, model, tmp_path):
    t = write(tmp_path / "t.json", {"domain": ["x", "y"], "rows": [["a", "b"], ["b", "a"]]})
    assert run(capsys, "eval", model, "dep(x, y)", "--semantics", "dep", "--team", t)[:2] == (0, "true")


def test_eval_literal_denotation_vs_subteam(capsys, model, tmp_path):
    full = write(tmp_path / "d.json", {"domain": ["x", "y"], "rows": [["a", "b"], ["b", "a"]]})
    sub = write(tmp_path / "s.json", {"domain": ["x", "y"], "rows": [["a", "b"]]})
    assert run(capsys, "eval", model, "R(x, y)", "--team", full)[1] == "true"
    assert run(capsys, "eval", model, "R(x, y)", "--team", sub)[1] == "false"
    # the flat reading accepts the subteam
    assert run(capsys, "eval", model, "R(x, y)", "--team", sub, "--semantics", "fo")[1] == "true"


def test_teams_listing(capsys, model):
    code, out, _ = run(capsys, "--format", "json", "teams", model, "P(x)")
    assert code == 0
    data = json.loads(out)
    assert data["domain"] == ["x"]
    assert data["teams"] == [{"domain": ["x"], "rows": [["a"]]}]
    code, out, _ = run(capsys, "teams", model, "TOP(x)", "--domain", "x")
    assert out.endswith("4 team(s)")


def test_teams_cap(capsys, model):
    code, _, err = run(capsys, "teams", model, "x = x", "--domain", "w,x,y,z")
    assert code == 2 and "--unsafe-large" in err


def test_translate(capsys):
    code, out, _ = run(capsys, "translate", "x = x")
    assert (code, out) == (0, "x = x & (exists x. x = x || x != x)")
    _, out, _ = run(capsys, "--format", "json", "translate", "dep(x)", "--block", "polyadic")
    assert json.loads(out)["source"] == "dep(x)"


@pytest.mark.parametrize("q, prop, code", [
    ("exactly:1", "monotone", 1),
    ("exactly:1", "continuous", 0),
    ("most1", "monotone", 0),
    ("even", "continuous", 1),
])
def test_qcheck_exit_codes(capsys, model, q, prop, code):
    got, out, _ = run(capsys, "qcheck", model, q, "--property", prop)
    assert got == code
    assert ("witness:" in out) == (code == 1)


def test_qcheck_json_witness(capsys, model):
    _, out, _ = run(capsys, "--format", "json", "qcheck", model, "exactly:1", "--property", "monotone")
    data = json.loads(out)
    assert data["holds"] is False
    small, big = data["witness"]
    assert set(map(tuple, small)) < set(map(tuple, big))


def test_verify_continuity_chain(capsys):
    code, out, _ = run(capsys, "--format", "json", "verify", "--props", "continuity", "--quantifier", "even")
    assert code == 1
    (check,) = json.loads(out)["checks"]
    chain = check["counterexample"]["chain"]
    assert len(chain) == 3 and chain[0] == []


def test_verify_small_suite_and_determinism(capsys):
    argv = ("--format", "json", "verify", "--props", "qprops,qiso,barwise", "--max-universe", "2")
    code, out, _ = run(capsys, *argv)
    first = json.loads(out)
    assert code == 0 and first["ok"] and first["seed"] == 0
    assert [c["name"] for c in first["checks"]] == ["barwise", "qiso", "qprops"]
    _, out, _ = run(capsys, *argv)
    strip = lambda r: [{k: v for k, v in c.items() if k != "seconds"} for c in r["checks"]]
    assert strip(json.loads(out)) == strip(first)


def test_verify_counterexample_replays(capsys, tmp_path):
    code, out, _ = run(capsys, "--format", "json", "verify", "--props", "prop_dep_atom")
    assert code == 1
    (check,) = json.loads(out)["checks"]
    cx = check["counterexample"]
    m = write(tmp_path / "cm.json", cx["model"])
    t = write(tmp_path / "ct.json", cx["team"])
    _, direct, _ = run(capsys, "eval", m, cx["formula"], "--semantics", "dep", "--team", t)
    _, enc, _ = run(capsys, "eval", m, cx["encoding"], "--team", t)
    assert direct == json.dumps(cx["direct"]) and enc == json.dumps(cx["encoding_value"])
    assert direct != enc


def test_input_errors(capsys, model, tmp_path):
    empty = write(tmp_path / "e.json", {"universe": [], "relations": {}})
    assert run(capsys, "verify", empty)[0] == 2
    assert run(capsys, "eval", empty, "x = x")[0] == 2
    assert run(capsys, "eval", model, "exists x. (")[0] == 2
    assert run(capsys, "eval", str(tmp_path / "missing.json"), "x = x")[0] == 2
    assert run(capsys, "eval", model, "dep(x)", "--semantics", "mt")[0] == 2
    assert run(capsys, "verify", "--props", "nosuch")[0] == 2
