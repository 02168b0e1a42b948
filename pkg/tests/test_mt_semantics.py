import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from teamsem.corpus import CorpusConfig, corpus
from teamsem.mt_semantics import (
    CapExceeded,
    evaluator,
    mt_sat,
    mt_sentence_sat,
    prepare,
    satisfying_teams,
)
from teamsem.structures import EvaluationError, denotation, make_structure
from teamsem.syntax import bound_vars, free_vars, is_untangled, parse
from teamsem.teams import Team, all_teams, exists_project, forall_project

from conftest import U2, team

MT_SAMPLE = corpus(CorpusConfig("mt", exhaustive_depth=0, random_count=120, seed=5))
ENGINES = ["functional", "naive", "table", "sat"]


@pytest.mark.parametrize("engine", ENGINES)
def test_exists_sentence_on_nonempty_teams(engine, m2):
    phi = parse("exists x. x = x", "mt")
    for x in all_teams(U2, ("x",)):
        assert mt_sat(m2, x, phi, engine) == (not x.is_empty())


@pytest.mark.parametrize("engine", ENGINES)
def test_literal_biconditional(engine, m2):
    phi = parse("R(x, y)", "mt")
    den = denotation(m2, phi, ("x", "y"))
    for x in all_teams(U2, ("x", "y")):
        assert mt_sat(m2, x, phi, engine) == (x == den)


@pytest.mark.parametrize("w", [("x",), ("y",), ("x", "y")])
def test_top_characterization(w, m2):
    phi = parse(f"TOP({', '.join(w)})", "mt")
    rest = [v for v in ("x", "y") if v not in w]
    for x in all_teams(U2, ("x", "y")):
        ex = x
        for v in w:
            ex = exists_project(ex, v)
        want = x.is_empty() or ex == Team.full(U2, rest)
        assert mt_sat(m2, x, phi) == want


def test_top_cylinder_reading(m2):
    # X ⊨ TOP(x) iff X is a cylinder over dom ∖ {x}: ∀yX = ∃yX
    phi = parse("TOP(x)", "mt")
    for x in all_teams(U2, ("x", "y")):
        want = forall_project(x, "y") == exists_project(x, "y")
        assert mt_sat(m2, x, phi, "table", top="cylinder") == want
    # the readings agree when the TOP variables are outside the domain
    for x in all_teams(U2, ("y",)):
        assert mt_sat(m2, x, phi, top="cylinder") == mt_sat(m2, x, phi, top="unfold")


@pytest.mark.parametrize("engine", ENGINES)
def test_sentences(engine, m2):
    assert mt_sentence_sat(m2, parse("exists x. x = x", "mt"), engine)
    assert not mt_sentence_sat(m2, parse("forall x. x != x", "mt"), engine)


def test_satisfying_teams_examples(m2):
    assert satisfying_teams(m2, parse("x = x", "mt"), ["x"]) == [Team.full(U2, ["x"])]
    # X = ∅ or ∃xX = {ε}: every team over {x}
    assert satisfying_teams(m2, parse("TOP(x)", "mt"), ["x"]) == list(all_teams(U2, ["x"]))
    assert satisfying_teams(m2, parse("TOP(x)", "mt"), ["y"]) == \
        [Team.empty(U2, ["y"]), Team.full(U2, ["y"])]
    with pytest.raises(CapExceeded):
        satisfying_teams(m2, parse("x = x", "mt"), ["x", "y", "z", "w", "v"])
    with pytest.raises(EvaluationError):
        satisfying_teams(m2, parse("R(x, y)", "mt"), ["x"])


def test_rejects_dependence_atoms(m2):
    with pytest.raises((EvaluationError, ValueError)):
        mt_sat(m2, Team.full(U2, ["x", "y"]), parse("dep(x, y)", "dep"))


def test_engines_agree_on_a_sample(m2):
    evs = {e: evaluator(m2, e) for e in ENGINES}
    for phi in MT_SAMPLE:
        p = prepare(phi)
        dom = tuple(sorted(free_vars(phi)))
        for x in all_teams(U2, dom):
            got = {e: ev.sat(x, p) for e, ev in evs.items()}
            assert len(set(got.values())) == 1, (phi, x, got)


def test_untangled_fo_only_denotation(m2):
    forms = corpus(CorpusConfig("foq", exhaustive_depth=0, random_count=80, seed=1))
    ev = evaluator(m2, "table")
    for phi in forms:
        if not is_untangled(phi):
            continue
        dom = tuple(sorted(free_vars(phi)))
        if set(dom) & bound_vars(phi):
            continue
        den = denotation(m2, phi, dom)
        p = prepare(phi)
        assert [x for x in all_teams(U2, dom) if ev.sat(x, p)] == [den]


def test_generalized_e_is_exists(m2):
    for body in ["R(x, y)", "P(x) \\/ x = y", "TOP(x) && x != y"]:
        a = parse(f"Q[E] x. {body}", "mt")
        b = parse(f"exists x. {body}", "mt")
        for x in all_teams(U2, ("y",)):
            assert mt_sat(m2, x, a) == mt_sat(m2, x, b)


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(["E", "A", "exactly:1", "atleast:1"]),
       st.sampled_from(["E", "A", "exactly:1", "atleast:1"]),
       st.sampled_from(["R(x, y)", "P(x) \\/ R(y, x)", "x = y", "!R(x, x) & P(y)"]),
       st.integers(0, 3))
def test_iteration_on_untangled_teams(a, b, body, bits):
    m = make_structure(U2, {"P": [("b",)], "R": [("a", "b"), ("b", "b")]})
    x = Team(U2, ("z",), bits)
    lhs = mt_sat(m, x, parse(f"Q[iter({a},{b})] x y. {body}", "mt"), "table")
    rhs = mt_sat(m, x, parse(f"Q[{a}] x. Q[{b}] y. {body}", "mt"), "table")
    assert lhs == rhs


def test_iteration_breaks_on_tangled_teams(bare2):
    # the recorded counterexample: X = ∅ over {y}
    x = Team.empty(U2, ["y"])
    m = make_structure(U2, {"P": []}, arities={"P": 1})
    assert not mt_sat(m, x, parse("Q[iter(A,E)] x y. !P(x)", "mt"))
    assert mt_sat(m, x, parse("Q[A] x. Q[E] y. !P(x)", "mt"))


def test_weak_locality_counterexample(bare2):
    # φ = TOP(x) binds x; dummy y ∈ dom(X) does not occur in φ
    x = team(["x", "y"], [["a", "a"], ["b", "b"]])
    phi = parse("TOP(x)", "mt")
    lhs = mt_sat(bare2, x, phi)
    ex_y = exists_project(x, "y")
    rhs = mt_sat(bare2, ex_y, phi) and forall_project(x, "y") == ex_y
    assert lhs and not rhs
