import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from teamsem.corpus import CorpusConfig, corpus
from teamsem.dep_semantics import (
    DepEvaluator,
    dep_sat,
    dep_sat_standard,
    dep_sat_witness,
    dep_sentence_sat,
)
from teamsem.structures import EvaluationError, denotation, make_structure
from teamsem.syntax import free_vars, parse
from teamsem.syntax.ast import Indep
from teamsem.teams import Team, all_teams, restrict

from conftest import U2, team

ENGINES = ["witness", "standard"]
SMALL = [f for f in corpus(CorpusConfig("dep", random_count=60, seed=3)) if len(free_vars(f)) <= 2]


@pytest.mark.parametrize("engine", ENGINES)
def test_dep_atom_examples(engine, bare2):
    graph = team(["x", "y"], [["a", "a"], ["b", "b"]])
    fork = team(["x", "y"], [["a", "a"], ["a", "b"]])
    phi = parse("dep(x, y)", "dep")
    assert dep_sat(bare2, graph, phi, engine)
    assert not dep_sat(bare2, fork, phi, engine)


@pytest.mark.parametrize("engine", ENGINES)
def test_empty_team_satisfies_everything(engine, m2):
    for phi in SMALL[:300]:
        dom = tuple(sorted(free_vars(phi)))
        assert dep_sat(m2, Team.empty(U2, dom), phi, engine)


@pytest.mark.parametrize("engine", ENGINES)
def test_sentences(engine, m2):
    assert dep_sentence_sat(m2, parse("exists x. x = x", "dep"), engine)
    assert not dep_sentence_sat(m2, parse("forall x. x != x", "dep"), engine)
    # a constant y works for every x, a y copying x is not constant
    assert dep_sentence_sat(m2, parse("forall x. exists y. dep(y) & x = x", "dep"), engine)
    assert not dep_sentence_sat(m2, parse("forall x. exists y. dep(y) & x = y", "dep"), engine)
    assert dep_sentence_sat(m2, parse("forall x. exists y. dep(x, y) & x = y", "dep"), engine)


def _indep_oracle(x, cond, left, right):
    rows = list(x)
    for s, t in itertools.product(rows, repeat=2):
        if any(s[v] != t[v] for v in cond):
            continue
        if not any(all(r[v] == s[v] for v in cond + right) and all(r[v] == t[v] for v in left)
                   for r in rows):
            return False
    return True


@pytest.mark.parametrize("engine", ENGINES)
@pytest.mark.parametrize("atom", [
    Indep((), ("x",), ("y",)), Indep(("x",), ("y",), ("z",)), Indep(("z",), ("x", "y"), ("x",)),
    Indep((), ("x",), ("x",)),
])
def test_indep_clause(engine, atom, bare2):
    for x in all_teams(U2, ("x", "y", "z")):
        assert dep_sat(bare2, x, atom, engine) == _indep_oracle(x, atom.cond, atom.left, atom.right)


def test_product_team_is_independent(bare2):
    prod = team(["x", "y"], [["a", "a"], ["a", "b"], ["b", "a"], ["b", "b"]])
    diag = team(["x", "y"], [["a", "a"], ["b", "b"]])
    phi = parse("indep(; x ; y)", "dep")
    assert dep_sat(bare2, prod, phi) and not dep_sat(bare2, diag, phi)


def test_precondition(m2):
    with pytest.raises(EvaluationError):
        dep_sat(m2, Team.full(U2, ["x"]), parse("dep(x, y)", "dep"))
    with pytest.raises(ValueError):
        DepEvaluator(m2, "nosuch")


def test_engines_agree_on_a_sample(m2):
    w, s = DepEvaluator(m2, "witness"), DepEvaluator(m2, "standard")
    for phi in SMALL:
        fv = tuple(sorted(free_vars(phi)))
        for x in all_teams(U2, fv):
            assert w.sat(x, phi) == s.sat(x, phi), phi


@settings(max_examples=150, deadline=None)
@given(st.sampled_from(SMALL), st.integers(0, 15), st.integers(0, 15))
def test_downward_closure_and_locality(phi, bits, mask):
    m = make_structure(U2, {"P": [("a",)], "R": [("a", "b"), ("b", "b")]})
    ev = DepEvaluator(m, "standard")
    x = Team(U2, ("x", "y"), bits)
    if ev.sat(x, phi):
        assert ev.sat(Team(U2, ("x", "y"), bits & mask), phi)
    fv = tuple(sorted(free_vars(phi)))
    assert ev.sat(x, phi) == ev.sat(restrict(x, fv), phi)


def test_flatness(m2):
    ev = DepEvaluator(m2)
    for phi in SMALL:
        if any(c in repr(phi) for c in ("Dep(", "Indep(")):
            continue
        den = denotation(m2, phi, ("x", "y"))
        for x in all_teams(U2, ("x", "y")):
            assert ev.sat(x, phi) == x.issubset(den)


@pytest.mark.parametrize("q", ["atleast:1", "A", "most1"])
def test_monotone_q_clauses_agree(q, m2):
    fn, wit = DepEvaluator(m2, q_clause="function"), DepEvaluator(m2, q_clause="witness")
    for body in ["P(x)", "R(x, y)", "dep(y, x)", "R(x, y) \\/ x = y"]:
        phi = parse(f"Q[{q}] x. {body}", "dep")
        for x in all_teams(U2, ("y",)):
            assert fn.sat(x, phi) == wit.sat(x, phi)
