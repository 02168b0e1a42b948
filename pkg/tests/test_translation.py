import pytest

from teamsem.corpus import CorpusConfig, corpus
from teamsem.dep_semantics import DepEvaluator
from teamsem.mt_semantics import evaluator, mt_sat, mt_sentence_sat, prepare
from teamsem.quantifiers import branch, q_member, resolve
from teamsem.structures import denotation, make_structure
from teamsem.syntax import free_vars, parse, subformulas, to_text
from teamsem.syntax.ast import Dep, Eq, Exists, Forall, IAnd, Indep, Var
from teamsem.teams import Team, all_teams, extend_setfn
from teamsem.translation import (
    FreshVars,
    TranslationError,
    branching_formula,
    disjoint_rewrite,
    encode_dep,
    encode_indep,
    top_sentence,
    translate,
    translate_plus,
)

from conftest import U2


def test_top_sentence():
    assert to_text(top_sentence(("x",))) == "exists x. x = x || x != x"
    assert to_text(top_sentence(("x", "y"))) == "exists x. exists y. x = x || x != x"
    with pytest.raises(TranslationError):
        top_sentence(())


def test_encode_indep_shape():
    phi = encode_indep((), ("x",), ("y",), ("x", "y"))
    assert phi == IAnd(top_sentence(("x",)), top_sentence(("y",)))
    wrapped = encode_indep((), ("x",), ("y",), ("x", "y", "z"))
    assert isinstance(wrapped, Forall) and wrapped.var == "z" and wrapped.body == phi
    poly = encode_indep((), ("x",), ("y",), ("w", "x", "y", "z"), block="polyadic")
    assert poly.variables == ("w", "z")
    with pytest.raises(TranslationError):
        encode_indep(("x",), ("x",), ("y",), ("x", "y"))


def test_product_teams_satisfy_encode_indep(bare2):
    phi = prepare(encode_indep((), ("x",), ("y",), ("x", "y")))
    subsets = [{"a"}, {"b"}, {"a", "b"}]
    for a in subsets:
        for b in subsets:
            x = extend_setfn(extend_setfn(Team.unit(U2), lambda s: [(e,) for e in sorted(a)], ["x"]),
                             lambda s: [(e,) for e in sorted(b)], ["y"])
            assert mt_sat(bare2, x, phi, "table")


def test_encode_dep_edge_cases(bare2):
    ev = evaluator(bare2, "table")
    for dom in [("x",), ("x", "y")]:
        assert ev.sat(Team.empty(U2, dom), prepare(encode_dep((), "x", dom)))
    with pytest.raises(TranslationError):
        encode_dep(("y",), "y", ("x", "y"))
    fresh = FreshVars({"x", "y"})
    phi = encode_dep(("x",), "y", ("x", "y"), fresh)
    assert isinstance(phi, Exists) and phi.var == "_t0"


def test_encode_dep_known_failure(bare2):
    # the literal reading accepts a non-constant x for dep(x)
    x = Team.full(U2, ["x"])
    assert not DepEvaluator(bare2).sat(x, Dep((Var("x"),)))
    assert mt_sat(bare2, x, encode_dep((), "x", ("x",)), "table")
    assert not mt_sat(bare2, x, encode_dep((), "x", ("x",), block="polyadic"), "table", top="cylinder")


def test_disjoint_rewrite_examples():
    got = disjoint_rewrite(Indep((), ("y",), ("y",)))
    assert to_text(got) == "exists _t0. exists _t1. _t0 = y & (_t1 = y & indep(; _t0 ; _t1))"
    atom = Indep(("x",), ("y",), ("z",))
    assert disjoint_rewrite(atom) is atom
    # only the overlapping variable is copied
    got = disjoint_rewrite(Indep(("x",), ("x", "y"), ("z",)))
    assert to_text(got) == "exists _t0. _t0 = x & indep(x ; _t0 y ; z)"


def test_disjoint_rewrite_equivalence(bare2):
    ev = DepEvaluator(bare2, "standard")
    for atom in [Indep((), ("x",), ("x",)), Indep(("x",), ("x", "y"), ("y",)), Indep(("y",), ("x",), ("y",))]:
        rew = disjoint_rewrite(atom)
        for x in all_teams(U2, ("x", "y")):
            assert ev.sat(x, atom) == ev.sat(x, rew)


def test_translate_plus_literal_clause():
    assert translate_plus(parse("x = x", "dep")) == IAnd(Eq(Var("x"), Var("x")), top_sentence(("x",)))


def test_translation_is_not_compositional():
    whole = translate_plus(parse("x = x & y = y", "dep"))
    parts = IAnd(translate_plus(parse("x = x", "dep")), translate_plus(parse("y = y", "dep")))
    assert whole != parts


def test_translate_tracks_quantified_variables():
    out = translate_plus(parse("exists y. dep(x, y)", "dep"))
    assert isinstance(out, Exists) and out.var == "y"
    assert free_vars(out) <= {"x"}
    # the dep clause inside sees the tracked domain (x, y)
    assert out == Exists("y", encode_dep(("x",), "y", ("x", "y"), FreshVars({"x", "y"})))


def test_translation_without_dep_atoms(m2):
    forms = corpus(CorpusConfig("dep", random_count=80, seed=2))
    forms = [f for f in forms if not any(isinstance(n, Dep) for n in subformulas(f))][:400]
    dep = DepEvaluator(m2)
    for phi in forms:
        dom = tuple(sorted(free_vars(phi)))
        ev = evaluator(m2, "table")
        plus = prepare(translate(phi, dom))
        for x in all_teams(U2, dom):
            assert dep.sat(x, phi) == ev.sat(x, plus), to_text(phi)


def test_translated_output_reparses():
    out = translate_plus(parse("forall x. exists y. dep(x, y) & R(x, y)", "dep"))
    assert parse(to_text(out), "mt") == out


def test_branching_formula_errors():
    with pytest.raises(TranslationError):
        branching_formula("E", "E", parse("exists z. R(x, z)", "fo"))
    with pytest.raises(TranslationError):
        branching_formula("E", "E", parse("R(x, v)", "fo"))
    with pytest.raises(ValueError):
        branching_formula("E", "E", parse("R(x, y)", "fo"), "nosuch")


def _br_truth(m, a, b, body):
    rel = {(s["x"], s["y"]) for s in denotation(m, body, ("x", "y"))}
    return q_member(branch(resolve(a, 1), resolve(b, 1)), m, [rel])


@pytest.mark.parametrize("r", [[], [("a", "b")], [("a", "a"), ("a", "b"), ("b", "a"), ("b", "b")]])
def test_branching_repaired_projected_variant(r):
    m = make_structure(U2, {"R": r}, arities={"R": 2})
    body = parse("R(x, y)", "fo")
    for a, b in [("exactly:1", "exactly:1"), ("A", "A"), ("between:1:2", "atleast:1")]:
        sent = prepare(branching_formula(a, b, body, "projected", "polyadic"), "cylinder")
        got = evaluator(m, "table", top="cylinder").sat(Team.unit(U2), sent)
        assert got == _br_truth(m, a, b, body)


def test_branching_literal_counterexample():
    # recorded outcome: the source's variant rejects a relation in Br(exactly:1, exactly:1)
    m = make_structure(U2, {"R": [("a", "a")]})
    body = parse("R(x, y)", "fo")
    assert _br_truth(m, "exactly:1", "exactly:1", body)
    assert not mt_sentence_sat(m, branching_formula("exactly:1", "exactly:1", body), "table")
