from hypothesis import given, settings, strategies as st

from teamsem.corpus import CorpusConfig, all_models, binary_relation_models, corpus, domains
from teamsem.syntax import parse, to_text
from teamsem.syntax.ast import depth
from teamsem.verify import CHECKS, VerifyConfig, run_checks


def test_model_counts():
    # Burnside over the swap of two elements: (64 + 8) / 2
    assert len(all_models(2)) == 36
    assert len(all_models(2, up_to_iso=False)) == 64
    assert len(binary_relation_models(2)) == 16
    assert len(all_models(1)) == 4


def test_domains():
    assert list(domains(("x", "y", "z"), ("x",), 2)) == [("x",), ("x", "y"), ("x", "z")]
    assert list(domains(("x", "y"), (), 1)) == [(), ("x",), ("y",)]


@settings(max_examples=20, deadline=None)
@given(st.sampled_from(["fo", "foq", "dep", "mt"]), st.integers(0, 10**6))
def test_corpus_shape(dialect, seed):
    cfg = CorpusConfig(dialect, random_count=30, seed=seed)
    forms = corpus(cfg)
    assert len(forms) == len(set(forms))
    assert all(depth(f) <= 3 for f in forms)
    assert forms == corpus(cfg)
    for f in forms[-30:]:
        assert parse(to_text(f), dialect) == f


def test_default_corpus_has_enough_random_formulas():
    base = len(corpus(CorpusConfig("mt", random_count=0)))
    assert len(corpus(CorpusConfig("mt"))) - base == 500


def test_quick_checks_pass():
    cfg = VerifyConfig(max_universe=2, random_count=40)
    report = run_checks(["qprops", "qiso", "mono_implies_cont", "barwise", "teams", "disjoint_rewrite"], cfg)
    assert report.ok, report.to_text()


def test_failing_check_carries_counterexample():
    report = run_checks(["nonempty"], VerifyConfig(random_count=40))
    (c,) = report.checks
    assert not report.ok and c.violations > 0
    assert {"model", "formula"} <= set(c.counterexample)


def test_crashing_check_is_reported(monkeypatch):
    def boom(cfg):
        raise RuntimeError("boom")

    monkeypatch.setitem(CHECKS, "qprops", boom)
    report = run_checks(["qprops"], VerifyConfig())
    assert report.checks[0].status == "error" and not report.ok
