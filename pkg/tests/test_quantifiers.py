import itertools
import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from teamsem.quantifiers import (
    QuantifierError,
    barwise_branch,
    branch,
    builtin,
    find_continuity_violation,
    is_continuous,
    is_iso_closed,
    is_monotone_increasing,
    iterate,
    load_quantifier,
    q_member,
    quantifier_from_json,
    resolve,
)

from conftest import U2, U3

PAIRS2 = list(itertools.product(U2, repeat=2))
ALL_R2 = [frozenset(c) for k in range(5) for c in itertools.combinations(PAIRS2, k)]
BUILTINS = ["E", "A", "atleast:1", "atleast:2", "atmost:1", "exactly:0", "exactly:1",
            "between:1:2", "most1", "even"]


def test_most_membership():
    u = ("a", "b", "c", "d")
    a = {("a",), ("b",), ("c",)}
    b = {("a",), ("b",), ("d",)}
    # |A ∩ B| = 2 >= |A \ B| = 1
    assert q_member(builtin("most"), u, [a, b])
    assert not q_member(builtin("most"), u, [a, {("d",)}])


def test_cardinality_builtins():
    assert q_member(builtin("exactly:0"), U2, [set()])
    assert not q_member(builtin("between:1:2"), U3, [{("a",), ("b",), ("c",)}])
    assert q_member(builtin("A", 2), U2, [set(PAIRS2)])
    assert not q_member(builtin("A", 2), U2, [set(PAIRS2[:3])])
    with pytest.raises(QuantifierError):
        builtin("nosuch")


def _section(r, a):
    return {b for (x, b) in r if x == a}


def test_iterate_e_e():
    q = iterate(builtin("E"), builtin("E"))
    assert q.type == (2,)
    for r in ALL_R2:
        assert q_member(q, U2, [r]) == bool(r)


def test_iterate_a_a_and_a_e():
    aa, ae = iterate(builtin("A"), builtin("A")), iterate(builtin("A"), builtin("E"))
    for r in ALL_R2:
        assert q_member(aa, U2, [r]) == (r == set(PAIRS2))
        assert q_member(ae, U2, [r]) == all(_section(r, a) for a in U2)


def test_iterate_wrong_type():
    with pytest.raises(QuantifierError):
        iterate(builtin("A", 2), builtin("E"))


def test_branch_examples():
    aa = branch(builtin("A"), builtin("A"))
    e = branch(builtin("atleast:1"), builtin("atleast:1"))
    one = branch(builtin("exactly:1"), builtin("exactly:1"))
    for r in ALL_R2:
        assert q_member(aa, U2, [r]) == (r == set(PAIRS2))
        assert q_member(e, U2, [r]) == bool(r)
        assert q_member(one, U2, [r]) == (len(r) == 1)
    with pytest.raises(QuantifierError):
        branch(builtin("most"), builtin("E"))


def test_monotone_examples():
    assert is_monotone_increasing(builtin("atleast:1"), U2)
    assert not is_monotone_increasing(builtin("exactly:1"), U2)
    assert not is_monotone_increasing(builtin("exactly:1"), U3)
    assert is_monotone_increasing(builtin("most1"), U3)


def test_continuity_examples():
    for n in (1, 2, 3):
        assert is_continuous(builtin("between:1:2"), U3[:n])
    assert not is_continuous(builtin("even"), U3)
    r1, r2, r3 = find_continuity_violation(builtin("even"), U3)
    assert r1 <= r2 <= r3
    assert len(r1) % 2 == 0 and len(r3) % 2 == 0 and len(r2) % 2 == 1


@pytest.mark.parametrize("name", BUILTINS)
@pytest.mark.parametrize("n", [1, 2, 3])
def test_builtins_iso_and_mono_implies_cont(name, n):
    q = builtin(name)
    assert is_iso_closed(q, U3[:n])
    if is_monotone_increasing(q, U3[:n]):
        assert is_continuous(q, U3[:n])


@pytest.mark.parametrize("a, b", [("E", "E"), ("atleast:1", "most1"), ("A", "atleast:2"), ("most1", "A")])
@pytest.mark.parametrize("n", [2, 3])
def test_barwise_form_for_monotone(a, b, n):
    q1, q2 = builtin(a), builtin(b)
    u = U3[:n]
    pairs = list(itertools.product(u, repeat=2))
    br, bw = branch(q1, q2), barwise_branch(q1, q2)
    for bits in range(1 << len(pairs)):
        r = {p for i, p in enumerate(pairs) if bits >> i & 1}
        assert q_member(br, u, [r]) == q_member(bw, u, [r])


@settings(max_examples=200)
@given(st.sampled_from(BUILTINS), st.permutations(U3), st.sets(st.sampled_from(U3)))
def test_membership_invariant_under_permutation(name, perm, a):
    pi = dict(zip(U3, perm))
    q = builtin(name)
    r = {(e,) for e in a}
    assert q_member(q, U3, [r]) == q_member(q, U3, [{(pi[e],) for (e,) in r}])


def test_resolve_names():
    assert resolve("iter(E,A)", 2).type == (2,)
    assert resolve("br(exactly:1, exactly:1)", 2).type == (2,)
    with pytest.raises(QuantifierError):
        resolve("iter(E,A)", 1)


def test_custom_json(tmp_path):
    q = quantifier_from_json({"name": "q1", "type": [1], "cardinality": {"2": [1], "3": [1, 2]}})
    assert q_member(q, U2, [{("a",)}]) and not q_member(q, U2, [set()])
    assert q_member(q, U3, [{("a",), ("b",)}])
    data = {"name": "q2", "type": [2], "explicit": {"universe_size": 2, "accept": [[["a", "b"]]]}}
    p = tmp_path / "q2.json"
    p.write_text(json.dumps(data))
    q2 = load_quantifier(p)
    assert q_member(q2, U2, [{("a", "b")}]) and not q_member(q2, U2, [{("b", "a")}])
    with pytest.raises(QuantifierError):
        quantifier_from_json({"name": "bad", "type": [1, 1], "cardinality": {}})
