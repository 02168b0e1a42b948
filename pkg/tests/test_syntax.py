import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from teamsem.syntax import (
    DialectError,
    ParseError,
    bound_vars,
    expand_sugar,
    fold_top,
    free_vars,
    is_first_order,
    is_untangled,
    parse,
    subformulas,
    to_text,
)
from teamsem.syntax.ast import (
    Const,
    Dep,
    EAnd,
    EOr,
    Eq,
    Exists,
    Forall,
    Func,
    IAnd,
    Indep,
    IOr,
    Neq,
    NotRel,
    QApply,
    Rel,
    Top,
    Var,
)

x, y, z = Var("x"), Var("y"), Var("z")


def test_parse_examples():
    assert parse("dep(x, y)", "dep") == Dep((x, y))
    assert parse("exists x. x = x", "mt") == Exists("x", Eq(x, x))
    got = parse("Q[most1] x. A(x) && TOP(x)", "mt")
    assert got == QApply("most1", ("x",), EAnd(Rel("A", (x,)), Top(("x",))))


def test_precedence():
    # tightest first: atoms, &, \/, &&, ||
    got = parse("P(x) & P(y) \\/ P(z) && x = y || x != y", "mt")
    p = lambda v: Rel("P", (v,))
    assert got == EOr(EAnd(IOr(IAnd(p(x), p(y)), p(z)), Eq(x, y)), Neq(x, y))
    assert parse("P(x) & (P(y) \\/ P(z))") == IAnd(p(x), IOr(p(y), p(z)))


def test_quantifier_body_extends_right():
    assert parse("exists x. P(x) & R(x, y)") == Exists("x", IAnd(Rel("P", (x,)), Rel("R", (x, y))))


def test_indep_and_terms():
    assert parse("indep(x ; y z ; w)", "dep") == Indep(("x",), ("y", "z"), ("w",))
    assert parse("indep(; x ; y)", "dep") == Indep((), ("x",), ("y",))
    assert parse("!R(f(x), c)", "fo", constants=["c"]) == NotRel("R", (Func("f", (x,)), Const("c")))


@pytest.mark.parametrize("text, dialect", [
    ("dep(x, y)", "mt"),
    ("indep(; x ; y)", "fo"),
    ("P(x) && P(y)", "dep"),
    ("P(x) || P(y)", "foq"),
    ("Q[E] x. P(x)", "fo"),
])
def test_dialect_violations(text, dialect):
    with pytest.raises(DialectError):
        parse(text, dialect)


@pytest.mark.parametrize("text", ["P(x", "exists . P(x)", "P(x) &", "Q[nosuch] x. P(x)", "!(P(x) & P(y))"])
def test_parse_errors(text):
    with pytest.raises((ParseError, DialectError)):
        parse(text)


def test_error_location():
    with pytest.raises(ParseError, match="1:6"):
        parse("P(x) ) ")


def test_shadowing_allowed():
    assert not is_untangled(parse("exists x. exists x. x = x"))


def test_free_bound():
    assert free_vars(parse("dep(x, y)", "dep")) == {"x", "y"}
    assert free_vars(parse("exists x. x = y")) == {"y"}
    assert bound_vars(parse("exists x. forall y. R(x, y)")) == {"x", "y"}


def test_untangled():
    assert not is_untangled(parse("exists x. exists x. x = x"))
    assert is_untangled(parse("exists x. exists y. R(x, y)"))
    assert not is_untangled(parse("x = x & exists x. x = x"))
    assert not is_untangled(parse("Q[E] x. forall x. P(x)"))


def test_first_order():
    assert is_first_order(parse("exists x. P(x) & x = x"), "dep")
    assert not is_first_order(parse("dep(x)", "dep"), "dep")
    assert is_first_order(parse("P(x) \\/ P(y)", "mt"), "mt")
    assert not is_first_order(parse("P(x) && P(y)", "mt"), "mt")
    assert not is_first_order(parse("TOP(x)", "mt"), "mt")


def test_expand_sugar():
    assert expand_sugar(Top(("x",))) == Exists("x", EOr(Eq(x, x), Neq(x, x)))
    assert expand_sugar(Top(("x", "y"))) == Exists("x", Exists("y", EOr(Eq(x, x), Neq(x, x))))
    phi = parse("exists x. P(x) \\/ R(x, y)")
    assert expand_sugar(phi) == phi
    assert is_untangled(expand_sugar(Top(("x", "y", "z"))))
    assert fold_top(expand_sugar(Top(("x", "y")))) == Top(("x", "y"))


# -- round trip on generated ASTs ----------------------------------------------

VARS = st.sampled_from(["x", "y", "z"])
TERMS = st.one_of(VARS.map(Var), st.just(Const("c")), VARS.map(lambda v: Func("f", (Var(v),))))


def _atoms():
    return st.one_of(
        st.tuples(TERMS, TERMS).map(lambda t: Rel("R", t)),
        st.tuples(TERMS, TERMS).map(lambda t: NotRel("R", t)),
        TERMS.map(lambda t: Rel("P", (t,))),
        st.tuples(TERMS, TERMS).map(lambda t: Eq(*t)),
        st.tuples(TERMS, TERMS).map(lambda t: Neq(*t)),
        st.lists(TERMS, min_size=1, max_size=3).map(lambda ts: Dep(tuple(ts))),
        st.lists(VARS, min_size=1, max_size=3, unique=True).map(lambda vs: Top(tuple(vs))),
        st.tuples(st.lists(VARS, max_size=1), st.lists(VARS, min_size=1, max_size=2),
                  st.lists(VARS, min_size=1, max_size=2)).map(
            lambda g: Indep(tuple(g[0]), tuple(g[1]), tuple(g[2]))),
    )


def _extend(inner):
    binop = st.sampled_from([IAnd, IOr, EAnd, EOr])
    return st.one_of(
        st.tuples(binop, inner, inner).map(lambda t: t[0](t[1], t[2])),
        st.tuples(VARS, inner).map(lambda t: Exists(*t)),
        st.tuples(VARS, inner).map(lambda t: Forall(*t)),
        st.tuples(st.sampled_from(["most1", "exactly:1", "between:1:2"]), VARS, inner).map(
            lambda t: QApply(t[0], (t[1],), t[2])),
        st.tuples(st.lists(VARS, min_size=2, max_size=2, unique=True), inner).map(
            lambda t: QApply("iter(E,A)", tuple(t[0]), t[1])),
    )


formulas = st.recursive(_atoms(), _extend, max_leaves=12)


@settings(max_examples=400)
@given(formulas)
def test_print_parse_round_trip(phi):
    text = to_text(phi)
    assert parse(text, constants=["c"]) == phi
    assert to_text(parse(text, constants=["c"])) == text


@settings(max_examples=200)
@given(formulas)
def test_expand_sugar_removes_top(phi):
    out = expand_sugar(phi)
    assert not any(isinstance(n, Top) for n in subformulas(out))
    assert expand_sugar(out) == out
