"""Encodings of dependence notions in mt-logic, and the φ⁺ translation.

* ``top_sentence(w̄)``: ``∃w̄(w0 = w0 ∨ w0 != w0)``.  On a team X with
  ``w̄ ⊆ dom(X)`` it holds iff X is empty or ``∃w̄X`` is full, so with
  ``w̄ ⊇ dom(X)`` it holds on every team and ``ψ ⩓ ⊤_w̄`` says ``X ⊆ ⟦ψ⟧``.
* ``encode_indep``: ``ȳ ⊥_x̄ z̄`` as ``∀w̄(⊤_{x̄ȳ} ⩓ ⊤_{x̄z̄})``.
* ``encode_dep``: ``dep(x̄, y)`` via a copy ``z`` of ``y`` independent of
  ``y`` given ``x̄``.
* ``translate_plus``: ``f(w̄, φ)`` with ``w̄`` tracking the team domain.
* ``branching_formula``: the mt sentence for ``Br(Q1,Q2)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Literal, Optional, Sequence

from .syntax.analysis import all_vars, bound_vars, free_vars, is_first_order, top_unfolded
from .syntax.ast import (
    Dep,
    EAnd,
    Eq,
    Exists,
    Forall,
    Formula,
    IAnd,
    Indep,
    IOr,
    Neq,
    NotRel,
    QApply,
    QMulti,
    Rel,
    Top,
    Var,
    rename_free,
)

TopScope = Literal["full", "source"]
LastConjunct = Literal["internal_or", "internal_and", "projected"]
BlockForm = Literal["nested", "polyadic"]


class TranslationError(ValueError):
    pass


@dataclass
class FreshVars:
    """Deterministic supply ``_t0, _t1, ...`` skipping names in ``avoid``."""

    avoid: set[str] = field(default_factory=set)
    counter: int = 0

    def __call__(self) -> str:
        while True:
            name = f"_t{self.counter}"
            self.counter += 1
            if name not in self.avoid:
                self.avoid.add(name)
                return name

    def reserve(self, names: Iterable[str]) -> None:
        self.avoid.update(names)


def _ordered(names: Iterable[str]) -> tuple[str, ...]:
    seen: list[str] = []
    for n in names:
        if n not in seen:
            seen.append(n)
    return tuple(seen)


def top_sentence(variables: Sequence[str]) -> Formula:
    if not variables:
        raise TranslationError("⊤ needs at least one variable")
    return top_unfolded(_ordered(variables))


def _valid(dom: Sequence[str], fresh: FreshVars) -> Formula:
    """A sentence true on every team over ``dom``: ``⊤`` over the whole domain."""
    dom = _ordered(dom)
    return top_sentence(dom if dom else (fresh(),))


def _ordered_minus(dom: Sequence[str], drop: Iterable[str]) -> tuple[str, ...]:
    drop = set(drop)
    return tuple(v for v in sorted(set(dom)) if v not in drop)


def _forall_block(variables: Sequence[str], body: Formula, block: BlockForm = "nested") -> Formula:
    """``∀w̄ body``: nested ``∀w₁∀w₂…`` or one ``Q[A] w̄`` over the tuple."""
    variables = tuple(variables)
    if block == "polyadic" and variables:
        return QApply("A", variables, body)
    if block not in ("nested", "polyadic"):
        raise ValueError(f"unknown block form {block!r}")
    for v in reversed(variables):
        body = Forall(v, body)
    return body


def _exists_block(variables: Sequence[str], body: Formula) -> Formula:
    for v in reversed(tuple(variables)):
        body = Exists(v, body)
    return body


def encode_indep(
    cond: Sequence[str],
    left: Sequence[str],
    right: Sequence[str],
    dom: Iterable[str],
    fresh: Optional[FreshVars] = None,
    block: BlockForm = "nested",
) -> Formula:
    """``left ⊥_cond right`` over a team with domain ``dom``.  Groups must be
    pairwise disjoint (apply ``disjoint_rewrite`` first otherwise).
    ``block`` picks how ``∀w̄`` is written (see ``_forall_block``)."""
    cond, left, right = _ordered(cond), _ordered(left), _ordered(right)
    dom = set(dom)
    if set(cond) & set(left) or set(cond) & set(right) or set(left) & set(right):
        raise TranslationError(
            f"groups {list(cond)}; {list(left)}; {list(right)} are not pairwise disjoint"
        )
    missing = (set(cond) | set(left) | set(right)) - dom
    if missing:
        raise TranslationError(f"variables {sorted(missing)} are outside the domain")
    if fresh is None:
        fresh = FreshVars(set(dom))
    if not left or not right:
        return _valid(sorted(dom), fresh)
    w = _ordered_minus(dom, cond + left + right)
    body = IAnd(top_sentence(cond + left), top_sentence(cond + right))
    return _forall_block(w, body, block)


def encode_dep(
    args: Sequence[str],
    y: str,
    dom: Iterable[str],
    fresh: Optional[FreshVars] = None,
    top_scope: TopScope = "full",
    block: BlockForm = "nested",
) -> Formula:
    """``dep(args, y)`` over a team with domain ``dom``.

    ``∃z(∀w̄(⊤_{x̄y} ⩓ ⊤_{x̄z}) ∧ (y = z ⩓ ⊤_V))`` with ``z`` fresh and
    ``w̄ = dom ∖ {x̄, y}``.  ``top_scope="full"`` takes ``V`` to be the whole
    domain ``x̄ y z w̄`` so that the second conjunct says "z copies y".
    ``"source"`` takes ``V = x̄ w̄``, which also demands that every element
    occurs as a value of ``y``; it is kept to reproduce that reading.
    """
    xs = _ordered(args)
    dom = set(dom)
    if y in xs:
        raise TranslationError(f"{y} occurs among the determining variables")
    missing = (set(xs) | {y}) - dom
    if missing:
        raise TranslationError(f"variables {sorted(missing)} are outside the domain")
    if fresh is None:
        fresh = FreshVars(set(dom))
    fresh.reserve(dom)
    z = fresh()
    w = _ordered_minus(dom, xs + (y,))
    indep = _forall_block(w, IAnd(top_sentence(xs + (y,)), top_sentence(xs + (z,))), block)
    if top_scope == "full":
        scope = xs + (y, z) + w
    elif top_scope == "source":
        scope = xs + w
        if not scope:
            raise TranslationError("⊤ over x̄w̄ is undefined when both are empty")
    else:
        raise ValueError(f"unknown top_scope {top_scope!r}")
    copy = IAnd(Eq(Var(y), Var(z)), top_sentence(scope))
    return Exists(z, EAnd(indep, copy))


def disjoint_rewrite(atom: Indep, fresh: Optional[FreshVars] = None) -> Formula:
    """``ȳ ⊥_x̄ z̄`` ⟶ ``∃v̄w̄(v̄ = ȳ ⩓ w̄ = z̄ ⩓ v̄ ⊥_x̄ w̄)``, copying only the
    variables that clash with another group (or repeat in their own)."""
    if fresh is None:
        fresh = FreshVars(set(atom.cond + atom.left + atom.right))
    fresh.reserve(atom.cond + atom.left + atom.right)
    cond = _ordered(atom.cond)
    copies: list[tuple[str, str]] = []

    def fix(group: tuple[str, ...], other: tuple[str, ...]) -> tuple[str, ...]:
        out, seen = [], set()
        for v in group:
            if v in cond or v in other or v in seen:
                c = fresh()
                copies.append((c, v))
                out.append(c)
            else:
                out.append(v)
            seen.add(v)
        return tuple(out)

    left = fix(atom.left, atom.right)
    right = fix(atom.right, atom.left)
    if not copies:
        return atom
    body: Formula = Indep(cond, left, right)
    for c, v in reversed(copies):
        body = IAnd(Eq(Var(c), Var(v)), body)
    return _exists_block([c for c, _ in copies], body)


def _var_names(terms) -> tuple[str, ...]:
    out = []
    for t in terms:
        if not isinstance(t, Var):
            raise TranslationError("dependence atoms over non-variable terms are not translated")
        out.append(t.name)
    return tuple(out)


class Translator:
    """``f(w̄, ·)``; ``top_scope`` and ``block`` are forwarded to the atom
    encodings."""

    def __init__(self, phi: Formula, top_scope: TopScope = "full", extra: Iterable[str] = (),
                 block: BlockForm = "nested"):
        self.fresh = FreshVars(set(all_vars(phi)) | set(extra))
        self.top_scope = top_scope
        self.block = block

    def f(self, w: tuple[str, ...], phi: Formula) -> Formula:
        if isinstance(phi, (Rel, NotRel, Eq, Neq)):
            return IAnd(phi, _valid(w, self.fresh))
        if isinstance(phi, Dep):
            names = _var_names(phi.args)
            if not names:
                return _valid(w, self.fresh)
            xs, y = _ordered(names[:-1]), names[-1]
            if y in xs:
                return _valid(w, self.fresh)
            return encode_dep(xs, y, w, self.fresh, self.top_scope, self.block)
        if isinstance(phi, Indep):
            rewritten = disjoint_rewrite(phi, self.fresh)
            if isinstance(rewritten, Indep):
                return encode_indep(
                    rewritten.cond, rewritten.left, rewritten.right, w, self.fresh, self.block
                )
            return self.f(w, rewritten)
        if isinstance(phi, IAnd):
            return IAnd(self.f(w, phi.left), self.f(w, phi.right))
        if isinstance(phi, IOr):
            return IOr(self.f(w, phi.left), self.f(w, phi.right))
        if isinstance(phi, (Exists, Forall)):
            return type(phi)(phi.var, self.f(_ordered(w + (phi.var,)), phi.body))
        if isinstance(phi, QApply):
            return QApply(phi.quantifier, phi.variables, self.f(_ordered(w + phi.variables), phi.body))
        if isinstance(phi, (EAnd, EOr, Top, QMulti)):
            raise TranslationError(f"{type(phi).__name__} is not a dependence-logic construct")
        raise TranslationError(f"cannot translate {phi!r}")


def translate(phi: Formula, track: Iterable[str], top_scope: TopScope = "full",
              block: BlockForm = "nested") -> Formula:
    """``f(w̄, φ)`` for a tracked domain ``w̄ ⊇ FV(φ)``."""
    w = tuple(sorted(set(track)))
    missing = free_vars(phi) - set(w)
    if missing:
        raise TranslationError(f"free variables {sorted(missing)} are not tracked")
    return Translator(phi, top_scope, w, block).f(w, phi)


def translate_plus(phi: Formula, top_scope: TopScope = "full", block: BlockForm = "nested") -> Formula:
    """``φ⁺ = f(FV(φ), φ)``."""
    return translate(phi, free_vars(phi), top_scope, block)


BRANCH_VARS = ("x", "y", "z", "w")


def branching_formula(
    q1: str,
    q2: str,
    phi: Formula,
    last_conjunct: LastConjunct = "internal_or",
    block: BlockForm = "nested",
) -> Formula:
    """``Q1x Q2y Q1z Q2w (x⊥y ∧ xy⊥z ∧ xyz⊥w ∧ (φ(x,y) ⩓ ⊤) ∧ L)``.

    ``L`` is ``φ(z,w) ⩔ ⊤`` (``internal_or``), ``φ(z,w) ⩓ ⊤``
    (``internal_and``) or ``∃x∃y(φ(z,w) ⩔ ⊤)`` (``projected``, our own
    variant; see the README).  ``⊤`` is over ``xyzw``; the ``⊥`` atoms are
    encoded over the same domain.
    """
    if not is_first_order(phi):
        raise TranslationError("the branching body must be first-order")
    if not free_vars(phi) <= {"x", "y"}:
        raise TranslationError(f"free variables of the body must be among x, y")
    clash = bound_vars(phi) & set(BRANCH_VARS)
    if clash:
        raise TranslationError(f"the body binds {sorted(clash)}, which clash with x, y, z, w")
    dom = BRANCH_VARS
    fresh = FreshVars(set(all_vars(phi)) | set(dom))
    top = top_sentence(dom)
    shifted = rename_free(phi, {"x": "z", "y": "w"})
    atoms = [
        encode_indep((), ("x",), ("y",), dom, fresh, block),
        encode_indep((), ("x", "y"), ("z",), dom, fresh, block),
        encode_indep((), ("x", "y", "z"), ("w",), dom, fresh, block),
    ]
    lower = IAnd(phi, top)
    if last_conjunct == "internal_or":
        upper: Formula = IOr(shifted, top)
    elif last_conjunct == "internal_and":
        upper = IAnd(shifted, top)
    elif last_conjunct == "projected":
        upper = Exists("x", Exists("y", IOr(shifted, top)))
    else:
        raise ValueError(f"unknown last_conjunct {last_conjunct!r}")
    body: Formula = atoms[0]
    for part in atoms[1:] + [lower, upper]:
        body = EAnd(body, part)
    return QApply(q1, ("x",), QApply(q2, ("y",), QApply(q1, ("z",), QApply(q2, ("w",), body))))
