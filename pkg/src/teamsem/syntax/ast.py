"""Terms and formulas.

All formulas are in negation normal form by construction: negation exists
only as the ``NotRel`` and ``Neq`` literal nodes.  Nodes are frozen
dataclasses, so they can be hashed and used as memo keys.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

__all__ = [
    "Var", "Const", "Func", "Term", "Formula",
    "Rel", "NotRel", "Eq", "Neq", "Dep", "Indep",
    "IAnd", "IOr", "EAnd", "EOr", "Exists", "Forall", "QApply", "QMulti", "Top",
    "LITERALS", "BINARY", "QUANTIFIERS",
    "is_literal", "bound_here", "children", "term_vars", "rename_term", "rename_free",
    "size", "depth",
]


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Const:
    name: str


@dataclass(frozen=True)
class Func:
    name: str
    args: tuple[Term, ...]


Term = Union[Var, Const, Func]


class Formula:
    """Base class of formula nodes."""

    __slots__ = ()


@dataclass(frozen=True)
class Rel(Formula):
    name: str
    args: tuple[Term, ...]


@dataclass(frozen=True)
class NotRel(Formula):
    name: str
    args: tuple[Term, ...]


@dataclass(frozen=True)
class Eq(Formula):
    left: Term
    right: Term


@dataclass(frozen=True)
class Neq(Formula):
    left: Term
    right: Term


@dataclass(frozen=True)
class Dep(Formula):
    """``dep(t1, ..., tn)``: the last term is determined by the others."""

    args: tuple[Term, ...]


@dataclass(frozen=True)
class Indep(Formula):
    """``left`` is independent of ``right`` given ``cond``."""

    cond: tuple[str, ...]
    left: tuple[str, ...]
    right: tuple[str, ...]


@dataclass(frozen=True)
class IAnd(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class IOr(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class EAnd(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class EOr(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Exists(Formula):
    var: str
    body: Formula


@dataclass(frozen=True)
class Forall(Formula):
    var: str
    body: Formula


@dataclass(frozen=True)
class QApply(Formula):
    """A type <n> generalized quantifier binding ``variables`` in ``body``."""

    quantifier: str
    variables: tuple[str, ...]
    body: Formula


@dataclass(frozen=True)
class QMulti(Formula):
    """A type <n1, ..., nk> quantifier; each argument binds its own tuple.

    Only the Tarskian evaluator understands this node.
    """

    quantifier: str
    args: tuple[tuple[tuple[str, ...], Formula], ...]


@dataclass(frozen=True)
class Top(Formula):
    """Sugar for the sentence exists w1...wk (w1 = w1 || w1 != w1)."""

    variables: tuple[str, ...]


LITERALS = (Rel, NotRel, Eq, Neq)
BINARY = (IAnd, IOr, EAnd, EOr)
QUANTIFIERS = (Exists, Forall, QApply)


def is_literal(phi: Formula) -> bool:
    return isinstance(phi, LITERALS)


def bound_here(phi: Formula) -> tuple[str, ...]:
    """Variables bound by the outermost node of ``phi`` (empty if none)."""
    if isinstance(phi, (Exists, Forall)):
        return (phi.var,)
    if isinstance(phi, QApply):
        return phi.variables
    return ()


def children(phi: Formula) -> tuple[Formula, ...]:
    if isinstance(phi, BINARY):
        return (phi.left, phi.right)
    if isinstance(phi, (Exists, Forall, QApply)):
        return (phi.body,)
    if isinstance(phi, QMulti):
        return tuple(body for _, body in phi.args)
    return ()


def term_vars(t: Term) -> set[str]:
    if isinstance(t, Var):
        return {t.name}
    if isinstance(t, Func):
        out: set[str] = set()
        for a in t.args:
            out |= term_vars(a)
        return out
    return set()


def rename_term(t: Term, mapping: dict[str, str]) -> Term:
    if isinstance(t, Var):
        return Var(mapping.get(t.name, t.name))
    if isinstance(t, Func):
        return Func(t.name, tuple(rename_term(a, mapping) for a in t.args))
    return t


def rename_free(phi: Formula, mapping: dict[str, str]) -> Formula:
    """Substitute variables for free variables (no capture check)."""

    def go(f: Formula, shadow: frozenset[str]) -> Formula:
        m = {k: v for k, v in mapping.items() if k not in shadow}

        def r(name: str) -> str:
            return m.get(name, name)

        if isinstance(f, (Rel, NotRel)):
            return type(f)(f.name, tuple(rename_term(a, m) for a in f.args))
        if isinstance(f, (Eq, Neq)):
            return type(f)(rename_term(f.left, m), rename_term(f.right, m))
        if isinstance(f, Dep):
            return Dep(tuple(rename_term(a, m) for a in f.args))
        if isinstance(f, Indep):
            return Indep(
                tuple(map(r, f.cond)), tuple(map(r, f.left)), tuple(map(r, f.right))
            )
        if isinstance(f, BINARY):
            return type(f)(go(f.left, shadow), go(f.right, shadow))
        if isinstance(f, (Exists, Forall)):
            return type(f)(f.var, go(f.body, shadow | {f.var}))
        if isinstance(f, QApply):
            return QApply(f.quantifier, f.variables, go(f.body, shadow | set(f.variables)))
        if isinstance(f, QMulti):
            return QMulti(
                f.quantifier,
                tuple((vs, go(b, shadow | set(vs))) for vs, b in f.args),
            )
        if isinstance(f, Top):
            return f
        raise TypeError(f"not a formula: {f!r}")

    return go(phi, frozenset())


def size(phi: Formula) -> int:
    return 1 + sum(size(c) for c in children(phi))


def depth(phi: Formula) -> int:
    """Operator nesting depth; literals and atoms have depth 0."""
    kids = children(phi)
    if not kids:
        return 0
    return 1 + max(depth(c) for c in kids)
