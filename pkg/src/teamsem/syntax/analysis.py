"""Syntactic analyses: variables, untangledness, first-orderness, sugar."""

from __future__ import annotations

from typing import Optional

from .ast import (
    BINARY,
    Dep,
    EAnd,
    Eq,
    EOr,
    Exists,
    Forall,
    Formula,
    Indep,
    Neq,
    NotRel,
    QApply,
    QMulti,
    Rel,
    Top,
    Var,
    bound_here,
    children,
    term_vars,
)
from .parser import Dialect, _ALLOWED


def free_vars(phi: Formula) -> frozenset[str]:
    if isinstance(phi, (Rel, NotRel, Dep)):
        out: set[str] = set()
        for t in phi.args:
            out |= term_vars(t)
        return frozenset(out)
    if isinstance(phi, (Eq, Neq)):
        return frozenset(term_vars(phi.left) | term_vars(phi.right))
    if isinstance(phi, Indep):
        return frozenset(phi.cond + phi.left + phi.right)
    if isinstance(phi, Top):
        return frozenset()
    if isinstance(phi, BINARY):
        return free_vars(phi.left) | free_vars(phi.right)
    if isinstance(phi, (Exists, Forall, QApply)):
        return free_vars(phi.body) - set(bound_here(phi))
    if isinstance(phi, QMulti):
        out2: frozenset[str] = frozenset()
        for vs, body in phi.args:
            out2 |= free_vars(body) - set(vs)
        return out2
    raise TypeError(f"not a formula: {phi!r}")


def bound_vars(phi: Formula) -> frozenset[str]:
    if isinstance(phi, Top):
        return frozenset(phi.variables)
    here: set[str] = set(bound_here(phi))
    if isinstance(phi, QMulti):
        for vs, _ in phi.args:
            here |= set(vs)
    for c in children(phi):
        here |= bound_vars(c)
    return frozenset(here)


def all_vars(phi: Formula) -> frozenset[str]:
    return free_vars(phi) | bound_vars(phi)


def is_untangled(phi: Formula) -> bool:
    """No re-binding of a variable inside its own scope, and FV and BV disjoint."""

    def nested_ok(f: Formula, active: frozenset[str]) -> bool:
        if isinstance(f, Top):
            vs = f.variables
            return len(set(vs)) == len(vs) and not (set(vs) & active)
        binds: list[tuple[tuple[str, ...], Formula]]
        if isinstance(f, QMulti):
            binds = list(f.args)
        elif bound_here(f):
            binds = [(bound_here(f), f.body)]
        else:
            return all(nested_ok(c, active) for c in children(f))
        for vs, body in binds:
            if len(set(vs)) != len(vs) or set(vs) & active:
                return False
            if not nested_ok(body, active | set(vs)):
                return False
        return True

    return nested_ok(phi, frozenset()) and not (free_vars(phi) & bound_vars(phi))


def subformulas(phi: Formula):
    """Every node of ``phi``, pre-order."""
    yield phi
    for c in children(phi):
        yield from subformulas(c)


def is_first_order(phi: Formula, dialect: Optional[Dialect | str] = None) -> bool:
    """DEP: no dependence or independence atom.  MT: no external connective
    (``TOP`` counts, since it unfolds to an external disjunction).  With no
    dialect, both restrictions apply."""
    if isinstance(dialect, str):
        dialect = Dialect(dialect.lower())
    dep_kinds = (Dep, Indep)
    mt_kinds = (EAnd, EOr, Top)
    if dialect is Dialect.DEP:
        banned: tuple = dep_kinds
    elif dialect is Dialect.MT:
        banned = mt_kinds
    else:
        banned = dep_kinds + mt_kinds
    return not any(isinstance(n, banned) for n in subformulas(phi))


_NODE_KIND = {
    "IAnd": "iand",
    "IOr": "ior",
    "EAnd": "eand",
    "EOr": "eor",
    "Exists": "exists",
    "Forall": "forall",
    "QApply": "qapply",
    "QMulti": "qmulti",
    "Dep": "dep",
    "Indep": "indep",
    "Top": "top",
}


def check_dialect(phi: Formula, dialect: Dialect | str) -> None:
    """Raise ``ValueError`` if ``phi`` uses a node the dialect forbids."""
    if isinstance(dialect, str):
        dialect = Dialect(dialect.lower())
    allowed = _ALLOWED[dialect]
    for n in subformulas(phi):
        kind = _NODE_KIND.get(type(n).__name__)
        if kind is not None and kind not in allowed:
            raise ValueError(f"{type(n).__name__} is not allowed in the {dialect.value} dialect")


def top_unfolded(variables: tuple[str, ...]) -> Formula:
    if not variables:
        raise ValueError("TOP needs at least one variable")
    w0 = Var(variables[0])
    body: Formula = EOr(Eq(w0, w0), Neq(w0, w0))
    for w in reversed(variables):
        body = Exists(w, body)
    return body


def _match_top(phi: Formula):
    """The variables of an unfolded ``TOP``, or ``None``."""
    vs = []
    while isinstance(phi, Exists):
        vs.append(phi.var)
        phi = phi.body
    if not vs or not isinstance(phi, EOr):
        return None
    w0 = Var(vs[0])
    if phi == EOr(Eq(w0, w0), Neq(w0, w0)) and len(set(vs)) == len(vs):
        return tuple(vs)
    return None


def fold_top(phi: Formula) -> Formula:
    """Inverse of ``expand_sugar`` on ``TOP``: every subformula of the form
    ``∃v̄(v₀ = v₀ ∨ v₀ ≠ v₀)`` becomes ``TOP(v̄)``."""
    vs = _match_top(phi)
    if vs is not None:
        return Top(vs)
    if isinstance(phi, BINARY):
        left, right = fold_top(phi.left), fold_top(phi.right)
        if left is phi.left and right is phi.right:
            return phi
        return type(phi)(left, right)
    if isinstance(phi, (Exists, Forall)):
        body = fold_top(phi.body)
        return phi if body is phi.body else type(phi)(phi.var, body)
    if isinstance(phi, QApply):
        body = fold_top(phi.body)
        return phi if body is phi.body else QApply(phi.quantifier, phi.variables, body)
    return phi


def expand_sugar(phi: Formula) -> Formula:
    """Replace every ``TOP`` node by its unfolding."""
    if isinstance(phi, Top):
        return top_unfolded(phi.variables)
    if isinstance(phi, BINARY):
        left, right = expand_sugar(phi.left), expand_sugar(phi.right)
        if left is phi.left and right is phi.right:
            return phi
        return type(phi)(left, right)
    if isinstance(phi, (Exists, Forall)):
        body = expand_sugar(phi.body)
        return phi if body is phi.body else type(phi)(phi.var, body)
    if isinstance(phi, QApply):
        body = expand_sugar(phi.body)
        return phi if body is phi.body else QApply(phi.quantifier, phi.variables, body)
    if isinstance(phi, QMulti):
        return QMulti(phi.quantifier, tuple((vs, expand_sugar(b)) for vs, b in phi.args))
    return phi
