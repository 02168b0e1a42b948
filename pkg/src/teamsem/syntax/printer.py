"""Canonical printer; ``parse(to_text(phi)) == phi`` for every AST."""

from __future__ import annotations

from .ast import (
    Const,
    Dep,
    EAnd,
    Eq,
    EOr,
    Exists,
    Forall,
    Formula,
    Func,
    IAnd,
    Indep,
    IOr,
    Neq,
    NotRel,
    QApply,
    QMulti,
    Rel,
    Term,
    Top,
    Var,
)

_OPS = {EOr: (" || ", 1), EAnd: (" && ", 2), IOr: (" \\/ ", 3), IAnd: (" & ", 4)}
_ATOM = 5


def term_text(t: Term) -> str:
    if isinstance(t, (Var, Const)):
        return t.name
    if isinstance(t, Func):
        return f"{t.name}({', '.join(term_text(a) for a in t.args)})"
    raise TypeError(f"not a term: {t!r}")


def _prec(phi: Formula) -> int:
    if type(phi) in _OPS:
        return _OPS[type(phi)][1]
    if isinstance(phi, (Exists, Forall, QApply)):
        return 0
    return _ATOM


def _wrap(phi: Formula, need: bool) -> str:
    s = to_text(phi)
    return f"({s})" if need else s


def to_text(phi: Formula) -> str:
    if isinstance(phi, Rel):
        return f"{phi.name}({', '.join(map(term_text, phi.args))})"
    if isinstance(phi, NotRel):
        return f"!{phi.name}({', '.join(map(term_text, phi.args))})"
    if isinstance(phi, Eq):
        return f"{term_text(phi.left)} = {term_text(phi.right)}"
    if isinstance(phi, Neq):
        return f"{term_text(phi.left)} != {term_text(phi.right)}"
    if isinstance(phi, Dep):
        return f"dep({', '.join(map(term_text, phi.args))})"
    if isinstance(phi, Indep):
        groups = [" ".join(g) for g in (phi.cond, phi.left, phi.right)]
        return f"indep({' ; '.join(groups)})".replace("( ;", "(;")
    if isinstance(phi, Top):
        return f"TOP({', '.join(phi.variables)})"
    if type(phi) in _OPS:
        op, p = _OPS[type(phi)]
        left = _wrap(phi.left, _prec(phi.left) < p)
        right = _wrap(phi.right, _prec(phi.right) <= p)
        return left + op + right
    if isinstance(phi, Exists):
        return f"exists {phi.var}. {to_text(phi.body)}"
    if isinstance(phi, Forall):
        return f"forall {phi.var}. {to_text(phi.body)}"
    if isinstance(phi, QApply):
        return f"Q[{phi.quantifier}] {' '.join(phi.variables)}. {to_text(phi.body)}"
    if isinstance(phi, QMulti):
        args = ", ".join(f"{' '.join(vs)}. {to_text(b)}" for vs, b in phi.args)
        return f"Q[{phi.quantifier}]({args})"
    raise TypeError(f"not a formula: {phi!r}")
