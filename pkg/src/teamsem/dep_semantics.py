"""Dependence-logic satisfaction, two ways.

``witness``: the arity-reducing clauses.  Connectives search for teams
``Y, Z`` over ``dom(X)`` with ``X = Y ∩ Z`` or ``X = Y ∪ Z``; quantifiers
search for ``Y`` over ``dom(X) ∪ {x}`` with ``∃xY = ∃xX`` or ``∀xY = ∃xX``.

``standard``: ``⩓`` is plain conjunction, ``⩔`` splits ``X`` into a subset
and its remainder, ``∃`` searches for a function ``f: X -> M`` and ``∀``
evaluates ``X[M/x]``.

Independence atoms and generalized quantifiers use one clause each, shared
by both engines.
"""

from __future__ import annotations

from typing import Literal, Mapping, Optional

from .quantifiers import GeneralizedQuantifier, is_monotone_increasing, resolve
from .structures import EvaluationError, Structure, eval_term, tarski_sat
from .syntax.analysis import free_vars
from .syntax.ast import (
    Dep,
    EAnd,
    EOr,
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
)
from .teams import (
    Team,
    choice_product,
    cylinder_bits,
    fibers,
    iter_bits,
    restrict_bits,
    section_slots,
    space,
    subsets,
)

Engine = Literal["witness", "standard"]
QClause = Literal["function", "witness"]


class DepEvaluator:
    """One evaluation context: a structure plus memo tables."""

    def __init__(
        self,
        m: Structure,
        engine: Engine = "witness",
        q_clause: QClause = "function",
        registry: Optional[Mapping[str, GeneralizedQuantifier]] = None,
    ):
        if engine not in ("witness", "standard"):
            raise ValueError(f"unknown dependence engine {engine!r}")
        if q_clause not in ("function", "witness"):
            raise ValueError(f"unknown quantifier clause {q_clause!r}")
        self.m = m
        self.u = m.universe
        self.engine = engine
        self.q_clause = q_clause
        self.registry = registry
        self._memo: dict = {}
        self._lits: dict = {}
        self._keep: list = []

    # -- entry point
    def sat(self, x: Team, phi: Formula) -> bool:
        if x.universe != self.u:
            raise EvaluationError("team and structure have different universes")
        missing = free_vars(phi) - set(x.domain)
        if missing:
            raise EvaluationError(f"free variables {sorted(missing)} not in dom(X) = {list(x.domain)}")
        self._keep.append(phi)
        return self._sat(phi, x.domain, x.bits)

    def _sat(self, phi: Formula, dom: tuple, bits: int) -> bool:
        key = (id(phi), dom, bits)
        hit = self._memo.get(key)
        if hit is None:
            hit = self._memo[key] = self._eval(phi, dom, bits)
        return hit

    def _eval(self, phi: Formula, dom: tuple, bits: int) -> bool:
        if isinstance(phi, (Rel, NotRel, Eq, Neq)):
            return bits & ~self._literal(phi, dom) == 0
        if isinstance(phi, Dep):
            return self._dep(phi, dom, bits)
        if isinstance(phi, Indep):
            return indep_holds(self.u, dom, bits, phi.cond, phi.left, phi.right)
        if isinstance(phi, IAnd):
            if self.engine == "standard":
                return self._sat(phi.left, dom, bits) and self._sat(phi.right, dom, bits)
            return self._and_witness(phi, dom, bits)
        if isinstance(phi, IOr):
            if self.engine == "standard":
                return any(
                    self._sat(phi.left, dom, y) and self._sat(phi.right, dom, bits & ~y)
                    for y in subsets(bits)
                )
            return self._or_witness(phi, dom, bits)
        if isinstance(phi, Exists):
            if self.engine == "standard":
                return self._exists_standard(phi, dom, bits)
            return self._quant_witness(phi, dom, bits, universal=False)
        if isinstance(phi, Forall):
            if self.engine == "standard":
                big, ybits = _extend_all(self.u, dom, bits, phi.var)
                return self._sat(phi.body, big, ybits)
            return self._quant_witness(phi, dom, bits, universal=True)
        if isinstance(phi, QApply):
            return self._qapply(phi, dom, bits)
        if isinstance(phi, (EAnd, EOr, Top)):
            raise EvaluationError(f"{type(phi).__name__} is not a dependence-logic connective")
        if isinstance(phi, QMulti):
            raise EvaluationError("multi-argument quantifiers have no team semantics here")
        raise EvaluationError(f"cannot evaluate {phi!r}")

    # -- atoms
    def _literal(self, phi: Formula, dom: tuple) -> int:
        key = (id(phi), dom)
        hit = self._lits.get(key)
        if hit is None:
            sp = space(self.u, dom)
            hit = 0
            for i, s in enumerate(sp.assignments):
                if tarski_sat(self.m, s, phi):
                    hit |= 1 << i
            self._lits[key] = hit
            self._keep.append(phi)
        return hit

    def _dep(self, phi: Dep, dom: tuple, bits: int) -> bool:
        if not phi.args:
            return True
        sp = space(self.u, dom)
        seen: dict = {}
        for i in iter_bits(bits):
            s = sp.assignments[i]
            vals = tuple(eval_term(self.m, s, t) for t in phi.args)
            prev = seen.setdefault(vals[:-1], vals[-1])
            if prev != vals[-1]:
                return False
        return True

    # -- connectives, witness form
    def _and_witness(self, phi: IAnd, dom: tuple, bits: int) -> bool:
        comp = space(self.u, dom).full & ~bits
        lefts = [a for a in subsets(comp) if self._sat(phi.left, dom, bits | a)]
        if not lefts:
            return False
        rights = [b for b in subsets(comp) if self._sat(phi.right, dom, bits | b)]
        return any(a & b == 0 for a in lefts for b in rights)

    def _or_witness(self, phi: IOr, dom: tuple, bits: int) -> bool:
        lefts = [y for y in subsets(bits) if self._sat(phi.left, dom, y)]
        for y in lefts:
            rest = bits & ~y
            # Z must cover X∖Y and may also reuse part of Y
            if any(self._sat(phi.right, dom, rest | extra) for extra in subsets(y)):
                return True
        return False

    # -- quantifiers
    def _quant_witness(self, phi, dom: tuple, bits: int, universal: bool) -> bool:
        x = phi.var
        big = tuple(sorted(set(dom) | {x}))
        small = tuple(v for v in dom if v != x)
        target = _project(self.u, dom, small, bits)
        fib = fibers(self.u, big, small)
        options = []
        for t, f in enumerate(fib):
            mask = _mask(f)
            if target >> t & 1:
                if universal:
                    options.append((mask,))
                else:
                    options.append([s for s in subsets(mask) if s])
            elif universal:
                options.append([s for s in subsets(mask) if s != mask])
            else:
                options.append((0,))
        return any(self._sat(phi.body, big, y) for y in choice_product(options))

    def _exists_standard(self, phi: Exists, dom: tuple, bits: int) -> bool:
        x = phi.var
        big = tuple(sorted(set(dom) | {x}))
        # rows of X[f/x] that each s ∈ X may produce, one per value of f(s)
        per_row = []
        sp = space(self.u, dom)
        bsp = space(self.u, big)
        for i in iter_bits(bits):
            s = dict(sp.assignments[i])
            opts = []
            for a in self.u:
                s[x] = a
                opts.append(1 << bsp.slot(s))
            per_row.append(opts)
        return any(self._sat(phi.body, big, y) for y in choice_product(per_row))

    def _qapply(self, phi: QApply, dom: tuple, bits: int) -> bool:
        q = resolve(phi.quantifier, len(phi.variables), self.registry)
        if q.cardinal is None or not q.monotone:
            if not is_monotone_increasing(q, self.u):
                raise EvaluationError(
                    f"{q.name} is not monotone increasing; use mt semantics instead"
                )
        xs = phi.variables
        big = tuple(sorted(set(dom) | set(xs)))
        small = tuple(v for v in dom if v not in xs)
        target = _project(self.u, dom, small, bits)
        sections = section_slots(self.u, big, xs)
        members = q.members(self.u, len(xs))
        options = []
        if self.q_clause == "function":
            # F: ∃x̄X -> Q_M, body evaluated on (∃x̄X)[F/x̄]
            for s in iter_bits(target):
                options.append([_scatter(mem, sections[s]) for mem in members])
        else:
            # any Y over dom ∪ x̄ with Qx̄Y = ∃x̄X
            accept = q.section_table(self.u, len(xs))
            nk = len(self.u) ** len(xs)
            rejected = [b for b in range(1 << nk) if not accept(b)]
            for s, slots in enumerate(sections):
                pool = members if target >> s & 1 else rejected
                options.append([_scatter(b, slots) for b in pool])
        return any(self._sat(phi.body, big, y) for y in choice_product(options))


def _mask(slots) -> int:
    out = 0
    for i in slots:
        out |= 1 << i
    return out


def _scatter(bits: int, slots) -> int:
    out = 0
    for j, i in enumerate(slots):
        if bits >> j & 1:
            out |= 1 << i
    return out


def _project(universe, dom, small, bits) -> int:
    return restrict_bits(universe, dom, small, bits)


def _extend_all(universe, dom, bits, x):
    """``X[M/x]`` on raw bits."""
    small = tuple(v for v in dom if v != x)
    big = tuple(sorted(set(dom) | {x}))
    return big, cylinder_bits(universe, small, big, _project(universe, dom, small, bits))


def indep_holds(universe, dom, bits, cond, left, right) -> bool:
    """``left ⊥_cond right``: for all ``s, s'`` agreeing on ``cond`` some
    ``s0`` agrees with ``s`` on ``cond,right`` and with ``s'`` on ``cond,left``."""
    sp = space(universe, dom)
    rows = [sp.assignments[i] for i in iter_bits(bits)]
    xr = tuple(cond) + tuple(right)
    xl = tuple(cond) + tuple(left)
    present = {(tuple(s[v] for v in xr), tuple(s[v] for v in xl)) for s in rows}
    for s in rows:
        for s2 in rows:
            if any(s[v] != s2[v] for v in cond):
                continue
            if (tuple(s[v] for v in xr), tuple(s2[v] for v in xl)) not in present:
                return False
    return True


def dep_sat(
    m: Structure,
    x: Team,
    phi: Formula,
    engine: Engine = "witness",
    q_clause: QClause = "function",
    registry=None,
) -> bool:
    return DepEvaluator(m, engine, q_clause, registry).sat(x, phi)


def dep_sat_witness(m: Structure, x: Team, phi: Formula, **kw) -> bool:
    return dep_sat(m, x, phi, engine="witness", **kw)


def dep_sat_standard(m: Structure, x: Team, phi: Formula, **kw) -> bool:
    return dep_sat(m, x, phi, engine="standard", **kw)


def dep_sentence_sat(m: Structure, sigma: Formula, engine: Engine = "witness", **kw) -> bool:
    """``M ⊨ σ`` iff ``M, {ε} ⊨ σ``."""
    return dep_sat(m, Team.unit(m.universe), sigma, engine=engine, **kw)
