"""mt satisfaction as propositional satisfiability.

Every formula occurrence gets an activation literal and one boolean per
assignment slot describing the team it is evaluated on.  Children of
``∧``/``∨`` share their parent's team; ``⩓``/``⩔`` constrain the child
teams slot-wise; quantifiers tie an auxiliary projection vector to both
``∃x̄X`` and the acceptance table of the body team's sections.  All clauses
are guarded by the node's activation, so inactive branches are free.

This scales to spaces the table engine cannot enumerate (e.g. |M| = 3 with
four variables) because the search is the solver's.
"""

from __future__ import annotations

from pysat.solvers import Solver

from .structures import EvaluationError, Structure, tarski_sat
from .syntax.analysis import free_vars
from .syntax.ast import EAnd, EOr, Eq, Exists, Forall, Formula, IAnd, IOr, Neq, NotRel, QApply, Rel, Top
from .teams import Team, fibers, norm_domain, section_slots, space
from .mt_semantics import _check_top, check_mt, cylinder_keep, quantifier_of

SOLVER_NAME = "cadical153"


class SolverEvaluator:
    def __init__(self, m: Structure, registry=None, solver: str = SOLVER_NAME,
                 top: str = "unfold"):
        self.top = _check_top(top)
        self.m = m
        self.u = m.universe
        self.registry = registry
        self.solver_name = solver
        self._encodings: dict = {}

    def sat(self, x: Team, phi: Formula) -> bool:
        if x.universe != self.u:
            raise EvaluationError("team and structure have different universes")
        missing = free_vars(phi) - set(x.domain)
        if missing:
            raise EvaluationError(
                f"free variables {sorted(missing)} not in dom(X) = {list(x.domain)}"
            )
        check_mt(phi, allow_top=self.top == "cylinder")
        enc = self._encoding(phi, x.domain)
        return enc.check(x.bits)

    def _encoding(self, phi: Formula, dom: tuple) -> "_Encoding":
        key = (id(phi), dom)
        enc = self._encodings.get(key)
        if enc is None:
            enc = self._encodings[key] = _Encoding(self, phi, dom)
        return enc


class _Encoding:
    def __init__(self, ev: SolverEvaluator, phi: Formula, dom: tuple):
        self.ev = ev
        self.u = ev.u
        self.phi = phi
        self.nvars = 0
        self.clauses: list[list[int]] = []
        self.root_team = self._fresh_vector(space(self.u, dom).size)
        self.root_act = self._fresh()
        self._encode(phi, dom, self.root_team, self.root_act)
        self.solver = Solver(name=ev.solver_name, bootstrap_with=self.clauses)

    def _fresh(self) -> int:
        self.nvars += 1
        return self.nvars

    def _fresh_vector(self, n: int) -> list[int]:
        return [self._fresh() for _ in range(n)]

    def _add(self, act: int, *lits: int) -> None:
        self.clauses.append([-act, *lits])

    def _encode(self, phi: Formula, dom: tuple, team: list[int], act: int) -> None:
        if isinstance(phi, (Rel, NotRel, Eq, Neq)):
            for i, s in enumerate(space(self.u, dom).assignments):
                self._add(act, team[i] if tarski_sat(self.ev.m, s, phi) else -team[i])
            return
        if isinstance(phi, (EAnd, EOr)):
            a, b = self._fresh(), self._fresh()
            if isinstance(phi, EAnd):
                self._add(act, a)
                self._add(act, b)
            else:
                self._add(act, a, b)
            self._encode(phi.left, dom, team, a)
            self._encode(phi.right, dom, team, b)
            return
        if isinstance(phi, (IAnd, IOr)):
            a, b = self._fresh(), self._fresh()
            self._add(act, a)
            self._add(act, b)
            n = len(team)
            left, right = self._fresh_vector(n), self._fresh_vector(n)
            for t, l, r in zip(team, left, right):
                if isinstance(phi, IAnd):
                    # t <-> l & r
                    self._add(act, -t, l)
                    self._add(act, -t, r)
                    self._add(act, t, -l, -r)
                else:
                    # t <-> l | r
                    self._add(act, t, -l)
                    self._add(act, t, -r)
                    self._add(act, -t, l, r)
            self._encode(phi.left, dom, left, a)
            self._encode(phi.right, dom, right, b)
            return
        if isinstance(phi, (Exists, Forall, QApply)):
            self._quant(phi, dom, team, act)
            return
        if isinstance(phi, Top):
            # all slots of one fiber over the kept coordinates agree
            for fib in fibers(self.u, dom, cylinder_keep(dom, phi.variables)):
                for i, j in zip(fib, fib[1:]):
                    self._add(act, -team[i], team[j])
                    self._add(act, team[i], -team[j])
            return
        raise EvaluationError(f"cannot encode {type(phi).__name__}")

    def _quant(self, phi: Formula, dom: tuple, team: list[int], act: int) -> None:
        q, xs = quantifier_of(phi, self.ev.registry)
        big = norm_domain(dom + xs)
        small = tuple(v for v in big if v not in xs)
        body = self._fresh_vector(space(self.u, big).size)
        b_act = self._fresh()
        self._add(act, b_act)
        # e[s] <-> "s ∈ ∃x̄X"
        e = []
        for fib in fibers(self.u, dom, small):
            v = self._fresh()
            for i in fib:
                self._add(act, v, -team[i])
            self._add(act, -v, *[team[i] for i in fib])
            e.append(v)
        k = len(xs)
        accept = q.section_table(self.u, k)
        nk = len(self.u) ** k
        if nk > 14:
            raise EvaluationError(f"sections of {nk} slots are too large to tabulate")
        table = [accept(b) for b in range(1 << nk)]
        # e[s] <-> body section at s accepted
        for s, slots in enumerate(section_slots(self.u, big, xs)):
            lits = [body[i] for i in slots]
            for b, ok in enumerate(table):
                clause = [-l if b >> j & 1 else l for j, l in enumerate(lits)]
                clause.append(e[s] if ok else -e[s])
                self._add(act, *clause)
        self._encode(phi.body, big, body, b_act)

    def check(self, bits: int) -> bool:
        assumptions = [self.root_act]
        for i, v in enumerate(self.root_team):
            assumptions.append(v if bits >> i & 1 else -v)
        return bool(self.solver.solve(assumptions=assumptions))
