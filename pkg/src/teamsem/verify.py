"""The proposition suite behind ``teamsem verify`` and the acceptance tests.

Each check compares two independently computed sides over an exhaustive
grid (small models, every team over small domains, a formula corpus) and
stops collecting counterexamples after the first, but keeps counting.
Oracles are deliberately naive: direct definitions evaluated row by row or
vectorised over all teams with numpy, never the encoding under test.

Two readings of the mt-side ``TOP`` sentences are supported (see the
README): ``literal`` unfolds ``TOP`` and writes ``∀w̄`` as nested ``∀``;
``repaired`` reads ``TOP`` as a cylinder condition and ``∀w̄`` as one
polyadic ``A`` quantifier.  Checks always report the literal verdict; the
repaired reading is reported alongside it in ``stats`` where it differs.
"""

from __future__ import annotations

import hashlib
import itertools
import json
import time
from dataclasses import asdict, dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from .corpus import (
    CorpusConfig,
    all_models,
    binary_relation_models,
    corpus,
    domains,
    random_models,
    universe_of,
)
from .dep_semantics import DepEvaluator, indep_holds
from .mt_semantics import CapExceeded, evaluator, prepare
from .mt_table import TableEvaluator
from .quantifiers import (
    BUILTIN_NAMES,
    barwise_branch,
    branch,
    find_continuity_violation,
    find_iso_violation,
    find_monotonicity_violation,
    is_continuous,
    is_monotone_increasing,
    resolve,
)
from .structures import Relation, Structure, denotation, structure_to_json
from .syntax.analysis import bound_vars, free_vars, is_first_order, is_untangled, subformulas
from .syntax.ast import (
    Dep,
    EAnd,
    Exists,
    Forall,
    Formula,
    IAnd,
    Indep,
    QApply,
    Var,
)
from .syntax.printer import to_text
from .teams import (
    Team,
    all_teams,
    exists_project,
    extend_all,
    forall_bits,
    forall_project,
    q_project,
    restrict,
    restrict_bits,
    space,
    subsets,
    team_to_json,
)
from .translation import (
    branching_formula,
    disjoint_rewrite,
    encode_dep,
    encode_indep,
    top_sentence,
    translate,
)

READINGS = {"literal": ("unfold", "nested"), "repaired": ("cylinder", "polyadic")}
BRANCH_VARIANTS = ("internal_or", "internal_and", "projected")
SOURCE_BRANCH_VARIANTS = ("internal_or", "internal_and")
BRANCH_PAIRS_FROM = ("exactly:1", "between:1:2", "atleast:1", "A")
ITERATION_FROM = ("E", "A", "exactly:1", "atleast:1")
MONOTONE_Q = ("atleast:1", "atleast:2", "A", "most1")


# -- reports ------------------------------------------------------------------


@dataclass
class CheckResult:
    name: str
    status: str = "pass"
    checked: int = 0
    violations: int = 0
    seconds: float = 0.0
    counterexample: Optional[dict] = None
    detail: str = ""
    stats: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.status == "pass"


@dataclass
class RunReport:
    command: list[str]
    seed: int
    checks: list[CheckResult] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(c.status in ("pass", "skip") for c in self.checks)

    def sorted(self) -> list[CheckResult]:
        return sorted(self.checks, key=lambda c: c.name)

    def to_json(self) -> dict:
        return {
            "command": self.command,
            "seed": self.seed,
            "ok": self.ok,
            "checks": [asdict(c) for c in self.sorted()],
        }

    def to_text(self) -> str:
        lines = [f"command: {' '.join(self.command)}", f"seed: {self.seed}"]
        for c in self.sorted():
            lines.append(
                f"{c.status.upper():5} {c.name}: {c.checked} checked, "
                f"{c.violations} violations, {c.seconds:.1f}s"
            )
            if c.detail:
                lines.append(f"      {c.detail}")
            for k, v in c.stats.items():
                lines.append(f"      {k}: {v}")
            if c.counterexample is not None:
                lines.append("      counterexample: " + json.dumps(c.counterexample, sort_keys=True))
        lines.append("all checks passed" if self.ok else "some checks failed")
        return "\n".join(lines)


class Tally:
    """Counts checks and keeps the first counterexample."""

    def __init__(self, name: str):
        self.result = CheckResult(name)
        self._t0 = time.perf_counter()

    def check(self, ok: bool, payload: Callable[[], dict]) -> bool:
        self.result.checked += 1
        if not ok:
            self.result.violations += 1
            if self.result.counterexample is None:
                self.result.counterexample = payload()
        return ok

    def finish(self, detail: str = "") -> CheckResult:
        r = self.result
        r.seconds = time.perf_counter() - self._t0
        if r.status == "pass" and r.violations:
            r.status = "fail"
        if detail:
            r.detail = detail
        return r


def payload(
    m: Optional[Structure] = None,
    x: Optional[Team] = None,
    phi: Optional[Formula] = None,
    **verdicts,
) -> dict:
    out: dict = {}
    if m is not None:
        out["model"] = structure_to_json(m)
    if x is not None:
        out["team"] = team_to_json(x)
    if phi is not None:
        out["formula"] = to_text(phi)
    out.update({k: _jsonable(v) for k, v in verdicts.items()})
    return out


def _jsonable(v):
    if isinstance(v, Formula):
        return to_text(v)
    if isinstance(v, Team):
        return team_to_json(v)
    if isinstance(v, np.bool_):
        return bool(v)
    if isinstance(v, (set, frozenset)):
        return [_jsonable(e) for e in sorted(v)]
    if isinstance(v, tuple):
        return [_jsonable(e) for e in v]
    return v


# -- configuration ------------------------------------------------------------


@dataclass(frozen=True)
class VerifyConfig:
    max_universe: int = 3
    seed: int = 0
    random_count: int = 500
    exhaustive_depth: int = 1
    max_depth: int = 3
    spot_models: int = 50
    model: Optional[Structure] = None
    quantifier: Optional[str] = None
    branch_sat_limit: Optional[int] = None
    branch_supplementary: bool = False

    def corpus(self, dialect: str, **kw) -> list[Formula]:
        unary, binary = "P", "R"
        if self.model is not None:
            unary = _relation_of_arity(self.model, 1)
            binary = _relation_of_arity(self.model, 2)
        return corpus(
            CorpusConfig(
                dialect=dialect,
                unary=unary,
                binary=binary,
                exhaustive_depth=self.exhaustive_depth,
                max_depth=self.max_depth,
                random_count=self.random_count,
                seed=self.seed,
                **kw,
            )
        )

    def models2(self) -> list[Structure]:
        """The |M| = 2 grid (or the supplied model)."""
        if self.model is not None:
            return [self.model]
        return all_models(2)

    def small_models(self, up_to: int = 3) -> list[Structure]:
        """Models for the ``|M| ≤ 3`` checks: complete up to 2, sampled at 3."""
        if self.model is not None:
            return [self.model]
        out = all_models(1) + all_models(2)
        if min(up_to, self.max_universe) >= 3:
            out += random_models(3, 20, self.seed)
        return out

    def universes(self, up_to: int = 3) -> list[tuple[str, ...]]:
        if self.model is not None:
            return [self.model.universe]
        return [universe_of(n) for n in range(1, min(up_to, self.max_universe) + 1)]


def _relation_of_arity(m: Structure, n: int) -> Optional[str]:
    names = sorted(k for k, r in m.relations.items() if r.arity == n)
    return names[0] if names else None


# -- oracles ------------------------------------------------------------------


def _team_index(size: int) -> np.ndarray:
    return np.arange(1 << size, dtype=np.int64)


def indep_table(universe, dom, cond, left, right) -> np.ndarray:
    """``left ⊥_cond right`` for every team over ``dom`` straight from the
    definition, vectorised over teams: for all present ``s, s'`` agreeing
    on ``cond`` some present ``s0`` agrees with ``s`` on ``cond right`` and
    with ``s'`` on ``cond left``."""
    sp = space(universe, dom)
    rows = sp.assignments
    idx = _team_index(sp.size)
    ok = np.ones(1 << sp.size, dtype=bool)
    key = lambda s, vs: tuple(s[v] for v in vs)  # noqa: E731
    cr, cl = tuple(cond) + tuple(right), tuple(cond) + tuple(left)
    for i, s in enumerate(rows):
        for j, t in enumerate(rows):
            if key(s, cond) != key(t, cond):
                continue
            mask = 0
            for k, u in enumerate(rows):
                if key(u, cr) == key(s, cr) and key(u, cl) == key(t, cl):
                    mask |= 1 << k
            both = ((idx >> i) & 1).astype(bool) & ((idx >> j) & 1).astype(bool)
            ok &= ~both | ((idx & mask) != 0)
    return ok


def dep_table(universe, dom, args, y) -> np.ndarray:
    """``dep(args, y)`` for every team: no two present rows agree on
    ``args`` and differ on ``y``."""
    sp = space(universe, dom)
    rows = sp.assignments
    idx = _team_index(sp.size)
    ok = np.ones(1 << sp.size, dtype=bool)
    for i, s in enumerate(rows):
        for j, t in enumerate(rows):
            if j <= i or any(s[v] != t[v] for v in args) or s[y] == t[y]:
                continue
            ok &= ~(((idx >> i) & 1).astype(bool) & ((idx >> j) & 1).astype(bool))
    return ok


def subset_table(size: int, bits: int) -> np.ndarray:
    idx = _team_index(size)
    return (idx & ~bits) == 0


def branch_oracle(q1, q2, universe, rel) -> bool:
    """``S1×S2 ⊆ R ⊆ S1'×S2'`` by enumeration of unary relations."""
    cands = [frozenset(c) for k in range(len(universe) + 1) for c in itertools.combinations(universe, k)]
    a1 = [s for s in cands if q1.accepts(universe, ({(e,) for e in s},))]
    a2 = [s for s in cands if q2.accepts(universe, ({(e,) for e in s},))]
    lower = any(all((a, b) in rel for a in s1 for b in s2) for s1 in a1 for s2 in a2)
    upper = any(all(a in s1 and b in s2 for a, b in rel) for s1 in a1 for s2 in a2)
    return lower and upper


# -- shared plumbing ----------------------------------------------------------


def _mt_table(m: Structure, phi: Formula, dom, reading: str = "literal", ev=None) -> np.ndarray:
    top, _ = READINGS[reading]
    ev = ev or TableEvaluator(m, top=top)
    return ev.table(prepare(phi, top), tuple(sorted(dom)))


# -- checks: quantifiers ------------------------------------------------------

# hand-derived (monotone, continuous) per universe size
QPROPS_EXPECTED = {
    "E": {1: (True, True), 2: (True, True), 3: (True, True)},
    "A": {1: (True, True), 2: (True, True), 3: (True, True)},
    "atleast:1": {1: (True, True), 2: (True, True), 3: (True, True)},
    "atleast:2": {1: (True, True), 2: (True, True), 3: (True, True)},
    "atmost:1": {1: (True, True), 2: (False, True), 3: (False, True)},
    "exactly:1": {1: (True, True), 2: (False, True), 3: (False, True)},
    "exactly:2": {1: (True, True), 2: (True, True), 3: (False, True)},
    "between:1:2": {1: (True, True), 2: (True, True), 3: (False, True)},
    "most1": {1: (True, True), 2: (True, True), 3: (True, True)},
    "even": {1: (False, True), 2: (False, False), 3: (False, False)},
}


def check_qprops(cfg: VerifyConfig) -> CheckResult:
    t = Tally("qprops")
    for name, by_size in QPROPS_EXPECTED.items():
        q = resolve(name, 1)
        for n, (mono, cont) in by_size.items():
            if n > cfg.max_universe:
                continue
            u = universe_of(n)
            got = (is_monotone_increasing(q, u), is_continuous(q, u))
            t.check(got == (mono, cont), lambda: payload(quantifier=name, size=n,
                                                        expected=[mono, cont], got=list(got)))
    return t.finish("monotone/continuous verdicts against a hand-derived table")


def check_qiso(cfg: VerifyConfig) -> CheckResult:
    t = Tally("qiso")
    names = list(BUILTIN_NAMES) + ["iter(E,A)", "br(exactly:1,atleast:1)"]
    for name in names:
        q = resolve(name)
        for u in cfg.universes(3):
            if q.arity == 2 and len(u) > 2 and name.startswith("br"):
                continue
            bad = find_iso_violation(q, u)
            t.check(bad is None, lambda: payload(quantifier=name, universe=list(u), witness=str(bad)))
    return t.finish("acceptance is invariant under every permutation of the universe")


def check_mono_cont(cfg: VerifyConfig) -> CheckResult:
    t = Tally("mono_implies_cont")
    for name in QPROPS_EXPECTED:
        q = resolve(name, 1)
        for u in cfg.universes(3):
            if is_monotone_increasing(q, u):
                t.check(is_continuous(q, u), lambda: payload(quantifier=name, universe=list(u)))
    return t.finish()


def check_barwise(cfg: VerifyConfig) -> CheckResult:
    t = Tally("barwise")
    mono = [n for n in ("E", "A", "atleast:1", "atleast:2", "most1")]
    for a, b in itertools.product(mono, repeat=2):
        q1, q2 = resolve(a, 1), resolve(b, 1)
        br, bw = branch(q1, q2), barwise_branch(q1, q2)
        for u in cfg.universes(3):
            tuples = list(itertools.product(u, repeat=2))
            for bits in range(1 << len(tuples)):
                rel = {tuples[i] for i in range(len(tuples)) if bits >> i & 1}
                lhs, rhs = br.accepts(u, (rel,)), bw.accepts(u, (rel,))
                t.check(lhs == rhs, lambda: payload(pair=[a, b], universe=list(u),
                                                    relation=sorted(rel), branch=lhs, barwise=rhs))
    return t.finish("Br agrees with the Barwise form for monotone increasing pairs")


def check_continuity(cfg: VerifyConfig) -> CheckResult:
    """For one quantifier (``--quantifier``) or every builtin declared
    continuous: search for an interpolation chain that breaks it."""
    t = Tally("continuity")
    if cfg.quantifier:
        names = [cfg.quantifier]
    else:
        names = [n for n in QPROPS_EXPECTED if resolve(n, 1).continuous]
    for name in names:
        q = resolve(name, 1)
        for u in cfg.universes(3):
            chain = find_continuity_violation(q, u)
            t.check(chain is None, lambda: payload(
                quantifier=name, universe=list(u),
                chain=[sorted(r) for r in chain]))
    return t.finish()


def check_monotonicity(cfg: VerifyConfig) -> CheckResult:
    t = Tally("monotonicity")
    if cfg.quantifier:
        names = [cfg.quantifier]
    else:
        names = [n for n in QPROPS_EXPECTED if resolve(n, 1).monotone]
    for name in names:
        q = resolve(name, 1)
        for u in cfg.universes(3):
            pair = find_monotonicity_violation(q, u)
            t.check(pair is None, lambda: payload(
                quantifier=name, universe=list(u), pair=[sorted(r) for r in pair]))
    return t.finish()


# -- checks: structures and teams --------------------------------------------


def check_denotation(cfg: VerifyConfig) -> CheckResult:
    """``∃x⟦φ⟧ = ⟦∃xφ⟧`` and the ``∀`` analogue for untangled FO φ."""
    t = Tally("denotation")
    forms = [f for f in cfg.corpus("fo") if is_untangled(f)]
    for m in cfg.small_models(3):
        for phi in forms:
            for x in ("x", "y"):
                for dom in domains(("x", "y", "z"), sorted(free_vars(phi) | {x}), 3):
                    if set(dom) & bound_vars(phi):
                        continue
                    d = denotation(m, phi, dom)
                    small = tuple(v for v in dom if v != x)
                    for proj, q in ((exists_project, Exists), (forall_project, Forall)):
                        lhs, rhs = proj(d, x), denotation(m, q(x, phi), small)
                        t.check(lhs == rhs, lambda: payload(m, d, q(x, phi), projected=lhs, direct=rhs))
    return t.finish()


def check_teams(cfg: VerifyConfig) -> CheckResult:
    """Projection laws and ``q_project`` special cases on all small teams."""
    t = Tally("teams")
    grids = []
    for n in range(1, min(cfg.max_universe, 3) + 1):
        u = universe_of(n)
        grids += [(u, d) for d in [(), ("x",), ("x", "y")]]
        if n <= 2:
            grids.append((u, ("x", "y", "z")))
    e1, a1 = resolve("E", 1), resolve("A", 1)
    for u, dom in grids:
        for xt in all_teams(u, dom):
            for x in dom or ("x",):
                if x in dom:
                    ex, fa = exists_project(xt, x), forall_project(xt, x)
                    rs = restrict(xt, [v for v in dom if v != x])
                    ok = fa.issubset(ex) and ex == rs and ex.domain == fa.domain
                    ok = ok and extend_all(ex, x) == extend_all(xt, x)
                    if len(u) <= 2 and len(dom) <= 2:
                        ok = ok and q_project(e1, xt, (x,)) == ex and q_project(a1, xt, (x,)) == fa
                    t.check(ok, lambda: payload(x=xt, variable=x))
                else:
                    ok = exists_project(extend_all(xt, x), x) == xt
                    t.check(ok, lambda: payload(x=xt, variable=x))
    return t.finish()


# -- checks: dependence logic -------------------------------------------------


def _dep_grid(cfg: VerifyConfig, dialect: str = "dep", max_dom: int = 2):
    forms = cfg.corpus(dialect)
    models = cfg.models2()
    return forms, models, max_dom


def check_ordsat(cfg: VerifyConfig) -> CheckResult:
    t = Tally("ordsat")
    forms, models, md = _dep_grid(cfg)
    for m in models:
        w, s = DepEvaluator(m, "witness"), DepEvaluator(m, "standard")
        for phi in forms:
            for dom in domains(("x", "y"), sorted(free_vars(phi)), md):
                for x in all_teams(m.universe, dom):
                    a, b = w.sat(x, phi), s.sat(x, phi)
                    t.check(a == b, lambda: payload(m, x, phi, witness=a, standard=b))
    return t.finish("witness clauses against standard (function/split) clauses")


def check_downward(cfg: VerifyConfig) -> CheckResult:
    t = Tally("downward_closure")
    forms, models, md = _dep_grid(cfg)
    for m in models:
        ev = DepEvaluator(m)
        for phi in forms:
            for dom in domains(("x", "y"), sorted(free_vars(phi)), md):
                for x in all_teams(m.universe, dom):
                    if not ev.sat(x, phi):
                        continue
                    for sub in subsets(x.bits):
                        y = Team(m.universe, dom, sub)
                        ok = ev.sat(y, phi)
                        t.check(ok, lambda: payload(m, y, phi, superteam=x, sub_satisfies=ok))
    return t.finish()


def check_locality(cfg: VerifyConfig) -> CheckResult:
    t = Tally("locality")
    forms, models, md = _dep_grid(cfg)
    for m in models:
        ev = DepEvaluator(m)
        for phi in forms:
            fv = sorted(free_vars(phi))
            for dom in domains(("x", "y"), fv, md):
                if tuple(dom) == tuple(fv):
                    continue
                for x in all_teams(m.universe, dom):
                    a, b = ev.sat(x, phi), ev.sat(restrict(x, fv), phi)
                    t.check(a == b, lambda: payload(m, x, phi, full=a, restricted=b))
    return t.finish()


def check_flatness(cfg: VerifyConfig) -> CheckResult:
    t = Tally("flatness")
    forms, models, md = _dep_grid(cfg)
    forms = [f for f in forms if is_first_order(f, "dep")]
    for m in models:
        ev = DepEvaluator(m)
        for phi in forms:
            for dom in domains(("x", "y"), sorted(free_vars(phi)), md):
                den = denotation(m, phi, dom).bits
                for x in all_teams(m.universe, dom):
                    a, b = ev.sat(x, phi), x.bits & ~den == 0
                    t.check(a == b, lambda: payload(m, x, phi, team_semantics=a, rowwise=b))
    return t.finish()


def check_dep_indep(cfg: VerifyConfig) -> CheckResult:
    """``dep(x̄, y) ⟺ y ⊥_x̄ y``."""
    t = Tally("dep_indep")
    for u in cfg.universes(2):
        for dom in [("x",), ("x", "y"), ("x", "y", "z")]:
            if len(u) ** len(dom) > 8:
                continue
            for y in dom:
                rest = [v for v in dom if v != y]
                for k in range(len(rest) + 1):
                    for xs in itertools.combinations(rest, k):
                        for x in all_teams(u, dom):
                            a = dep_table_row(u, dom, xs, y, x.bits)
                            b = indep_holds(u, dom, x.bits, xs, (y,), (y,))
                            t.check(a == b, lambda: payload(x=x, determiners=list(xs), y=y, dep=a, indep=b))
    return t.finish()


def dep_table_row(universe, dom, args, y, bits) -> bool:
    sp = space(universe, dom)
    seen: dict = {}
    for i in range(sp.size):
        if bits >> i & 1:
            s = sp.assignments[i]
            if seen.setdefault(tuple(s[v] for v in args), s[y]) != s[y]:
                return False
    return True


def _indep_atoms(variables: Sequence[str], disjoint: Optional[bool] = None):
    """All atoms ``left ⊥_cond right`` with groups drawn from ``variables``."""
    vs = list(variables)
    groups = [g for k in range(len(vs) + 1) for g in itertools.combinations(vs, k)]
    for cond in groups:
        for left in groups:
            for right in groups:
                if not left or not right:
                    continue
                dis = not (set(cond) & set(left) or set(cond) & set(right) or set(left) & set(right))
                if disjoint is None or dis == disjoint:
                    yield Indep(cond, left, right)


def check_disjoint_rewrite(cfg: VerifyConfig) -> CheckResult:
    t = Tally("disjoint_rewrite")
    m = Structure(universe_of(2)) if cfg.model is None else cfg.model
    ev = DepEvaluator(m, "standard")
    for dom in [("x",), ("x", "y")]:
        for atom in _indep_atoms(dom):
            rew = disjoint_rewrite(atom)
            if isinstance(rew, Indep):
                t.check(rew == atom, lambda: payload(phi=atom, rewritten=rew))
                continue
            for x in all_teams(m.universe, dom):
                a, b = ev.sat(x, atom), ev.sat(x, rew)
                t.check(a == b, lambda: payload(m, x, atom, rewritten=rew, atom_value=a, rewrite_value=b))
    return t.finish()


def check_monotone_q(cfg: VerifyConfig) -> CheckResult:
    t = Tally("monotone_q")
    forms = cfg.corpus("foq", quantifiers=MONOTONE_Q)
    for m in cfg.models2():
        fn, wit = DepEvaluator(m, q_clause="function"), DepEvaluator(m, q_clause="witness")
        for phi in forms:
            for dom in domains(("x", "y"), sorted(free_vars(phi)), 2):
                for x in all_teams(m.universe, dom):
                    a, b = fn.sat(x, phi), wit.sat(x, phi)
                    t.check(a == b, lambda: payload(m, x, phi, function_clause=a, witness_clause=b))
    return t.finish("function-form against witness-form quantifier clause")


# -- checks: mt-logic ---------------------------------------------------------


def check_mt_engines(cfg: VerifyConfig) -> CheckResult:
    t = Tally("mt_engines")
    forms = cfg.corpus("mt")
    table_disagreements = 0
    for m in cfg.models2():
        fn, nv = evaluator(m, "functional"), evaluator(m, "naive")
        for phi in forms:
            p = prepare(phi)
            for dom in domains(("x", "y"), sorted(free_vars(phi)), 2):
                tab = TableEvaluator(m).table(p, dom)
                for x in all_teams(m.universe, dom):
                    a, b = fn.sat(x, p), nv.sat(x, p)
                    table_disagreements += bool(tab[x.bits]) != a
                    t.check(a == b, lambda: payload(m, x, phi, functional=a, naive=b))
    t.result.stats["table_engine_disagreements"] = table_disagreements
    return t.finish("functional against naive engine")


def _lem1_forms(cfg: VerifyConfig):
    fo = [f for f in cfg.corpus("fo") if is_untangled(f)]
    foq = [f for f in cfg.corpus("foq") if is_untangled(f)]
    return fo + [f for f in foq if f not in set(fo)]


def check_lem1(cfg: VerifyConfig) -> CheckResult:
    """Untangled FO/FO(Q) φ, ``dom(X) ∩ BV(φ) = ∅``: ``X ⊨ φ ⟺ X = ⟦φ⟧``."""
    t = Tally("lem1")
    forms = _lem1_forms(cfg)
    for m in cfg.models2():
        for phi in forms:
            ev = TableEvaluator(m)
            p = prepare(phi)
            for dom in domains(("x", "y", "z"), sorted(free_vars(phi)), 3):
                if set(dom) & bound_vars(phi):
                    continue
                tab = ev.table(p, dom)
                den = denotation(m, phi, dom).bits
                sat = np.flatnonzero(tab)
                ok = len(sat) == 1 and int(sat[0]) == den
                t.check(ok, lambda: payload(m, Team(m.universe, dom, den), phi,
                                            satisfying=[team_to_json(Team(m.universe, dom, int(b)))
                                                        for b in sat[:4]]))
    t.result.stats["formulas"] = len(forms)
    return t.finish("the only satisfying team is the denotation")


def check_lem2(cfg: VerifyConfig) -> CheckResult:
    """Weak locality, both statements.  ``stats`` splits the first one by
    tangling: ``φ`` re-quantifies a variable or binds one of ``dom(X)``."""
    t = Tally("lem2")
    forms = cfg.corpus("mt")
    dummy = "z"
    tangled_bad = untangled_bad = untangled_checked = 0
    second_bad = second_checked = poly_bad = 0
    for m in cfg.models2():
        for phi in forms:
            ev = TableEvaluator(m)
            p = prepare(phi)
            fv = sorted(free_vars(phi))
            clean = is_untangled(phi)
            for d0 in domains(("x", "y"), fv, 2):
                dom = tuple(sorted(d0 + (dummy,)))
                big, small = ev.table(p, dom), ev.table(p, d0)
                tangled = bool(set(dom) & bound_vars(phi)) or not clean
                for bits in range(1 << space(m.universe, dom).size):
                    ex = restrict_bits(m.universe, dom, d0, bits)
                    fa = forall_bits(m.universe, dom, d0, bits)
                    lhs = bool(big[bits])
                    rhs = bool(small[ex]) and ex == fa
                    ok = t.check(lhs == rhs, lambda: payload(
                        m, Team(m.universe, dom, bits), phi, statement=1, dummy=dummy,
                        lhs=lhs, exists_side=bool(small[ex]), cylinder=ex == fa))
                    if tangled:
                        tangled_bad += not ok
                    else:
                        untangled_checked += 1
                        untangled_bad += not ok
            # second statement
            for dom in domains(("x", "y", "z"), fv, 3):
                w = tuple(v for v in dom if v not in free_vars(phi) | bound_vars(phi))
                if not w:
                    continue
                keep = tuple(v for v in dom if v not in w)
                nested = phi
                for v in reversed(w):
                    nested = Forall(v, nested)
                tab_all = ev.table(prepare(nested), dom)
                tab_poly = ev.table(prepare(QApply("A", w, phi)), dom)
                tab_keep = ev.table(p, keep)
                for bits in range(1 << space(m.universe, dom).size):
                    ex = restrict_bits(m.universe, dom, keep, bits)
                    lhs, rhs = bool(tab_all[bits]), bool(tab_keep[ex])
                    second_checked += 1
                    poly_bad += bool(tab_poly[bits]) != rhs
                    ok = t.check(lhs == rhs, lambda: payload(
                        m, Team(m.universe, dom, bits), nested, statement=2, lhs=lhs, rhs=rhs))
                    second_bad += not ok
    t.result.stats.update({
        "statement1_violations_tangled": tangled_bad,
        "statement1_violations_untangled": untangled_bad,
        "statement1_checked_untangled": untangled_checked,
        "statement2_violations": second_bad,
        "statement2_checked": second_checked,
        "statement2_violations_polyadic_forall": poly_bad,
    })
    return t.finish()


def check_eq_literal(cfg: VerifyConfig) -> CheckResult:
    """``ψ ⩓ TOP(w̄)`` holds exactly on the subteams of ``⟦ψ⟧`` (``w̄ = dom``)."""
    t = Tally("eq_literal")
    forms = [f for f in cfg.corpus("fo") if is_untangled(f)]
    for m in cfg.models2():
        for phi in forms:
            ev = TableEvaluator(m)
            for dom in domains(("x", "y", "z"), sorted(free_vars(phi)), 3):
                if not dom or set(dom) & bound_vars(phi):
                    continue
                tab = ev.table(prepare(IAnd(phi, top_sentence(dom))), dom)
                want = subset_table(space(m.universe, dom).size, denotation(m, phi, dom).bits)
                bad = np.flatnonzero(tab != want)
                t.result.checked += len(tab) - 1
                if len(bad):
                    b = int(bad[0])
                    t.check(False, lambda: payload(m, Team(m.universe, dom, b), phi,
                                                   encoding=bool(tab[b]), subset=bool(want[b])))
                    t.result.violations += len(bad) - 1
    return t.finish()


def check_prop_indep(cfg: VerifyConfig) -> CheckResult:
    t = Tally("prop_indep")
    m = Structure(universe_of(2))
    repaired = 0
    for dom in [("x", "y"), ("x", "y", "z"), ("w", "x", "y", "z")]:
        for atom in _indep_atoms(dom, disjoint=True):
            want = indep_table(m.universe, dom, atom.cond, atom.left, atom.right)
            lit = _mt_table(m, encode_indep(atom.cond, atom.left, atom.right, dom), dom)
            rep = _mt_table(m, encode_indep(atom.cond, atom.left, atom.right, dom, block="polyadic"),
                            dom, "repaired")
            repaired += int(np.count_nonzero(rep != want))
            bad = np.flatnonzero(lit != want)
            t.result.checked += len(want)
            if len(bad):
                b = int(bad[0])
                t.result.checked -= 1
                t.check(False, lambda: payload(m, Team(m.universe, dom, b), atom,
                                               encoding=encode_indep(atom.cond, atom.left, atom.right, dom),
                                               encoding_value=bool(lit[b]), direct=bool(want[b])))
                t.result.violations += len(bad) - 1
    t.result.stats["repaired_reading_violations"] = repaired
    return t.finish("encode_indep against the definition, every team, |dom| <= 4")


def check_prop_dep_atom(cfg: VerifyConfig) -> CheckResult:
    t = Tally("prop_dep_atom")
    m = Structure(universe_of(2))
    extra = {"source_scope_violations": 0, "repaired_reading_violations": 0,
             "repaired_source_scope_violations": 0}
    for dom in [("x",), ("x", "y"), ("x", "y", "z")]:
        for y in dom:
            rest = [v for v in dom if v != y]
            for k in range(len(rest) + 1):
                for xs in itertools.combinations(rest, k):
                    want = dep_table(m.universe, dom, xs, y)
                    lit = _mt_table(m, encode_dep(xs, y, dom), dom)
                    rep = _mt_table(m, encode_dep(xs, y, dom, block="polyadic"), dom, "repaired")
                    extra["repaired_reading_violations"] += int(np.count_nonzero(rep != want))
                    if xs or len(dom) > 1:
                        ps = _mt_table(m, encode_dep(xs, y, dom, top_scope="source"), dom)
                        extra["source_scope_violations"] += int(np.count_nonzero(ps != want))
                        pr = _mt_table(m, encode_dep(xs, y, dom, top_scope="source", block="polyadic"),
                                       dom, "repaired")
                        extra["repaired_source_scope_violations"] += int(np.count_nonzero(pr != want))
                    bad = np.flatnonzero(lit != want)
                    t.result.checked += len(want)
                    atom = Dep(tuple(Var(v) for v in xs + (y,)))
                    if len(bad):
                        b = int(bad[0])
                        t.check(False, lambda: payload(m, Team(m.universe, dom, b), atom,
                                                       encoding=encode_dep(xs, y, dom),
                                                       encoding_value=bool(lit[b]), direct=bool(want[b])))
                        t.result.checked -= 1
                        t.result.violations += len(bad) - 1
    t.result.stats.update(extra)
    return t.finish("encode_dep against the definition, every team, |dom| <= 3")


def check_gq_collapse(cfg: VerifyConfig) -> CheckResult:
    """``Q[E] x.φ`` and ``Q[A] x.φ`` coincide with ``∃x φ`` and ``∀x φ``."""
    t = Tally("gq_collapse")
    forms = cfg.corpus("fo")
    for m in cfg.models2():
        for phi in forms:
            ev = TableEvaluator(m)
            fv = free_vars(phi)
            for v in ("x", "y"):
                for q, name in ((Exists, "E"), (Forall, "A")):
                    a, b = q(v, phi), QApply(name, (v,), phi)
                    for dom in domains(("x", "y"), sorted(fv - {v}), 2):
                        ta, tb = ev.table(prepare(a), dom), ev.table(prepare(b), dom)
                        t.check(bool(np.array_equal(ta, tb)), lambda: payload(m, None, a, gq=b))
    return t.finish()


def check_iteration(cfg: VerifyConfig) -> CheckResult:
    """``(Q·Q')xy φ ⟺ Qx Q'y φ`` on every team over ``dom ⊆ {x, y, z}``.

    Both sides depend on ``φ`` only through its table over ``dom ∪ {x, y}``,
    so each distinct body table is checked once and its verdicts are
    reused (``stats["distinct_body_tables"]``)."""
    t = Tally("iteration")
    forms = cfg.corpus("mt")
    tangled_bad = 0
    identity_bad = 0
    pairs = list(itertools.product(ITERATION_FROM, repeat=2))
    qs = {n: resolve(n, 1) for n in ITERATION_FROM}
    its = {(a, b): resolve(f"iter({a},{b})", 2) for a, b in pairs}
    doms = list(domains(("x", "y", "z"), (), 2))
    done: dict = {}
    for m in cfg.models2():
        for phi in forms:
            ev = TableEvaluator(m)
            p = prepare(phi)
            for dom in doms:
                big = tuple(sorted(set(dom) | {"x", "y"}))
                body = ev.table(p, big)
                key = (dom, hashlib.blake2b(np.packbits(body).tobytes(), digest_size=16).digest())
                if key not in done:
                    found = []
                    for a, b in pairs:
                        ti = ev.apply_quantifier(its[a, b], ("x", "y"), body, dom)
                        inner = ev.apply_quantifier(qs[b], ("y",), body, tuple(sorted(set(dom) | {"x"})))
                        tn = ev.apply_quantifier(qs[a], ("x",), inner, dom)
                        bad = np.flatnonzero(ti != tn)
                        found.append((a, b, len(ti), bad, ti, tn))
                    done[key] = found
                for a, b, n, bad, ti, tn in done[key]:
                    t.result.checked += n
                    if not len(bad):
                        continue
                    if set(dom) & {"x", "y"}:
                        tangled_bad += len(bad)
                    k = int(bad[0])
                    it = QApply(f"iter({a},{b})", ("x", "y"), phi)
                    nest = QApply(a, ("x",), QApply(b, ("y",), phi))
                    t.check(False, lambda: payload(m, Team(m.universe, dom, k), it, nested=nest,
                                                   iterated_value=bool(ti[k]), nested_value=bool(tn[k])))
                    t.result.checked -= 1
                    t.result.violations += len(bad) - 1
    # the team identity Qx(Q'yY) = (Q·Q')xyY
    for m in cfg.models2()[:1]:
        u = m.universe
        for a, b in itertools.product(ITERATION_FROM, repeat=2):
            qa, qb, qi = resolve(a, 1), resolve(b, 1), resolve(f"iter({a},{b})", 2)
            for dom in [("x", "y"), ("x", "y", "z")]:
                for y in all_teams(u, dom):
                    lhs = q_project(qa, q_project(qb, y, ("y",)), ("x",))
                    identity_bad += lhs != q_project(qi, y, ("x", "y"))
    t.result.stats["violations_with_x_or_y_in_dom"] = tangled_bad
    t.result.stats["distinct_body_tables"] = len(done)
    t.result.stats["team_identity_violations"] = identity_bad
    return t.finish()


def check_nonempty(cfg: VerifyConfig) -> CheckResult:
    """Every corpus mt formula has a satisfying team over ``FV(φ)``."""
    t = Tally("nonempty")
    forms = cfg.corpus("mt")
    failing = set()
    for m in cfg.models2():
        for phi in forms:
            dom = tuple(sorted(free_vars(phi)))
            tab = TableEvaluator(m).table(prepare(phi), dom)
            ok = t.check(bool(tab.any()), lambda: payload(m, None, phi, domain=list(dom)))
            if not ok:
                failing.add(phi)
    t.result.stats["formulas_without_satisfying_team"] = len(failing)
    t.result.stats["of_which_without_external_and"] = sum(
        not any(isinstance(n, EAnd) for n in subformulas(f)) for f in failing)
    t.result.stats["formulas"] = len(forms)
    return t.finish()


# -- checks: translation ------------------------------------------------------


def _dep_truth(ev: DepEvaluator, u, dom, phi) -> np.ndarray:
    return np.array([ev.sat(Team(u, dom, b), phi) for b in range(1 << space(u, dom).size)])


def _translation(cfg: VerifyConfig, strong: bool) -> CheckResult:
    t = Tally("translation_strong" if strong else "translation")
    forms = [f for f in cfg.corpus("dep") if len(free_vars(f)) <= 2]
    repaired_bad = skipped = atom_free_bad = 0
    for m in cfg.models2():
        dep = DepEvaluator(m)
        for phi in forms:
            fv = tuple(sorted(free_vars(phi)))
            doms = list(domains(("x", "y"), fv, 2)) if strong else [fv]
            for dom in doms:
                if strong and dom == fv:
                    continue
                want = _dep_truth(dep, m.universe, dom, phi)
                try:
                    lit_f = translate(phi, dom)
                    lit = _mt_table(m, lit_f, dom)
                    rep = _mt_table(m, translate(phi, dom, block="polyadic"), dom, "repaired")
                except CapExceeded:
                    skipped += 1
                    continue
                repaired_bad += int(np.count_nonzero(rep != want))
                bad = np.flatnonzero(lit != want)
                t.result.checked += len(want)
                if len(bad):
                    if not any(isinstance(n, Dep) for n in subformulas(phi)):
                        atom_free_bad += len(bad)
                    b = int(bad[0])
                    t.check(False, lambda: payload(m, Team(m.universe, dom, b), phi, translation=lit_f,
                                                   dependence=bool(want[b]), mt=bool(lit[b])))
                    t.result.checked -= 1
                    t.result.violations += len(bad) - 1
    t.result.stats["repaired_reading_violations"] = repaired_bad
    t.result.stats["violations_without_dep_atoms"] = atom_free_bad
    t.result.stats["skipped_over_cap"] = skipped
    t.result.stats["formulas"] = len(forms)
    return t.finish("X |=_D phi against X |=_mt f(dom(X), phi)")


def check_translation(cfg: VerifyConfig) -> CheckResult:
    return _translation(cfg, strong=False)


def check_translation_strong(cfg: VerifyConfig) -> CheckResult:
    return _translation(cfg, strong=True)


BRANCH_BODIES = ("R(x,y)", "!R(x,y)", "R(y,x)", "R(x,y) & x != y")


def _branch_bodies():
    from .syntax.parser import parse

    return [parse(s, "fo") for s in BRANCH_BODIES]


def branching_outcomes(cfg: VerifyConfig, readings=("literal", "repaired"),
                       variants=BRANCH_VARIANTS, size3: bool = True) -> dict:
    """Violation counts per (reading, variant) and one counterexample each."""
    bodies = _branch_bodies()
    out: dict = {}
    pairs = list(itertools.product(BRANCH_PAIRS_FROM, repeat=2))
    if cfg.model is not None:
        m = cfg.model
        r = _relation_of_arity(m, 2)
        one = Structure(m.universe, {"R": m.relations[r] if r else Relation(2, frozenset())})
        grids = [("2" if m.size <= 2 else "3", [one], "table" if m.size <= 2 else "sat")]
        size3 = False
    else:
        grids = [("2", binary_relation_models(2), "table")]
    if size3 and cfg.max_universe >= 3:
        models3 = random_models(3, cfg.spot_models, cfg.seed)
        models3 = [Structure(m.universe, {"R": m.relations["R"]}) for m in models3]
        grids.append(("3", models3, "sat"))
    for reading in readings:
        top, block = READINGS[reading]
        for variant in variants:
            stats = {"checked": 0, "violations": 0, "checked_3": 0, "violations_3": 0,
                     "counterexample": None}
            for a, b in pairs:
                q1, q2 = resolve(a, 1), resolve(b, 1)
                for body in bodies:
                    sent = prepare(branching_formula(a, b, body, variant, block), top)
                    for tag, models, engine in grids:
                        sub = models
                        if tag == "3" and cfg.branch_sat_limit is not None:
                            sub = models[: cfg.branch_sat_limit]
                        for m in sub:
                            u = m.universe
                            rel = {tuple(s[v] for v in ("x", "y"))
                                   for s in denotation(m, body, ("x", "y"))}
                            want = branch_oracle(q1, q2, u, rel)
                            ev = evaluator(m, engine, top=top, slot_cap=16)
                            got = ev.sat(Team.unit(u), sent)
                            key = "checked" if tag == "2" else "checked_3"
                            stats[key] += 1
                            if got != want:
                                stats["violations" if tag == "2" else "violations_3"] += 1
                                if stats["counterexample"] is None:
                                    stats["counterexample"] = payload(
                                        m, None, body, pair=[a, b], variant=variant, reading=reading,
                                        mt=got, branch=want)
            out[(reading, variant)] = stats
    return out


def check_branching(cfg: VerifyConfig) -> CheckResult:
    """The two last-conjunct variants from the source under the literal
    reading; passes iff at least one validates.  With
    ``cfg.branch_supplementary`` the other combinations go to ``stats``."""
    t = Tally("branching")
    if cfg.branch_supplementary:
        res = branching_outcomes(cfg)
    else:
        res = branching_outcomes(cfg, readings=("literal",), variants=SOURCE_BRANCH_VARIANTS)
    validating = []
    for (reading, variant), s in res.items():
        tot = s["violations"] + s["violations_3"]
        t.result.stats[f"{reading}/{variant}"] = (
            f"{tot} violations in {s['checked'] + s['checked_3']} "
            f"(|M|=2: {s['violations']}/{s['checked']}, |M|=3: {s['violations_3']}/{s['checked_3']})")
        if reading == "literal" and variant in SOURCE_BRANCH_VARIANTS:
            t.result.checked += s["checked"] + s["checked_3"]
            if tot == 0:
                validating.append(variant)
    t.result.stats["validating_source_variants"] = validating or "neither"
    if not validating:
        t.result.violations = sum(res[("literal", v)]["violations"] + res[("literal", v)]["violations_3"]
                                  for v in SOURCE_BRANCH_VARIANTS)
        t.result.counterexample = res[("literal", "internal_or")]["counterexample"]
    return t.finish()


# -- registry -----------------------------------------------------------------

CHECKS: dict[str, Callable[[VerifyConfig], CheckResult]] = {
    "qprops": check_qprops,
    "qiso": check_qiso,
    "mono_implies_cont": check_mono_cont,
    "barwise": check_barwise,
    "continuity": check_continuity,
    "monotonicity": check_monotonicity,
    "denotation": check_denotation,
    "teams": check_teams,
    "ordsat": check_ordsat,
    "downward_closure": check_downward,
    "locality": check_locality,
    "flatness": check_flatness,
    "dep_indep": check_dep_indep,
    "disjoint_rewrite": check_disjoint_rewrite,
    "monotone_q": check_monotone_q,
    "mt_engines": check_mt_engines,
    "lem1": check_lem1,
    "lem2": check_lem2,
    "eq_literal": check_eq_literal,
    "prop_indep": check_prop_indep,
    "prop_dep_atom": check_prop_dep_atom,
    "gq_collapse": check_gq_collapse,
    "iteration": check_iteration,
    "nonempty": check_nonempty,
    "translation": check_translation,
    "translation_strong": check_translation_strong,
    "branching": check_branching,
}

DEFAULT_PROPS = tuple(CHECKS)


def run_checks(props: Sequence[str], cfg: VerifyConfig, command: Sequence[str] = (),
               jobs: int = 1) -> RunReport:
    unknown = [p for p in props if p not in CHECKS]
    if unknown:
        raise KeyError(f"unknown properties: {', '.join(unknown)}")
    report = RunReport(list(command), cfg.seed)
    tasks = [(n, cfg) for n in props]
    if jobs > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(jobs) as pool:
            report.checks = list(pool.map(_run_one, tasks))
    else:
        report.checks = [_run_one(a) for a in tasks]
    return report


def _run_one(args) -> CheckResult:
    name, cfg = args
    try:
        return CHECKS[name](cfg)
    except Exception as exc:  # a crashing check is a failing check
        return CheckResult(name, status="error", detail=f"{type(exc).__name__}: {exc}",
                           counterexample={"error": str(exc)})
