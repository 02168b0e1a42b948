"""mt-logic satisfaction.

Literals hold on exactly their denotation; ``⩓``/``⩔`` are witnessed by
``X = Y ∩ Z`` / ``X = Y ∪ Z``; ``∧``/``∨`` are classical; a quantifier
``Qx̄`` (``∃``, ``∀`` included) holds on X iff some Y over ``dom(X) ∪ x̄``
satisfies the body and ``Qx̄Y = ∃x̄X``.

Engines:

``functional``
    builds each candidate Y from a choice of section ``F(s) ⊆ M^k`` for
    every ``s`` over ``dom(X)∖x̄``, with ``F(s) ∈ Q_M`` iff ``s ∈ ∃x̄X``.
    Every such Y has the right projection and every right Y arises once.
``naive``
    enumerates all Y (and all pairs Y, Z) and filters by the defining
    equations.
``table``
    bottom-up over all teams at once (``mt_table``).
``sat``
    propositional encoding (``mt_solver``).

``top`` selects how ``TOP(v̄)`` is read.  ``"unfold"`` (the default)
replaces it by ``∃v̄(v₀ = v₀ ∨ v₀ ≠ v₀)`` and evaluates that.  ``"cylinder"``
keeps the node (and folds unfolded copies back into it) and accepts X iff X is a cylinder over ``dom(X) ∖ v̄``, i.e.
``∀ūX = ∃ūX`` for ``ū = dom(X) ∖ v̄``.  The two agree whenever ``v̄`` is
disjoint from ``dom(X)``; see the README for why the second one exists.
"""

from __future__ import annotations

from typing import Iterable, Literal, Mapping, Optional

from .quantifiers import GeneralizedQuantifier, resolve
from .structures import EvaluationError, Structure, tarski_sat
from .syntax.analysis import expand_sugar, fold_top, free_vars
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
    forall_bits,
    norm_domain,
    q_project_bits,
    restrict_bits,
    section_slots,
    space,
    subsets,
)

Engine = Literal["functional", "naive", "table", "sat"]
TopReading = Literal["unfold", "cylinder"]

DEFAULT_SLOT_CAP = 16


class CapExceeded(EvaluationError):
    pass


def quantifier_of(phi: Formula, registry=None) -> tuple[GeneralizedQuantifier, tuple[str, ...]]:
    """The ``(Q, x̄)`` of a quantifier node; ``∃``/``∀`` become ``E``/``A``."""
    if isinstance(phi, Exists):
        return resolve("E", 1), (phi.var,)
    if isinstance(phi, Forall):
        return resolve("A", 1), (phi.var,)
    if isinstance(phi, QApply):
        return resolve(phi.quantifier, len(phi.variables), registry), phi.variables
    raise TypeError(f"not a team quantifier: {phi!r}")


def check_mt(phi: Formula, allow_top: bool = False) -> None:
    """Raise if ``phi`` has a node the mt engines do not interpret."""
    stack = [phi]
    while stack:
        f = stack.pop()
        if isinstance(f, (Dep, Indep)):
            raise EvaluationError(
                "dependence and independence atoms must be encoded before mt evaluation"
            )
        if isinstance(f, QMulti):
            raise EvaluationError("only type <n> quantifiers have an mt clause")
        if isinstance(f, Top) and not allow_top:
            raise EvaluationError("expand TOP before evaluation")
        if isinstance(f, (IAnd, IOr, EAnd, EOr)):
            stack += [f.left, f.right]
        elif isinstance(f, (Exists, Forall, QApply)):
            stack.append(f.body)


def cylinder_keep(dom: tuple, variables: tuple) -> tuple:
    """The coordinates a ``TOP(variables)`` cylinder is taken over."""
    return tuple(v for v in dom if v in variables)


def cylinder_holds(universe, dom: tuple, bits: int, variables: tuple) -> bool:
    """``∀ūX = ∃ūX`` with ``ū = dom ∖ variables``."""
    keep = cylinder_keep(dom, variables)
    return forall_bits(universe, dom, keep, bits) == restrict_bits(universe, dom, keep, bits)


def section_options(q, universe, big, xs, target):
    """Per row ``s`` of ``M^(big∖xs)``: candidate sets of Y-rows extending ``s``.

    Rows in ``target`` get sections in ``Q_M``, others sections outside it.
    """
    slots = section_slots(universe, big, xs)
    k = len(xs)
    nk = len(universe) ** k
    accept = q.section_table(universe, k)
    good = [b for b in range(1 << nk) if accept(b)]
    bad = [b for b in range(1 << nk) if not accept(b)]
    out = []
    for s, sl in enumerate(slots):
        pool = good if target >> s & 1 else bad
        out.append([_scatter(b, sl) for b in pool])
    return out


def _scatter(bits: int, slots) -> int:
    out = 0
    for j, i in enumerate(slots):
        if bits >> j & 1:
            out |= 1 << i
    return out


class TopDownEvaluator:
    """Shared clause dispatch for the functional and naive engines."""

    def __init__(self, m: Structure, engine: str = "functional", registry=None,
                 slot_cap: int = DEFAULT_SLOT_CAP, top: TopReading = "unfold"):
        if engine not in ("functional", "naive"):
            raise ValueError(f"unknown top-down engine {engine!r}")
        self.top = _check_top(top)
        self.m = m
        self.u = m.universe
        self.engine = engine
        self.registry = registry
        self.slot_cap = slot_cap
        self._memo: dict = {}
        self._lits: dict = {}
        self._keep: list = []

    def sat(self, x: Team, phi: Formula) -> bool:
        if x.universe != self.u:
            raise EvaluationError("team and structure have different universes")
        missing = free_vars(phi) - set(x.domain)
        if missing:
            raise EvaluationError(
                f"free variables {sorted(missing)} not in dom(X) = {list(x.domain)}"
            )
        check_mt(phi, allow_top=self.top == "cylinder")
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
            return bits == self.literal(phi, dom)
        if isinstance(phi, EAnd):
            return self._sat(phi.left, dom, bits) and self._sat(phi.right, dom, bits)
        if isinstance(phi, EOr):
            return self._sat(phi.left, dom, bits) or self._sat(phi.right, dom, bits)
        if isinstance(phi, IAnd):
            return self._iand(phi, dom, bits)
        if isinstance(phi, IOr):
            return self._ior(phi, dom, bits)
        if isinstance(phi, (Exists, Forall, QApply)):
            return self._quant(phi, dom, bits)
        if isinstance(phi, Top):
            return cylinder_holds(self.u, dom, bits, phi.variables)
        raise EvaluationError(f"cannot evaluate {type(phi).__name__} under mt semantics")

    def literal(self, phi: Formula, dom: tuple) -> int:
        key = (id(phi), dom)
        hit = self._lits.get(key)
        if hit is None:
            hit = 0
            for i, s in enumerate(space(self.u, dom).assignments):
                if tarski_sat(self.m, s, phi):
                    hit |= 1 << i
            self._lits[key] = hit
            self._keep.append(phi)
        return hit

    def _check_cap(self, dom: tuple) -> None:
        if space(self.u, dom).size > self.slot_cap:
            raise CapExceeded(
                f"team space over {list(dom)} has {space(self.u, dom).size} slots "
                f"(cap {self.slot_cap})"
            )

    def _iand(self, phi: IAnd, dom: tuple, bits: int) -> bool:
        self._check_cap(dom)
        full = space(self.u, dom).full
        if self.engine == "naive":
            for y in range(full + 1):
                if y & bits != bits or not self._sat(phi.left, dom, y):
                    continue
                for z in range(full + 1):
                    if y & z == bits and self._sat(phi.right, dom, z):
                        return True
            return False
        comp = full & ~bits
        lefts = [a for a in subsets(comp) if self._sat(phi.left, dom, bits | a)]
        if not lefts:
            return False
        rights = [b for b in subsets(comp) if self._sat(phi.right, dom, bits | b)]
        return any(a & b == 0 for a in lefts for b in rights)

    def _ior(self, phi: IOr, dom: tuple, bits: int) -> bool:
        self._check_cap(dom)
        if self.engine == "naive":
            full = space(self.u, dom).full
            for y in range(full + 1):
                if y & ~bits or not self._sat(phi.left, dom, y):
                    continue
                for z in range(full + 1):
                    if y | z == bits and self._sat(phi.right, dom, z):
                        return True
            return False
        for y in subsets(bits):
            if not self._sat(phi.left, dom, y):
                continue
            rest = bits & ~y
            if any(self._sat(phi.right, dom, rest | extra) for extra in subsets(y)):
                return True
        return False

    def _quant(self, phi, dom: tuple, bits: int) -> bool:
        q, xs = quantifier_of(phi, self.registry)
        big = norm_domain(dom + xs)
        small = tuple(v for v in big if v not in xs)
        self._check_cap(big)
        target = restrict_bits(self.u, dom, small, bits)
        if self.engine == "naive":
            for y in range(space(self.u, big).full + 1):
                if q_project_bits(q, self.u, big, xs, y) == target and self._sat(phi.body, big, y):
                    return True
            return False
        options = section_options(q, self.u, big, xs, target)
        return any(self._sat(phi.body, big, y) for y in choice_product(options))


# -- facade -------------------------------------------------------------------


def _check_top(top: str) -> str:
    if top not in ("unfold", "cylinder"):
        raise ValueError(f"unknown TOP reading {top!r}")
    return top


def _prepare(phi: Formula, top: TopReading = "unfold") -> Formula:
    return expand_sugar(phi) if _check_top(top) == "unfold" else fold_top(phi)


def mt_sat(
    m: Structure,
    x: Team,
    phi: Formula,
    engine: Engine = "functional",
    registry: Optional[Mapping[str, GeneralizedQuantifier]] = None,
    slot_cap: int = DEFAULT_SLOT_CAP,
    top: TopReading = "unfold",
) -> bool:
    """``M, X ⊨_mt φ``; ``TOP`` is read according to ``top``."""
    phi = _prepare(phi, top)
    return evaluator(m, engine, registry, slot_cap, top).sat(x, phi)


def evaluator(
    m: Structure,
    engine: Engine = "functional",
    registry=None,
    slot_cap: int = DEFAULT_SLOT_CAP,
    top: TopReading = "unfold",
):
    """A reusable evaluator whose ``.sat(X, φ)`` expects ``φ`` already
    prepared (``TOP`` expanded unless ``top="cylinder"``); see ``prepare``."""
    if engine in ("functional", "naive"):
        return TopDownEvaluator(m, engine, registry, slot_cap, top)
    if engine == "table":
        from .mt_table import TableEvaluator

        return TableEvaluator(m, registry, slot_cap, top)
    if engine == "sat":
        from .mt_solver import SolverEvaluator

        return SolverEvaluator(m, registry, top=top)
    raise ValueError(f"unknown mt engine {engine!r}")


def mt_sentence_sat(m: Structure, sigma: Formula, engine: Engine = "functional", **kw) -> bool:
    return mt_sat(m, Team.unit(m.universe), sigma, engine=engine, **kw)


def satisfying_teams(
    m: Structure,
    phi: Formula,
    domain: Iterable[str],
    registry=None,
    slot_cap: int = DEFAULT_SLOT_CAP,
    top: TopReading = "unfold",
) -> list[Team]:
    """All X over ``domain`` with ``M, X ⊨_mt φ``, in bit order."""
    from .mt_table import TableEvaluator

    dom = norm_domain(domain)
    missing = free_vars(phi) - set(dom)
    if missing:
        raise EvaluationError(f"free variables {sorted(missing)} not in {list(dom)}")
    if space(m.universe, dom).size > slot_cap:
        raise CapExceeded(f"{space(m.universe, dom).size} assignment slots exceeds cap {slot_cap}")
    ev = TableEvaluator(m, registry, slot_cap, top)
    return [Team(m.universe, dom, int(b)) for b in ev.satisfying_bits(_prepare(phi, top), dom)]


prepare = _prepare
