"""Bottom-up mt evaluation over every team at once.

For a subformula φ and domain D the engine builds a boolean vector ``S``
indexed by team bitmasks over ``M^D``: ``S[X]`` iff ``X ⊨ φ``.

* literal: one true entry, the denotation.
* ``∧``/``∨``: elementwise and/or.
* ``⩓``: ``#{(Y,Z): Y∩Z = X}`` by superset-sum transforms, a pointwise
  product, and Möbius inversion.  ``⩔`` is the same over subsets.
* ``Qx̄``: the image ``{Qx̄Y : S_body[Y]}`` indexed by ``∃x̄X``.
"""

from __future__ import annotations

import numpy as np

from .structures import EvaluationError, Structure, tarski_sat
from .syntax.analysis import free_vars
from .syntax.ast import EAnd, EOr, Eq, Exists, Forall, Formula, IAnd, IOr, Neq, NotRel, QApply, Rel
from .syntax.ast import Top
from .teams import Team, cylinder_bits, norm_domain, restrict_map, section_slots, space
from .mt_semantics import (
    DEFAULT_SLOT_CAP,
    CapExceeded,
    _check_top,
    check_mt,
    cylinder_keep,
    quantifier_of,
)


def _zeta(a: np.ndarray, n: int, up: bool, inverse: bool = False) -> np.ndarray:
    """Sum over supersets (``up``) or subsets; ``inverse`` gives Möbius."""
    a = a.copy()
    for i in range(n):
        v = a.reshape(-1, 2, 1 << i)
        if up:
            if inverse:
                v[:, 0, :] -= v[:, 1, :]
            else:
                v[:, 0, :] += v[:, 1, :]
        else:
            if inverse:
                v[:, 1, :] -= v[:, 0, :]
            else:
                v[:, 1, :] += v[:, 0, :]
    return a


def _gather_bits(idx: np.ndarray, slots) -> np.ndarray:
    """Pack bits ``slots[j]`` of each index into bit ``j``."""
    out = np.zeros_like(idx)
    for j, i in enumerate(slots):
        out |= ((idx >> i) & 1) << j
    return out


def projection_codes(universe, dom, small) -> np.ndarray:
    """``∃X`` onto ``small`` for every team X over ``dom``."""
    size = space(universe, dom).size
    idx = np.arange(1 << size, dtype=np.int64)
    m = restrict_map(universe, dom, small)
    out = np.zeros_like(idx)
    for i, j in enumerate(m):
        out |= ((idx >> i) & 1) << j
    return out


class TableEvaluator:
    def __init__(self, m: Structure, registry=None, slot_cap: int = DEFAULT_SLOT_CAP,
                 top: str = "unfold"):
        self.top = _check_top(top)
        self.m = m
        self.u = m.universe
        self.registry = registry
        self.slot_cap = slot_cap
        self._cache: dict = {}
        self._keep: list = []

    def sat(self, x: Team, phi: Formula) -> bool:
        if x.universe != self.u:
            raise EvaluationError("team and structure have different universes")
        missing = free_vars(phi) - set(x.domain)
        if missing:
            raise EvaluationError(
                f"free variables {sorted(missing)} not in dom(X) = {list(x.domain)}"
            )
        return bool(self.table(phi, x.domain)[x.bits])

    def satisfying_bits(self, phi: Formula, dom: tuple) -> np.ndarray:
        return np.nonzero(self.table(phi, norm_domain(dom)))[0]

    def table(self, phi: Formula, dom: tuple) -> np.ndarray:
        check_mt(phi, allow_top=self.top == "cylinder")
        self._keep.append(phi)
        return self._table(phi, dom)

    def _table(self, phi: Formula, dom: tuple) -> np.ndarray:
        key = (id(phi), dom)
        hit = self._cache.get(key)
        if hit is None:
            size = space(self.u, dom).size
            if size > self.slot_cap:
                raise CapExceeded(f"team space over {list(dom)} has {size} slots (cap {self.slot_cap})")
            hit = self._cache[key] = self._build(phi, dom, size)
        return hit

    def _build(self, phi: Formula, dom: tuple, size: int) -> np.ndarray:
        if isinstance(phi, (Rel, NotRel, Eq, Neq)):
            den = 0
            for i, s in enumerate(space(self.u, dom).assignments):
                if tarski_sat(self.m, s, phi):
                    den |= 1 << i
            out = np.zeros(1 << size, dtype=bool)
            out[den] = True
            return out
        if isinstance(phi, EAnd):
            return self._table(phi.left, dom) & self._table(phi.right, dom)
        if isinstance(phi, EOr):
            return self._table(phi.left, dom) | self._table(phi.right, dom)
        if isinstance(phi, (IAnd, IOr)):
            up = isinstance(phi, IAnd)
            a = _zeta(self._table(phi.left, dom).astype(np.int64), size, up)
            b = _zeta(self._table(phi.right, dom).astype(np.int64), size, up)
            return _zeta(a * b, size, up, inverse=True) > 0
        if isinstance(phi, (Exists, Forall, QApply)):
            return self._quant(phi, dom)
        if isinstance(phi, Top):
            return self._cylinders(phi.variables, dom, size)
        raise EvaluationError(f"cannot evaluate {type(phi).__name__} under mt semantics")

    def _cylinders(self, variables: tuple, dom: tuple, size: int) -> np.ndarray:
        keep = cylinder_keep(dom, variables)
        nsmall = space(self.u, keep).size
        out = np.zeros(1 << size, dtype=bool)
        for b in range(1 << nsmall):
            out[cylinder_bits(self.u, keep, dom, b)] = True
        return out

    def _quant(self, phi: Formula, dom: tuple) -> np.ndarray:
        q, xs = quantifier_of(phi, self.registry)
        return self.apply_quantifier(q, xs, self._table(phi.body, norm_domain(dom + xs)), dom)

    def apply_quantifier(self, q, xs: tuple, body: np.ndarray, dom: tuple) -> np.ndarray:
        """Table of ``Qx̄ψ`` over ``dom`` from the table of ``ψ`` over ``dom ∪ x̄``."""
        big = norm_domain(dom + xs)
        small = tuple(v for v in big if v not in xs)
        k = len(xs)
        nk = len(self.u) ** k
        if nk > 20:
            raise CapExceeded(f"sections of {nk} slots are too large for the table engine")
        accept = q.section_table(self.u, k)
        acc = np.array([accept(b) for b in range(1 << nk)], dtype=bool)
        ys = np.nonzero(body)[0].astype(np.int64)
        qy = np.zeros_like(ys)
        for s, sl in enumerate(section_slots(self.u, big, xs)):
            qy |= acc[_gather_bits(ys, sl)].astype(np.int64) << s
        image = np.zeros(1 << space(self.u, small).size, dtype=bool)
        image[qy] = True
        return image[projection_codes(self.u, dom, small)]
