"""Formula corpora and small models for the verification suite.

A corpus is every formula up to ``exhaustive_depth`` over the configured
literals and connectives, followed by ``random_count`` seeded random
formulas of depth at most ``max_depth``.  Everything is in negation normal
form over one unary relation ``P`` and one binary relation ``R``.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from typing import Iterator, Optional, Sequence

from .structures import Structure, make_structure
from .syntax.ast import (
    Dep,
    EAnd,
    EOr,
    Eq,
    Exists,
    Forall,
    Formula,
    IAnd,
    IOr,
    Neq,
    NotRel,
    QApply,
    Rel,
    Var,
    depth,
)

DIALECTS = ("fo", "foq", "dep", "mt")
FOQ_QUANTIFIERS = ("E", "A", "exactly:1", "most1")


@dataclass(frozen=True)
class CorpusConfig:
    dialect: str = "fo"
    variables: tuple[str, ...] = ("x", "y")
    unary: Optional[str] = "P"
    binary: Optional[str] = "R"
    exhaustive_depth: int = 1
    max_depth: int = 3
    random_count: int = 500
    seed: int = 0
    quantifiers: tuple[str, ...] = FOQ_QUANTIFIERS

    def __post_init__(self):
        if self.dialect not in DIALECTS:
            raise ValueError(f"unknown corpus dialect {self.dialect!r}")


def literals(cfg: CorpusConfig) -> list[Formula]:
    vs = [Var(v) for v in cfg.variables]
    pos: list[Formula] = [Rel(cfg.unary, (v,)) for v in vs] if cfg.unary else []
    if cfg.binary:
        pos += [Rel(cfg.binary, (a, b)) for a in vs for b in vs]
    eqs = [Eq(a, b) for a, b in itertools.combinations_with_replacement(vs, 2)]
    out = []
    for f in pos:
        out += [f, NotRel(f.name, f.args)]
    for f in eqs:
        out += [f, Neq(f.left, f.right)]
    return out


def atoms(cfg: CorpusConfig) -> list[Formula]:
    out = literals(cfg)
    if cfg.dialect == "dep":
        vs = [Var(v) for v in cfg.variables]
        out += [Dep((v,)) for v in vs]
        out += [Dep((a, b)) for a, b in itertools.permutations(vs, 2)]
    return out


def binary_ops(cfg: CorpusConfig) -> tuple:
    if cfg.dialect == "mt":
        return (IAnd, IOr, EAnd, EOr)
    return (IAnd, IOr)


def unary_ops(cfg: CorpusConfig) -> list:
    """Callables ``(var, body) -> formula``."""
    ops = [Exists, Forall]
    if cfg.dialect == "foq":
        ops = [lambda v, b, q=q: QApply(q, (v,), b) for q in cfg.quantifiers]
    return ops


def exhaustive(cfg: CorpusConfig, max_depth: int) -> list[Formula]:
    """Every formula of depth ``≤ max_depth``, shallowest first."""
    layers: list[list[Formula]] = [atoms(cfg)]
    for _ in range(max_depth):
        below = [f for layer in layers for f in layer]
        top = layers[-1]
        new: list[Formula] = []
        for op in binary_ops(cfg):
            for a in below:
                for b in below:
                    if a in top or b in top:
                        new.append(op(a, b))
        for q in unary_ops(cfg):
            for v in cfg.variables:
                new += [q(v, f) for f in top]
        layers.append(new)
    return [f for layer in layers for f in layer]


def random_formula(rng: random.Random, cfg: CorpusConfig, max_depth: int) -> Formula:
    base = atoms(cfg)
    bins = binary_ops(cfg)
    uns = unary_ops(cfg)

    def go(d: int) -> Formula:
        if d == 0 or rng.random() < 0.25:
            return rng.choice(base)
        if rng.random() < 0.6:
            return rng.choice(bins)(go(d - 1), go(d - 1))
        return rng.choice(uns)(rng.choice(cfg.variables), go(d - 1))

    return go(max_depth)


def corpus(cfg: CorpusConfig = CorpusConfig()) -> list[Formula]:
    """Exhaustive part then random part; duplicates removed, order kept."""
    out = list(dict.fromkeys(exhaustive(cfg, cfg.exhaustive_depth)))
    seen = set(out)
    rng = random.Random(cfg.seed)
    added = 0
    attempts = 0
    while added < cfg.random_count and attempts < 50 * cfg.random_count:
        attempts += 1
        f = random_formula(rng, cfg, cfg.max_depth)
        if f in seen:
            continue
        seen.add(f)
        out.append(f)
        added += 1
    assert all(depth(f) <= max(cfg.max_depth, cfg.exhaustive_depth) for f in out)
    return out


# -- models -------------------------------------------------------------------


def universe_of(n: int) -> tuple[str, ...]:
    return tuple("abcdefgh"[:n])


def _canonical(universe, p, r) -> tuple:
    best = None
    for perm in itertools.permutations(universe):
        pi = dict(zip(universe, perm))
        key = (
            tuple(sorted(pi[a] for a in p)),
            tuple(sorted((pi[a], pi[b]) for a, b in r)),
        )
        if best is None or key < best:
            best = key
    return best


def all_models(n: int, unary: str = "P", binary: str = "R", up_to_iso: bool = True) -> list[Structure]:
    """Every structure with one unary and one binary relation on ``n``
    elements, optionally one per isomorphism class."""
    u = universe_of(n)
    pairs = list(itertools.product(u, repeat=2))
    out, seen = [], set()
    for pbits in range(1 << n):
        p = [u[i] for i in range(n) if pbits >> i & 1]
        for rbits in range(1 << len(pairs)):
            r = [pairs[i] for i in range(len(pairs)) if rbits >> i & 1]
            if up_to_iso:
                key = _canonical(u, p, r)
                if key in seen:
                    continue
                seen.add(key)
            out.append(_model(u, p, r, unary, binary))
    return out


def _model(u, p, r, unary="P", binary="R") -> Structure:
    return make_structure(
        u, {unary: [(a,) for a in p], binary: r}, arities={unary: 1, binary: 2}
    )


def random_models(n: int, count: int, seed: int = 0, unary: str = "P", binary: str = "R") -> list[Structure]:
    rng = random.Random(seed)
    u = universe_of(n)
    pairs = list(itertools.product(u, repeat=2))
    out = []
    for _ in range(count):
        p = [a for a in u if rng.random() < 0.5]
        r = [t for t in pairs if rng.random() < 0.5]
        out.append(_model(u, p, r, unary, binary))
    return out


def binary_relation_models(n: int, binary: str = "R") -> list[Structure]:
    """Every binary relation on ``n`` elements, as a structure."""
    u = universe_of(n)
    pairs = list(itertools.product(u, repeat=2))
    out = []
    for rbits in range(1 << len(pairs)):
        r = [pairs[i] for i in range(len(pairs)) if rbits >> i & 1]
        out.append(make_structure(u, {binary: r}, arities={binary: 2}))
    return out


def domains(variables: Sequence[str], required: Sequence[str] = (), max_size: int = 2) -> Iterator[tuple[str, ...]]:
    """Sorted domains ``D`` with ``required ⊆ D ⊆ variables``, ``|D| ≤ max_size``."""
    req = set(required)
    rest = [v for v in variables if v not in req]
    for k in range(len(rest) + 1):
        if len(req) + k > max_size:
            break
        for extra in itertools.combinations(rest, k):
            yield tuple(sorted(req | set(extra)))
