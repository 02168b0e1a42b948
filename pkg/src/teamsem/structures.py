"""Finite structures, assignments, term evaluation and Tarskian truth."""

from __future__ import annotations

import itertools
import json
from collections.abc import Mapping
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Iterable, Iterator, Optional

from .syntax.ast import (
    Const,
    EAnd,
    Eq,
    EOr,
    Exists,
    Forall,
    Formula,
    Func,
    IAnd,
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


class StructureError(ValueError):
    """Malformed structure, or a symbol the structure does not interpret."""


class EvaluationError(ValueError):
    pass


class Assignment(Mapping):
    """Immutable map from variable names to elements."""

    __slots__ = ("_items", "_map", "_hash")

    def __init__(self, bindings: Mapping[str, str] | Iterable[tuple[str, str]] = ()):
        items = dict(bindings)
        self._items = tuple(sorted(items.items()))
        self._map = items
        self._hash = hash(self._items)

    def __getitem__(self, key: str) -> str:
        return self._map[key]

    def __iter__(self) -> Iterator[str]:
        return (k for k, _ in self._items)

    def __len__(self) -> int:
        return len(self._items)

    def __hash__(self) -> int:
        return self._hash

    def __eq__(self, other: object) -> bool:
        if isinstance(other, Assignment):
            return self._items == other._items
        return NotImplemented

    def __repr__(self) -> str:
        if not self._items:
            return "ε"
        return "{" + ", ".join(f"{k}↦{v}" for k, v in self._items) + "}"

    def restrict(self, variables: Iterable[str]) -> Assignment:
        keep = set(variables)
        return Assignment((k, v) for k, v in self._items if k in keep)


EMPTY_ASSIGNMENT = Assignment()


def extend(s: Mapping[str, str], values: Iterable[str], variables: Iterable[str]) -> Assignment:
    """``s[a1..ak / x1..xk]``: bind each ``x_i`` to ``a_i``, overwriting."""
    values, variables = tuple(values), tuple(variables)
    if len(values) != len(variables):
        raise ValueError(f"{len(values)} values for {len(variables)} variables")
    if len(set(variables)) != len(variables):
        raise ValueError(f"repeated variable in {variables}")
    out = dict(s)
    out.update(zip(variables, values))
    return Assignment(out)


@dataclass(frozen=True)
class Relation:
    arity: int
    tuples: frozenset[tuple[str, ...]]


@dataclass(frozen=True)
class Function:
    arity: int
    table: Mapping[tuple[str, ...], str] = field(hash=False)


@dataclass(frozen=True, eq=False)
class Structure:
    universe: tuple[str, ...]
    relations: Mapping[str, Relation] = field(default_factory=dict)
    functions: Mapping[str, Function] = field(default_factory=dict)
    constants: Mapping[str, str] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "universe", tuple(self.universe))
        if not self.universe:
            raise StructureError("universe must be non-empty")
        if len(set(self.universe)) != len(self.universe):
            raise StructureError("universe has duplicate elements")
        elems = set(self.universe)
        for name, rel in self.relations.items():
            for t in rel.tuples:
                if len(t) != rel.arity:
                    raise StructureError(f"relation {name}: tuple {t} has wrong arity")
                if not set(t) <= elems:
                    raise StructureError(f"relation {name}: tuple {t} leaves the universe")
        for name, fn in self.functions.items():
            for args in itertools.product(self.universe, repeat=fn.arity):
                if fn.table.get(args) not in elems:
                    raise StructureError(f"function {name} is not total: missing {args}")
        for name, c in self.constants.items():
            if c not in elems:
                raise StructureError(f"constant {name} is not in the universe")
        key = (
            self.universe,
            tuple(sorted((k, r.arity, tuple(sorted(r.tuples))) for k, r in self.relations.items())),
            tuple(sorted((k, f.arity, tuple(sorted(f.table.items()))) for k, f in self.functions.items())),
            tuple(sorted(self.constants.items())),
        )
        object.__setattr__(self, "_key", key)

    def __hash__(self) -> int:
        return hash(self._key)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, Structure):
            return self._key == other._key
        return NotImplemented

    @property
    def size(self) -> int:
        return len(self.universe)

    def index(self, element: str) -> int:
        return self.universe.index(element)

    def with_relation(self, name: str, tuples: Iterable[tuple[str, ...]], arity: int) -> Structure:
        rels = dict(self.relations)
        rels[name] = Relation(arity, frozenset(map(tuple, tuples)))
        return Structure(self.universe, rels, self.functions, self.constants)

    def signature_key(self, symbols: Iterable[str]) -> tuple:
        """Hashable interpretation of just the given symbols."""
        out = [self.universe]
        for s in sorted(set(symbols)):
            if s in self.relations:
                out.append(("R", s, tuple(sorted(self.relations[s].tuples))))
            elif s in self.functions:
                out.append(("F", s, tuple(sorted(self.functions[s].table.items()))))
            elif s in self.constants:
                out.append(("C", s, self.constants[s]))
        return tuple(out)

    def __repr__(self) -> str:
        rels = ", ".join(f"{k}={sorted(r.tuples)}" for k, r in sorted(self.relations.items()))
        return f"Structure({list(self.universe)}{', ' + rels if rels else ''})"


def make_structure(
    universe: Iterable[str],
    relations: Optional[Mapping[str, Iterable[Iterable[str]]]] = None,
    arities: Optional[Mapping[str, int]] = None,
    functions: Optional[Mapping[str, Mapping[tuple[str, ...], str]]] = None,
    constants: Optional[Mapping[str, str]] = None,
) -> Structure:
    """Convenience constructor: relation arities are inferred from tuples
    unless given in ``arities`` (needed for empty relations)."""
    arities = dict(arities or {})
    rels = {}
    for name, tuples in (relations or {}).items():
        ts = frozenset(tuple(t) for t in tuples)
        arity = arities.get(name)
        if arity is None:
            lens = {len(t) for t in ts}
            if len(lens) != 1:
                raise StructureError(f"cannot infer arity of relation {name}")
            arity = lens.pop()
        rels[name] = Relation(arity, ts)
    fns = {}
    for name, table in (functions or {}).items():
        table = {tuple(k): v for k, v in table.items()}
        arity = len(next(iter(table))) if table else 0
        fns[name] = Function(arity, table)
    return Structure(tuple(universe), rels, fns, dict(constants or {}))


# -- JSON file format ------------------------------------------------------


def structure_from_json(data: Any) -> Structure:
    def fail(path: str, msg: str):
        raise StructureError(f"{path}: {msg}")

    if not isinstance(data, dict):
        fail("$", "expected an object")
    universe = data.get("universe")
    if not isinstance(universe, list) or not all(isinstance(e, str) for e in universe):
        fail("$.universe", "expected a list of strings")
    if not universe:
        fail("$.universe", "universe must be non-empty")
    seen = set()
    for i, e in enumerate(universe):
        if e in seen:
            fail(f"$.universe[{i}]", f"duplicate element {e!r}")
        seen.add(e)
    rels = {}
    for name, spec in (data.get("relations") or {}).items():
        path = f"$.relations.{name}"
        if not isinstance(spec, dict) or not isinstance(spec.get("arity"), int):
            fail(path, "expected {'arity': int, 'tuples': [...]}")
        arity = spec["arity"]
        tuples = set()
        for i, t in enumerate(spec.get("tuples", [])):
            if not isinstance(t, list) or len(t) != arity:
                fail(f"{path}.tuples[{i}]", f"expected a list of {arity} elements")
            for j, e in enumerate(t):
                if e not in seen:
                    fail(f"{path}.tuples[{i}][{j}]", f"{e!r} is not in the universe")
            if tuple(t) in tuples:
                fail(f"{path}.tuples[{i}]", f"duplicate tuple {t}")
            tuples.add(tuple(t))
        rels[name] = Relation(arity, frozenset(tuples))
    fns = {}
    for name, spec in (data.get("functions") or {}).items():
        path = f"$.functions.{name}"
        if not isinstance(spec, dict) or not isinstance(spec.get("arity"), int):
            fail(path, "expected {'arity': int, 'map': [...]}")
        arity = spec["arity"]
        table: dict[tuple[str, ...], str] = {}
        for i, entry in enumerate(spec.get("map", [])):
            ok = isinstance(entry, list) and len(entry) == 2 and isinstance(entry[0], list)
            if not ok or len(entry[0]) != arity:
                fail(f"{path}.map[{i}]", f"expected [[{arity} elements], element]")
            args, val = tuple(entry[0]), entry[1]
            for e in (*args, val):
                if e not in seen:
                    fail(f"{path}.map[{i}]", f"{e!r} is not in the universe")
            if args in table:
                fail(f"{path}.map[{i}]", f"duplicate argument tuple {list(args)}")
            table[args] = val
        for args in itertools.product(universe, repeat=arity):
            if args not in table:
                fail(path, f"not total: no value for {list(args)}")
        fns[name] = Function(arity, table)
    consts = {}
    for name, val in (data.get("constants") or {}).items():
        if val not in seen:
            fail(f"$.constants.{name}", f"{val!r} is not in the universe")
        consts[name] = val
    return Structure(tuple(universe), rels, fns, consts)


def structure_to_json(m: Structure) -> dict:
    return {
        "universe": list(m.universe),
        "relations": {
            k: {"arity": r.arity, "tuples": sorted(map(list, r.tuples), key=lambda t: [m.index(e) for e in t])}
            for k, r in sorted(m.relations.items())
        },
        "functions": {
            k: {"arity": f.arity, "map": [[list(a), v] for a, v in sorted(f.table.items())]}
            for k, f in sorted(m.functions.items())
        },
        "constants": dict(sorted(m.constants.items())),
    }


def load_structure(path: str | Path) -> Structure:
    text = Path(path).read_text(encoding="utf-8")
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise StructureError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from None
    try:
        return structure_from_json(data)
    except StructureError as exc:
        raise StructureError(f"{path}: {exc}") from None


# -- evaluation -------------------------------------------------------------


def eval_term(m: Structure, s: Mapping[str, str], t: Term) -> str:
    if isinstance(t, Var):
        try:
            return s[t.name]
        except KeyError:
            raise EvaluationError(f"unbound variable {t.name}") from None
    if isinstance(t, Const):
        try:
            return m.constants[t.name]
        except KeyError:
            raise EvaluationError(f"unknown constant {t.name}") from None
    if isinstance(t, Func):
        fn = m.functions.get(t.name)
        if fn is None:
            raise EvaluationError(f"unknown function {t.name}")
        if fn.arity != len(t.args):
            raise EvaluationError(f"function {t.name} has arity {fn.arity}, got {len(t.args)} arguments")
        return fn.table[tuple(eval_term(m, s, a) for a in t.args)]
    raise TypeError(f"not a term: {t!r}")


def _rel(m: Structure, name: str, nargs: int) -> Relation:
    r = m.relations.get(name)
    if r is None:
        raise EvaluationError(f"unknown relation {name}")
    if r.arity != nargs:
        raise EvaluationError(f"relation {name} has arity {r.arity}, got {nargs} arguments")
    return r


def tarski_sat(m: Structure, s: Mapping[str, str], phi: Formula, registry=None) -> bool:
    """Ordinary satisfaction of a first-order formula, possibly with
    generalized quantifiers of any type.  ``&``/``\\/`` are the Tarskian
    connectives here.  ``TOP`` is a true sentence."""
    from .quantifiers import resolve

    def rec(f: Formula, s: Mapping[str, str]) -> bool:
        if isinstance(f, Rel):
            r = _rel(m, f.name, len(f.args))
            return tuple(eval_term(m, s, a) for a in f.args) in r.tuples
        if isinstance(f, NotRel):
            r = _rel(m, f.name, len(f.args))
            return tuple(eval_term(m, s, a) for a in f.args) not in r.tuples
        if isinstance(f, Eq):
            return eval_term(m, s, f.left) == eval_term(m, s, f.right)
        if isinstance(f, Neq):
            return eval_term(m, s, f.left) != eval_term(m, s, f.right)
        if isinstance(f, IAnd):
            return rec(f.left, s) and rec(f.right, s)
        if isinstance(f, IOr):
            return rec(f.left, s) or rec(f.right, s)
        if isinstance(f, Exists):
            return any(rec(f.body, extend(s, (a,), (f.var,))) for a in m.universe)
        if isinstance(f, Forall):
            return all(rec(f.body, extend(s, (a,), (f.var,))) for a in m.universe)
        if isinstance(f, Top):
            return True
        if isinstance(f, QApply):
            q = resolve(f.quantifier, len(f.variables), registry)
            return q.accepts(m.universe, (_section(f.variables, f.body, s),))
        if isinstance(f, QMulti):
            q = resolve(f.quantifier, None, registry)
            if tuple(len(vs) for vs, _ in f.args) != q.type:
                raise EvaluationError(f"quantifier {f.quantifier} has type {q.type}")
            return q.accepts(m.universe, tuple(_section(vs, b, s) for vs, b in f.args))
        if isinstance(f, (EAnd, EOr)):
            raise EvaluationError("external connectives have no Tarskian meaning")
        raise EvaluationError(f"{type(f).__name__} has no Tarskian meaning")

    def _section(vs: tuple[str, ...], body: Formula, s: Mapping[str, str]) -> frozenset:
        return frozenset(
            a for a in itertools.product(m.universe, repeat=len(vs)) if rec(body, extend(s, a, vs))
        )

    return rec(phi, s)


def denotation(m: Structure, phi: Formula, variables: Iterable[str], registry=None):
    """The team of all assignments over ``variables`` that satisfy ``phi``."""
    from .syntax.analysis import free_vars
    from .teams import Team, space

    dom = tuple(sorted(set(variables)))
    extra = free_vars(phi) - set(dom)
    if extra:
        raise EvaluationError(f"free variables {sorted(extra)} outside {list(dom)}")
    sp = space(m.universe, dom)
    bits = 0
    for i, row in enumerate(sp.assignments):
        if tarski_sat(m, row, phi, registry):
            bits |= 1 << i
    return Team(m.universe, dom, bits)
