"""Generalized quantifiers as local acceptance predicates.

A quantifier of type ``<n1,...,nk>`` is given by a predicate deciding, for a
finite universe and a tuple of relations (frozensets of element tuples),
whether the tuple is in ``Q_M``.  Isomorphism closure is not enforced; it is
a checkable property (``find_iso_violation``).

Names understood by ``resolve``::

    E  A  atleast:k  atmost:k  exactly:k  between:k:m  most1  most  even
    iter(Q,Q')  br(Q1,Q2)

plus anything placed in a registry (see ``quantifier_from_json``).
"""

from __future__ import annotations

import functools
import itertools
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Iterable, Mapping, Optional, Sequence

Relations = tuple[frozenset, ...]


class QuantifierError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class GeneralizedQuantifier:
    name: str
    type: tuple[int, ...]
    predicate: Callable[[tuple[str, ...], Relations], bool] = field(repr=False)
    # (number of slots |M|^n, |R|) -> bool, when acceptance depends on |R| only
    cardinal: Optional[Callable[[int, int], bool]] = field(default=None, repr=False)
    monotone: Optional[bool] = None
    continuous: Optional[bool] = None
    _tables: dict = field(default_factory=dict, repr=False, compare=False)

    @property
    def arity(self) -> int:
        if len(self.type) != 1:
            raise QuantifierError(f"{self.name} has type {list(self.type)}, not <n>")
        return self.type[0]

    def accepts(self, universe: Sequence[str], relations: Sequence[Iterable]) -> bool:
        universe = tuple(universe)
        if len(relations) != len(self.type):
            raise QuantifierError(
                f"{self.name} takes {len(self.type)} relation(s), got {len(relations)}"
            )
        rels = tuple(_as_relation(r, n, universe) for r, n in zip(relations, self.type))
        if self.cardinal is not None:
            return self.cardinal(len(universe) ** self.type[0], len(rels[0]))
        return bool(self.predicate(universe, rels))

    def section_table(self, universe: Sequence[str], k: int) -> Callable[[int], bool]:
        """Acceptance as a function of a relation bitmask over ``M^k`` in
        lexicographic order (bit ``j`` = ``j``-th tuple)."""
        universe = tuple(universe)
        key = (universe, k)
        hit = self._tables.get(key)
        if hit is not None:
            return hit
        if (k,) != self.type:
            raise QuantifierError(f"{self.name} has type {list(self.type)}, used with <{k}>")
        slots = len(universe) ** k
        tuples = list(itertools.product(universe, repeat=k))
        if self.cardinal is not None:
            card = [bool(self.cardinal(slots, c)) for c in range(slots + 1)]

            def fn(bits: int) -> bool:
                return card[bin(bits).count("1")]

        elif slots <= 16:
            table = [
                bool(self.predicate(universe, (bits_to_relation(b, tuples),)))
                for b in range(1 << slots)
            ]
            fn = table.__getitem__
        else:
            memo: dict[int, bool] = {}

            def fn(bits: int) -> bool:
                v = memo.get(bits)
                if v is None:
                    v = memo[bits] = bool(self.predicate(universe, (bits_to_relation(bits, tuples),)))
                return v

        self._tables[key] = fn
        return fn

    def members(self, universe: Sequence[str], k: Optional[int] = None) -> list[int]:
        """All accepted relations over ``M^k`` as bitmasks."""
        k = self.arity if k is None else k
        slots = len(tuple(universe)) ** k
        if slots > 20:
            raise QuantifierError(f"{slots} slots is too many to enumerate Q_M")
        fn = self.section_table(universe, k)
        return [b for b in range(1 << slots) if fn(b)]

    def __repr__(self) -> str:
        return f"Q[{self.name}]"


def _as_relation(r: Iterable, n: int, universe: tuple[str, ...]) -> frozenset:
    out = set()
    elems = set(universe)
    for t in r:
        t = (t,) if isinstance(t, str) else tuple(t)
        if len(t) != n:
            raise QuantifierError(f"tuple {t} should have length {n}")
        if not set(t) <= elems:
            raise QuantifierError(f"tuple {t} leaves the universe")
        out.add(t)
    return frozenset(out)


def bits_to_relation(bits: int, tuples: Sequence[tuple]) -> frozenset:
    return frozenset(t for j, t in enumerate(tuples) if bits >> j & 1)


def relation_to_bits(rel: Iterable[tuple], universe: Sequence[str], k: int) -> int:
    pos = {e: i for i, e in enumerate(universe)}
    n = len(universe)
    out = 0
    for t in rel:
        t = (t,) if isinstance(t, str) else t
        j = 0
        for e in t:
            j = j * n + pos[e]
        out |= 1 << j
    return out


def q_member(q: GeneralizedQuantifier, model, relations: Sequence[Iterable]) -> bool:
    """``(M, R1, ..., Rk) ∈ Q``; ``model`` is a structure or a universe."""
    universe = getattr(model, "universe", model)
    return q.accepts(universe, relations)


# -- builtins -----------------------------------------------------------------


def cardinality_quantifier(
    name: str,
    n: int,
    test: Callable[[int, int], bool],
    monotone: Optional[bool] = None,
    continuous: Optional[bool] = None,
) -> GeneralizedQuantifier:
    """Type ``<n>``; ``test(slots, size)`` where ``slots = |M|^n``."""
    return GeneralizedQuantifier(
        name,
        (n,),
        lambda u, rels: test(len(u) ** n, len(rels[0])),
        cardinal=test,
        monotone=monotone,
        continuous=continuous,
    )


def _int(text: str, name: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise QuantifierError(f"bad numeric parameter in {name!r}") from None
    if v < 0:
        raise QuantifierError(f"negative parameter in {name!r}")
    return v


def _most(universe: tuple[str, ...], rels: Relations) -> bool:
    a, b = ({t[0] for t in r} for r in rels)
    return len(a & b) >= len(a - b)


def builtin(name: str, arity: int = 1) -> GeneralizedQuantifier:
    """A library quantifier; ``arity`` fixes ``n`` for the type-polymorphic ones."""
    parts = name.split(":")
    head = parts[0]
    n = arity
    if head == "E" and len(parts) == 1:
        return cardinality_quantifier(name, n, lambda t, c: c > 0, True, True)
    if head == "A" and len(parts) == 1:
        return cardinality_quantifier(name, n, lambda t, c: c == t, True, True)
    if head in ("atleast", "atmost", "exactly") and len(parts) == 2:
        k = _int(parts[1], name)
        if head == "atleast":
            return cardinality_quantifier(name, n, lambda t, c: c >= k, True, True)
        if head == "atmost":
            return cardinality_quantifier(name, n, lambda t, c: c <= k, None, True)
        return cardinality_quantifier(name, n, lambda t, c: c == k, None, True)
    if head == "between" and len(parts) == 3:
        lo, hi = _int(parts[1], name), _int(parts[2], name)
        return cardinality_quantifier(name, n, lambda t, c: lo <= c <= hi, None, True)
    if name == "most1":
        return cardinality_quantifier(name, n, lambda t, c: c > t - c, True, True)
    if name == "even":
        return cardinality_quantifier(name, n, lambda t, c: c % 2 == 0, False, False)
    if name == "most":
        return GeneralizedQuantifier(name, (1, 1), _most)
    raise QuantifierError(f"unknown quantifier {name!r}")


def iterate(q: GeneralizedQuantifier, q2: GeneralizedQuantifier) -> GeneralizedQuantifier:
    """``Q·Q'`` accepts ``R ⊆ M²`` iff ``{a | R_a ∈ Q'_M} ∈ Q_M``."""
    if q.type != (1,) or q2.type != (1,):
        raise QuantifierError("iteration needs two type <1> quantifiers")

    def pred(universe, rels):
        r = rels[0]
        good = frozenset(
            (a,) for a in universe
            if q2.accepts(universe, (frozenset((b,) for (x, b) in r if x == a),))
        )
        return q.accepts(universe, (good,))

    mono = True if q.monotone and q2.monotone else None
    return GeneralizedQuantifier(f"iter({q.name},{q2.name})", (2,), pred, monotone=mono)


def branch(q1: GeneralizedQuantifier, q2: GeneralizedQuantifier) -> GeneralizedQuantifier:
    """``Br(Q1,Q2)``: some ``S1×S2 ⊆ R ⊆ S1'×S2'`` with ``S1,S1' ∈ Q1``,
    ``S2,S2' ∈ Q2``.  Continuity is not required here."""
    if q1.type != (1,) or q2.type != (1,):
        raise QuantifierError("branching needs two type <1> quantifiers")

    def pred(universe, rels):
        r = rels[0]
        a1 = [bits_to_relation(b, [(e,) for e in universe]) for b in q1.members(universe, 1)]
        a2 = [bits_to_relation(b, [(e,) for e in universe]) for b in q2.members(universe, 1)]
        a1 = [{t[0] for t in s} for s in a1]
        a2 = [{t[0] for t in s} for s in a2]
        lower = any(all((x, y) in r for x in s1 for y in s2) for s1 in a1 for s2 in a2)
        if not lower:
            return False
        return any(all(x in s1 and y in s2 for (x, y) in r) for s1 in a1 for s2 in a2)

    return GeneralizedQuantifier(f"br({q1.name},{q2.name})", (2,), pred)


def barwise_branch(q1: GeneralizedQuantifier, q2: GeneralizedQuantifier) -> GeneralizedQuantifier:
    """``{R | ∃A ∈ Q1, B ∈ Q2: A×B ⊆ R}``, the form for monotone quantifiers."""
    if q1.type != (1,) or q2.type != (1,):
        raise QuantifierError("branching needs two type <1> quantifiers")

    def pred(universe, rels):
        r = rels[0]
        unary = [(e,) for e in universe]
        a1 = [{t[0] for t in bits_to_relation(b, unary)} for b in q1.members(universe, 1)]
        a2 = [{t[0] for t in bits_to_relation(b, unary)} for b in q2.members(universe, 1)]
        return any(all((x, y) in r for x in s1 for y in s2) for s1 in a1 for s2 in a2)

    return GeneralizedQuantifier(f"barwise({q1.name},{q2.name})", (2,), pred)


def _split_args(text: str) -> list[str]:
    out, depth, cur = [], 0, []
    for ch in text:
        if ch == "," and depth == 0:
            out.append("".join(cur).strip())
            cur = []
            continue
        depth += ch == "("
        depth -= ch == ")"
        if depth < 0:
            raise QuantifierError(f"unbalanced parentheses in {text!r}")
        cur.append(ch)
    if depth:
        raise QuantifierError(f"unbalanced parentheses in {text!r}")
    out.append("".join(cur).strip())
    return out


def resolve(
    name: str,
    arity: Optional[int] = None,
    registry: Optional[Mapping[str, GeneralizedQuantifier]] = None,
) -> GeneralizedQuantifier:
    """Look ``name`` up in ``registry`` or build it from the builtin grammar.

    ``arity`` is the number of bound variables at the use site (``None`` for
    multi-argument use); a fixed-type quantifier used at the wrong arity is an
    error.
    """
    name = name.strip()
    if registry and name in registry:
        q = registry[name]
    elif registry:
        q = _build(name, arity, registry)
    else:
        q = _build_cached(name, arity)
    if arity is not None and q.type != (arity,):
        raise QuantifierError(f"quantifier {name} has type {list(q.type)}, bound {arity} variable(s)")
    return q


def _build(name: str, arity: Optional[int], registry=None) -> GeneralizedQuantifier:
    for head, ctor in (("iter(", iterate), ("br(", branch)):
        if name.startswith(head) and name.endswith(")"):
            args = _split_args(name[len(head):-1])
            if len(args) != 2:
                raise QuantifierError(f"{head[:-1]} takes two quantifiers: {name!r}")
            return ctor(resolve(args[0], 1, registry), resolve(args[1], 1, registry))
    return builtin(name, arity if arity is not None else 1)


@functools.lru_cache(maxsize=None)
def _build_cached(name: str, arity: Optional[int]) -> GeneralizedQuantifier:
    # one instance per name keeps the acceptance tables shared
    return _build(name, arity)


# -- custom quantifiers -------------------------------------------------------


def quantifier_from_json(data: Any) -> GeneralizedQuantifier:
    if not isinstance(data, dict):
        raise QuantifierError("$: expected an object")
    name = data.get("name")
    if not isinstance(name, str) or not name:
        raise QuantifierError("$.name: expected a non-empty string")
    qtype = data.get("type")
    if not (isinstance(qtype, list) and len(qtype) == 1 and isinstance(qtype[0], int) and qtype[0] > 0):
        raise QuantifierError("$.type: expected [n] with n >= 1")
    n = qtype[0]
    if "cardinality" in data:
        spec = data["cardinality"]
        if not isinstance(spec, dict):
            raise QuantifierError("$.cardinality: expected an object")
        table: dict[int, frozenset[int]] = {}
        for key, sizes in spec.items():
            try:
                m = int(key)
            except ValueError:
                raise QuantifierError(f"$.cardinality.{key}: not a universe size") from None
            if not isinstance(sizes, list) or not all(isinstance(c, int) for c in sizes):
                raise QuantifierError(f"$.cardinality.{key}: expected a list of integers")
            table[m] = frozenset(sizes)

        def pred(universe, rels):
            m = len(universe)
            if m not in table:
                raise QuantifierError(f"{name} is undefined on universes of size {m}")
            return len(rels[0]) in table[m]

        return GeneralizedQuantifier(name, (n,), pred)
    if "explicit" in data:
        spec = data["explicit"]
        if not isinstance(spec, dict) or not isinstance(spec.get("universe_size"), int):
            raise QuantifierError("$.explicit.universe_size: expected an integer")
        size = spec["universe_size"]
        accepted = set()
        for i, rel in enumerate(spec.get("accept", [])):
            if not isinstance(rel, list):
                raise QuantifierError(f"$.explicit.accept[{i}]: expected a list of tuples")
            tuples = set()
            for j, t in enumerate(rel):
                if not isinstance(t, list) or len(t) != n:
                    raise QuantifierError(f"$.explicit.accept[{i}][{j}]: expected {n} elements")
                tuples.add(tuple(t))
            accepted.add(frozenset(tuples))

        def pred(universe, rels):
            if len(universe) != size:
                raise QuantifierError(f"{name} is only defined on universes of size {size}")
            return rels[0] in accepted

        return GeneralizedQuantifier(name, (n,), pred)
    raise QuantifierError("$: expected a 'cardinality' or 'explicit' field")


def load_quantifier(path: str | Path) -> GeneralizedQuantifier:
    text = Path(path).read_text(encoding="utf-8")
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise QuantifierError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from None
    return quantifier_from_json(data)


# -- property checks ----------------------------------------------------------


def _universe(model) -> tuple[str, ...]:
    return tuple(getattr(model, "universe", model))


def _accepted(q: GeneralizedQuantifier, universe: tuple[str, ...]) -> tuple[int, list[bool]]:
    k = q.arity
    slots = len(universe) ** k
    if slots > 16:
        raise QuantifierError(f"{slots} slots is too many for exhaustive checks")
    fn = q.section_table(universe, k)
    return slots, [fn(b) for b in range(1 << slots)]


def _decode(q, universe, bits) -> frozenset:
    return bits_to_relation(bits, list(itertools.product(universe, repeat=q.arity)))


def find_monotonicity_violation(q: GeneralizedQuantifier, model) -> Optional[tuple[frozenset, frozenset]]:
    """Some ``R ⊆ S`` with ``R`` accepted and ``S`` not, or ``None``."""
    universe = _universe(model)
    slots, acc = _accepted(q, universe)
    full = (1 << slots) - 1
    for r in range(1 << slots):
        if not acc[r]:
            continue
        rest = full & ~r
        sub = rest
        while True:
            if not acc[r | sub]:
                return _decode(q, universe, r), _decode(q, universe, r | sub)
            if sub == 0:
                break
            sub = (sub - 1) & rest
    return None


def find_continuity_violation(
    q: GeneralizedQuantifier, model
) -> Optional[tuple[frozenset, frozenset, frozenset]]:
    """Some chain ``R1 ⊆ R2 ⊆ R3`` with ``R1, R3`` accepted and ``R2`` not."""
    universe = _universe(model)
    slots, acc = _accepted(q, universe)
    members = [b for b in range(1 << slots) if acc[b]]
    for r1 in members:
        for r3 in members:
            if r1 & ~r3:
                continue
            gap = r3 & ~r1
            sub = gap
            while True:
                if not acc[r1 | sub]:
                    return tuple(_decode(q, universe, b) for b in (r1, r1 | sub, r3))
                if sub == 0:
                    break
                sub = (sub - 1) & gap
    return None


def find_iso_violation(q: GeneralizedQuantifier, model) -> Optional[tuple[frozenset, tuple[str, ...]]]:
    """A relation and a universe permutation whose image changes the verdict."""
    universe = _universe(model)
    k = q.arity
    tuples = list(itertools.product(universe, repeat=k))
    if len(tuples) > 16:
        raise QuantifierError("too many slots for an exhaustive isomorphism check")
    for perm in itertools.permutations(universe):
        pi = dict(zip(universe, perm))
        for b in range(1 << len(tuples)):
            r = bits_to_relation(b, tuples)
            image = frozenset(tuple(pi[e] for e in t) for t in r)
            if q.accepts(universe, (r,)) != q.accepts(universe, (image,)):
                return r, perm
    return None


def is_monotone_increasing(q: GeneralizedQuantifier, model) -> bool:
    return find_monotonicity_violation(q, model) is None


def is_continuous(q: GeneralizedQuantifier, model) -> bool:
    return find_continuity_violation(q, model) is None


def is_iso_closed(q: GeneralizedQuantifier, model) -> bool:
    return find_iso_violation(q, model) is None


BUILTIN_NAMES = (
    "E", "A", "atleast:1", "atleast:2", "atmost:1", "exactly:0", "exactly:1",
    "exactly:2", "between:1:2", "most1", "even",
)
