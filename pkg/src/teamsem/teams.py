"""Teams as bitsets.

A team over universe ``M`` with domain ``D`` (kept sorted by variable name)
is an integer whose bit ``i`` says whether the ``i``-th assignment in the
lexicographic enumeration of ``M^D`` is present.  The first domain variable
is the most significant digit, so slot order is the canonical row order.

Module-level ``*_bits`` helpers work on raw integers and are what the
engines use; the ``Team`` methods wrap them.
"""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass
from typing import Any, Callable, Iterable, Iterator, Mapping, Sequence

from .structures import Assignment


class TeamError(ValueError):
    pass


class Space:
    """All assignments ``D -> M`` in slot order."""

    def __init__(self, universe: tuple[str, ...], domain: tuple[str, ...]):
        self.universe = universe
        self.domain = domain
        self.n = len(universe)
        self.size = self.n ** len(domain)
        self.digits: tuple[tuple[int, ...], ...] = tuple(
            itertools.product(range(self.n), repeat=len(domain))
        )
        self.assignments: tuple[Assignment, ...] = tuple(
            Assignment(zip(domain, (universe[i] for i in row))) for row in self.digits
        )
        self.full = (1 << self.size) - 1
        self._pos = {e: i for i, e in enumerate(universe)}

    def slot_of_digits(self, digits: Sequence[int]) -> int:
        out = 0
        for d in digits:
            out = out * self.n + d
        return out

    def slot(self, s: Mapping[str, str]) -> int:
        return self.slot_of_digits([self._pos[s[v]] for v in self.domain])

    def __repr__(self) -> str:
        return f"Space({list(self.universe)}, {list(self.domain)})"


@functools.lru_cache(maxsize=None)
def space(universe: tuple[str, ...], domain: tuple[str, ...]) -> Space:
    return Space(tuple(universe), tuple(sorted(domain)))


def norm_domain(variables: Iterable[str]) -> tuple[str, ...]:
    return tuple(sorted(set(variables)))


# -- raw bit machinery --------------------------------------------------------


def iter_bits(bits: int) -> Iterator[int]:
    while bits:
        low = bits & -bits
        yield low.bit_length() - 1
        bits ^= low


@functools.lru_cache(maxsize=None)
def restrict_map(universe: tuple, domain: tuple, keep: tuple) -> tuple[int, ...]:
    """Slot-to-slot map from ``M^domain`` onto ``M^keep`` (keep ⊆ domain)."""
    src = space(universe, domain)
    dst = space(universe, keep)
    where = [domain.index(v) for v in dst.domain]
    return tuple(dst.slot_of_digits([row[i] for i in where]) for row in src.digits)


@functools.lru_cache(maxsize=None)
def fibers(universe: tuple, domain: tuple, keep: tuple) -> tuple[tuple[int, ...], ...]:
    """For each slot of ``M^keep``, the slots of ``M^domain`` restricting to it."""
    m = restrict_map(universe, domain, keep)
    out: list[list[int]] = [[] for _ in range(space(universe, keep).size)]
    for i, j in enumerate(m):
        out[j].append(i)
    return tuple(map(tuple, out))


def restrict_bits(universe: tuple, domain: tuple, keep: tuple, bits: int) -> int:
    m = restrict_map(universe, domain, keep)
    out = 0
    for i in iter_bits(bits):
        out |= 1 << m[i]
    return out


def forall_bits(universe: tuple, domain: tuple, keep: tuple, bits: int) -> int:
    """Slots of ``M^keep`` all of whose extensions lie in ``bits``."""
    out = 0
    for j, fib in enumerate(fibers(universe, domain, keep)):
        if all(bits >> i & 1 for i in fib):
            out |= 1 << j
    return out


def cylinder_bits(universe: tuple, small: tuple, big: tuple, bits: int) -> int:
    """``X[M/(big∖small)]`` for a team over ``small`` ⊆ ``big``."""
    out = 0
    fib = fibers(universe, big, small)
    for j in iter_bits(bits):
        for i in fib[j]:
            out |= 1 << i
    return out


@functools.lru_cache(maxsize=None)
def section_slots(universe: tuple, domain: tuple, xs: tuple) -> tuple[tuple[int, ...], ...]:
    """For each slot ``s`` of ``M^(domain∖xs)``, the slots of ``s[ā/xs]``
    for ``ā`` ranging over ``M^k`` in lexicographic order of ``xs``."""
    rest = tuple(v for v in domain if v not in xs)
    big = space(universe, domain)
    small = space(universe, rest)
    out = []
    for row in small.digits:
        val = dict(zip(small.domain, row))
        slots = []
        for a in itertools.product(range(big.n), repeat=len(xs)):
            val.update(zip(xs, a))
            slots.append(big.slot_of_digits([val[v] for v in big.domain]))
        out.append(tuple(slots))
    return tuple(out)


def section_value(bits: int, slots: Sequence[int]) -> int:
    out = 0
    for j, i in enumerate(slots):
        if bits >> i & 1:
            out |= 1 << j
    return out


def q_project_bits(q, universe: tuple, domain: tuple, xs: tuple, bits: int) -> int:
    """``Q xs Y`` on raw bits: sections ``Y_s(xs)`` accepted by ``q``."""
    accept = q.section_table(universe, len(xs))
    out = 0
    for s, slots in enumerate(section_slots(universe, domain, xs)):
        if accept(section_value(bits, slots)):
            out |= 1 << s
    return out


# -- Team ---------------------------------------------------------------------


@dataclass(frozen=True)
class Team:
    universe: tuple[str, ...]
    domain: tuple[str, ...]
    bits: int

    def __post_init__(self):
        object.__setattr__(self, "universe", tuple(self.universe))
        dom = tuple(self.domain)
        if list(dom) != sorted(set(dom)):
            raise TeamError(f"domain must be sorted and duplicate-free, got {dom}")
        object.__setattr__(self, "domain", dom)
        if self.bits < 0 or self.bits > self.space.full:
            raise TeamError("team bits outside the assignment space")

    @property
    def space(self) -> Space:
        return space(self.universe, self.domain)

    # construction
    @classmethod
    def empty(cls, universe: Iterable[str], domain: Iterable[str]) -> Team:
        return cls(tuple(universe), norm_domain(domain), 0)

    @classmethod
    def full(cls, universe: Iterable[str], domain: Iterable[str]) -> Team:
        u, d = tuple(universe), norm_domain(domain)
        return cls(u, d, space(u, d).full)

    @classmethod
    def unit(cls, universe: Iterable[str]) -> Team:
        """``{ε}``: the team holding only the empty assignment."""
        return cls(tuple(universe), (), 1)

    @classmethod
    def from_assignments(
        cls, universe: Iterable[str], domain: Iterable[str], rows: Iterable[Mapping[str, str]]
    ) -> Team:
        u, d = tuple(universe), norm_domain(domain)
        sp = space(u, d)
        bits = 0
        for s in rows:
            if set(s) != set(d):
                raise TeamError(f"row {dict(s)} does not match domain {list(d)}")
            try:
                bits |= 1 << sp.slot(s)
            except KeyError as exc:
                raise TeamError(f"row {dict(s)} has an element outside the universe") from exc
        return cls(u, d, bits)

    @classmethod
    def from_rows(
        cls, universe: Iterable[str], domain: Sequence[str], rows: Iterable[Sequence[str]]
    ) -> Team:
        """Rows given positionally against ``domain`` (any order)."""
        domain = list(domain)
        if len(set(domain)) != len(domain):
            raise TeamError(f"duplicate variable in domain {domain}")
        out = []
        for row in rows:
            if len(row) != len(domain):
                raise TeamError(f"row {list(row)} does not match domain {domain}")
            out.append(dict(zip(domain, row)))
        return cls.from_assignments(universe, domain, out)

    # basic views
    def __len__(self) -> int:
        return bin(self.bits).count("1")

    def __iter__(self) -> Iterator[Assignment]:
        a = self.space.assignments
        return (a[i] for i in iter_bits(self.bits))

    def __contains__(self, s: object) -> bool:
        if not isinstance(s, Mapping) or set(s) != set(self.domain):
            return False
        try:
            return bool(self.bits >> self.space.slot(s) & 1)
        except KeyError:
            return False

    def assignments(self) -> list[Assignment]:
        return list(self)

    def rows(self) -> list[tuple[str, ...]]:
        """Rows as tuples in domain order, canonically sorted."""
        return [tuple(s[v] for v in self.domain) for s in self]

    def is_empty(self) -> bool:
        return self.bits == 0

    def _same(self, other: Team) -> None:
        if self.domain != other.domain or self.universe != other.universe:
            raise TeamError(
                f"teams over {list(self.domain)} and {list(other.domain)} are not comparable"
            )

    def union(self, other: Team) -> Team:
        self._same(other)
        return Team(self.universe, self.domain, self.bits | other.bits)

    def intersection(self, other: Team) -> Team:
        self._same(other)
        return Team(self.universe, self.domain, self.bits & other.bits)

    def issubset(self, other: Team) -> bool:
        self._same(other)
        return self.bits & ~other.bits == 0

    __or__ = union
    __and__ = intersection
    __le__ = issubset

    def complement(self) -> Team:
        return Team(self.universe, self.domain, self.space.full & ~self.bits)

    def subteams(self) -> Iterator[Team]:
        b = self.bits
        sub = b
        while True:
            yield Team(self.universe, self.domain, sub)
            if sub == 0:
                return
            sub = (sub - 1) & b

    def superteams(self) -> Iterator[Team]:
        comp = self.space.full & ~self.bits
        for t in Team(self.universe, self.domain, comp).subteams():
            yield Team(self.universe, self.domain, self.bits | t.bits)

    def __repr__(self) -> str:
        if not self.domain:
            return "{ε}" if self.bits else "∅_{}"
        if not self.bits:
            return f"∅_{{{','.join(self.domain)}}}"
        return "{" + ", ".join(repr(s) for s in self) + "}"


def all_teams(universe: Iterable[str], domain: Iterable[str]) -> Iterator[Team]:
    u, d = tuple(universe), norm_domain(domain)
    for bits in range(1 << space(u, d).size):
        yield Team(u, d, bits)


# -- team operations ----------------------------------------------------------


def exists_project(x: Team, var: str) -> Team:
    """``∃x X``: drop ``var``; a reduced row survives if some extension is in X."""
    if var not in x.domain:
        return x
    keep = tuple(v for v in x.domain if v != var)
    return Team(x.universe, keep, restrict_bits(x.universe, x.domain, keep, x.bits))


def forall_project(x: Team, var: str) -> Team:
    """``∀x X``: a reduced row survives if every extension is in X."""
    if var not in x.domain:
        return x
    keep = tuple(v for v in x.domain if v != var)
    return Team(x.universe, keep, forall_bits(x.universe, x.domain, keep, x.bits))


def exists_project_all(x: Team, variables: Iterable[str]) -> Team:
    for v in variables:
        x = exists_project(x, v)
    return x


def forall_project_all(x: Team, variables: Iterable[str]) -> Team:
    for v in variables:
        x = forall_project(x, v)
    return x


def extend_all(x: Team, var: str) -> Team:
    """``X[M/x]``."""
    return extend_setfn(x, lambda s: [(a,) for a in x.universe], (var,))


def extend_fn(x: Team, f: Callable[[Assignment], str], var: str) -> Team:
    """``X[f/x]``: each row gains (or overwrites) ``var ↦ f(row)``."""
    return extend_setfn(x, lambda s: [(f(s),)], (var,))


def extend_setfn(
    x: Team, F: Callable[[Assignment], Iterable[Sequence[str]]], variables: Sequence[str]
) -> Team:
    """``X[F/x̄]``: each row ``s`` contributes ``s[ā/x̄]`` for ``ā ∈ F(s)``."""
    variables = tuple(variables)
    if len(set(variables)) != len(variables):
        raise TeamError(f"repeated variable in {variables}")
    dom = norm_domain(x.domain + variables)
    sp = space(x.universe, dom)
    bits = 0
    for s in x:
        try:
            values = F(s)
        except KeyError as exc:
            raise TeamError(f"function undefined on row {s!r}") from exc
        if values is None:
            raise TeamError(f"function undefined on row {s!r}")
        for a in values:
            a = tuple(a)
            if len(a) != len(variables):
                raise TeamError(f"value {a} does not match {variables}")
            row = dict(s)
            row.update(zip(variables, a))
            bits |= 1 << sp.slot(row)
    return Team(x.universe, dom, bits)


def restrict(x: Team, variables: Iterable[str]) -> Team:
    """``X↾x̄``; the new domain is ``dom(X) ∩ x̄``."""
    keep = tuple(v for v in x.domain if v in set(variables))
    return Team(x.universe, keep, restrict_bits(x.universe, x.domain, keep, x.bits))


def values(x: Team, variables: Sequence[str]) -> set[tuple[str, ...]]:
    """``X(x̄)``."""
    missing = set(variables) - set(x.domain)
    if missing:
        raise TeamError(f"variables {sorted(missing)} not in the domain")
    return {tuple(s[v] for v in variables) for s in x}


def as_relation(x: Team) -> set[tuple[str, ...]]:
    """``rel(X)``: rows as tuples ordered by the sorted domain."""
    return set(x.rows())


def section(y: Team, s: Mapping[str, str]) -> Team:
    """``Y_s``: the rows of Y extending ``s``, restricted to the other variables."""
    if not set(s) <= set(y.domain):
        raise TeamError(f"assignment {dict(s)} is not over a subset of {list(y.domain)}")
    rest = tuple(v for v in y.domain if v not in s)
    keep = [r for r in y if all(r[v] == s[v] for v in s)]
    return Team.from_assignments(y.universe, rest, [r.restrict(rest) for r in keep])


def complement(x: Team) -> Team:
    return x.complement()


def q_project(q, y: Team, variables: Sequence[str]) -> Team:
    """``Q x̄ Y = {s over dom(Y)∖x̄ : Y_s(x̄) ∈ Q_M}``."""
    variables = tuple(variables)
    if len(set(variables)) != len(variables):
        raise TeamError(f"repeated variable in {variables}")
    if not set(variables) <= set(y.domain):
        raise TeamError(f"{list(variables)} not contained in {list(y.domain)}")
    rest = tuple(v for v in y.domain if v not in variables)
    return Team(y.universe, rest, q_project_bits(q, y.universe, y.domain, variables, y.bits))


# -- JSON ---------------------------------------------------------------------


def team_from_json(data: Any, universe: Sequence[str]) -> Team:
    if not isinstance(data, dict) or not isinstance(data.get("domain"), list):
        raise TeamError("$: expected {'domain': [...], 'rows': [...]}")
    domain = data["domain"]
    for i, v in enumerate(domain):
        if not isinstance(v, str):
            raise TeamError(f"$.domain[{i}]: expected a variable name")
    if len(set(domain)) != len(domain):
        raise TeamError("$.domain: duplicate variable")
    elems = set(universe)
    rows = data.get("rows", [])
    seen = set()
    for i, row in enumerate(rows):
        if not isinstance(row, list) or len(row) != len(domain):
            raise TeamError(f"$.rows[{i}]: expected {len(domain)} elements")
        for j, e in enumerate(row):
            if e not in elems:
                raise TeamError(f"$.rows[{i}][{j}]: {e!r} is not in the universe")
        if tuple(row) in seen:
            raise TeamError(f"$.rows[{i}]: duplicate row")
        seen.add(tuple(row))
    return Team.from_rows(universe, domain, rows)


def team_to_json(x: Team) -> dict:
    return {"domain": list(x.domain), "rows": [list(r) for r in x.rows()]}


def subsets(bits: int) -> Iterator[int]:
    """Every sub-bitmask of ``bits``, from ``bits`` down to 0."""
    sub = bits
    while True:
        yield sub
        if sub == 0:
            return
        sub = (sub - 1) & bits


def choice_product(options: Sequence[Sequence[int]]) -> Iterator[int]:
    """OR-combinations picking one bitmask from each option list."""
    if not options:
        yield 0
        return
    for combo in itertools.product(*options):
        out = 0
        for b in combo:
            out |= b
        yield out
