"""Recursive-descent parser for the ASCII formula grammar.

Precedence, tightest first: literals, ``&`` (internal and), ``\\/``
(internal or), ``&&`` (external and), ``||`` (external or).  All binary
connectives associate to the left.  Quantifier bodies extend as far right
as possible.

    exists x. phi          forall x. phi          Q[name] x1 ... xk. phi
    Q[most](x. phi, y. psi)                        (multi-argument, Tarskian only)
    R(t, ...)   !R(t, ...)   t = t   t != t
    dep(t1, ..., tn)       indep(x1 x2 ; y1 ; z1 z2)    indep(y ; z)
    TOP(w1, ..., wk)
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass
from typing import Callable, Iterable, Optional

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


class Dialect(enum.Enum):
    FO = "fo"
    FOQ = "foq"
    DEP = "dep"
    MT = "mt"


# node kinds each dialect admits, beyond literals
_ALLOWED = {
    Dialect.FO: {"iand", "ior", "exists", "forall"},
    Dialect.FOQ: {"iand", "ior", "exists", "forall", "qapply", "qmulti"},
    Dialect.DEP: {"iand", "ior", "exists", "forall", "qapply", "dep", "indep"},
    Dialect.MT: {"iand", "ior", "eand", "eor", "exists", "forall", "qapply", "top"},
}


class ParseError(ValueError):
    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"{line}:{col}: {message}")
        self.message = message
        self.line = line
        self.col = col


class DialectError(ParseError):
    pass


@dataclass
class Token:
    kind: str
    text: str
    pos: int
    line: int
    col: int


KEYWORDS = {"exists", "forall", "dep", "indep", "TOP"}

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<op>&&|\|\||\\/|!=|[&!=(),;.\[\]])
  | (?P<qchar>[0-9:+<>-]+)
    """,
    re.VERBOSE,
)


def _line_col(text: str, pos: int) -> tuple[int, int]:
    line = text.count("\n", 0, pos) + 1
    col = pos - (text.rfind("\n", 0, pos) + 1) + 1
    return line, col


def tokenize(text: str) -> list[Token]:
    tokens = []
    i = 0
    while i < len(text):
        m = _TOKEN_RE.match(text, i)
        if not m:
            line, col = _line_col(text, i)
            raise ParseError(f"unexpected character {text[i]!r}", line, col)
        if m.lastgroup != "ws":
            line, col = _line_col(text, i)
            tokens.append(Token(m.lastgroup, m.group(), i, line, col))
        i = m.end()
    line, col = _line_col(text, len(text))
    tokens.append(Token("eof", "", len(text), line, col))
    return tokens


QuantifierCheck = Callable[[str, int], None]


class _Parser:
    def __init__(
        self,
        text: str,
        dialect: Optional[Dialect],
        constants: frozenset[str],
        check_quantifier: Optional[QuantifierCheck],
    ):
        self.text = text
        self.tokens = tokenize(text)
        self.i = 0
        self.allowed = None if dialect is None else _ALLOWED[dialect]
        self.dialect = dialect
        self.constants = constants
        self.check_quantifier = check_quantifier

    # -- token helpers
    @property
    def tok(self) -> Token:
        return self.tokens[self.i]

    def peek(self, k: int = 1) -> Token:
        return self.tokens[min(self.i + k, len(self.tokens) - 1)]

    def advance(self) -> Token:
        t = self.tokens[self.i]
        self.i += 1
        return t

    def error(self, message: str, tok: Optional[Token] = None) -> ParseError:
        t = tok or self.tok
        return ParseError(message, t.line, t.col)

    def expect(self, text: str) -> Token:
        if self.tok.kind != "op" or self.tok.text != text:
            found = self.tok.text or "end of input"
            raise self.error(f"expected {text!r}, found {found!r}")
        return self.advance()

    def accept(self, text: str) -> bool:
        if self.tok.kind == "op" and self.tok.text == text:
            self.advance()
            return True
        return False

    def ident(self, what: str = "identifier") -> str:
        t = self.tok
        if t.kind != "ident" or t.text in KEYWORDS:
            raise self.error(f"expected {what}, found {t.text or 'end of input'!r}")
        self.advance()
        return t.text

    def allow(self, kind: str, tok: Token) -> None:
        if self.allowed is not None and kind not in self.allowed:
            raise DialectError(
                f"{_KIND_NAMES[kind]} is not allowed in the {self.dialect.value} dialect",
                tok.line,
                tok.col,
            )

    # -- grammar
    def parse(self) -> Formula:
        phi = self.formula()
        if self.tok.kind != "eof":
            raise self.error(f"unexpected {self.tok.text!r}")
        return phi

    def formula(self) -> Formula:
        return self._binary(0)

    _LEVELS = (("||", EOr, "eor"), ("&&", EAnd, "eand"), ("\\/", IOr, "ior"), ("&", IAnd, "iand"))

    def _binary(self, level: int) -> Formula:
        if level == len(self._LEVELS):
            return self.unary()
        op, node, kind = self._LEVELS[level]
        left = self._binary(level + 1)
        while self.tok.kind == "op" and self.tok.text == op:
            t = self.advance()
            self.allow(kind, t)
            right = self._binary(level + 1)
            left = node(left, right)
        return left

    def unary(self) -> Formula:
        t = self.tok
        if t.kind == "op" and t.text == "(":
            self.advance()
            phi = self.formula()
            self.expect(")")
            return phi
        if t.kind == "ident" and t.text in ("exists", "forall"):
            return self.quantifier()
        if t.kind == "ident" and t.text == "Q" and self.peek().text == "[":
            return self.gq()
        return self.atom()

    def varlist_until(self, stop: str) -> list[str]:
        names = []
        while not (self.tok.kind == "op" and self.tok.text == stop):
            names.append(self.ident("variable"))
        return names

    def quantifier(self) -> Formula:
        t = self.advance()
        self.allow(t.text, t)
        names = self.varlist_until(".")
        if not names:
            raise self.error("quantifier binds no variable")
        self.expect(".")
        body = self.formula()
        cls = Exists if t.text == "exists" else Forall
        for name in reversed(names):
            body = cls(name, body)
        return body

    def gq(self) -> Formula:
        t = self.advance()  # Q
        self.advance()  # [
        depth = 0
        start = self.tok.pos
        while True:
            c = self.tok
            if c.kind == "eof":
                raise self.error("unterminated quantifier name", t)
            if c.text == "[":
                depth += 1
            elif c.text == "]":
                if depth == 0:
                    break
                depth -= 1
            self.advance()
        name = re.sub(r"\s+", "", self.text[start : self.tok.pos])
        self.advance()  # ]
        if not name:
            raise self.error("empty quantifier name", t)
        if self.tok.kind == "op" and self.tok.text == "(":
            self.allow("qmulti", t)
            self.advance()
            args = []
            while True:
                names = self.varlist_until(".")
                if not names:
                    raise self.error("quantifier argument binds no variable")
                self.expect(".")
                args.append((tuple(names), self.formula()))
                if not self.accept(","):
                    break
            self.expect(")")
            self._check_q(name, [len(v) for v, _ in args], t)
            return QMulti(name, tuple(args))
        self.allow("qapply", t)
        names = self.varlist_until(".")
        if not names:
            raise self.error("quantifier binds no variable")
        if len(set(names)) != len(names):
            raise self.error("quantifier binds a variable twice", t)
        self.expect(".")
        body = self.formula()
        self._check_q(name, [len(names)], t)
        return QApply(name, tuple(names), body)

    def _check_q(self, name: str, arity: list[int], tok: Token) -> None:
        if self.check_quantifier is None:
            return
        try:
            self.check_quantifier(name, arity)
        except (KeyError, ValueError) as exc:
            msg = exc.args[0] if exc.args else str(exc)
            raise ParseError(str(msg), tok.line, tok.col) from None

    def terms(self) -> tuple[Term, ...]:
        self.expect("(")
        out = []
        if not self.accept(")"):
            while True:
                out.append(self.term())
                if not self.accept(","):
                    break
            self.expect(")")
        return tuple(out)

    def term(self) -> Term:
        name = self.ident("term")
        if self.tok.kind == "op" and self.tok.text == "(":
            return Func(name, self.terms())
        if name in self.constants:
            return Const(name)
        return Var(name)

    def atom(self) -> Formula:
        t = self.tok
        if t.kind == "op" and t.text == "!":
            self.advance()
            name = self.ident("relation name")
            return NotRel(name, self.terms())
        if t.kind == "ident" and t.text == "dep":
            self.advance()
            self.allow("dep", t)
            args = self.terms()
            if not args:
                raise self.error("dep atom needs at least one term", t)
            return Dep(args)
        if t.kind == "ident" and t.text == "indep":
            self.advance()
            self.allow("indep", t)
            self.expect("(")
            groups = [self.varlist_until_any((";", ")"))]
            while self.accept(";"):
                groups.append(self.varlist_until_any((";", ")")))
            self.expect(")")
            if len(groups) == 2:
                groups.insert(0, [])
            if len(groups) != 3:
                raise self.error("indep takes two or three ';'-separated groups", t)
            cond, left, right = (tuple(g) for g in groups)
            if not left or not right:
                raise self.error("indep needs non-empty independent groups", t)
            return Indep(cond, left, right)
        if t.kind == "ident" and t.text == "TOP":
            self.advance()
            self.allow("top", t)
            self.expect("(")
            names = []
            if not self.accept(")"):
                while True:
                    names.append(self.ident("variable"))
                    if not self.accept(","):
                        break
                self.expect(")")
            if not names:
                raise self.error("TOP needs at least one variable", t)
            return Top(tuple(names))
        if t.kind != "ident" or t.text in KEYWORDS:
            raise self.error(f"expected a formula, found {t.text or 'end of input'!r}")
        left = self.term()
        if self.accept("="):
            return Eq(left, self.term())
        if self.accept("!="):
            return Neq(left, self.term())
        if isinstance(left, Func):
            return Rel(left.name, left.args)
        raise self.error("expected '(' , '=' or '!=' after identifier", t)

    def varlist_until_any(self, stops: Iterable[str]) -> list[str]:
        names = []
        while not (self.tok.kind == "op" and self.tok.text in stops):
            names.append(self.ident("variable"))
        return names


_KIND_NAMES = {
    "iand": "internal conjunction '&'",
    "ior": "internal disjunction '\\/'",
    "eand": "external conjunction '&&'",
    "eor": "external disjunction '||'",
    "exists": "'exists'",
    "forall": "'forall'",
    "qapply": "generalized quantifier",
    "qmulti": "multi-argument quantifier",
    "dep": "dependence atom",
    "indep": "independence atom",
    "top": "TOP",
}


def _default_check(name: str, arity: list[int]) -> None:
    from ..quantifiers import resolve

    q = resolve(name, arity[0] if len(arity) == 1 else None)
    if len(arity) > 1 and list(q.type) != arity:
        raise ValueError(f"quantifier {name} has type {list(q.type)}, used with {arity}")


def parse(
    text: str,
    dialect: Optional[Dialect | str] = None,
    constants: Iterable[str] = (),
    check_quantifier: Optional[QuantifierCheck] = _default_check,
) -> Formula:
    """Parse ``text``; reject nodes the dialect does not admit.

    ``constants`` lists identifiers that denote constants rather than
    variables.  ``check_quantifier(name, arity)`` should raise ``KeyError`` or
    ``ValueError`` for unusable quantifier names; pass ``None`` to skip.
    """
    if isinstance(dialect, str):
        dialect = Dialect(dialect.lower())
    return _Parser(text, dialect, frozenset(constants), check_quantifier).parse()
