"""Recursive-descent parser for the formula grammar (see docs/grammar.md)."""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Optional

from .ast import (
    And,
    App,
    Bot,
    Bound,
    Eps,
    Eq,
    Exists,
    Expr,
    Forall,
    Formula,
    Implies,
    Not,
    Or,
    Pred,
    Term,
    Top,
    Var,
)
from .ops import free_vars, instantiate, function_symbols, predicate_symbols, walk
from .printer import ARITH, COMPARISONS, KEYWORDS

VARIABLE_NAME = re.compile(r"[u-z][0-9_']*\Z")


class ParseError(ValueError):
    def __init__(self, message: str, line: int = 1, col: int = 1):
        super().__init__(f"{line}:{col}: {message}")
        self.message = message
        self.line = line
        self.col = col


class ArityError(ParseError):
    pass


class UnboundVariableError(ParseError):
    pass


@dataclass
class Signature:
    """Declared symbols.  Equality is built in and never declared."""

    functions: dict[str, int] = field(default_factory=dict)
    predicates: dict[str, int] = field(default_factory=dict)
    variables: set[str] = field(default_factory=set)
    strict: bool = False

    def declare_function(self, name: str, arity: int) -> None:
        self._check_new(name)
        self.functions[name] = arity

    def declare_predicate(self, name: str, arity: int) -> None:
        self._check_new(name)
        self.predicates[name] = arity

    def declare_variable(self, name: str) -> None:
        self._check_new(name)
        self.variables.add(name)

    def _check_new(self, name: str) -> None:
        if name in KEYWORDS or name == "=":
            raise ValueError(f"{name!r} is reserved")
        if name in self.functions or name in self.predicates or name in self.variables:
            raise ValueError(f"symbol {name!r} declared twice")

    def copy(self) -> "Signature":
        return Signature(dict(self.functions), dict(self.predicates), set(self.variables), self.strict)

    def absorb(self, node: Expr) -> None:
        """Record the symbols used by ``node`` (after it passed validation)."""
        for name, n in function_symbols(node).items():
            if not name.isdigit() and name not in ARITH:
                self.functions.setdefault(name, n)
        for name, n in predicate_symbols(node).items():
            if name not in COMPARISONS:
                self.predicates.setdefault(name, n)


# -------------------------------------------------------------- lexing

_UNICODE_TOKENS = {
    "∀": "forall",
    "∃": "exists",
    "ε": "eps",
    "¬": "not",
    "∧": "and",
    "∨": "or",
    "⇒": "->",
    "→": "->",
    "≠": "!=",
    "≤": "<=",
    "≥": ">=",
}

_TOKEN = re.compile(
    r"""
    (?P<ws>[ \t\r]+)
  | (?P<nl>\n)
  | (?P<comment>\#[^\n]*)
  | (?P<num>[0-9]+)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_']*)
  | (?P<op>->|!=|<=|>=|[().,=<>+*-])
  | (?P<uni>[∀∃ε¬∧∨⇒→≠≤≥])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class Token:
    kind: str  # "num", "ident", "kw", "op", "eof"
    text: str
    line: int
    col: int


def tokenize(text: str) -> list[Token]:
    out: list[Token] = []
    pos, line, line_start = 0, 1, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        col = pos - line_start + 1
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", line, col)
        kind, value = m.lastgroup, m.group()
        if kind == "nl":
            line, line_start = line + 1, m.end()
        elif kind == "uni":
            mapped = _UNICODE_TOKENS[value]
            out.append(Token("kw" if mapped in KEYWORDS else "op", mapped, line, col))
        elif kind == "ident":
            out.append(Token("kw" if value in KEYWORDS else "ident", value, line, col))
        elif kind in ("num", "op"):
            out.append(Token(kind, value, line, col))
        pos = m.end()
    out.append(Token("eof", "", line, pos - line_start + 1))
    return out


# ------------------------------------------------------------- parsing

_CMP = {"=", "!=", "<", "<=", ">", ">="}


class _Parser:
    def __init__(self, tokens: list[Token], sig: Signature):
        self.toks = tokens
        self.pos = 0
        self.sig = sig
        self.scope: list[str] = []
        self.memo: dict[tuple, tuple] = {}

    # helpers
    @property
    def cur(self) -> Token:
        return self.toks[self.pos]

    def at(self, text: str) -> bool:
        t = self.cur
        return t.kind in ("op", "kw") and t.text == text

    def error(self, msg: str, tok: Optional[Token] = None) -> ParseError:
        tok = tok or self.cur
        return ParseError(msg, tok.line, tok.col)

    def expect(self, text: str) -> Token:
        if not self.at(text):
            found = self.cur.text or "end of input"
            raise self.error(f"expected {text!r}, found {found!r}")
        tok = self.cur
        self.pos += 1
        return tok

    def ident(self) -> Token:
        tok = self.cur
        if tok.kind != "ident":
            found = tok.text or "end of input"
            raise self.error(f"expected identifier, found {found!r}")
        self.pos += 1
        return tok

    # formulas
    def formula(self) -> Formula:
        left = self.disjunction()
        if self.at("->"):
            self.pos += 1
            return Implies(left, self.formula())
        return left

    def disjunction(self) -> Formula:
        left = self.conjunction()
        while self.at("or"):
            self.pos += 1
            left = Or(left, self.conjunction())
        return left

    def conjunction(self) -> Formula:
        left = self.unary()
        while self.at("and"):
            self.pos += 1
            left = And(left, self.unary())
        return left

    def unary(self) -> Formula:
        if self.at("not"):
            self.pos += 1
            return Not(self.unary())
        if self.at("forall") or self.at("exists"):
            kind = Forall if self.cur.text == "forall" else Exists
            name, body = self.binder()
            return kind(body, name)
        return self.atom()

    def binder(self) -> tuple[str, Formula]:
        is_eps = self.at("eps")
        self.pos += 1
        name = self.ident().text
        self.expect(".")
        self.scope.append(name)
        try:
            start = self.pos
            try:
                body = self.formula()
            except ParseError:
                if not (is_eps and self.toks[start].text == "eps"):
                    raise
                # ``eps y. eps x. B`` abbreviates ``eps y. B[x := eps x. B]``
                self.pos = start
                inner = self.term()
                if not isinstance(inner, Eps):
                    raise
                body = instantiate(inner.body, inner)
        finally:
            self.scope.pop()
        return name, body

    def atom(self) -> Formula:
        tok = self.cur
        if self.at("true"):
            self.pos += 1
            return Top()
        if self.at("false"):
            self.pos += 1
            return Bot()
        start = self.pos
        try:
            left = self.term()
            if self.cur.kind == "op" and self.cur.text in _CMP:
                op = self.cur.text
                self.pos += 1
                right = self.term()
                if op == "=":
                    return Eq(left, right)
                if op == "!=":
                    return Not(Eq(left, right))
                return Pred(op, (left, right))
        except ParseError:
            pass
        self.pos = start
        if self.at("("):
            self.pos += 1
            inner = self.formula()
            self.expect(")")
            return inner
        if tok.kind != "ident":
            found = tok.text or "end of input"
            raise self.error(f"expected a formula, found {found!r}")
        name = tok.text
        if name in self.scope:
            raise self.error(f"bound variable {name!r} used as a formula")
        if name in self.sig.functions or name in self.sig.variables:
            raise self.error(f"{name!r} is not a predicate")
        self.pos += 1
        args: tuple[Term, ...] = ()
        if self.at("("):
            args = self.arguments()
        elif name not in self.sig.predicates and VARIABLE_NAME.match(name):
            raise self.error(f"variable {name!r} used as a formula", tok)
        if self.sig.strict and name not in self.sig.predicates:
            raise self.error(f"undeclared predicate {name!r}", tok)
        return Pred(name, args)

    def arguments(self) -> tuple[Term, ...]:
        self.expect("(")
        args = [self.term()]
        while self.at(","):
            self.pos += 1
            args.append(self.term())
        self.expect(")")
        return tuple(args)

    # terms
    def term(self) -> Term:
        key = (self.pos, tuple(self.scope))
        hit = self.memo.get(key)
        if hit is not None:
            result, end = hit
            if isinstance(result, ParseError):
                raise result
            self.pos = end
            return result
        try:
            result = self.sum()
        except ParseError as exc:
            self.memo[key] = (exc, self.pos)
            raise
        self.memo[key] = (result, self.pos)
        return result

    def sum(self) -> Term:
        left = self.product()
        while self.cur.kind == "op" and self.cur.text in ("+", "-"):
            op = self.cur.text
            self.pos += 1
            left = App(op, (left, self.product()))
        return left

    def product(self) -> Term:
        left = self.primary()
        while self.at("*"):
            self.pos += 1
            left = App("*", (left, self.primary()))
        return left

    def primary(self) -> Term:
        tok = self.cur
        if tok.kind == "num":
            self.pos += 1
            return App(str(int(tok.text)), ())
        if self.at("eps"):
            name, body = self.binder()
            return Eps(body, name)
        if self.at("("):
            self.pos += 1
            inner = self.term()
            self.expect(")")
            return inner
        name = self.ident().text
        if name in self.sig.predicates:
            raise self.error(f"predicate {name!r} used as a term", tok)
        if self.at("("):
            if name in self.scope or name in self.sig.variables:
                raise self.error(f"variable {name!r} applied to arguments", tok)
            if self.sig.strict and name not in self.sig.functions:
                raise self.error(f"undeclared function {name!r}", tok)
            return App(name, self.arguments())
        if name in self.scope:
            return Bound(len(self.scope) - 1 - _rindex(self.scope, name))
        if name in self.sig.functions:
            return App(name, ())
        if name in self.sig.variables or VARIABLE_NAME.match(name):
            return Var(name)
        if self.sig.strict:
            raise self.error(f"undeclared constant {name!r}", tok)
        return App(name, ())


def _rindex(items: list[str], name: str) -> int:
    return len(items) - 1 - items[::-1].index(name)


# ---------------------------------------------------------- validation


def check_arities(node: Expr, sig: Signature, where: tuple[int, int] = (1, 1)) -> None:
    """Every symbol is used with one arity, agreeing with the declarations."""
    funcs: dict[str, int] = {}
    preds: dict[str, int] = {}
    for n, _ in walk(node):
        if isinstance(n, App):
            table, declared, name = funcs, sig.functions, n.symbol
        elif isinstance(n, Pred):
            table, declared, name = preds, sig.predicates, n.name
        else:
            continue
        k = len(n.args)
        want = declared.get(name, table.get(name, k))
        if want != k:
            raise ArityError(f"{name!r} used with {k} arguments, expected {want}", *where)
        table[name] = k
    clash = set(funcs) & set(preds)
    if clash:
        raise ArityError(f"symbol {sorted(clash)[0]!r} used as both function and predicate", *where)


def _run(text: str, sig: Signature, rule: str) -> tuple[Expr, int]:
    p = _Parser(tokenize(text), sig)
    result = p.formula() if rule == "formula" else p.term()
    if p.cur.kind != "eof":
        raise p.error(f"unexpected {p.cur.text!r}")
    return result, p.pos


def parse_formula(text: str, sig: Optional[Signature] = None, sentence: bool = False) -> Formula:
    sig = sig or Signature()
    phi, _ = _run(text, sig, "formula")
    _finish(phi, sig, sentence)
    return phi  # type: ignore[return-value]


def parse_term(text: str, sig: Optional[Signature] = None, sentence: bool = False) -> Term:
    sig = sig or Signature()
    t, _ = _run(text, sig, "term")
    _finish(t, sig, sentence)
    return t  # type: ignore[return-value]


def parse(text: str, sig: Optional[Signature] = None, sentence: bool = False) -> Expr:
    """Parse a formula, or failing that a term."""
    sig = sig or Signature()
    try:
        node, _ = _run(text, sig, "formula")
    except ParseError as formula_error:
        try:
            node, _ = _run(text, sig, "term")
        except ParseError:
            raise formula_error from None
    _finish(node, sig, sentence)
    return node


def _finish(node: Expr, sig: Signature, sentence: bool) -> None:
    check_arities(node, sig)
    if sentence:
        free = sorted(free_vars(node))
        if free:
            raise UnboundVariableError(f"unbound variable {free[0]!r}")


# --------------------------------------------------------------- files

_DECL = re.compile(r"(const|func|pred|var)\s+(.*)\Z")


@dataclass
class SourceLine:
    line: int
    text: str
    formula: Formula


def strip_comment(line: str) -> str:
    return line.split("#", 1)[0].strip()


def parse_declaration(kind: str, rest: str, sig: Signature, line: int) -> None:
    for item in filter(None, (p.strip() for p in rest.split(","))):
        name, _, arity = item.partition("/")
        name = name.strip()
        if not re.match(r"[A-Za-z_][A-Za-z0-9_']*\Z", name):
            raise ParseError(f"bad symbol name {name!r}", line)
        try:
            n = int(arity) if arity else 0
        except ValueError:
            raise ParseError(f"bad arity in {item!r}", line) from None
        try:
            if kind == "const":
                sig.declare_function(name, 0)
            elif kind == "func":
                sig.declare_function(name, n)
            elif kind == "pred":
                sig.declare_predicate(name, n)
            else:
                sig.declare_variable(name)
        except ValueError as exc:
            raise ParseError(str(exc), line) from None


def is_declaration(text: str) -> bool:
    return bool(_DECL.match(text))


def parse_lines(
    lines: Iterable[str], sig: Optional[Signature] = None, sentence: bool = False
) -> tuple[Signature, list[SourceLine]]:
    """Declarations and one formula per line; ``#`` starts a comment."""
    sig = sig or Signature()
    out: list[SourceLine] = []
    for lineno, raw in enumerate(lines, 1):
        text = strip_comment(raw)
        if not text:
            continue
        m = _DECL.match(text)
        if m:
            parse_declaration(m.group(1), m.group(2), sig, lineno)
            continue
        try:
            phi = parse_formula(text, sig, sentence)
        except ParseError as exc:
            raise type(exc)(exc.message, lineno, exc.col) from None
        sig.absorb(phi)
        out.append(SourceLine(lineno, text, phi))
    return sig, out


def parse_source(text: str, sig: Optional[Signature] = None, sentence: bool = False):
    return parse_lines(text.splitlines(), sig, sentence)
