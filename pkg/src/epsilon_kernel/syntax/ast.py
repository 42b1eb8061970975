"""Terms and formulas of first-order logic with the epsilon binder.

Bound variables are de Bruijn indices: ``Bound(0)`` refers to the nearest
enclosing binder (quantifier or epsilon).  Binder names survive only as
printing hints and take no part in equality, so two alpha-equivalent
expressions compare and hash equal.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Union


class _Node:
    __slots__ = ()

    def __str__(self) -> str:
        from .printer import to_text

        return to_text(self)


# ---------------------------------------------------------------- terms


@dataclass(frozen=True)
class Bound(_Node):
    index: int


@dataclass(frozen=True)
class Var(_Node):
    """A free variable."""

    name: str


@dataclass(frozen=True)
class App(_Node):
    """Function application; constants and numerals are 0-ary applications."""

    symbol: str
    args: tuple["Term", ...] = ()


@dataclass(frozen=True)
class Eps(_Node):
    """``eps x. body`` -- ``body`` sees the bound variable as ``Bound(0)``."""

    body: "Formula"
    hint: str = field(default="x", compare=False)


Term = Union[Bound, Var, App, Eps]


# ------------------------------------------------------------- formulas


@dataclass(frozen=True)
class Pred(_Node):
    name: str
    args: tuple[Term, ...] = ()


@dataclass(frozen=True)
class Eq(_Node):
    left: Term
    right: Term


@dataclass(frozen=True)
class Top(_Node):
    pass


@dataclass(frozen=True)
class Bot(_Node):
    pass


@dataclass(frozen=True)
class Not(_Node):
    arg: "Formula"


@dataclass(frozen=True)
class And(_Node):
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Or(_Node):
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Implies(_Node):
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Forall(_Node):
    body: "Formula"
    hint: str = field(default="x", compare=False)


@dataclass(frozen=True)
class Exists(_Node):
    body: "Formula"
    hint: str = field(default="x", compare=False)


Formula = Union[Pred, Eq, Top, Bot, Not, And, Or, Implies, Forall, Exists]
Expr = Union[Term, Formula]

TERM_TYPES = (Bound, Var, App, Eps)
FORMULA_TYPES = (Pred, Eq, Top, Bot, Not, And, Or, Implies, Forall, Exists)
BINARY = (And, Or, Implies)
QUANTIFIERS = (Forall, Exists)

TRUE = Top()
FALSE = Bot()


def is_term(node: object) -> bool:
    return isinstance(node, TERM_TYPES)


def is_formula(node: object) -> bool:
    return isinstance(node, FORMULA_TYPES)


def const(name: str) -> App:
    return App(name, ())


def numeral(n: int) -> App:
    if n < 0:
        raise ValueError("numerals are natural numbers")
    return App(str(n), ())


def iff(a: Formula, b: Formula) -> Formula:
    """There is no primitive biconditional; this is the usual conjunction."""
    return And(Implies(a, b), Implies(b, a))


def neq(a: Term, b: Term) -> Formula:
    return Not(Eq(a, b))


def conj(*parts: Formula) -> Formula:
    if not parts:
        return TRUE
    out = parts[0]
    for p in parts[1:]:
        out = And(out, p)
    return out


def disj(*parts: Formula) -> Formula:
    if not parts:
        return FALSE
    out = parts[0]
    for p in parts[1:]:
        out = Or(out, p)
    return out
