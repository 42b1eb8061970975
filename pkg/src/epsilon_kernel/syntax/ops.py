"""Structural operations: shifting, instantiation, substitution, ranks."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Iterator, Mapping, Optional

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

Rewriter = Callable[[Expr, int], Optional[Expr]]


def rewrite(node: Expr, fn: Rewriter, depth: int = 0) -> Expr:
    """Rebuild ``node`` bottom-up; ``fn(n, depth)`` may replace any subnode.

    ``depth`` counts the binders crossed on the way down.
    """
    out = fn(node, depth)
    if out is not None:
        return out
    match node:
        case Bound() | Var() | Top() | Bot():
            return node
        case App(symbol, args):
            if not args:
                return node
            return App(symbol, tuple(rewrite(a, fn, depth) for a in args))
        case Pred(name, args):
            if not args:
                return node
            return Pred(name, tuple(rewrite(a, fn, depth) for a in args))
        case Eq(l, r):
            return Eq(rewrite(l, fn, depth), rewrite(r, fn, depth))
        case Not(a):
            return Not(rewrite(a, fn, depth))
        case And(l, r):
            return And(rewrite(l, fn, depth), rewrite(r, fn, depth))
        case Or(l, r):
            return Or(rewrite(l, fn, depth), rewrite(r, fn, depth))
        case Implies(l, r):
            return Implies(rewrite(l, fn, depth), rewrite(r, fn, depth))
        case Eps(body, hint):
            return Eps(rewrite(body, fn, depth + 1), hint)
        case Forall(body, hint):
            return Forall(rewrite(body, fn, depth + 1), hint)
        case Exists(body, hint):
            return Exists(rewrite(body, fn, depth + 1), hint)
    raise TypeError(f"not an expression: {node!r}")


def children(node: Expr) -> tuple[Expr, ...]:
    match node:
        case App(_, args) | Pred(_, args):
            return args
        case Eq(l, r) | And(l, r) | Or(l, r) | Implies(l, r):
            return (l, r)
        case Not(a):
            return (a,)
        case Eps(body, _) | Forall(body, _) | Exists(body, _):
            return (body,)
    return ()


def binds(node: Expr) -> bool:
    return isinstance(node, (Eps, Forall, Exists))


def walk(node: Expr, depth: int = 0) -> Iterator[tuple[Expr, int]]:
    """Pre-order traversal yielding ``(subnode, binder depth)``."""
    stack = [(node, depth)]
    while stack:
        n, d = stack.pop()
        yield n, d
        inner = d + 1 if binds(n) else d
        for c in reversed(children(n)):
            stack.append((c, inner))


# ------------------------------------------------------- de Bruijn core


def shift(node: Expr, by: int, cutoff: int = 0) -> Expr:
    if by == 0:
        return node

    def fn(n: Expr, d: int) -> Optional[Expr]:
        if isinstance(n, Bound):
            return Bound(n.index + by) if n.index >= cutoff + d else n
        return None

    return rewrite(node, fn)


def instantiate(body: Expr, value: Term) -> Expr:
    """Replace the outermost loose index of ``body`` by ``value``."""

    def fn(n: Expr, d: int) -> Optional[Expr]:
        if isinstance(n, Bound):
            if n.index == d:
                return shift(value, d)
            if n.index > d:
                return Bound(n.index - 1)
            return n
        return None

    return rewrite(body, fn)


def abstract(node: Expr, name: str) -> Expr:
    """Turn free occurrences of ``name`` into the index of a new binder."""

    def fn(n: Expr, d: int) -> Optional[Expr]:
        if isinstance(n, Var) and n.name == name:
            return Bound(d)
        if isinstance(n, Bound):
            return Bound(n.index + 1) if n.index >= d else n
        return None

    return rewrite(node, fn)


def substitute(node: Expr, var: str, value: Term) -> Expr:
    """Capture-avoiding substitution of ``value`` for the free variable ``var``."""
    return substitute_many(node, {var: value})


def substitute_many(node: Expr, mapping: Mapping[str, Term]) -> Expr:
    """Simultaneous substitution for free variables."""
    if not mapping:
        return node

    def fn(n: Expr, d: int) -> Optional[Expr]:
        if isinstance(n, Var) and n.name in mapping:
            return shift(mapping[n.name], d)
        return None

    return rewrite(node, fn)


def replace_term(node: Expr, old: Term, new: Term) -> Expr:
    """Replace every occurrence of the term ``old`` by ``new``.

    Both terms are read in the context of ``node``'s root; under binders they
    are shifted so that loose references keep pointing at the same binder.
    """
    olds: dict[int, Expr] = {}
    news: dict[int, Expr] = {}

    def fn(n: Expr, d: int) -> Optional[Expr]:
        if d not in olds:
            olds[d] = shift(old, d)
            news[d] = shift(new, d)
        if n == olds[d]:
            return news[d]
        return None

    return rewrite(node, fn)


# ------------------------------------------------------------- queries


def free_vars(node: Expr) -> set[str]:
    return {n.name for n, _ in walk(node) if isinstance(n, Var)}


def loose_indices(node: Expr) -> set[int]:
    """Indices (relative to ``node``'s root) that escape every binder."""
    return {n.index - d for n, d in walk(node) if isinstance(n, Bound) and n.index >= d}


def is_closed(node: Expr) -> bool:
    return not free_vars(node) and not loose_indices(node)


def is_sentence(phi: Formula) -> bool:
    return is_closed(phi)


def function_symbols(node: Expr) -> dict[str, int]:
    return {n.symbol: len(n.args) for n, _ in walk(node) if isinstance(n, App)}


def predicate_symbols(node: Expr) -> dict[str, int]:
    return {n.name: len(n.args) for n, _ in walk(node) if isinstance(n, Pred)}


def symbol_names(node: Expr) -> set[str]:
    return set(function_symbols(node)) | set(predicate_symbols(node))


def eps_occurrences(node: Expr) -> list[Eps]:
    """Epsilon subterms that do not depend on any binder around them."""
    return [n for n, d in walk(node) if isinstance(n, Eps) and not loose_indices(n)]


def eps_terms(node: Expr) -> list[Eps]:
    """Distinct binder-independent epsilon terms, in first-occurrence order."""
    return list(dict.fromkeys(eps_occurrences(node)))


def has_eps(node: Expr) -> bool:
    return any(isinstance(n, Eps) for n, _ in walk(node))


def quantifier_count(node: Expr) -> int:
    return sum(isinstance(n, (Forall, Exists)) for n, _ in walk(node))


def is_quantifier_free(node: Expr) -> bool:
    return quantifier_count(node) == 0


def epsilon_rank(node: Expr) -> int:
    """Maximum nesting depth of epsilon binders."""
    match node:
        case Eps(body, _):
            return 1 + epsilon_rank(body)
        case _:
            return max((epsilon_rank(c) for c in children(node)), default=0)


def is_proper(phi: Expr) -> bool:
    """No epsilon term depends on a variable bound or free outside it.

    ``x = eps y. (y = x)`` is improper, and so is
    ``exists x. x = eps y. (y = x)``: in both the body of the epsilon term
    mentions an ``x`` that the epsilon does not bind.
    """
    for n, _ in walk(phi):
        if isinstance(n, Eps) and (loose_indices(n) or free_vars(n)):
            return False
    return True


def improper_subterms(phi: Expr) -> list[Eps]:
    return [n for n, _ in walk(phi) if isinstance(n, Eps) and (loose_indices(n) or free_vars(n))]


def alpha_eq(a: Expr, b: Expr) -> bool:
    # binder names are excluded from dataclass equality
    return a == b


def atoms(phi: Formula) -> list[Formula]:
    """Propositional atoms: everything that is not a connective, in order."""
    out: list[Formula] = []

    def go(f: Formula) -> None:
        match f:
            case Not(a):
                go(a)
            case And(l, r) | Or(l, r) | Implies(l, r):
                go(l)
                go(r)
            case Top() | Bot():
                pass
            case _:
                out.append(f)

    go(phi)
    return list(dict.fromkeys(out))


# ------------------------------------------------------------- binders


def fresh_name(base: str, avoid: set[str] | frozenset[str]) -> str:
    if base not in avoid:
        return base
    base = base.rstrip("0123456789") or "x"
    for i in itertools.count(1):
        cand = f"{base}{i}"
        if cand not in avoid:
            return cand
    raise AssertionError("unreachable")


def open_binder(node: Eps | Forall | Exists, name: str) -> Expr:
    return instantiate(node.body, Var(name))


def make_tau(phi: Formula, var: str) -> Eps:
    """The generic counterexample ``eps var. not phi``."""
    if var not in free_vars(phi):
        raise ValueError(f"variable {var!r} is not free in {phi}")
    return Eps(abstract(Not(phi), var), var)


def make_eps(phi: Formula, var: str) -> Eps:
    if var not in free_vars(phi):
        raise ValueError(f"variable {var!r} is not free in {phi}")
    return Eps(abstract(phi, var), var)


@dataclass(frozen=True)
class EtaTerm:
    """Indefinite description ``eta x. body``.

    Not part of the term language: it only documents how an epsilon term
    reduces to an eta term whose existence condition always holds.
    """

    body: Formula
    hint: str = field(default="x", compare=False)

    def __str__(self) -> str:
        from .printer import binder_text

        return binder_text("eta", self.hint, self.body)

    def as_epsilon(self) -> Eps:
        return Eps(self.body, self.hint)


def eta_expansion(phi: Formula, var: str) -> EtaTerm:
    """``eta var. (exists y. phi(y)) -> phi(var)``."""
    if var not in free_vars(phi):
        raise ValueError(f"variable {var!r} is not free in {phi}")
    inner = abstract(phi, var)
    other = "z" if var == "y" else "y"
    return EtaTerm(Implies(Exists(shift(inner, 1, cutoff=1), other), inner), var)


def with_children(node: Expr, kids: tuple[Expr, ...]) -> Expr:
    """Rebuild ``node`` with new children (the inverse of ``children``)."""
    match node:
        case App(symbol, _):
            return App(symbol, tuple(kids))
        case Pred(name, _):
            return Pred(name, tuple(kids))
        case Eq() | And() | Or() | Implies():
            return type(node)(kids[0], kids[1])
        case Not():
            return Not(kids[0])
        case Eps(_, hint) | Forall(_, hint) | Exists(_, hint):
            return type(node)(kids[0], hint)
    return node
