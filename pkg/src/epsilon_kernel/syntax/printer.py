"""Rendering ASTs back to the concrete grammar.

Binder names come from the stored hints, renamed when a hint would clash
with a name already in use (free variables, symbols, enclosing binders).
The output of ``to_text`` always parses back to an alpha-equal AST.
"""

from __future__ import annotations

import re

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
    Implies,
    Not,
    Or,
    Pred,
    Top,
    Var,
)

KEYWORDS = frozenset({"forall", "exists", "eps", "not", "and", "or", "true", "false"})
COMPARISONS = ("<", "<=", ">", ">=")
ARITH = {"+": 1, "-": 1, "*": 2}
_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_']*\Z")

_ASCII = {
    "forall": "forall ",
    "exists": "exists ",
    "eps": "eps ",
    "eta": "eta ",
    "not": "not ",
    "and": " and ",
    "or": " or ",
    "->": " -> ",
    "!=": " != ",
    "<=": " <= ",
    ">=": " >= ",
}
_UNICODE = {
    "forall": "∀",
    "exists": "∃",
    "eps": "ε",
    "eta": "η",
    "not": "¬",
    "and": " ∧ ",
    "or": " ∨ ",
    "->": " ⇒ ",
    "!=": " ≠ ",
    "<=": " ≤ ",
    ">=": " ≥ ",
}

# formula precedence: larger binds tighter
_P_IMP, _P_OR, _P_AND, _P_NOT = 0, 1, 2, 3


def _names_in(node: Expr) -> set[str]:
    from .ops import free_vars, symbol_names

    return free_vars(node) | symbol_names(node)


class _Printer:
    def __init__(self, avoid: set[str], unicode: bool):
        self.avoid = avoid
        self.tok = _UNICODE if unicode else _ASCII

    def binder_name(self, hint: str, ctx: list[str]) -> str:
        from .ops import fresh_name

        if not _IDENT.match(hint or "") or hint in KEYWORDS:
            hint = "x"
        return fresh_name(hint, self.avoid | set(ctx))

    def binder(self, kw: str, hint: str, body: Expr, ctx: list[str]) -> str:
        name = self.binder_name(hint, ctx)
        inner = self.formula(body, ctx + [name], _P_IMP, True)
        return f"{self.tok[kw]}{name}. {inner}"

    # ---------------------------------------------------------- terms

    def term(self, t: Expr, ctx: list[str], tail: bool, level: int = 0) -> str:
        match t:
            case Bound(i):
                return ctx[-1 - i] if i < len(ctx) else f"?{i - len(ctx)}"
            case Var(name):
                return name
            case App(sym, (l, r)) if sym in ARITH:
                prec = ARITH[sym]
                s = f"{self.term(l, ctx, False, prec)} {sym} {self.term(r, ctx, False, prec + 1)}"
                return f"({s})" if prec < level else s
            case App(sym, ()):
                return sym
            case App(sym, args):
                inner = ", ".join(self.term(a, ctx, True) for a in args)
                return f"{sym}({inner})"
            case Eps(body, hint):
                s = self.binder("eps", hint, body, ctx)
                return s if tail and level == 0 else f"({s})"
        raise TypeError(f"not a term: {t!r}")

    # ------------------------------------------------------- formulas

    def formula(self, f: Expr, ctx: list[str], prec: int, tail: bool) -> str:
        match f:
            case Top():
                return "true"
            case Bot():
                return "false"
            case Pred(name, (l, r)) if name in COMPARISONS:
                op = self.tok.get(name, f" {name} ")
                return f"{self.term(l, ctx, False)}{op}{self.term(r, ctx, tail)}"
            case Pred(name, ()):
                return name
            case Pred(name, args):
                return f"{name}({', '.join(self.term(a, ctx, True) for a in args)})"
            case Eq(l, r):
                return f"{self.term(l, ctx, False)} = {self.term(r, ctx, tail)}"
            case Not(Eq(l, r)):
                return f"{self.term(l, ctx, False)}{self.tok['!=']}{self.term(r, ctx, tail)}"
            case Not(a):
                if isinstance(a, (And, Or, Implies, Eq)) or (
                    isinstance(a, Pred) and a.name in COMPARISONS
                ):
                    return f"{self.tok['not']}({self.formula(a, ctx, _P_IMP, True)})"
                return f"{self.tok['not']}{self.formula(a, ctx, _P_NOT, tail)}"
            case And(l, r) | Or(l, r) | Implies(l, r):
                if isinstance(f, Implies):
                    me, op, lp, rp = _P_IMP, "->", _P_OR, _P_IMP
                elif isinstance(f, Or):
                    me, op, lp, rp = _P_OR, "or", _P_OR, _P_AND
                else:
                    me, op, lp, rp = _P_AND, "and", _P_AND, _P_NOT
                wrap = me < prec
                rtail = True if wrap else tail
                s = self.formula(l, ctx, lp, False) + self.tok[op] + self.formula(r, ctx, rp, rtail)
                return f"({s})" if wrap else s
            case Forall(body, hint) | Exists(body, hint):
                kw = "forall" if isinstance(f, Forall) else "exists"
                s = self.binder(kw, hint, body, ctx)
                return s if tail else f"({s})"
        if isinstance(f, (Bound, Var, App, Eps)):
            return self.term(f, ctx, tail)
        raise TypeError(f"not a formula: {f!r}")


def to_text(node: Expr, unicode: bool = False, context: tuple[str, ...] = ()) -> str:
    """Render ``node``; ``context`` names loose indices (innermost last)."""
    p = _Printer(_names_in(node), unicode)
    if isinstance(node, (Bound, Var, App, Eps)):
        return p.term(node, list(context), True)
    return p.formula(node, list(context), _P_IMP, True)


def binder_text(keyword: str, hint: str, body: Expr, unicode: bool = False) -> str:
    p = _Printer(_names_in(body), unicode)
    return p.binder(keyword, hint, body, [])


def to_unicode(node: Expr) -> str:
    return to_text(node, unicode=True)
