"""Least-number semantics for epsilon terms over the naturals.

``eps x. A(x)`` denotes the least ``n`` below the cap with ``A(n)``, and 0
when there is none.  Quantifiers range over the numbers below the cap.
An optional assignment ``S`` overrides the value of chosen closed epsilon
terms; this is how the substitution method evaluates a proof under a
candidate substitution.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Mapping, Optional, Sequence

from .classical import ARITH_FUNCTIONS, COMPARISONS
from .report import Report, merge
from .syntax.ast import (
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
    Top,
    Var,
    is_term,
    numeral,
)
from .syntax.ops import abstract, free_vars, instantiate, loose_indices, substitute_many
from .syntax.parser import parse_formula
from .syntax.printer import to_text


class CapExceeded(ArithmeticError):
    """No witness below the cap for an epsilon term evaluated strictly."""

    def __init__(self, term: Eps, cap: int):
        super().__init__(f"no witness below {cap} for {to_text(term)}")
        self.term = term
        self.cap = cap


class ArithError(ValueError):
    pass


def predecessor(n: int) -> int:
    return max(n - 1, 0)


DEFAULT_FUNCTIONS: dict[str, Callable[..., int]] = {**ARITH_FUNCTIONS, "g": predecessor}


@dataclass
class ArithInterp:
    """Naturals with 0, successor, ``+``, ``*``, monus and predecessor ``g``.

    Values are exact Python ints; only searches (epsilon, quantifiers) are
    bounded by ``cap``.  With ``strict`` a failed epsilon search raises
    ``CapExceeded``; otherwise it yields 0 and is logged in ``exhausted``.
    """

    cap: int = 20
    functions: dict[str, Callable[..., int]] = field(default_factory=lambda: dict(DEFAULT_FUNCTIONS))
    predicates: dict[str, Callable[..., bool]] = field(default_factory=dict)
    strict: bool = False
    exhausted: list[Eps] = field(default_factory=list)

    def __post_init__(self):
        if self.cap < 1:
            raise ArithError("cap must be positive")


class _Eval:
    def __init__(self, interp: ArithInterp, S: Optional[Mapping[Eps, int]]):
        self.i = interp
        self.S = S or {}
        self.cache: dict[Eps, int] = {}

    def term(self, t: Expr, env: tuple) -> int:
        match t:
            case Bound(k):
                return env[k]
            case Var(name):
                raise ArithError(f"unbound variable {name!r}")
            case App(sym, args):
                if sym.isdigit() and not args:
                    return int(sym)
                fn = self.i.functions.get(sym)
                if fn is None:
                    raise ArithError(f"uninterpreted function symbol {sym!r}")
                return fn(*(self.term(a, env) for a in args))
            case Eps(body, _):
                closed = not loose_indices(t)
                if closed and t in self.S:
                    return self.S[t]
                if closed and t in self.cache:
                    return self.cache[t]
                v = self.least(t, env)
                if closed:
                    self.cache[t] = v
                return v
        raise ArithError(f"not a term: {to_text(t)}")

    def least(self, e: Eps, env: tuple) -> int:
        for n in range(self.i.cap):
            if self.formula(e.body, (n,) + env):
                return n
        if self.i.strict:
            raise CapExceeded(e, self.i.cap)
        self.i.exhausted.append(e)
        return 0

    def formula(self, f: Formula, env: tuple) -> bool:
        match f:
            case Top():
                return True
            case Bot():
                return False
            case Not(a):
                return not self.formula(a, env)
            case And(l, r):
                return self.formula(l, env) and self.formula(r, env)
            case Or(l, r):
                return self.formula(l, env) or self.formula(r, env)
            case Implies(l, r):
                return (not self.formula(l, env)) or self.formula(r, env)
            case Eq(l, r):
                return self.term(l, env) == self.term(r, env)
            case Pred(name, args):
                vals = [self.term(a, env) for a in args]
                if name in self.i.predicates:
                    return bool(self.i.predicates[name](*vals))
                if name in COMPARISONS:
                    return COMPARISONS[name](*vals)
                raise ArithError(f"uninterpreted predicate symbol {name!r}")
            case Forall(body, _):
                return all(self.formula(body, (n,) + env) for n in range(self.i.cap))
            case Exists(body, _):
                return any(self.formula(body, (n,) + env) for n in range(self.i.cap))
        raise ArithError(f"not a formula: {to_text(f)}")


def least_number_eval(
    node: Expr,
    interp: Optional[ArithInterp] = None,
    S: Optional[Mapping[Eps, int]] = None,
    env: Optional[Mapping[str, int]] = None,
) -> int | bool:
    """Value of a closed term or truth of a closed formula.

    Free variables may be supplied through ``env``; they are substituted as
    numerals before evaluation.
    """
    interp = interp or ArithInterp()
    if env:
        node = substitute_many(node, {k: numeral(v) for k, v in env.items()})
    missing = free_vars(node)
    if missing:
        raise ArithError(f"unbound variable(s): {', '.join(sorted(missing))}")
    ev = _Eval(interp, S)
    return ev.term(node, ()) if is_term(node) else ev.formula(node, ())


def _body(A: Formula) -> tuple[Formula, str]:
    """The one free variable of ``A`` and ``A`` abstracted over it."""
    fv = sorted(free_vars(A))
    if len(fv) != 1:
        raise ArithError(f"expected exactly one free variable, found {fv or 'none'}")
    return abstract(A, fv[0]), fv[0]


def epsilon_of(A: Formula) -> Eps:
    body, var = _body(A)
    return Eps(body, var)


# ------------------------------------------------------------ schema battery

BATTERY: tuple[str, ...] = (
    "x >= 3",
    "x + x = 4",
    "x != x",
    "x = x",
    "x * x = 9",
    "x * x = 10",
    "2 <= x",
    "x < 0",
    "x = 7",
    "x * x > 20",
    "5 < x and x < 9",
    "x = 0",
    "not (x < 5)",
    "x + 3 = 2 * x",
    "x * x = x",
    "x + 1 = 13",
    "exists y. y * y = x and 1 < x",
    "x > 19",
    "forall y. y < x -> y * y < 50",
    "x = 4 or x = 11",
)


def battery_formulas() -> list[Formula]:
    return [parse_formula(s) for s in BATTERY]


def schema_instances(A: Formula, t: int) -> dict[str, Formula]:
    """E1, E2 and the minimality schema for ``A`` at the numeral ``t``."""
    body, var = _body(A)
    e = Eps(body, var)
    at_t = instantiate(body, numeral(t))
    at_e = instantiate(body, e)
    return {
        "E1": Implies(Not(at_e), Not(at_t)),
        "E2": Implies(Eq(e, App("+", (numeral(t), numeral(1)))), Not(at_t)),
        "eps-least": Implies(at_t, Pred("<=", (e, numeral(t)))),
        "eps": Implies(at_t, at_e),
    }


def check_E1_E2(A: Formula, interp: Optional[ArithInterp] = None, cap: int = 20) -> Report:
    """Evaluate the schema instances for every numeral below ``cap``."""
    interp = interp or ArithInterp(cap=cap)
    rep = Report(f"E1/E2 for {to_text(A)} (cap {cap})")
    e = epsilon_of(A)
    value = least_number_eval(e, interp)
    rep.add(f"{to_text(e)} = {value}")
    violations = []
    for t in range(cap):
        for name, inst in schema_instances(A, t).items():
            if not least_number_eval(inst, interp):
                violations.append((name, t))
                rep.fail(f"{name} fails at t = {t}: {to_text(inst)}", {"schema": name, "t": t})
    rep.data = {"value": value, "instances": 4 * cap, "violations": len(violations)}
    if not violations:
        rep.add(f"E1, E2, minimality and eps: {4 * cap} instances, no violation")
    return rep


def battery_report(cap: int = 20, formulas: Optional[Sequence[Formula]] = None) -> Report:
    parts = [check_E1_E2(A, ArithInterp(cap=cap), cap) for A in (formulas or battery_formulas())]
    rep = merge(f"least-number schema battery ({len(parts)} predicates, cap {cap})", parts)
    rep.data = {"predicates": len(parts), "violations": sum(p.data["violations"] for p in parts)}
    return rep
