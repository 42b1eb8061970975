"""Quantifier elimination by epsilon terms, prenex forms and Skolem resolution."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional

from .syntax.ast import (
    And,
    App,
    Bound,
    Eps,
    Exists,
    Expr,
    Forall,
    Formula,
    Implies,
    Not,
    Or,
    Term,
    Var,
)
from .syntax.ops import (
    abstract,
    children,
    free_vars,
    fresh_name,
    has_eps,
    instantiate,
    is_quantifier_free,
    rewrite,
    shift,
    substitute_many,
    symbol_names,
    walk,
    with_children,
)
from .syntax.printer import to_text

CLASSICAL = "classical"
INTUITIONISTIC = "intuitionistic"
MODES = (CLASSICAL, INTUITIONISTIC)

Tracer = Callable[[str, Formula, Formula], None]


class TransformError(ValueError):
    pass


class IntuitionisticModeError(TransformError):
    pass


def trace_line(rule: str, before: Expr, after: Expr) -> str:
    return f"RULE {rule}: {to_text(before)} ⟹ {to_text(after)}"


# ------------------------------------------------- quantifier -> epsilon


def existential_to_epsilon(phi: Formula) -> Formula:
    """``exists x. F(x)`` becomes ``F(eps x. F(x))``."""
    if not isinstance(phi, Exists):
        raise TransformError(f"not an existential: {to_text(phi)}")
    return instantiate(phi.body, Eps(phi.body, phi.hint))


def universal_to_epsilon(phi: Formula, mode: str = CLASSICAL) -> Formula:
    """``forall x. F(x)`` becomes ``F(eps x. not F(x))`` (classical only)."""
    if mode == INTUITIONISTIC:
        raise IntuitionisticModeError(
            "the universal translation is not sound intuitionistically: "
            "it amounts to the Markov principle"
        )
    if not isinstance(phi, Forall):
        raise TransformError(f"not a universal: {to_text(phi)}")
    return instantiate(phi.body, Eps(Not(phi.body), phi.hint))


_RULES = {Exists: ("exists-to-eps", existential_to_epsilon), Forall: ("forall-to-tau", universal_to_epsilon)}


def _innermost_step(node: Expr, mode: str) -> tuple[Expr, Optional[str]]:
    """Rewrite the leftmost quantifier that has no quantifier below it."""
    kids = children(node)
    for i, kid in enumerate(kids):
        new, rule = _innermost_step(kid, mode)
        if rule is not None:
            return with_children(node, kids[:i] + (new,) + kids[i + 1 :]), rule
    if isinstance(node, (Exists, Forall)):
        name, fn = _RULES[type(node)]
        out = fn(node) if isinstance(node, Exists) else fn(node, mode)
        return out, name
    return node, None


def epsilon_translate(phi: Formula, mode: str = CLASSICAL, trace: Optional[Tracer] = None) -> Formula:
    """Remove every quantifier, deepest first, by the two epsilon rules."""
    if mode not in MODES:
        raise TransformError(f"unknown mode {mode!r}")
    while True:
        new, rule = _innermost_step(phi, mode)
        if rule is None:
            return phi
        if trace is not None:
            trace(rule, phi, new)
        phi = new


# --------------------------------------------------------------- prenex


@dataclass(frozen=True)
class PrenexForm:
    """``prefix`` lists (quantifier, name) outermost first; the matrix keeps
    the prefix variables as indices (the last prefix entry is ``Bound(0)``)."""

    prefix: tuple[tuple[str, str], ...]
    matrix: Formula

    def to_formula(self) -> Formula:
        out = self.matrix
        for q, name in reversed(self.prefix):
            out = (Forall if q == "forall" else Exists)(out, name)
        return out

    def open_matrix(self) -> Formula:
        """The matrix with the prefix variables as named free variables."""
        names = [n for _, n in self.prefix]
        # the first prefix variable is the outermost binder, Bound(k - 1)
        k = len(names)

        def fn(n: Expr, d: int):
            if isinstance(n, Bound) and n.index >= d:
                return Var(names[k - 1 - (n.index - d)])
            return None

        return rewrite(self.matrix, fn)

    def __str__(self) -> str:
        head = " ".join(f"{q} {n}." for q, n in self.prefix)
        body = to_text(self.open_matrix())
        return f"{head} {body}" if head else body


_FLIP = {"forall": "exists", "exists": "forall"}


def _pnf(f: Formula) -> tuple[list[tuple[str, str]], Formula]:
    match f:
        case Forall(body, hint) | Exists(body, hint):
            q = "forall" if isinstance(f, Forall) else "exists"
            pb, mb = _pnf(body)
            return [(q, hint)] + pb, mb
        case Not(a):
            pa, ma = _pnf(a)
            return [(_FLIP[q], n) for q, n in pa], Not(ma)
        case And(l, r) | Or(l, r) | Implies(l, r):
            pl, ml = _pnf(l)
            pr, mr = _pnf(r)
            if isinstance(f, Implies):
                pl = [(_FLIP[q], n) for q, n in pl]
            ml = shift(ml, len(pr))
            mr = shift(mr, len(pl), cutoff=len(pr))
            return pl + pr, type(f)(ml, mr)
    return [], f


def prenex(phi: Formula) -> PrenexForm:
    """Classically equivalent prenex form, quantifiers pulled left to right."""
    if has_eps(phi):
        raise TransformError("prenex form is only computed for epsilon-free formulas")
    prefix, matrix = _pnf(phi)
    avoid = free_vars(phi) | symbol_names(phi)
    names: list[tuple[str, str]] = []
    for q, hint in prefix:
        name = fresh_name(hint, avoid)
        avoid.add(name)
        names.append((q, name))
    return PrenexForm(tuple(names), matrix)


def split_prefix(phi: Formula) -> PrenexForm:
    """Read an already-prenex formula as prefix plus matrix."""
    prefix: list[tuple[str, str]] = []
    while isinstance(phi, (Forall, Exists)):
        prefix.append(("forall" if isinstance(phi, Forall) else "exists", phi.hint))
        phi = phi.body
    if not is_quantifier_free(phi):
        raise TransformError("formula is not in prenex form")
    return PrenexForm(tuple(prefix), phi)


# ---------------------------------------------------- Skolem resolution


@dataclass(frozen=True)
class Definition:
    """``symbol(params) := term``; ``term`` mentions the params as free variables."""

    symbol: str
    params: tuple[str, ...]
    term: Eps

    def __str__(self) -> str:
        head = f"{self.symbol}({', '.join(self.params)})" if self.params else self.symbol
        return f"{head} := {to_text(self.term)}"

    def apply(self, args: tuple[Term, ...]) -> Term:
        return substitute_many(self.term, dict(zip(self.params, args)))  # type: ignore[return-value]


@dataclass
class SkolemResolution:
    axioms: list[Formula]
    symbols: list[tuple[str, int]] = field(default_factory=list)
    definitions: dict[str, Definition] = field(default_factory=dict)

    def expanded(self) -> list[Formula]:
        return [expand_definitions(a, self.definitions) for a in self.axioms]


def _used_names(formulas: Iterable[Formula]) -> set[str]:
    out: set[str] = set()
    for f in formulas:
        out |= symbol_names(f) | free_vars(f)
    return out


def skolem_resolve(axioms: list[Formula], constant_base: str = "s", function_base: str = "g") -> SkolemResolution:
    """Replace each existential of a prenex sentence by an epsilon-defined symbol.

    With no universal in front, ``exists x. B(x)`` yields a constant
    ``s := eps x. B(x)``; after universals ``u1..un`` it yields a function
    ``g(u1..un) := eps y. B(u1..un, y)``.
    """
    for a in axioms:
        if has_eps(a):
            raise TransformError(f"axiom contains epsilon terms: {to_text(a)}")
        split_prefix(a)
        if free_vars(a):
            raise TransformError(f"axiom is not a sentence: {to_text(a)}")
    taken = _used_names(axioms)
    result = SkolemResolution([])
    for a in axioms:
        local = set(taken)
        universals: list[tuple[str, str]] = []  # (variable, hint)
        cur = a
        while isinstance(cur, (Forall, Exists)):
            if isinstance(cur, Forall):
                name = fresh_name(cur.hint, local)
                local.add(name)
                universals.append((name, cur.hint))
                cur = instantiate(cur.body, Var(name))
                continue
            params = tuple(v for v, _ in universals)
            sym = fresh_name(function_base if params else constant_base, taken | local)
            taken.add(sym)
            local.add(sym)
            result.symbols.append((sym, len(params)))
            result.definitions[sym] = Definition(sym, params, Eps(cur.body, cur.hint))
            cur = instantiate(cur.body, App(sym, tuple(Var(p) for p in params)))
        for name, hint in reversed(universals):
            cur = Forall(abstract(cur, name), hint)
        result.axioms.append(cur)
    return result


def expand_definitions(phi: Expr, definitions: dict[str, Definition]) -> Expr:
    """Replace defined symbols by their epsilon terms until none is left."""
    def fn(n: Expr, d: int):
        if isinstance(n, App) and n.symbol in definitions:
            args = tuple(expand_definitions(a, definitions) for a in n.args)
            return expand_definitions(definitions[n.symbol].apply(args), definitions)
        return None

    for _ in range(len(definitions) + 1):
        new = rewrite(phi, fn)
        if new == phi:
            return new
        phi = new
    return phi


def matrices(axioms: list[Formula]) -> list[Formula]:
    """Strip the prefix of each prenex axiom, exposing its variables."""
    out = []
    for a in axioms:
        pf = split_prefix(a)
        avoid = free_vars(a) | symbol_names(a)
        prefix = []
        for q, hint in pf.prefix:
            name = fresh_name(hint, avoid)
            avoid.add(name)
            prefix.append((q, name))
        out.append(PrenexForm(tuple(prefix), pf.matrix).open_matrix())
    return out
