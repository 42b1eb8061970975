"""Finite classical models where epsilon terms denote a choice from their extension."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Hashable, Iterable, Iterator, Mapping, Optional, Sequence, Union

from .report import Report
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
)
from .syntax.ops import free_vars, instantiate, loose_indices, substitute_many
from .syntax.printer import to_text

Element = Hashable
COMPARISONS = {
    "<": lambda a, b: a < b,
    "<=": lambda a, b: a <= b,
    ">": lambda a, b: a > b,
    ">=": lambda a, b: a >= b,
}


class ModelError(ValueError):
    pass


class EvaluationError(ValueError):
    pass


@dataclass(frozen=True)
class FiniteModel:
    """Universe plus total interpretations.

    Numerals denote the integers they spell and the order predicates
    ``< <= > >=`` compare elements numerically unless the model interprets
    them itself.  Equality is always identity.
    """

    universe: tuple[Element, ...]
    functions: Mapping[str, Mapping[tuple, Element]] = field(default_factory=dict)
    predicates: Mapping[str, frozenset] = field(default_factory=dict)
    builtins: Mapping[str, Callable[..., Any]] = field(default_factory=dict)

    def __post_init__(self):
        if not self.universe:
            raise ModelError("the universe must be nonempty")
        if len(set(self.universe)) != len(self.universe):
            raise ModelError("universe elements must be distinct")
        dom = set(self.universe)
        for name, table in self.functions.items():
            arities = {len(k) for k in table}
            if len(arities) > 1:
                raise ModelError(f"function {name!r} has mixed arities")
            n = arities.pop() if arities else 0
            for args in itertools.product(self.universe, repeat=n):
                if args not in table:
                    raise ModelError(f"function {name!r} undefined at {args}")
                if table[args] not in dom:
                    raise ModelError(f"function {name!r} leaves the universe at {args}")
        for name, ext in self.predicates.items():
            for tup in ext:
                if not all(e in dom for e in tup):
                    raise ModelError(f"predicate {name!r} mentions elements outside the universe")

    @property
    def elements(self) -> frozenset:
        return frozenset(self.universe)

    def function(self, name: str, args: tuple) -> Element:
        table = self.functions.get(name)
        if table is not None:
            return table[args]
        if name in self.builtins:
            value = self.builtins[name](*args)
        elif not args and name.isdigit():
            value = int(name)
        else:
            raise EvaluationError(f"uninterpreted function symbol {name!r}")
        if value not in self.elements:
            raise EvaluationError(f"{name}{args} = {value!r} is outside the universe")
        return value

    def holds(self, name: str, args: tuple) -> bool:
        ext = self.predicates.get(name)
        if ext is not None:
            return args in ext
        if name in COMPARISONS:
            return COMPARISONS[name](*args)
        if name in self.builtins:
            return bool(self.builtins[name](*args))
        raise EvaluationError(f"uninterpreted predicate symbol {name!r}")


def arithmetic_model(n: int, **extra) -> FiniteModel:
    """``{0..n-1}`` with numerals and the natural order."""
    return FiniteModel(tuple(range(n)), **extra)


def constant_table(value: Element) -> dict[tuple, Element]:
    return {(): value}


# ---------------------------------------------------- choice functions


class ChoiceFunction:
    """A total map from subsets of the universe to elements.

    Explicit ``table`` entries win; other subsets get the first member in
    universe order.  The empty set always receives the value of the whole
    universe, so every empty-extension term denotes the same element.
    """

    def __init__(self, universe: Sequence[Element], table: Optional[Mapping[frozenset, Element]] = None):
        self.universe = tuple(universe)
        self.full = frozenset(self.universe)
        self.table: dict[frozenset, Element] = {}
        for subset, value in (table or {}).items():
            subset = frozenset(subset)
            if not subset <= self.full:
                raise ModelError(f"choice table mentions a non-subset {sorted(subset, key=str)}")
            if subset and value not in subset:
                raise ModelError(f"choice of {value!r} from {sorted(subset, key=str)} is not a member")
            if subset:
                self.table[subset] = value
        empty = (table or {}).get(frozenset())
        if empty is not None and empty != self(self.full):
            raise ModelError("the empty set must receive the same choice as the universe")

    def __call__(self, subset: Iterable[Element]) -> Element:
        s = frozenset(subset)
        if not s:
            s = self.full
        hit = self.table.get(s)
        if hit is not None:
            return hit
        for e in self.universe:
            if e in s:
                return e
        raise ModelError("choice from a set outside the universe")

    def as_table(self) -> dict[frozenset, Element]:
        """The full powerset table (small universes only)."""
        out = {}
        for k in range(len(self.universe) + 1):
            for combo in itertools.combinations(self.universe, k):
                out[frozenset(combo)] = self(combo)
        return out

    def __repr__(self) -> str:
        return f"ChoiceFunction({self.universe!r}, {len(self.table)} overrides)"


def min_choice(universe: Sequence[Element]) -> ChoiceFunction:
    return ChoiceFunction(universe)


def all_choice_functions(universe: Sequence[Element]) -> Iterator[ChoiceFunction]:
    """Every choice function honouring the empty-set convention."""
    universe = tuple(universe)
    subsets = [frozenset(c) for k in range(1, len(universe) + 1) for c in itertools.combinations(universe, k)]
    options = [sorted(s, key=universe.index) for s in subsets]
    for picks in itertools.product(*options):
        yield ChoiceFunction(universe, dict(zip(subsets, picks)))


def count_choice_functions(n: int) -> int:
    out = 1
    for k in range(1, n + 1):
        out *= k ** _binom(n, k)
    return out


def _binom(n: int, k: int) -> int:
    from math import comb

    return comb(n, k)


# ----------------------------------------------------------- evaluation


class _Evaluator:
    def __init__(self, model: FiniteModel, cf: ChoiceFunction, env: Mapping[str, Element]):
        self.m = model
        self.cf = cf
        self.env = env
        self.eps_cache: dict[Eps, Element] = {}

    def term(self, t: Expr, stack: tuple) -> Element:
        match t:
            case Bound(i):
                if i >= len(stack):
                    raise EvaluationError("dangling bound variable")
                return stack[-1 - i]
            case Var(name):
                if name not in self.env:
                    raise EvaluationError(f"unbound free variable {name!r}")
                return self.env[name]
            case App(sym, args):
                return self.m.function(sym, tuple(self.term(a, stack) for a in args))
            case Eps(body, _):
                closed = not loose_indices(t)
                if closed and t in self.eps_cache:
                    return self.eps_cache[t]
                ext = [a for a in self.m.universe if self.formula(body, stack + (a,))]
                value = self.cf(ext)
                if closed:
                    self.eps_cache[t] = value
                return value
        raise EvaluationError(f"not a term: {t!r}")

    def formula(self, f: Expr, stack: tuple) -> bool:
        match f:
            case Top():
                return True
            case Bot():
                return False
            case Pred(name, args):
                return self.m.holds(name, tuple(self.term(a, stack) for a in args))
            case Eq(l, r):
                return self.term(l, stack) == self.term(r, stack)
            case Not(a):
                return not self.formula(a, stack)
            case And(l, r):
                return self.formula(l, stack) and self.formula(r, stack)
            case Or(l, r):
                return self.formula(l, stack) or self.formula(r, stack)
            case Implies(l, r):
                return (not self.formula(l, stack)) or self.formula(r, stack)
            case Forall(body, _):
                return all(self.formula(body, stack + (a,)) for a in self.m.universe)
            case Exists(body, _):
                return any(self.formula(body, stack + (a,)) for a in self.m.universe)
        raise EvaluationError(f"not a formula: {f!r}")


def evaluate(
    node: Expr,
    model: FiniteModel,
    cf: Optional[ChoiceFunction] = None,
    env: Optional[Mapping[str, Element]] = None,
) -> Union[bool, Element]:
    """Truth value of a formula, or denotation of a term."""
    cf = cf or min_choice(model.universe)
    ev = _Evaluator(model, cf, env or {})
    if isinstance(node, (Bound, Var, App, Eps)):
        return ev.term(node, ())
    return ev.formula(node, ())


def _single_free_var(phi: Formula, var: Optional[str]) -> str:
    fv = free_vars(phi)
    if var is not None:
        if fv - {var}:
            raise EvaluationError(f"unexpected free variables {sorted(fv - {var})}")
        return var
    if len(fv) != 1:
        raise EvaluationError(f"expected exactly one free variable, found {sorted(fv)}")
    return next(iter(fv))


def extension(
    phi: Formula, model: FiniteModel, cf: Optional[ChoiceFunction] = None, var: Optional[str] = None
) -> frozenset:
    """``{a | phi(a)}`` for a formula with one free variable."""
    x = _single_free_var(phi, var)
    cf = cf or min_choice(model.universe)
    return frozenset(a for a in model.universe if evaluate(phi, model, cf, {x: a}))


# ------------------------------------------------------ model families


def enumerate_models(
    size: int,
    functions: Mapping[str, int] | None = None,
    predicates: Mapping[str, int] | None = None,
) -> Iterator[FiniteModel]:
    """All models over ``{0..size-1}`` for the given signature."""
    functions = dict(functions or {})
    predicates = dict(predicates or {})
    universe = tuple(range(size))
    f_names = sorted(functions)
    p_names = sorted(predicates)
    f_spaces = []
    for name in f_names:
        points = list(itertools.product(universe, repeat=functions[name]))
        f_spaces.append([dict(zip(points, vals)) for vals in itertools.product(universe, repeat=len(points))])
    p_spaces = []
    for name in p_names:
        points = list(itertools.product(universe, repeat=predicates[name]))
        p_spaces.append(
            [frozenset(p for p, bit in zip(points, bits) if bit) for bits in itertools.product((0, 1), repeat=len(points))]
        )
    for fs in itertools.product(*f_spaces):
        for ps in itertools.product(*p_spaces):
            yield FiniteModel(universe, dict(zip(f_names, fs)), dict(zip(p_names, ps)))


def models_upto(n: int, functions=None, predicates=None) -> Iterator[FiniteModel]:
    for size in range(1, n + 1):
        yield from enumerate_models(size, functions, predicates)


def model_choice_pairs(n: int, functions=None, predicates=None) -> Iterator[tuple[FiniteModel, ChoiceFunction]]:
    for m in models_upto(n, functions, predicates):
        for cf in all_choice_functions(m.universe):
            yield m, cf


# ------------------------------------------------- equivalence checks

DEFAULT_FAMILY = ("P(x)", "not P(x)", "x = c", "P(x) and x != c", "P(c) -> P(x)")


def check_exists_equivalence(
    n: int,
    which: str = "exists",
    family: Sequence[str] = ("P(x)",),
    functions: Mapping[str, int] | None = None,
    predicates: Mapping[str, int] | None = None,
) -> Report:
    """Compare a quantified formula with its epsilon form on every small model.

    ``which="exists"``: ``exists x. F`` against ``F(eps x. F)``;
    ``which="forall"``: ``forall x. F`` against ``F(eps x. not F)``.
    """
    from .syntax.parser import parse_formula
    from .syntax.ops import abstract

    if n > 4:
        raise ValueError("exhaustive enumeration is limited to universes of size 4")
    functions = {"c": 0} if functions is None else functions
    predicates = {"P": 1} if predicates is None else predicates
    bodies = [abstract(parse_formula(src), "x") for src in family]
    pairs = []
    for body in bodies:
        if which == "exists":
            pairs.append((Exists(body, "x"), instantiate(body, Eps(body, "x"))))
        elif which == "forall":
            pairs.append((Forall(body, "x"), instantiate(body, Eps(Not(body), "x"))))
        else:
            raise ValueError(f"unknown equivalence {which!r}")
    rep = Report(f"{which} equivalence, universes up to {n}")
    checked = models = 0
    for size in range(1, n + 1):
        for m in enumerate_models(size, functions, predicates):
            models += 1
            for cf in all_choice_functions(m.universe):
                for quantified, eps_form in pairs:
                    checked += 1
                    a = evaluate(quantified, m, cf)
                    b = evaluate(eps_form, m, cf)
                    if a != b:
                        rep.fail(
                            f"disagreement on {to_text(quantified)} vs {to_text(eps_form)}",
                            {"model": m, "choice": cf.as_table(), "quantified": a, "epsilon": b},
                        )
                        return rep
    rep.data = {"models": models, "instances": checked, "violations": 0}
    rep.add(f"{models} models, {checked} (model, choice, formula) instances, 0 violations")
    for quantified, eps_form in pairs:
        rep.add(f"{to_text(quantified)}  ==  {to_text(eps_form)}")
    return rep


def check_null_collapse(n: int, functions=None, predicates=None) -> Report:
    """``eps x. x = x`` and ``eps x. x != x`` denote the same element everywhere."""
    from .syntax.parser import parse_term

    full = parse_term("eps x. x = x")
    empty = parse_term("eps x. x != x")
    functions = {"c": 0} if functions is None else functions
    predicates = {"P": 1} if predicates is None else predicates
    rep = Report(f"null-term collapse, universes up to {n}")
    count = 0
    for m, cf in model_choice_pairs(n, functions, predicates):
        count += 1
        a, b = evaluate(full, m, cf), evaluate(empty, m, cf)
        if a != b:
            return rep.fail(f"{a!r} != {b!r}", {"model": m, "choice": cf.as_table()})
    rep.data = {"instances": count}
    rep.add(f"{count} (model, choice) instances: eps x. x = x and eps x. x != x always agree")
    return rep


def check_ackermann(model: FiniteModel, cf: ChoiceFunction, pairs: Iterable[tuple[Formula, Formula]]) -> Report:
    """Extensionally equal unary formulas get equal epsilon values."""
    from .syntax.ops import abstract

    rep = Report("extensionality of epsilon")
    n = 0
    for f, g in pairs:
        n += 1
        xf, xg = _single_free_var(f, None), _single_free_var(g, None)
        same = extension(f, model, cf) == extension(g, model, cf)
        ef = evaluate(Eps(abstract(f, xf), xf), model, cf)
        eg = evaluate(Eps(abstract(g, xg), xg), model, cf)
        if same and ef != eg:
            rep.fail(f"{to_text(f)} and {to_text(g)} agree but choose {ef!r} and {eg!r}", (f, g))
        else:
            verdict = "antecedent true, values equal" if same else "antecedent false"
            rep.add(f"{to_text(f)} / {to_text(g)}: {verdict}")
    rep.data = {"pairs": n}
    rep.add("structurally guaranteed: the choice depends only on the extension set")
    return rep


@dataclass(frozen=True)
class IotaFailure:
    """``kind`` is ``"E"`` (nothing satisfies) or ``"U"`` (several do)."""

    kind: str
    extension: frozenset

    def __str__(self) -> str:
        what = "existence" if self.kind == "E" else "uniqueness"
        return f"definite description fails ({self.kind}: {what}), extension size {len(self.extension)}"


def iota_check(phi: Formula, model: FiniteModel, cf: Optional[ChoiceFunction] = None):
    ext = extension(phi, model, cf)
    if not ext:
        return IotaFailure("E", ext)
    if len(ext) > 1:
        return IotaFailure("U", ext)
    return next(iter(ext))


class NotEquivalenceError(ValueError):
    def __init__(self, prop: str, witness: tuple):
        super().__init__(f"relation is not {prop}: witness {witness}")
        self.prop = prop
        self.witness = witness


def abstraction_representative(
    equiv: Union[str, Formula], model: FiniteModel, cf: Optional[ChoiceFunction] = None
) -> dict[Element, Element]:
    """``a -> eps y. y ~ a``, after checking that ``~`` is an equivalence.

    ``equiv`` is a binary predicate name or a formula in the variables x, y.
    """
    if isinstance(equiv, str):
        rel = Pred(equiv, (Var("x"), Var("y")))
    else:
        rel = equiv
    cf = cf or min_choice(model.universe)
    U = model.universe

    def r(a, b) -> bool:
        return bool(evaluate(rel, model, cf, {"x": a, "y": b}))

    for a in U:
        if not r(a, a):
            raise NotEquivalenceError("reflexive", (a,))
    for a, b in itertools.product(U, U):
        if r(a, b) and not r(b, a):
            raise NotEquivalenceError("symmetric", (a, b))
    for a, b, c in itertools.product(U, U, U):
        if r(a, b) and r(b, c) and not r(a, c):
            raise NotEquivalenceError("transitive", (a, b, c))
    # the representative term: eps y. (y ~ x), with x free
    from .syntax.ops import abstract

    rep_term = Eps(abstract(substitute_many(rel, {"x": Var("y"), "y": Var("x")}), "y"), "y")
    return {a: evaluate(rep_term, model, cf, {"x": a}) for a in U}


# ------------------------------------------------ finitist verification


@dataclass
class FinitistInterpretation:
    """Computable meanings over the naturals (unbounded Python ints).

    Successor-like functions are applied exactly, so no value is clipped
    at the enumeration cap; only the substituted numerals are bounded.
    """

    functions: dict[str, Callable[..., int]] = field(default_factory=dict)
    predicates: dict[str, Callable[..., bool]] = field(default_factory=dict)

    def term(self, t: Expr, env: Mapping[str, int]) -> int:
        match t:
            case Var(name):
                return env[name]
            case App(sym, args):
                vals = [self.term(a, env) for a in args]
                if sym in self.functions:
                    return self.functions[sym](*vals)
                if sym.isdigit() and not args:
                    return int(sym)
                if sym in ARITH_FUNCTIONS:
                    return ARITH_FUNCTIONS[sym](*vals)
                raise EvaluationError(f"uninterpreted function symbol {sym!r}")
        raise EvaluationError(f"matrix terms must be epsilon- and binder-free: {to_text(t)}")

    def atom(self, f: Formula, env: Mapping[str, int]) -> tuple[tuple, bool]:
        """Return the ground atom (as a key) and its truth value."""
        match f:
            case Eq(l, r):
                a, b = self.term(l, env), self.term(r, env)
                return ("=", a, b), a == b
            case Pred(name, args):
                vals = tuple(self.term(a, env) for a in args)
                if name in self.predicates:
                    return (name,) + vals, bool(self.predicates[name](*vals))
                if name in COMPARISONS:
                    return (name,) + vals, COMPARISONS[name](*vals)
                raise EvaluationError(f"uninterpreted predicate symbol {name!r}")
        raise EvaluationError(f"not an atom: {to_text(f)}")


ARITH_FUNCTIONS: dict[str, Callable[..., int]] = {
    "+": lambda a, b: a + b,
    "*": lambda a, b: a * b,
    "-": lambda a, b: max(a - b, 0),
    "S": lambda a: a + 1,
}


class TruthAssignment(dict):
    """Truth values of the ground atoms met so far."""


def _eval_qf(f: Formula, interp: FinitistInterpretation, env, truth: TruthAssignment) -> bool:
    match f:
        case Top():
            return True
        case Bot():
            return False
        case Not(a):
            return not _eval_qf(a, interp, env, truth)
        case And(l, r):
            return _eval_qf(l, interp, env, truth) and _eval_qf(r, interp, env, truth)
        case Or(l, r):
            return _eval_qf(l, interp, env, truth) or _eval_qf(r, interp, env, truth)
        case Implies(l, r):
            return (not _eval_qf(l, interp, env, truth)) or _eval_qf(r, interp, env, truth)
        case Forall() | Exists():
            raise EvaluationError("matrices must be quantifier-free")
    key, value = interp.atom(f, env)
    truth[key] = value
    return value


def verify_matrices(matrices: Sequence[Formula], cap: int, interp: FinitistInterpretation) -> Report:
    """Check every numeral instance (numerals below ``cap``) of each matrix."""
    rep = Report(f"matrix instances with numerals < {cap}")
    truth = TruthAssignment()
    total = 0
    for i, m in enumerate(matrices):
        names = sorted(free_vars(m))
        count = 0
        for values in itertools.product(range(cap), repeat=len(names)):
            env = dict(zip(names, values))
            count += 1
            if not _eval_qf(m, interp, env, truth):
                total += count
                instance = substitute_many(m, {k: App(str(v)) for k, v in env.items()})
                rep.fail(
                    f"matrix {i + 1} {to_text(m)} fails at {_fmt_env(env)}: {to_text(instance)}",
                    {"matrix": i, "env": env, "instance": to_text(instance)},
                )
                rep.data = {"instances": total, "atoms": len(truth)}
                return rep
        total += count
        rep.add(f"matrix {i + 1} {to_text(m)}: {count} instances true")
    rep.data = {"instances": total, "atoms": len(truth)}
    rep.add(f"{total} instances, {len(truth)} distinct ground atoms, all true")
    return rep


def _fmt_env(env: Mapping[str, int]) -> str:
    return ", ".join(f"{k}={v}" for k, v in env.items()) or "(no variables)"


# -------------------------------------------------------- infinitesimals


def rational_grid(cap: int) -> tuple[Fraction, ...]:
    """Rationals in [-1, 1] with denominators up to ``cap + 1``."""
    pts = {Fraction(p, q) for q in range(1, cap + 2) for p in range(-q, q + 1)}
    return tuple(sorted(pts))


def infinitesimal_model(cap: int) -> FiniteModel:
    grid = rational_grid(cap)
    abs_table = {(a,): abs(a) for a in grid}
    coarse = frozenset((a,) for a in grid if a.denominator <= cap)
    return FiniteModel(grid, functions={"abs": abs_table}, predicates={"Coarse": coarse})


NOT_G = "Coarse(y) and y != 0 and forall r. r > 0 -> abs(y) <= r"
NOT_G_WITHOUT_NONZERO = "Coarse(y) and forall r. r > 0 -> abs(y) <= r"
NOT_G_UNRELATIVIZED = "y != 0 and forall r. r > 0 -> abs(y) <= r"


def infinitesimal_null_demo(cap: int = 4, cf: Optional[ChoiceFunction] = None) -> Report:
    """The infinitesimal predicate has an empty extension on a rational grid.

    Candidates ``y`` range over denominators up to ``cap`` while ``r``
    ranges over the strictly finer grid, so every nonzero candidate is
    beaten by a smaller positive ``r``.
    """
    from .syntax.parser import parse_formula
    from .syntax.ops import abstract

    if cap < 2:
        raise ValueError("cap must be at least 2")
    m = infinitesimal_model(cap)
    cf = cf or min_choice(m.universe)
    not_g = parse_formula(NOT_G)
    body = abstract(not_g, "y")
    tau = Eps(body, "y")
    g_of_tau = Not(instantiate(body, tau))
    rep = Report(f"infinitesimals on the rational grid, cap {cap}")
    ext = extension(not_g, m, cf, "y")
    value = evaluate(tau, m, cf)
    null_value = evaluate(Eps(Not(Eq(Bound(0), Bound(0))), "y"), m, cf)
    rep.add(f"grid: {len(m.universe)} rationals in [-1, 1], candidates with denominator <= {cap}")
    rep.add(f"not G(y) := {NOT_G}")
    rep.add(f"extension of not G: {_fmt_set(ext)}")
    if ext:
        rep.fail("the infinitesimal predicate is satisfiable on the grid", sorted(ext))
    rep.add(f"eps y. not G(y) = {value} (choice from the universe: {null_value})")
    if value != null_value:
        rep.fail("the epsilon term is not the null-term value")
    translated = evaluate(g_of_tau, m, cf)
    all_phi = all(bool(evaluate(Not(not_g), m, cf, {"y": a})) for a in m.universe)
    rep.add(f"G(eps y. not G(y)) evaluates to {translated}")
    rep.add(f"G holds of every element, so it holds whatever the choice of the universe: {all_phi}")
    if not (translated and all_phi):
        rep.fail("the translated Archimedean axiom fails")
    ext0 = extension(parse_formula(NOT_G_WITHOUT_NONZERO), m, cf, "y")
    rep.add(f"without y != 0 the extension is {_fmt_set(ext0)}")
    if ext0 != frozenset({0}):
        rep.fail("dropping y != 0 should leave exactly {0}")
    raw = extension(parse_formula(NOT_G_UNRELATIVIZED), m, cf, "y")
    rep.add(f"grid artifact: with y ranging over the whole grid the extension is {_fmt_set(raw)}")
    rep.data = {
        "extension": sorted(ext),
        "without_nonzero": sorted(ext0),
        "unrelativized": sorted(raw),
        "tau_value": value,
        "translated": translated,
    }
    return rep


def _fmt_set(s: Iterable) -> str:
    items = sorted(s)
    return "{" + ", ".join(str(x) for x in items) + "}" if items else "∅"
