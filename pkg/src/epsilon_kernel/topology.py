"""Heyting-valued semantics on finite topological spaces.

A formula in one variable denotes an open set of points: its extension.
Unary predicates applied to that variable and 0-ary predicates are
interpreted by opens; negation is the interior of the complement and
implication is the Heyting implication.  A quantifier over the variable
yields a sentence, which is two-valued: the whole space when the body's
extension is the whole space (for ``forall``) or nonempty (for ``exists``),
and the empty set otherwise.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Hashable, Iterator, Mapping, Optional

from .report import Report
from .syntax.ast import And, Bot, Bound, Exists, Expr, Forall, Formula, Implies, Not, Or, Pred, Top, Var
from .syntax.printer import to_text

Point = Hashable
Open = frozenset


class TopologyError(ValueError):
    pass


@dataclass(frozen=True)
class FiniteTopSpace:
    points: tuple[Point, ...]
    opens: frozenset[frozenset]

    def __post_init__(self):
        full = frozenset(self.points)
        if len(full) != len(self.points):
            raise TopologyError("points must be distinct")
        opens = frozenset(frozenset(o) for o in self.opens)
        object.__setattr__(self, "opens", opens)
        if frozenset() not in opens:
            raise TopologyError("the empty set must be open")
        if full not in opens:
            raise TopologyError("the whole space must be open")
        for o in opens:
            if not o <= full:
                raise TopologyError(f"open {sorted(o, key=str)} is not a set of points")
        for a, b in itertools.combinations(opens, 2):
            if a | b not in opens:
                raise TopologyError(f"union of {_fmt(a)} and {_fmt(b)} is not open")
            if a & b not in opens:
                raise TopologyError(f"intersection of {_fmt(a)} and {_fmt(b)} is not open")

    @property
    def full(self) -> frozenset:
        return frozenset(self.points)

    def is_open(self, x) -> bool:
        return frozenset(x) in self.opens

    def interior(self, x) -> frozenset:
        x = frozenset(x)
        out: frozenset = frozenset()
        for o in self.opens:
            if o <= x:
                out |= o
        return out

    def closure(self, x) -> frozenset:
        return self.full - self.interior(self.full - frozenset(x))

    def neg(self, x) -> frozenset:
        return self.interior(self.full - frozenset(x))

    def implies(self, x, y) -> frozenset:
        """Largest open ``O`` with ``O & x <= y``."""
        return self.interior((self.full - frozenset(x)) | frozenset(y))

    def is_clopen(self, x) -> bool:
        x = frozenset(x)
        return x in self.opens and (self.full - x) in self.opens

    def is_regular(self, x) -> bool:
        return self.interior(self.closure(x)) == frozenset(x)


def from_generators(points, generators) -> FiniteTopSpace:
    """The smallest topology containing the given sets."""
    full = frozenset(points)
    opens = {frozenset(), full} | {frozenset(g) for g in generators}
    changed = True
    while changed:
        changed = False
        for a, b in list(itertools.combinations(opens, 2)):
            for c in (a | b, a & b):
                if c not in opens:
                    opens.add(c)
                    changed = True
    return FiniteTopSpace(tuple(points), frozenset(opens))


def enumerate_topologies(n: int) -> Iterator[FiniteTopSpace]:
    """Every topology on ``{0..n-1}`` (29 for n=3, 355 for n=4)."""
    points = tuple(range(n))
    full = frozenset(points)
    middle = [frozenset(c) for k in range(1, n) for c in itertools.combinations(points, k)]
    for bits in itertools.product((0, 1), repeat=len(middle)):
        fam = {frozenset(), full} | {s for s, b in zip(middle, bits) if b}
        if all(a | b in fam and a & b in fam for a, b in itertools.combinations(fam, 2)):
            yield FiniteTopSpace(points, frozenset(fam))


def spaces_upto(n: int) -> Iterator[FiniteTopSpace]:
    for k in range(1, n + 1):
        yield from enumerate_topologies(k)


def three_point_witness() -> FiniteTopSpace:
    """``{a, b, c}`` with opens ``∅, {a}, {a, b, c}``."""
    return FiniteTopSpace(("a", "b", "c"), frozenset({frozenset(), frozenset({"a"}), frozenset({"a", "b", "c"})}))


# ------------------------------------------------------------ evaluation


def heyting_eval(phi: Formula, space: FiniteTopSpace, interp: Mapping[str, frozenset]) -> frozenset:
    """The open set denoted by ``phi`` (one variable at most, see module doc)."""
    for name, ext in interp.items():
        if not space.is_open(ext):
            raise TopologyError(f"extension of {name!r} is not open: {_fmt(ext)}")
    variables = {n.name for n in _vars(phi)}
    if len(variables) > 1:
        raise TopologyError("only formulas in a single variable are supported")
    return _heval(phi, space, interp)


def _vars(phi: Expr):
    from .syntax.ops import walk

    return [n for n, _ in walk(phi) if isinstance(n, Var)]


def _heval(f: Expr, sp: FiniteTopSpace, interp: Mapping[str, frozenset]) -> frozenset:
    match f:
        case Top():
            return sp.full
        case Bot():
            return frozenset()
        case Pred(name, args):
            if name not in interp:
                raise TopologyError(f"no extension given for {name!r}")
            if len(args) > 1 or (args and not isinstance(args[0], (Var, Bound))):
                raise TopologyError(f"atom {to_text(f)} must be unary in the variable or 0-ary")
            if args and isinstance(args[0], Bound) and args[0].index != 0:
                raise TopologyError("quantifiers may only bind the single variable")
            return frozenset(interp[name])
        case Not(a):
            return sp.neg(_heval(a, sp, interp))
        case And(l, r):
            return _heval(l, sp, interp) & _heval(r, sp, interp)
        case Or(l, r):
            return _heval(l, sp, interp) | _heval(r, sp, interp)
        case Implies(l, r):
            return sp.implies(_heval(l, sp, interp), _heval(r, sp, interp))
        case Forall(body, _):
            return sp.full if _heval(body, sp, interp) == sp.full else frozenset()
        case Exists(body, _):
            return sp.full if _heval(body, sp, interp) else frozenset()
    raise TopologyError(f"unsupported formula {to_text(f)}")


def double_negation_gap(space: FiniteTopSpace, x) -> tuple[frozenset, frozenset]:
    x = frozenset(x)
    if not space.is_open(x):
        raise TopologyError(f"{_fmt(x)} is not open")
    return x, space.interior(space.closure(x))


# ------------------------------------------------------------ experiments

_F = Pred("F", (Var("x"),))
STABILITY = Forall(Implies(Not(Not(Pred("F", (Bound(0),)))), Pred("F", (Bound(0),))), "x")
MARKOV_CONCLUSION = Implies(Not(Forall(Pred("F", (Bound(0),)), "x")), Exists(Not(Pred("F", (Bound(0),))), "x"))
DOUBLE_NEGATION_INTRO = Implies(_F, Not(Not(_F)))
DOUBLE_NEGATION_ELIM = Implies(Not(Not(_F)), _F)
EXCLUDED_MIDDLE = Or(_F, Not(_F))


def markov_check(space: FiniteTopSpace, x) -> Report:
    """If ``F`` is stable under double negation, Markov's conclusion is full."""
    interp = {"F": frozenset(x)}
    rep = Report(f"Markov principle for F = {_fmt(x)}")
    ante = heyting_eval(STABILITY, space, interp)
    concl = heyting_eval(MARKOV_CONCLUSION, space, interp)
    rep.add(f"forall x. not not F(x) -> F(x) = {_fmt(ante)}")
    rep.data = {"antecedent_full": ante == space.full, "conclusion_full": concl == space.full}
    if ante != space.full:
        rep.add("antecedent not full: conclusion not asserted")
        return rep
    rep.add(f"(not forall x. F(x)) -> exists x. not F(x) = {_fmt(concl)}")
    if concl != space.full:
        rep.fail("stable predicate violates the Markov conclusion", {"space": space, "F": x})
    return rep


def exhaustive_gap_check(max_points: int = 4) -> Report:
    """Double negation introduction is valid, elimination is not, decidable
    predicates satisfy excluded middle, and Markov's principle holds for
    stable predicates: over every space up to ``max_points``."""
    rep = Report(f"Heyting checks on all spaces up to {max_points} points")
    spaces = opens = elim_failures = markov_applicable = 0
    witness = None
    for sp in spaces_upto(max_points):
        spaces += 1
        for x in sorted(sp.opens, key=lambda o: (len(o), sorted(o))):
            opens += 1
            interp = {"F": x}
            if heyting_eval(DOUBLE_NEGATION_INTRO, sp, interp) != sp.full:
                return rep.fail("F -> not not F is not full", {"space": sp, "F": x})
            if heyting_eval(DOUBLE_NEGATION_ELIM, sp, interp) != sp.full:
                elim_failures += 1
                witness = witness or (sp, x)
            lem = heyting_eval(EXCLUDED_MIDDLE, sp, interp) == sp.full
            if sp.is_clopen(x) and not lem:
                return rep.fail("decidable predicate violates excluded middle", {"space": sp, "F": x})
            m = markov_check(sp, x)
            if not m.passed:
                return rep.fail(m.lines[-1], m.witness)
            markov_applicable += bool(m.data["antecedent_full"])
    rep.data = {
        "spaces": spaces,
        "opens": opens,
        "double_negation_elimination_failures": elim_failures,
        "markov_applicable": markov_applicable,
    }
    rep.add(f"{spaces} spaces, {opens} open extensions")
    rep.add("F -> not not F: full space in every case")
    rep.add(f"not not F -> F: fails for {elim_failures} extensions")
    rep.add("clopen F: F or not F is full in every case")
    rep.add(f"Markov: {markov_applicable} stable extensions, no violation")
    if witness is None:
        rep.fail("no space refutes double negation elimination")
    return rep


def heyting_gap_demo() -> Report:
    sp = three_point_witness()
    x = frozenset({"a"})
    rep = Report("double negation gap on three points")
    rep.add(f"points {{a, b, c}}, opens {', '.join(_fmt(o) for o in sorted(sp.opens, key=lambda o: (len(o), sorted(o))))}")
    x, nnx = double_negation_gap(sp, x)
    rep.add(f"X = {_fmt(x)}")
    rep.add(f"not X = {_fmt(sp.neg(x))}")
    rep.add(f"not not X = {_fmt(nnx)}")
    interp = {"F": x}
    rep.add(f"F -> not not F = {_fmt(heyting_eval(DOUBLE_NEGATION_INTRO, sp, interp))}")
    rep.add(f"not not F -> F = {_fmt(heyting_eval(DOUBLE_NEGATION_ELIM, sp, interp))}")
    rep.add(f"F or not F = {_fmt(heyting_eval(EXCLUDED_MIDDLE, sp, interp))}")
    if not (x < nnx and nnx == sp.full):
        rep.fail("expected not not X to be the whole space")
    rep.data = {"X": sorted(x), "not_not_X": sorted(nnx)}
    return rep


def _fmt(s) -> str:
    items = sorted(s, key=str)
    return "{" + ", ".join(str(i) for i in items) + "}" if items else "∅"
