"""Propositional validity with opaque atoms.

Atoms are the maximal non-connective subformulas (predications, equations
and quantified formulas), compared up to alpha-equivalence.  Classical
validity is decided by a backtracking search for a falsifying valuation;
intuitionistic validity by the contraction-free sequent calculus G4ip,
which terminates without loop checking.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Optional, Sequence

from ..syntax.ast import And, Bot, Formula, Implies, Not, Or, Top, conj
from ..syntax.ops import atoms


def _value(f: Formula, val: dict) -> Optional[bool]:
    """Kleene three-valued evaluation; unassigned atoms are unknown."""
    match f:
        case Top():
            return True
        case Bot():
            return False
        case Not(a):
            v = _value(a, val)
            return None if v is None else not v
        case And(l, r):
            a, b = _value(l, val), _value(r, val)
            if a is False or b is False:
                return False
            return None if a is None or b is None else True
        case Or(l, r):
            a, b = _value(l, val), _value(r, val)
            if a is True or b is True:
                return True
            return None if a is None or b is None else False
        case Implies(l, r):
            a, b = _value(l, val), _value(r, val)
            if a is False or b is True:
                return True
            return None if a is None or b is None else False
    return val.get(f)


def countervaluation(phi: Formula) -> Optional[dict[Formula, bool]]:
    """A valuation of the atoms making ``phi`` false, or None if valid."""
    order = atoms(phi)
    val: dict[Formula, bool] = {}

    def search(i: int) -> bool:
        v = _value(phi, val)
        if v is True:
            return False
        if v is False:
            return True
        atom = order[i]
        for b in (True, False):
            val[atom] = b
            if search(i + 1):
                return True
        del val[atom]
        return False

    if not search(0):
        return None
    # atoms left unassigned by an early cut can take any value
    return {a: val.get(a, False) for a in order}


def is_tautology(phi: Formula) -> bool:
    return countervaluation(phi) is None


def entails(premises: Sequence[Formula], goal: Formula, intuitionistic: bool = False) -> bool:
    phi = Implies(conj(*premises), goal) if premises else goal
    return is_intuitionistic_tautology(phi) if intuitionistic else is_tautology(phi)


# ------------------------------------------------------------------ G4ip


def _norm(f: Formula) -> Formula:
    match f:
        case Not(a):
            return Implies(_norm(a), Bot())
        case And(l, r):
            return And(_norm(l), _norm(r))
        case Or(l, r):
            return Or(_norm(l), _norm(r))
        case Implies(l, r):
            return Implies(_norm(l), _norm(r))
    return f


def _is_atom(f: Formula) -> bool:
    return not isinstance(f, (And, Or, Implies, Top, Bot))


def is_intuitionistic_tautology(phi: Formula) -> bool:
    return _prove(frozenset(), _norm(phi))


@lru_cache(maxsize=100_000)
def _prove(gamma: frozenset, goal: Formula) -> bool:
    if isinstance(goal, Top) or Bot() in gamma or goal in gamma:
        return True
    # invertible right rules
    if isinstance(goal, And):
        return _prove(gamma, goal.left) and _prove(gamma, goal.right)
    if isinstance(goal, Implies):
        return _prove(gamma | {goal.left}, goal.right)
    # invertible left rules
    for h in gamma:
        rest = gamma - {h}
        match h:
            case Top():
                return _prove(rest, goal)
            case And(l, r):
                return _prove(rest | {l, r}, goal)
            case Or(l, r):
                return _prove(rest | {l}, goal) and _prove(rest | {r}, goal)
            case Implies(Top(), c):
                return _prove(rest | {c}, goal)
            case Implies(Bot(), _):
                return _prove(rest, goal)
            case Implies(And(a, b), c):
                return _prove(rest | {Implies(a, Implies(b, c))}, goal)
            case Implies(Or(a, b), c):
                return _prove(rest | {Implies(a, c), Implies(b, c)}, goal)
            case Implies(p, c) if _is_atom(p) and p in gamma:
                return _prove(rest | {c}, goal)
    # non-invertible choices
    if isinstance(goal, Or) and (_prove(gamma, goal.left) or _prove(gamma, goal.right)):
        return True
    for h in gamma:
        if isinstance(h, Implies) and isinstance(h.left, Implies):
            a, b, c = h.left.left, h.left.right, h.right
            rest = gamma - {h}
            if _prove(rest | {Implies(b, c)}, Implies(a, b)) and _prove(rest | {c}, goal):
                return True
    return False
