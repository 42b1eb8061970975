"""Recognizers for the axiom schemas.

Each recognizer takes a formula and either returns a short description of
the instantiation (``"t := c"`` and the like) or raises ``NotAnInstance``
with the reason.  Instances are re-derived from the formula itself, so a
line never has to spell out its instantiation.

    Q1         forall x. A(x)  ->  A(t)
    Q2         A(t)  ->  exists x. A(x)
    eps        A(t)  ->  A(eps x. A(x))
    eps-exists (exists x. A(x))  ->  A(eps x. A(x))
    eps2       (forall x. (A(x) -> B(x)) and (B(x) -> A(x)))  ->  eps x. A(x) = eps x. B(x)
    eq-refl    t = t
    eq-subst   s = t  ->  (A(s) -> A(t))      also with A(t) -> A(s)
    eq-cong    as eq-subst, replacing inside epsilon terms as well
    E1         not A(eps x. A(x))  ->  not A(t)
    E2         eps x. A(x) = t + 1  ->  not A(t)
    eps-least  A(t)  ->  eps x. A(x) <= t
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

from ..syntax.ast import App, Bound, Eps, Eq, Exists, Expr, Forall, Formula, Implies, Not, Pred, Term, Var, iff, numeral
from ..syntax.ops import children, eps_terms, instantiate, loose_indices, shift, with_children
from ..syntax.printer import to_text


class NotAnInstance(ValueError):
    pass


class _NoHole:
    """Marker: the bound variable does not occur, any term fits."""

    def __repr__(self) -> str:
        return "<any>"


NO_HOLE = _NoHole()


def match_instance(body: Expr, target: Expr) -> Optional[Term | _NoHole]:
    """The term ``t`` with ``instantiate(body, t) == target``.

    Returns ``NO_HOLE`` when the bound variable does not occur in ``body``
    and ``body`` already equals ``target``; ``None`` when no ``t`` exists.
    """
    slot: list = [NO_HOLE]
    if not _match(body, target, 0, slot):
        return None
    t = slot[0]
    if t is NO_HOLE:
        return NO_HOLE
    return t if instantiate(body, t) == target else None


def _match(b: Expr, t: Expr, depth: int, slot: list) -> bool:
    if isinstance(b, Bound):
        if b.index == depth:
            if loose_indices(t) and min(loose_indices(t)) < depth:
                return False  # the instance would capture a variable
            cand = shift(t, -depth) if depth else t
            if slot[0] is NO_HOLE:
                slot[0] = cand
                return True
            return slot[0] == cand
        want = b.index if b.index < depth else b.index - 1
        return isinstance(t, Bound) and t.index == want
    if type(b) is not type(t):
        return False
    kb, kt = children(b), children(t)
    if len(kb) != len(kt) or with_children(b, kt) != t:
        return False
    inner = depth + 1 if isinstance(b, (Eps, Forall, Exists)) else depth
    return all(_match(x, y, inner, slot) for x, y in zip(kb, kt))


def _term_text(t) -> str:
    return "any term" if t is NO_HOLE else to_text(t)


def _implication(phi: Formula, schema: str) -> Implies:
    if not isinstance(phi, Implies):
        raise NotAnInstance(f"{schema}: not an implication")
    return phi


def _epsilon_instance(phi: Formula) -> Optional[Eps]:
    """The epsilon term ``e`` with ``phi == A(e)`` where ``e = eps x. A(x)``."""
    for e in eps_terms(phi):
        if instantiate(e.body, e) == phi:
            return e
    return None


# --------------------------------------------------------- the schemas


def q1(phi: Formula) -> str:
    imp = _implication(phi, "Q1")
    if not isinstance(imp.left, Forall):
        raise NotAnInstance("Q1: antecedent is not universal")
    t = match_instance(imp.left.body, imp.right)
    if t is None:
        raise NotAnInstance("Q1: consequent is not an instance of the quantified body")
    return f"t := {_term_text(t)}"


def q2(phi: Formula) -> str:
    imp = _implication(phi, "Q2")
    if not isinstance(imp.right, Exists):
        raise NotAnInstance("Q2: consequent is not existential")
    t = match_instance(imp.right.body, imp.left)
    if t is None:
        raise NotAnInstance("Q2: antecedent is not an instance of the quantified body")
    return f"t := {_term_text(t)}"


@dataclass(frozen=True)
class EpsilonInstance:
    term: Eps
    witness: Optional[Term]  # None when the body ignores its variable


def eps_instance(phi: Formula) -> EpsilonInstance:
    imp = _implication(phi, "eps")
    e = _epsilon_instance(imp.right)
    if e is None:
        raise NotAnInstance("eps: consequent is not A(eps x. A(x))")
    t = match_instance(e.body, imp.left)
    if t is None:
        raise NotAnInstance("eps: antecedent is not an instance of the epsilon body")
    return EpsilonInstance(e, None if t is NO_HOLE else t)


def eps(phi: Formula) -> str:
    inst = eps_instance(phi)
    return f"e := {to_text(inst.term)}, t := {_term_text(inst.witness or NO_HOLE)}"


def eps_exists(phi: Formula) -> str:
    imp = _implication(phi, "eps-exists")
    if not isinstance(imp.left, Exists):
        raise NotAnInstance("eps-exists: antecedent is not existential")
    e = Eps(imp.left.body, imp.left.hint)
    if instantiate(e.body, e) != imp.right:
        raise NotAnInstance("eps-exists: consequent is not A(eps x. A(x))")
    return f"e := {to_text(e)}"


def eps2(phi: Formula) -> str:
    imp = _implication(phi, "eps2")
    match imp:
        case Implies(Forall(body), Eq(Eps(a), Eps(b))):
            if body == iff(a, b):
                return "extensionality"
    raise NotAnInstance("eps2: expected (forall x. A(x) <-> B(x)) -> eps x. A(x) = eps x. B(x)")


def eq_refl(phi: Formula) -> str:
    if isinstance(phi, Eq) and phi.left == phi.right:
        return f"t := {to_text(phi.left)}"
    raise NotAnInstance("eq-refl: expected t = t")


def eq_subst(phi: Formula) -> str:
    """Replacement of some occurrences of ``s`` by ``t``.

    Replaced occurrences must lie outside epsilon terms: replacing inside an
    epsilon body is an extensionality principle, not plain equality.
    """
    return _equality_instance(phi, "eq-subst", inside_eps=False)


def eq_cong(phi: Formula) -> str:
    """Equality substitution that may also rewrite inside epsilon bodies.

    Sound under choice semantics (equal terms give equal extensions), but
    the elimination procedure cannot process it, so it is a separate schema.
    """
    return _equality_instance(phi, "eq-cong", inside_eps=True)


def _equality_instance(phi: Formula, schema: str, inside_eps: bool) -> str:
    imp = _implication(phi, schema)
    if not (isinstance(imp.left, Eq) and isinstance(imp.right, Implies)):
        raise NotAnInstance(f"{schema}: expected s = t -> (A -> B)")
    s, t = imp.left.left, imp.left.right
    a, b = imp.right.left, imp.right.right
    if _replaced(a, b, s, t, 0, False, inside_eps) or _replaced(a, b, t, s, 0, False, inside_eps):
        return f"s := {to_text(s)}, t := {to_text(t)}"
    raise NotAnInstance(f"{schema}: the two sides differ by more than a replacement of s by t")


def _replaced(a: Expr, b: Expr, s: Term, t: Term, depth: int, in_eps: bool, inside_eps: bool = False) -> bool:
    if a == b:
        return True
    if (inside_eps or not in_eps) and a == shift(s, depth) and b == shift(t, depth):
        return True
    if type(a) is not type(b):
        return False
    ka, kb = children(a), children(b)
    if len(ka) != len(kb) or not ka or with_children(a, kb) != b:
        return False
    inner = depth + 1 if isinstance(a, (Eps, Forall, Exists)) else depth
    sub_eps = in_eps or isinstance(a, Eps)
    return all(_replaced(x, y, s, t, inner, sub_eps, inside_eps) for x, y in zip(ka, kb))


def e1(phi: Formula) -> str:
    imp = _implication(phi, "E1")
    if not (isinstance(imp.left, Not) and isinstance(imp.right, Not)):
        raise NotAnInstance("E1: expected not A(eps x. A(x)) -> not A(t)")
    e = _epsilon_instance(imp.left.arg)
    if e is None:
        raise NotAnInstance("E1: antecedent is not the negation of A(eps x. A(x))")
    t = match_instance(e.body, imp.right.arg)
    if t is None:
        raise NotAnInstance("E1: consequent is not the negation of an instance")
    return f"e := {to_text(e)}, t := {_term_text(t)}"


def e2(phi: Formula) -> str:
    imp = _implication(phi, "E2")
    match imp:
        case Implies(Eq(Eps() as e, App("+", (t, one))), Not(inst)) if one == numeral(1):
            if instantiate(e.body, t) == inst:
                return f"e := {to_text(e)}, t := {to_text(t)}"
    raise NotAnInstance("E2: expected eps x. A(x) = t + 1 -> not A(t)")


def eps_least(phi: Formula) -> str:
    imp = _implication(phi, "eps-least")
    match imp:
        case Implies(inst, Pred("<=", (Eps() as e, t))):
            if instantiate(e.body, t) == inst:
                return f"e := {to_text(e)}, t := {to_text(t)}"
    raise NotAnInstance("eps-least: expected A(t) -> eps x. A(x) <= t")


SCHEMAS: dict[str, Callable[[Formula], str]] = {
    "Q1": q1,
    "Q2": q2,
    "eps": eps,
    "eps-exists": eps_exists,
    "eps2": eps2,
    "eq-refl": eq_refl,
    "eq-subst": eq_subst,
    "eq-cong": eq_cong,
    "E1": e1,
    "E2": e2,
    "eps-least": eps_least,
}

# spellings accepted in derivation files
ALIASES = {"ε": "eps", "ε2": "eps2", "ε₂": "eps2", "eps-ex": "eps-exists", "E₁": "E1", "E₂": "E2"}


def canonical_schema(name: str) -> str:
    return ALIASES.get(name, name)


def recognize(phi: Formula, schema: str) -> str:
    schema = canonical_schema(schema)
    if schema not in SCHEMAS:
        raise NotAnInstance(f"unknown schema {schema!r}")
    return SCHEMAS[schema](phi)


def match_pattern(pattern: Expr, target: Expr, names: set[str]) -> Optional[dict[str, Term]]:
    """First-order matching: a substitution for the variables ``names``
    turning ``pattern`` into ``target``, or None."""
    out: dict[str, Term] = {}

    def go(p: Expr, t: Expr, depth: int) -> bool:
        if isinstance(p, Var) and p.name in names:
            if loose_indices(t) and min(loose_indices(t)) < depth:
                return False
            val = shift(t, -depth) if depth else t
            if out.setdefault(p.name, val) != val:
                return False
            return True
        if type(p) is not type(t):
            return False
        kp, kt = children(p), children(t)
        if len(kp) != len(kt):
            return False
        if not kp:
            return p == t
        if with_children(p, kt) != t:
            return False
        inner = depth + 1 if isinstance(p, (Eps, Forall, Exists)) else depth
        return all(go(x, y, inner) for x, y in zip(kp, kt))

    return out if go(pattern, target, 0) else None
