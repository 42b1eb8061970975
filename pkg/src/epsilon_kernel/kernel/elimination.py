"""Removing epsilon terms from proper derivations of epsilon-free formulas.

One elimination step picks an innermost epsilon term ``e = eps y. B(y)``
(its body has no epsilon), replaces it everywhere by a fresh constant
``a`` and looks at what became of the lines that were instances of
``(exists y. B(y)) -> B(e)``:

* none: the substituted derivation already proves the conclusion;
* some: they are now the hypothesis ``H = (exists y. B(y)) -> B(a)``.
  The deduction theorem turns the derivation into one of ``H -> phi``;
  from it ``B(a) -> phi`` and, generalizing on ``a``,
  ``(exists y. B(y)) -> phi`` follow, and ``phi`` is a tautological
  consequence of the two.

Lines of the general form ``A(t) -> A(e)`` are first split into the
existential introduction ``A(t) -> exists y. A(y)`` and the instance above.
"""

from __future__ import annotations

from dataclasses import replace
from typing import Optional

from ..syntax.ast import And, App, Eps, Exists, Formula, Implies
from ..syntax.ops import has_eps, instantiate, replace_term, symbol_names
from ..syntax.printer import to_text
from .checker import (
    PROFILES,
    analyze_exgen,
    analyze_gen,
    canonical_schema,
    check_derivation,
    mentions,
)
from .derivation import Derivation, Line, axiom, exgen, gen, hyp, taut
from .schemas import eps_instance

RESERVED_PREFIX = "a_"
ELIMINABLE_SCHEMAS = frozenset({"Q1", "Q2", "eq-refl", "eq-subst", "eps", "eps-exists"})


class EliminationError(ValueError):
    pass


def fresh_constant(d: Derivation, extra: frozenset[str] = frozenset()) -> str:
    used = set(extra)
    for ln in d.lines:
        used |= symbol_names(ln.formula)
    i = 0
    while f"{RESERVED_PREFIX}{i}" in used:
        i += 1
    return f"{RESERVED_PREFIX}{i}"


def innermost_terms(d: Derivation) -> list[Eps]:
    """Epsilon terms of the derivation whose bodies contain no epsilon."""
    return [e for e in d.epsilon_terms() if not has_eps(e.body)]


def validate_input(d: Derivation) -> None:
    """The preconditions of the elimination, as errors naming the culprit."""
    result = check_derivation(d, PROFILES["CP_eps*"])
    bad = result.first_bad
    if bad is not None:
        raise EliminationError(f"line {bad.line.number} does not check in CP_eps*: {bad.message}")
    for ln in d.lines:
        if ln.just.kind == "axiom" and canonical_schema(ln.just.schema or "") not in ELIMINABLE_SCHEMAS:
            raise EliminationError(f"line {ln.number}: schema {ln.just.schema} is outside the eliminable fragment")
        if ln.just.kind == "premise" and has_eps(ln.formula):
            raise EliminationError(f"line {ln.number}: premises must be epsilon-free")
    if d.conclusion is not None and has_eps(d.conclusion):
        raise EliminationError("the conclusion contains an epsilon term")


# ------------------------------------------------------------- rebuilding


class _Builder:
    def __init__(self, src: Derivation, calculus: str):
        self.d = Derivation(calculus=calculus, signature=src.signature.copy())

    def add(self, phi: Formula, just) -> int:
        return self.d.add(phi, just)


def split_epsilon_lines(d: Derivation) -> Derivation:
    """Replace each ``A(t) -> A(e)`` line by Q2, eps-exists and a tautology."""
    b = _Builder(d, d.calculus)
    where: dict[int, int] = {}
    for ln in d.lines:
        j = ln.just
        refs = tuple(where[r] for r in j.refs)
        if j.kind == "axiom" and canonical_schema(j.schema or "") == "eps":
            inst = eps_instance(ln.formula)
            ex = Exists(inst.term.body, inst.term.hint)
            n1 = b.add(Implies(ln.formula.left, ex), axiom("Q2"))
            n2 = b.add(Implies(ex, ln.formula.right), axiom("eps-exists"))
            where[ln.number] = b.add(ln.formula, taut(n1, n2))
        else:
            where[ln.number] = b.add(ln.formula, replace(j, refs=refs))
    for label, n in d.labels.items():
        b.d.labels[label] = where[n]
    return b.d


def substitute_term(d: Derivation, target: Eps, const: str) -> tuple[Derivation, Optional[Formula]]:
    """Replace ``target`` by ``const`` everywhere.

    Instances of ``(exists y. B(y)) -> B(target)`` become hypothesis lines;
    returns the new derivation and that hypothesis (None if it never occurred).
    """
    a = App(const, ())
    out = d.copy()
    out.lines = []
    # the body is epsilon-free, so it cannot contain the target itself
    hypothesis = Implies(Exists(target.body, target.hint), instantiate(target.body, a))
    used = False
    for ln in d.lines:
        phi = replace_term(ln.formula, target, a)
        j = ln.just
        if j.kind == "axiom" and canonical_schema(j.schema or "") == "eps-exists" and phi == hypothesis:
            j, used = hyp(), True
        out.lines.append(Line(ln.number, phi, j))
    return out, (hypothesis if used else None)


def deduction(d: Derivation, H: Formula) -> Derivation:
    """A derivation of ``H -> phi`` without the hypothesis lines ``H``.

    ``H`` must be closed; generalized symbols must not occur in it.
    """
    b = _Builder(d, d.calculus)
    where: dict[int, int] = {}
    for ln in d.lines:
        phi, j = ln.formula, ln.just
        refs = [where[r] for r in j.refs]
        target = Implies(H, phi)
        if j.kind == "hyp":
            if phi != H:
                raise EliminationError(f"line {ln.number}: unexpected hypothesis {to_text(phi)}")
            where[ln.number] = b.add(target, taut())
        elif j.kind in ("premise", "axiom"):
            n = b.add(phi, j)
            where[ln.number] = b.add(target, taut(n))
        elif j.kind in ("taut", "mp"):
            where[ln.number] = b.add(target, taut(*refs))
        elif j.kind == "gen":
            src = d.line(j.refs[0]).formula
            step = analyze_gen(src, phi)
            if step.eigen is not None and mentions(H, step.eigen):
                raise EliminationError(f"line {ln.number}: generalized symbol {step.eigen} occurs in {to_text(H)}")
            if step.form == "plain":
                where[ln.number] = b.add(target, gen(refs[0], step.eigen))
            else:
                # H -> (C -> A(v)) ; (H and C) -> A(v) ; (H and C) -> forall ; H -> (C -> forall)
                n1 = b.add(Implies(And(H, src.left), src.right), taut(refs[0]))
                n2 = b.add(Implies(And(H, src.left), phi.right), gen(n1, step.eigen))
                where[ln.number] = b.add(target, taut(n2))
        elif j.kind == "exgen":
            src = d.line(j.refs[0]).formula
            step = analyze_exgen(src, phi)
            if step.eigen is not None and mentions(H, step.eigen):
                raise EliminationError(f"line {ln.number}: generalized symbol {step.eigen} occurs in {to_text(H)}")
            # H -> (A(v) -> C) ; A(v) -> (H -> C) ; (exists) -> (H -> C) ; H -> ((exists) -> C)
            n1 = b.add(Implies(src.left, Implies(H, src.right)), taut(refs[0]))
            n2 = b.add(Implies(phi.left, Implies(H, src.right)), exgen(n1, step.eigen))
            where[ln.number] = b.add(target, taut(n2))
        else:
            raise EliminationError(f"line {ln.number}: cannot transform justification {j}")
    return b.d


def close_cases(d: Derivation, H: Implies, const: str, phi: Formula) -> Derivation:
    """From a last line ``H -> phi`` with ``H = (exists y. B(y)) -> B(a)``
    derive ``B(a) -> phi``, ``(exists y. B(y)) -> phi`` and ``phi``."""
    out = d.copy()
    k = len(out.lines)
    n1 = out.add(Implies(H.right, phi), taut(k))
    n2 = out.add(Implies(H.left, phi), exgen(n1, const))
    out.add(phi, taut(k, n2))
    return out


# ------------------------------------------------------------ entry points


def _prepare(d: Derivation) -> Derivation:
    validate_input(d)
    return split_epsilon_lines(d)


def eliminate_one_epsilon(d: Derivation, target: Optional[Eps] = None) -> Derivation:
    """One elimination step; the result checks in CP_eps with one epsilon term fewer.

    Without ``target`` the first innermost term is taken.
    """
    d = _prepare(d)
    inner = innermost_terms(d)
    if target is None:
        if not inner:
            return d
        target = inner[0]
    if target not in d.epsilon_terms():
        return d
    if target not in inner:
        raise EliminationError(f"{to_text(target)} is not innermost: its body contains an epsilon term")
    return _step(d, target, recurse=False)


def _step(d: Derivation, target: Eps, recurse: bool) -> Derivation:
    phi = d.conclusion
    const = fresh_constant(d)
    d1, H = substitute_term(d, target, const)
    if H is None:
        d1.calculus = d.calculus
        return _eliminate_all(d1) if recurse else d1
    d2 = deduction(d1, H)
    if recurse:
        d2 = _eliminate_all(d2)
    return close_cases(d2, H, const, phi)


def _eliminate_all(d: Derivation) -> Derivation:
    inner = innermost_terms(d)
    if not inner:
        return d
    return _step(d, inner[0], recurse=True)


def second_epsilon_theorem(d: Derivation) -> Derivation:
    """An epsilon-free CP derivation of the same conclusion from the same premises.

    Each hypothesis is discharged only after every other epsilon term of the
    derivation of ``H -> phi`` is gone, so the final generalization on the
    fresh constant never meets a later hypothesis that mentions it.
    """
    d = _prepare(d)
    out = _eliminate_all(d)
    out.calculus = "CP"
    out.labels = {}
    return out
