"""Checking a proposed quantifier-free certificate for a prenex consequence.

Given prenex premises and goal together with candidate instances of their
matrices, verify that the premise instances (plus any stated equality
axiom instances) propositionally entail the disjunction of the goal
instances.  Nothing is searched for: the instances are the certificate.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

from ..report import Report
from ..syntax.ast import Formula, Implies, Var, conj, disj
from ..syntax.ops import free_vars, fresh_name, instantiate
from ..syntax.printer import to_text
from ..transform import TransformError, split_prefix
from .schemas import NotAnInstance, eq_refl, eq_subst, match_pattern
from .tautology import countervaluation


class NotAMatrixInstance(ValueError):
    pass


@dataclass(frozen=True)
class Instance:
    """A claimed instance of the matrix of premise ``source``."""

    formula: Formula
    source: int


@dataclass
class Certificate:
    premise_instances: list[Instance] = field(default_factory=list)
    disjuncts: list[Formula] = field(default_factory=list)
    equalities: list[Formula] = field(default_factory=list)


def matrix_substitution(phi: Formula, instance: Formula) -> Optional[dict]:
    """Terms for the prefix variables and the free variables of ``phi``
    turning its matrix into ``instance``; free variables count as
    universally quantified, so an open matrix may stand for its closure."""
    try:
        form = split_prefix(phi)
    except TransformError:
        raise NotAMatrixInstance(f"{to_text(phi)} is not in prenex form") from None
    taken = free_vars(phi)
    names = []
    for _, hint in form.prefix:
        name = fresh_name(hint, taken)
        taken.add(name)
        names.append(name)
    matrix = form.matrix
    for name in reversed(names):
        matrix = instantiate(matrix, Var(name))
    return match_pattern(matrix, instance, set(names) | free_vars(phi))


def first_theorem_instance_check(
    sigma: Sequence[Formula],
    phi: Optional[Formula],
    cert: Certificate,
) -> Report:
    rep = Report("quantifier-free entailment of the goal instances")
    forms = list(sigma)
    premises: list[Formula] = []
    for inst in cert.premise_instances:
        if not 0 <= inst.source < len(forms):
            raise NotAMatrixInstance(f"no premise number {inst.source}")
        sub = matrix_substitution(forms[inst.source], inst.formula)
        if sub is None:
            raise NotAMatrixInstance(f"{to_text(inst.formula)} is not an instance of the matrix of premise {inst.source}")
        shown = ", ".join(f"{k} := {to_text(v)}" for k, v in sorted(sub.items()))
        rep.add(f"premise {inst.source} instance {to_text(inst.formula)}" + (f"  [{shown}]" if shown else ""))
        premises.append(inst.formula)
    for eq in cert.equalities:
        try:
            eq_refl(eq)
        except NotAnInstance:
            try:
                eq_subst(eq)
            except NotAnInstance:
                raise NotAMatrixInstance(f"{to_text(eq)} is not an equality axiom instance") from None
        rep.add(f"equality axiom {to_text(eq)}")
        premises.append(eq)
    if phi is not None:
        for d in cert.disjuncts:
            if matrix_substitution(phi, d) is None:
                raise NotAMatrixInstance(f"{to_text(d)} is not an instance of the goal matrix")
    if not cert.disjuncts:
        raise NotAMatrixInstance("the certificate names no goal instance")
    goal = disj(*cert.disjuncts)
    rep.add(f"goal {to_text(goal)}")
    target = Implies(conj(*premises), goal) if premises else goal
    cv = countervaluation(target)
    rep.data = {"premise_instances": len(cert.premise_instances), "disjuncts": len(cert.disjuncts), "entailed": cv is None}
    if cv is None:
        rep.add("entailed: no valuation of the atoms falsifies it")
    else:
        valuation = {to_text(a): v for a, v in cv.items()}
        rep.fail("not entailed; countervaluation " + ", ".join(f"{k}={'T' if v else 'F'}" for k, v in valuation.items()), valuation)
    return rep
