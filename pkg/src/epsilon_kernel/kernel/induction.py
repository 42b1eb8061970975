"""Induction from the least-number axioms, replayed as a checked derivation.

With ``s = eps x. not A(x)`` (the least counterexample, or 0) and
``t = g(s)`` (its predecessor), the derivation distinguishes ``s = 0``,
where ``A(0)`` gives ``A(s)``, from ``s = t + 1``, where ``E2`` applied to
``not A`` gives ``not not A(t)``, the step premise gives ``A(t + 1)`` and
so ``A(s)``.  The ten numbered steps are recorded as labels ``(1)``..``(10)``
pointing at derivation lines; a few steps need an extra axiom line first.
"""

from __future__ import annotations

from typing import Optional

from ..arith import ArithInterp, least_number_eval
from ..report import Report
from ..syntax.ast import And, App, Bound, Eps, Eq, Forall, Formula, Implies, Not, Or, numeral
from ..syntax.ops import abstract, free_vars, instantiate, is_proper
from ..syntax.printer import to_text
from .checker import CheckResult, check_derivation, get_profile
from .derivation import Derivation, axiom, mp, premise, taut

PROFILE = "CP_eps* +E2"
IMPROPER_PROFILE = "CP_eps +E2"


class ImproperFormula(ValueError):
    pass


def _succ(t) -> App:
    return App("+", (t, numeral(1)))


def predecessor_axiom() -> Formula:
    """``forall x. x = 0 or x = g(x) + 1``."""
    x = Bound(0)
    return Forall(Or(Eq(x, numeral(0)), Eq(x, _succ(App("g", (x,))))), "x")


def induction_terms(A: Formula) -> tuple[str, Eps, App]:
    fv = sorted(free_vars(A))
    if len(fv) != 1:
        raise ValueError(f"the induction formula needs exactly one free variable, found {fv or 'none'}")
    var = fv[0]
    s = Eps(Not(abstract(A, var)), var)
    return var, s, App("g", (s,))


def build_induction(A: Formula, proper: bool = True) -> Derivation:
    var, s, t = induction_terms(A)
    if proper and not is_proper(s):
        raise ImproperFormula(f"{to_text(A)} makes eps {var}. not A({var}) improper")
    body = abstract(A, var)

    def at(term) -> Formula:
        return instantiate(body, term)

    zero = numeral(0)
    # replacing s inside an epsilon term of A needs the congruence form
    eq = "eq-subst" if proper else "eq-cong"
    d = Derivation(calculus=PROFILE if proper else IMPROPER_PROFILE)
    pa = predecessor_axiom()
    n = d.add(pa, premise())
    m = d.add(Implies(pa, Or(Eq(s, zero), Eq(s, _succ(t)))), axiom("Q1"))
    l1 = d.add(Or(Eq(s, zero), Eq(s, _succ(t))), mp(n, m), "(1)")
    l2 = d.add(at(zero), premise(), "(2)")
    e0 = d.add(Implies(Eq(s, zero), Implies(at(zero), at(s))), axiom(eq))
    l3 = d.add(Implies(And(Eq(s, zero), at(zero)), at(s)), taut(e0), "(3)")
    l4 = d.add(Implies(Eq(s, zero), at(s)), taut(l3, l2), "(4)")
    # body has no loose index besides its own variable, so it can be reused under the binder
    step = Forall(Implies(body, instantiate(body, _succ(Bound(0)))), var)
    l5 = d.add(step, premise(), "(5)")
    q = d.add(Implies(step, Implies(at(t), at(_succ(t)))), axiom("Q1"))
    l6 = d.add(Implies(at(t), at(_succ(t))), mp(l5, q), "(6)")
    e1 = d.add(Implies(Eq(s, _succ(t)), Implies(at(_succ(t)), at(s))), axiom(eq))
    l7 = d.add(Implies(And(Eq(s, _succ(t)), at(_succ(t))), at(s)), taut(e1), "(7)")
    l8 = d.add(Implies(Eq(s, _succ(t)), Not(Not(at(t)))), axiom("E2"), "(8)")
    l9 = d.add(Implies(Eq(s, _succ(t)), at(s)), taut(l8, l6, l7), "(9)")
    d.add(at(s), taut(l1, l4, l9), "(10)")
    return d


def replay_induction(
    A: Formula, proper: bool = True, cap: int = 12, interp: Optional[ArithInterp] = None
) -> tuple[Derivation, Report]:
    d = build_induction(A, proper)
    rep = Report(f"induction replay for {to_text(A)}")
    result: CheckResult = check_derivation(d, get_profile(d.calculus))
    for label, n in d.labels.items():
        rep.add(f"{label} line {n}: {to_text(d.line(n).formula)}")
    bad = result.first_bad
    if bad is not None:
        rep.fail(f"line {bad.line.number} rejected: {bad.message}", {"line": bad.line.number})
    else:
        rep.add(f"derivation checks under {d.calculus} ({len(d.lines)} lines)")
    interp = interp or ArithInterp(cap=cap)
    truth = {ln.number: bool(least_number_eval(ln.formula, interp)) for ln in d.lines}
    false_premises = [ln.number for ln in d.lines if ln.just.kind == "premise" and not truth[ln.number]]
    false_lines = [n for n, v in truth.items() if not v]
    _, s, t = induction_terms(A)
    s_val = least_number_eval(s, interp)
    rep.add(f"least-number model, cap {interp.cap}: s = {s_val}, t = {least_number_eval(t, interp)}")
    if false_premises:
        # soundness only speaks about models of the premises
        rep.add(f"premise lines {false_premises} are false in this model: no semantic claim")
    elif false_lines:
        rep.fail(f"lines false in the least-number model: {false_lines}", {"false_lines": false_lines})
    else:
        rep.add("every line is true in the least-number model")
    rep.data = {
        "lines": len(d.lines),
        "checked": bad is None,
        "premises_true": not false_premises,
        "semantic": not false_lines,
        "s": s_val,
        "branch": "s = 0" if s_val == 0 else "s = t + 1",
    }
    return d, rep
