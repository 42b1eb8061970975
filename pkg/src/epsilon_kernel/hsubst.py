"""The epsilon-substitution method on closed critical formulas.

Start with every epsilon term mapped to 0.  While some critical formula
``F(t) -> F(eps x. F(x))`` is false, take the first one, set its epsilon
term to the least ``n <= value(t)`` with ``F(n)``, and send every term
whose body mentions the repaired one back to 0.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

from .arith import ArithInterp, least_number_eval
from .kernel.checker import CriticalFormula
from .kernel.schemas import NotAnInstance, eps_instance
from .report import Report
from .syntax.ast import Eps, Formula, numeral
from .syntax.ops import eps_terms, epsilon_rank, free_vars, instantiate
from .syntax.parser import ParseError, Signature, parse_formula, parse_source
from .syntax.printer import to_text

MAX_RANK = 2


class ProblemError(ValueError):
    pass


@dataclass(frozen=True)
class Repair:
    term: Eps
    old: int
    new: int
    trigger: Optional[int]  # index of the critical formula, None for a reset
    kind: str = "repair"

    def __str__(self) -> str:
        why = f"critical formula {self.trigger}" if self.trigger is not None else "depends on a repaired term"
        return f"{self.kind} {to_text(self.term)}: {self.old} -> {self.new} ({why})"


@dataclass
class EpsilonAssignment:
    values: dict[Eps, int]
    iterations: int = 0
    history: list[Repair] = field(default_factory=list)

    def __getitem__(self, e: Eps) -> int:
        return self.values[e]

    def repairs(self) -> list[Repair]:
        return [h for h in self.history if h.kind == "repair"]

    def table(self) -> list[str]:
        return [f"{to_text(e)} = {v}" for e, v in self.values.items()]


@dataclass
class SolveResult:
    assignment: EpsilonAssignment
    resolved: bool
    report: Report


def critical_from_formula(phi: Formula, index: int = 0) -> CriticalFormula:
    if free_vars(phi):
        raise ProblemError(f"critical formula {index} is not closed: {to_text(phi)}")
    try:
        inst = eps_instance(phi)
    except NotAnInstance as exc:
        raise ProblemError(f"formula {index} is not a critical formula: {exc}") from None
    return CriticalFormula(phi, inst.term, inst.witness, index)


def parse_problem(text: str, sig: Optional[Signature] = None) -> list[CriticalFormula]:
    """One critical formula per line, with optional declarations and comments."""
    out = []
    for src in parse_source(text, sig)[1]:
        out.append(critical_from_formula(src.formula, len(out)))
    return out


def problem_terms(critical: Sequence[CriticalFormula]) -> list[Eps]:
    terms: dict[Eps, None] = {}
    for cf in critical:
        for e in eps_terms(cf.formula):
            terms.setdefault(e, None)
    return list(terms)


def _dependents(terms: Sequence[Eps]) -> dict[Eps, list[Eps]]:
    """For each term, the terms whose bodies mention it, directly or not."""
    direct = {e: [f for f in terms if f != e and e in eps_terms(f.body)] for e in terms}
    out = {}
    for e in terms:
        seen: dict[Eps, None] = {}
        todo = list(direct[e])
        while todo:
            f = todo.pop(0)
            if f not in seen:
                seen[f] = None
                todo.extend(direct[f])
        out[e] = list(seen)
    return out


def holds(cf: CriticalFormula, S: dict[Eps, int], interp: ArithInterp) -> bool:
    return bool(least_number_eval(cf.formula, interp, S))


def solve(
    critical: Sequence[CriticalFormula],
    interp: Optional[ArithInterp] = None,
    max_iter: Optional[int] = None,
    trace: bool = False,
) -> SolveResult:
    interp = interp or ArithInterp(cap=64)
    terms = problem_terms(critical)
    for e in terms:
        if epsilon_rank(e) > MAX_RANK:
            raise ProblemError(f"{to_text(e)} has rank {epsilon_rank(e)}; at most {MAX_RANK} is supported")
    if max_iter is None:
        max_iter = max(1, 10 * interp.cap * len(terms))
    deps = _dependents(terms)
    S = EpsilonAssignment({e: 0 for e in terms})
    rep = Report(f"epsilon substitution on {len(critical)} critical formulas")
    rep.add(f"{len(terms)} epsilon terms, all start at 0")
    resolved = False
    while True:
        failing = [i for i, cf in enumerate(critical) if not holds(cf, S.values, interp)]
        if not failing:
            resolved = True
            break
        if S.iterations >= max_iter:
            break
        S.iterations += 1
        i = failing[0]
        cf = critical[i]
        e = cf.term
        witness = least_number_eval(cf.witness, interp, S.values) if cf.witness is not None else 0
        new = next(
            (n for n in range(witness + 1) if least_number_eval(instantiate(e.body, numeral(n)), interp, S.values)),
            None,
        )
        if new is None:  # pragma: no cover - the antecedent is true at the witness
            raise AssertionError("no witness although the antecedent holds")
        S.history.append(Repair(e, S.values[e], new, i))
        if trace:
            rep.add(f"step {S.iterations}: {S.history[-1]}")
        S.values[e] = new
        for f in deps[e]:
            if S.values[f] != 0:
                S.history.append(Repair(f, S.values[f], 0, None, "reset"))
                if trace:
                    rep.add(f"step {S.iterations}: {S.history[-1]}")
                S.values[f] = 0
    repairs = S.repairs()
    rep.add(f"{len(repairs)} repairs, {len(S.history) - len(repairs)} resets, {S.iterations} iterations")
    rep.lines += [f"  {line}" for line in S.table()]
    rep.data = {
        "terms": len(terms),
        "repairs": len(repairs),
        "resets": len(S.history) - len(repairs),
        "iterations": S.iterations,
        "resolved": resolved,
        "values": {to_text(e): v for e, v in S.values.items()},
    }
    if not resolved:
        rep.fail(f"no resolving substitution after {max_iter} iterations", {"history": [str(h) for h in S.history]})
    else:
        rep.add("every critical formula is true: the substitution resolves the problem")
    return SolveResult(S, resolved, rep)


def resolve_report(
    S: EpsilonAssignment | dict[Eps, int],
    critical: Sequence[CriticalFormula],
    interp: Optional[ArithInterp] = None,
) -> Report:
    interp = interp or ArithInterp(cap=64)
    values = S.values if isinstance(S, EpsilonAssignment) else dict(S)
    missing = [e for e in problem_terms(critical) if e not in values]
    if missing:
        raise ProblemError(f"assignment misses {to_text(missing[0])}")
    rep = Report("critical formulas under the substitution")
    truth = []
    for i, cf in enumerate(critical):
        v = holds(cf, values, interp)
        truth.append(v)
        rep.add(f"{i}. {to_text(cf.formula)}: {'true' if v else 'FALSE'}")
    failing = [i for i, v in enumerate(truth) if not v]
    rep.data = {"truth": truth, "resolved": not failing, "failing": failing}
    if failing:
        rep.fail(f"critical formula {failing[0]} is false", {"formula": failing[0]})
    elif not critical:
        rep.add("no critical formulas: resolved vacuously")
    return rep


def brute_force_resolving(
    critical: Sequence[CriticalFormula], cap: int, interp: Optional[ArithInterp] = None
) -> Optional[dict[Eps, int]]:
    """The first assignment with values below ``cap`` making every formula true."""
    interp = interp or ArithInterp(cap=max(cap, 1))
    terms = problem_terms(critical)
    for values in itertools.product(range(cap), repeat=len(terms)):
        S = dict(zip(terms, values))
        if all(holds(cf, S, interp) for cf in critical):
            return S
    return None


# ------------------------------------------------------------- instances

PATHOLOGY = """\
# B(y) is 2 <= y and A(x, y) is y + 2 <= x; B(0) is false
2 <= 0 -> 2 <= eps y. 2 <= y
(eps y. 2 <= y) + 2 <= 6 -> (eps y. 2 <= y) + 2 <= eps x. (eps y. 2 <= y) + 2 <= x
2 <= (eps x. (eps y. 2 <= y) + 2 <= x) -> 2 <= eps y. 2 <= y
"""


def pathology_problem() -> list[CriticalFormula]:
    return parse_problem(PATHOLOGY)


def problems_from(texts: Iterable[str]) -> list[list[CriticalFormula]]:
    return [parse_problem(t) for t in texts]


def formula_problem(*formulas: str) -> list[CriticalFormula]:
    try:
        return [critical_from_formula(parse_formula(f), i) for i, f in enumerate(formulas)]
    except ParseError as exc:
        raise ProblemError(str(exc)) from None
