"""Scripted scenarios behind ``epsilon-kernel demo NAME``.

Each demo returns a Report; fixed caps and iteration orders keep the
output byte-identical between runs.
"""

from __future__ import annotations

from typing import Callable, Optional

from .classical import (
    FinitistInterpretation,
    FiniteModel,
    abstraction_representative,
    infinitesimal_null_demo,
    min_choice,
    verify_matrices,
)
from .hsubst import brute_force_resolving, pathology_problem, resolve_report, solve
from .arith import ArithInterp
from .kernel.induction import replay_induction
from .kripke import bell_report
from .report import Report, merge
from .syntax.parser import parse_formula
from .syntax.printer import to_text
from .topology import heyting_gap_demo
from .transform import matrices, skolem_resolve

ORDER_AXIOMS = (
    "forall x. not (x < x)",
    "forall x. forall y. forall z. x < y and y < z -> x < z",
    "forall x. forall y. x < y or y < x or x = y",
    "forall x. exists y. x < y",
    "exists x. forall y. x = y or x < y",
)

INDUCTION_FORMULAS = ("0 <= x", "x = x", "x + 0 = x")


def order_matrices():
    res = skolem_resolve([parse_formula(s) for s in ORDER_AXIOMS])
    return res, matrices(res.axioms)


def successor_interpretation() -> FinitistInterpretation:
    return FinitistInterpretation(functions={"g": lambda x: x + 1, "s": lambda: 0})


def a1a5(cap: int = 10) -> Report:
    res, mats = order_matrices()
    rep = Report(f"finitist check of the order axioms, numerals < {cap}")
    for sym, d in res.definitions.items():
        rep.add(f"Skolem symbol {d}")
    for a in res.axioms:
        rep.add(f"resolved axiom {to_text(a)}")
    good = verify_matrices(mats, cap, successor_interpretation())
    rep.add("with g(x) = x + 1 and s = 0:")
    rep.lines += [f"  {line}" for line in good.lines]
    if not good:
        rep.fail("the successor interpretation falsifies a matrix instance", good.witness)
    bad = verify_matrices(mats, min(cap, 3), FinitistInterpretation(functions={"g": lambda x: x, "s": lambda: 0}))
    rep.add("with g(x) = x instead:")
    rep.lines += [f"  {line}" for line in bad.lines]
    if bad:
        rep.fail("g(x) = x should falsify x < g(x)")
    rep.data = {"instances": good.data.get("instances"), "wrong_choice_witness": bad.witness}
    return rep


def infinitesimal(cap: int = 4) -> Report:
    return infinitesimal_null_demo(cap)


def cardinals(size: int = 4) -> Report:
    universe = tuple(range(size))
    parity = frozenset((a, b) for a in universe for b in universe if a % 2 == b % 2)
    m = FiniteModel(universe, predicates={"Same": parity})
    table = abstraction_representative("Same", m, min_choice(universe))
    rep = Report(f"representatives eps y. Same(y, x) for parity on {{0..{size - 1}}}")
    for a in universe:
        rep.add(f"#{a} = {table[a]}")
    bad = [(a, b) for a in universe for b in universe if ((a, b) in parity) != (table[a] == table[b])]
    if bad:
        rep.fail(f"Same({bad[0][0]}, {bad[0][1]}) disagrees with equality of representatives", bad[0])
    else:
        rep.add("Same(a, b) holds exactly when #a = #b")
    rep.data = {"representatives": {str(a): table[a] for a in universe}}
    return rep


def induction(cap: int = 12) -> Report:
    parts = []
    for src in INDUCTION_FORMULAS:
        d, r = replay_induction(parse_formula(src), cap=cap)
        r.lines += ["derivation:"] + [f"  {line}" for line in d.to_text().splitlines()]
        parts.append(r)
    return merge(f"induction replays at cap {cap}", parts)


def nested_substitution(cap: int = 64) -> Report:
    problem = pathology_problem()
    interp = ArithInterp(cap=cap)
    result = solve(problem, interp, trace=True)
    check = resolve_report(result.assignment, problem, interp)
    oracle = brute_force_resolving(problem, min(cap, 8))
    rep = merge("nested epsilon terms under the substitution method", [result.report, check])
    if oracle is None:
        rep.fail("the brute-force scan found no resolving assignment")
    else:
        rep.add("brute force: " + ", ".join(f"{to_text(e)} = {v}" for e, v in oracle.items()))
    rep.data["oracle_found"] = oracle is not None
    return rep


def bell(worlds: int = 3, domain: int = 2) -> Report:
    return bell_report(worlds, domain)


def heyting_gap() -> Report:
    return heyting_gap_demo()


DEMOS: dict[str, Callable[..., Report]] = {
    "a1a5": a1a5,
    "infinitesimal": infinitesimal,
    "cardinals": cardinals,
    "induction": induction,
    "nested-substitution": nested_substitution,
    "bell": bell,
    "heyting-gap": heyting_gap,
}

# demos whose single numeric knob is the --cap flag
CAPPED = {"a1a5", "infinitesimal", "induction", "nested-substitution"}


def run_demo(name: str, cap: Optional[int] = None) -> Report:
    try:
        fn = DEMOS[name]
    except KeyError:
        raise ValueError(f"unknown demo {name!r}; choose from {', '.join(DEMOS)}") from None
    if cap is not None and name in CAPPED:
        return fn(cap)
    return fn()
