"""Command line entry point: ``epsilon-kernel SUBCOMMAND ...``.

Exit status 0 means every check passed, 1 that a property or
verification failed (the report names a witness), 2 a usage or input
error.  Formula arguments are either formula text or the path of a file
holding one formula per line (with optional declarations).
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Optional, Sequence

from . import demos
from .arith import ArithInterp
from .classical import all_choice_functions, evaluate, min_choice
from .formats import parse_choice, parse_kripke, parse_model, parse_space, read_text
from .hsubst import brute_force_resolving, parse_problem, resolve_report, solve
from .kernel.checker import check, get_profile
from .kernel.derivation import parse_derivation
from .kernel.elimination import eliminate_one_epsilon, second_epsilon_theorem
from .kernel.induction import replay_induction
from .kripke import bell_lem_search, describe_structure, forced_worlds, validate_world_choice
from .parallel import ordered_map
from .report import Report, merge
from .syntax.ast import Expr, Formula
from .syntax.ops import free_vars
from .syntax.parser import Signature, is_declaration, parse, parse_declaration, parse_source, strip_comment
from .syntax.printer import to_text, to_unicode
from .topology import heyting_eval
from .transform import MODES, epsilon_translate, prenex, skolem_resolve, trace_line


class UsageError(Exception):
    pass


def positive(text: str) -> int:
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not an integer") from None
    if n < 1:
        raise argparse.ArgumentTypeError("must be positive")
    return n


def formula_source(value: str) -> str:
    path = Path(value)
    if len(value) < 256 and "\n" not in value and path.is_file():
        return read_text(path)
    return value


def formulas_arg(value: str) -> list[Formula]:
    _, lines = parse_source(formula_source(value))
    if not lines:
        raise UsageError("no formula given")
    return [s.formula for s in lines]


def expressions_arg(value: str, sig: Optional[Signature] = None) -> list[Expr]:
    """Like formulas_arg, but lines may also be terms."""
    sig = sig or Signature()
    out = []
    for n, raw in enumerate(formula_source(value).splitlines(), 1):
        text = strip_comment(raw)
        if not text:
            continue
        if is_declaration(text):
            kind, rest = text.split(None, 1)
            parse_declaration(kind, rest, sig, n)
        else:
            out.append(parse(text, sig))
    if not out:
        raise UsageError("no formula given")
    return out


def one_formula(value: str) -> Formula:
    fs = formulas_arg(value)
    if len(fs) != 1:
        raise UsageError(f"expected one formula, found {len(fs)}")
    return fs[0]


class Printer:
    def __init__(self, unicode: bool = False):
        self.unicode = unicode

    def __call__(self, node) -> str:
        return to_unicode(node) if self.unicode else to_text(node)


# --------------------------------------------------------------- commands


def cmd_translate(args) -> Report:
    show = Printer(args.unicode)
    rep = Report(f"epsilon translation ({args.mode})")
    for phi in formulas_arg(args.formula):
        steps: list[str] = []
        out = epsilon_translate(phi, args.mode, (lambda r, a, b: steps.append(trace_line(r, a, b))) if args.trace else None)
        rep.lines += steps
        rep.add(show(out))
        rep.data.setdefault("outputs", []).append(to_text(out))
    return rep


def cmd_prenex(args) -> Report:
    show = Printer(args.unicode)
    rep = Report("prenex form")
    for phi in formulas_arg(args.formula):
        pf = prenex(phi)
        rep.add(show(pf.to_formula()))
        if args.trace:
            rep.add("prefix " + " ".join(f"{q} {n}" for q, n in pf.prefix))
            rep.add("matrix " + show(pf.open_matrix()))
        rep.data.setdefault("outputs", []).append(to_text(pf.to_formula()))
    return rep


def cmd_skolemize(args) -> Report:
    show = Printer(args.unicode)
    axioms = formulas_arg(args.formula)
    if args.prenex:
        axioms = [prenex(a).to_formula() for a in axioms]
    res = skolem_resolve(axioms)
    rep = Report("Skolem resolution")
    for a in res.axioms:
        rep.add(show(a))
    for d in res.definitions.values():
        rep.add(f"where {d}")
    rep.data = {"axioms": [to_text(a) for a in res.axioms], "definitions": [str(d) for d in res.definitions.values()]}
    return rep


def _model_and_choice(args):
    mf = parse_model(read_text(args.model))
    cf = mf.choice
    if args.phi is not None:
        cf = min_choice(mf.model.universe) if args.phi == "min" else parse_choice(read_text(args.phi), mf.model.universe)
    return mf.model, cf or min_choice(mf.model.universe)


def _env(pairs: Sequence[str]) -> dict:
    env = {}
    for p in pairs:
        name, eq, value = p.partition("=")
        if not eq:
            raise UsageError(f"expected NAME=VALUE, got {p!r}")
        env[name.strip()] = int(value) if value.strip().isdigit() else value.strip()
    return env


def cmd_eval(args) -> Report:
    model, cf = _model_and_choice(args)
    env = _env(args.env)
    rep = Report("evaluation")
    sig = Signature()
    for name, table in model.functions.items():
        sig.functions[name] = len(next(iter(table), ()))
    for name, ext in model.predicates.items():
        sig.predicates[name] = len(next(iter(ext), ()))
    for node in expressions_arg(args.formula, sig):
        value = evaluate(node, model, cf, env)
        rep.add(f"{to_text(node)} = {value}")
        rep.data.setdefault("values", []).append(value)
    return rep


def cmd_check_model(args) -> Report:
    model, cf = _model_and_choice(args)
    formulas = formulas_arg(args.formula)
    rep = Report("sentences in the model" + (" under every choice function" if args.all_choices else ""))
    choices = list(all_choice_functions(model.universe)) if args.all_choices else [cf]
    for phi in formulas:
        if free_vars(phi):
            raise UsageError(f"not a sentence: {to_text(phi)}")
        failing = [c for c in choices if not evaluate(phi, model, c)]
        if failing:
            rep.fail(f"{to_text(phi)}: false", {"formula": to_text(phi), "choice": failing[0].as_table()})
        else:
            rep.add(f"{to_text(phi)}: true")
    rep.data = {"formulas": len(formulas), "choices": len(choices)}
    return rep


def _fmt_set(s) -> str:
    return "{" + ", ".join(sorted(map(str, s))) + "}"


def cmd_heyting(args) -> Report:
    sf = parse_space(read_text(args.space))
    rep = Report("Heyting value")
    for phi in formulas_arg(args.formula):
        value = heyting_eval(phi, sf.space, sf.interp)
        full = value == sf.space.full
        rep.add(f"{to_text(phi)} = {_fmt_set(value)}" + ("  (whole space)" if full else ""))
        rep.data.setdefault("values", []).append(sorted(map(str, value)))
        if args.require_valid and not full:
            rep.fail(f"{to_text(phi)} is not the whole space", sorted(map(str, value)))
    return rep


def cmd_kripke_check(args) -> Report:
    kf = parse_kripke(read_text(args.structure))
    ks = kf.structure
    rep = Report("Kripke forcing")
    rep.add(describe_structure(ks))
    if kf.choice.maps:
        wc_rep = validate_world_choice(ks, kf.choice)
        rep.lines += [f"choice: {line}" for line in wc_rep.lines]
        if not wc_rep:
            rep.fail("the choice maps violate their conditions", wc_rep.witness)
    for phi in formulas_arg(args.formula) if args.formula else []:
        worlds = forced_worlds(ks, phi, kf.choice)
        rep.add(f"{to_text(phi)} forced at {_fmt_set(worlds)}")
        rep.data.setdefault("forced", {})[to_text(phi)] = sorted(map(str, worlds))
        for w in worlds:
            for v in ks.successors(w):
                if v not in worlds:
                    rep.fail(f"persistence broken: {to_text(phi)} forced at {w} but not at {v}", (w, v))
        if args.world is not None and _world(ks, args.world) not in worlds:
            rep.fail(f"{to_text(phi)} is not forced at {args.world}", args.world)
    return rep


def _world(ks, name: str):
    for w in ks.worlds:
        if str(w) == name:
            return w
    raise UsageError(f"unknown world {name!r}")


def cmd_lem_search(args) -> Report:
    o = bell_lem_search(args.worlds, args.domain, require_extensionality=not args.no_extensionality, reading=args.reading)
    what = "without extensionality" if args.no_extensionality else f"extensionality read as {args.reading}"
    rep = Report(f"excluded-middle search up to {args.worlds} worlds, {args.domain} elements, {what}")
    rep.add(f"{o.candidates} candidates, {o.admitted} admitted")
    rep.add(f"{o.countermodels} countermodels")
    if o.example is not None:
        ks, fa, fb = o.example
        rep.add(f"e.g. {describe_structure(ks)}; eps_A {fa}; eps_B {fb}")
        if not args.no_extensionality:
            rep.fail("a structure forces the schemas but refutes excluded middle", describe_structure(ks))
    rep.data = {"candidates": o.candidates, "admitted": o.admitted, "countermodels": o.countermodels}
    return rep


def _derivation(path: str):
    return parse_derivation(read_text(path))


def cmd_prove_check(args) -> Report:
    d = _derivation(args.derivation)
    return check(d, get_profile(args.calculus) if args.calculus else None)


def cmd_eliminate(args) -> Report:
    d = _derivation(args.derivation)
    before = check(d, "CP_eps*")
    out = eliminate_one_epsilon(d) if args.one_step else second_epsilon_theorem(d)
    after = check(out, "CP_eps" if args.one_step else "CP")
    rep = Report("epsilon elimination" + (" (one step)" if args.one_step else ""))
    rep.add(f"input: {len(d.lines)} lines, {len(d.epsilon_terms())} epsilon terms")
    rep.add(f"output: {len(out.lines)} lines, {len(out.epsilon_terms())} epsilon terms")
    same = to_text(out.conclusion) == to_text(d.conclusion) if d.conclusion is not None else True
    rep.add(f"conclusion {to_text(out.conclusion) if out.conclusion is not None else '(none)'}")
    if not before:
        rep.fail("the input does not check under CP_eps*")
    if not after:
        rep.fail(f"the output does not check: {after.lines[-1]}", after.witness)
    if not same:
        rep.fail("the conclusion changed")
    if not args.one_step and not out.is_epsilon_free():
        rep.fail("epsilon terms remain in the output")
    if args.trace:
        rep.lines += ["derivation:"] + [f"  {line}" for line in out.to_text().splitlines()]
    rep.data = {
        "input_lines": len(d.lines),
        "output_lines": len(out.lines),
        "epsilon_terms": len(out.epsilon_terms()),
        "checked": bool(after),
    }
    rep.artifact = out.to_text()
    return rep


def cmd_replay_induction(args) -> Report:
    d, rep = replay_induction(one_formula(args.formula), proper=not args.improper, cap=args.cap)
    if args.trace:
        rep.lines += ["derivation:"] + [f"  {line}" for line in d.to_text().splitlines()]
    rep.artifact = d.to_text()
    return rep


def _solve_file(job: tuple) -> Report:
    path, cap, max_iter, trace, oracle = job
    problem = parse_problem(read_text(path))
    interp = ArithInterp(cap=cap)
    result = solve(problem, interp, max_iter, trace)
    parts = [result.report]
    if result.resolved:
        parts.append(resolve_report(result.assignment, problem, interp))
    rep = merge(f"{path}", parts)
    rep.data["resolved"] = result.resolved
    if oracle:
        found = brute_force_resolving(problem, oracle)
        rep.add(f"brute force below {oracle}: " + ("a resolving assignment exists" if found else "none found"))
        rep.data["oracle"] = found is not None
    return rep


def cmd_h_substitute(args) -> Report:
    jobs = [(p, args.cap, args.max_iter, args.trace, args.oracle) for p in args.problem]
    parts = ordered_map(_solve_file, jobs)
    if len(parts) == 1:
        return parts[0]
    return merge(f"epsilon substitution on {len(parts)} problems", parts)


def cmd_demo(args) -> Report:
    return demos.run_demo(args.name, args.cap)


# ----------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="emit the report as JSON")
    common.add_argument("--output", metavar="PATH", help="also write the result (or the produced derivation) here")
    common.add_argument("--trace", action="store_true", help="show intermediate steps")
    common.add_argument("--unicode", action="store_true", help="print formulas with logical symbols")

    p = argparse.ArgumentParser(prog="epsilon-kernel", description="Epsilon calculus toolkit.")
    sub = p.add_subparsers(dest="command", required=True, metavar="COMMAND")

    def add(name: str, fn, help: str) -> argparse.ArgumentParser:
        sp = sub.add_parser(name, parents=[common], help=help, description=help)
        sp.set_defaults(func=fn)
        return sp

    sp = add("translate", cmd_translate, "replace quantifiers by epsilon terms")
    sp.add_argument("--formula", required=True)
    sp.add_argument("--mode", choices=MODES, default="classical")

    sp = add("prenex", cmd_prenex, "prenex normal form")
    sp.add_argument("--formula", required=True)

    sp = add("skolemize", cmd_skolemize, "Skolem resolution with epsilon-defined symbols")
    sp.add_argument("--formula", required=True, help="axioms, one per line")
    sp.add_argument("--prenex", action="store_true", help="put the axioms in prenex form first")

    for name, fn, help in (
        ("eval", cmd_eval, "evaluate formulas or terms in a finite model"),
        ("check-model", cmd_check_model, "check that sentences hold in a finite model"),
    ):
        sp = add(name, fn, help)
        sp.add_argument("--model", required=True)
        sp.add_argument("--formula", required=True)
        sp.add_argument("--phi", help="'min' or a choice table file (default: the model's own table, else min)")
        if name == "eval":
            sp.add_argument("--env", nargs="*", default=[], metavar="NAME=VALUE")
        else:
            sp.add_argument("--all-choices", action="store_true", help="require truth under every choice function")

    sp = add("heyting", cmd_heyting, "open-set value of formulas in a finite space")
    sp.add_argument("--space", required=True)
    sp.add_argument("--formula", required=True)
    sp.add_argument("--require-valid", action="store_true", help="fail unless every value is the whole space")

    sp = add("kripke-check", cmd_kripke_check, "forcing, persistence and choice maps in a Kripke structure")
    sp.add_argument("--structure", required=True)
    sp.add_argument("--formula")
    sp.add_argument("--world", help="fail unless each formula is forced at this world")

    sp = add("lem-search", cmd_lem_search, "search for structures refuting excluded middle under the epsilon schemas")
    sp.add_argument("--worlds", type=positive, default=3)
    sp.add_argument("--domain", type=positive, default=2)
    sp.add_argument("--no-extensionality", action="store_true")
    sp.add_argument("--reading", choices=("forcing", "global"), default="forcing")

    sp = add("prove-check", cmd_prove_check, "check a derivation")
    sp.add_argument("--derivation", required=True)
    sp.add_argument("--calculus", help="override the file's calculus line, e.g. 'CP_eps* +E2'")

    sp = add("eliminate-epsilon", cmd_eliminate, "remove epsilon terms from a proper derivation")
    sp.add_argument("--derivation", required=True)
    sp.add_argument("--one-step", action="store_true", help="eliminate a single innermost term")

    sp = add("replay-induction", cmd_replay_induction, "derive A(s) for the least counterexample s and check it")
    sp.add_argument("--formula", required=True)
    sp.add_argument("--cap", type=positive, default=12)
    sp.add_argument("--improper", action="store_true", help="allow formulas making the term improper")

    sp = add("h-substitute", cmd_h_substitute, "run the epsilon-substitution method on critical formulas")
    sp.add_argument("--problem", required=True, nargs="+")
    sp.add_argument("--cap", type=positive, default=64)
    sp.add_argument("--max-iter", type=positive)
    sp.add_argument("--oracle", type=positive, metavar="CAP", help="also brute-force assignments below CAP")

    sp = add("demo", cmd_demo, "run a scripted scenario")
    sp.add_argument("name", choices=sorted(demos.DEMOS))
    sp.add_argument("--cap", type=positive)
    return p


# commands whose output is a result rather than a verdict print it bare
BARE = {"translate", "prenex", "skolemize", "eval"}


def emit(rep: Report, args, out) -> None:
    if args.json:
        text = rep.to_json()
    elif args.command in BARE:
        text = "\n".join(rep.lines)
    else:
        text = rep.to_text()
    print(text, file=out)
    if args.output:
        doc = rep.artifact if rep.artifact is not None and not args.json else text + "\n"
        Path(args.output).write_text(doc, encoding="utf-8")


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        rep = args.func(args)
    except (UsageError, ValueError, ArithmeticError) as exc:  # input and domain errors
        if getattr(args, "json", False):
            print(json.dumps({"error": str(exc), "command": args.command}), file=sys.stdout)
        print(f"epsilon-kernel {args.command}: error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"epsilon-kernel {args.command}: error: {exc}", file=sys.stderr)
        return 2
    emit(rep, args, sys.stdout)
    return 0 if rep.passed else 1


if __name__ == "__main__":
    sys.exit(main())
