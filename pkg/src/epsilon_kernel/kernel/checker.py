"""Calculus profiles and the line-by-line derivation checker."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from ..report import Report
from ..syntax.ast import App, Bound, Eps, Exists, Expr, Forall, Formula, Implies, Var, conj
from ..syntax.ops import free_vars, function_symbols, has_eps, is_proper, is_quantifier_free, rewrite
from ..syntax.printer import to_text
from .derivation import Derivation, Line
from .schemas import NO_HOLE, NotAnInstance, canonical_schema, eps_instance, match_instance, recognize
from .tautology import countervaluation, is_intuitionistic_tautology

BASE_SCHEMAS = frozenset({"Q1", "Q2", "eq-refl", "eq-subst"})
EPS_SCHEMAS = frozenset({"eps", "eps-exists", "eq-cong"})
ARITH_SCHEMAS = frozenset({"E1", "E2", "eps-least"})


class MalformedDerivation(ValueError):
    """A justification cites a line that is not earlier in the derivation."""


@dataclass(frozen=True)
class CalculusProfile:
    name: str
    schemas: frozenset[str]
    quantifiers: bool = True
    proper_only: bool = False
    intuitionistic: bool = False
    allow_hypotheses: bool = False

    def with_schemas(self, *names: str) -> "CalculusProfile":
        names = tuple(canonical_schema(n) for n in names)
        label = self.name + "".join(f" +{n}" for n in names if n not in self.schemas)
        return CalculusProfile(
            label, self.schemas | set(names), self.quantifiers, self.proper_only, self.intuitionistic, self.allow_hypotheses
        )

    def allowing_hypotheses(self) -> "CalculusProfile":
        return CalculusProfile(self.name, self.schemas, self.quantifiers, self.proper_only, self.intuitionistic, True)


PROFILES = {
    "CP": CalculusProfile("CP", BASE_SCHEMAS),
    "CP_eps": CalculusProfile("CP_eps", BASE_SCHEMAS | EPS_SCHEMAS),
    "CP_eps*": CalculusProfile("CP_eps*", BASE_SCHEMAS | EPS_SCHEMAS, proper_only=True),
    "CE": CalculusProfile("CE", frozenset({"eq-refl", "eq-subst"}), quantifiers=False),
    "CPI_eps": CalculusProfile("CPI_eps", BASE_SCHEMAS | EPS_SCHEMAS, intuitionistic=True),
}
_SPELLINGS = {"CP_ε": "CP_eps", "CP_ε*": "CP_eps*", "CPI_ε": "CPI_eps", "CPeps": "CP_eps"}


def get_profile(text: str) -> CalculusProfile:
    """``"CP_eps* +E2"``: a base profile followed by extra schemas."""
    words = text.replace("+", " +").split()
    if not words:
        raise ValueError("empty calculus name")
    base = _SPELLINGS.get(words[0], words[0])
    if base not in PROFILES:
        raise ValueError(f"unknown calculus {words[0]!r} (known: {', '.join(PROFILES)})")
    extra = [w.lstrip("+") for w in words[1:]]
    prof = PROFILES[base]
    return prof.with_schemas(*extra) if extra else prof


# ------------------------------------------------------------ quantifier rules


def abstract_symbol(node: Expr, name: str) -> Expr:
    """Turn the variable or 0-ary constant ``name`` into the outermost bound variable."""

    def fn(n: Expr, d: int) -> Optional[Expr]:
        if isinstance(n, Var) and n.name == name:
            return Bound(d)
        if isinstance(n, App) and n.symbol == name and not n.args:
            return Bound(d)
        if isinstance(n, Bound) and n.index >= d:
            return Bound(n.index + 1)
        return None

    return rewrite(node, fn)


def mentions(node: Expr, name: str) -> bool:
    return name in free_vars(node) or function_symbols(node).get(name) == 0


@dataclass(frozen=True)
class QuantifierStep:
    """How a ``gen`` or ``exgen`` line relates to its source line."""

    form: str  # "plain" (A(v) / forall x. A(x)) or "cond" (C -> A(v) / C -> forall x. A(x))
    eigen: Optional[str]  # None for a vacuous quantifier
    side: Optional[Formula] = None  # the untouched side C


def _eigen_name(t) -> Optional[str]:
    if isinstance(t, Var):
        return t.name
    if isinstance(t, App) and not t.args:
        return t.symbol
    return None


def analyze_gen(source: Formula, target: Formula) -> QuantifierStep:
    if isinstance(target, Forall):
        t = match_instance(target.body, source)
        if t is NO_HOLE:
            return QuantifierStep("plain", None)
        if t is not None and _eigen_name(t) and not mentions(target, _eigen_name(t)):
            return QuantifierStep("plain", _eigen_name(t))
    if isinstance(target, Implies) and isinstance(target.right, Forall) and isinstance(source, Implies):
        if source.left == target.left:
            t = match_instance(target.right.body, source.right)
            if t is NO_HOLE:
                return QuantifierStep("cond", None, source.left)
            if t is not None and _eigen_name(t) and not mentions(target, _eigen_name(t)):
                return QuantifierStep("cond", _eigen_name(t), source.left)
    raise NotAnInstance("gen: conclusion is not a generalization of the cited line")


def analyze_exgen(source: Formula, target: Formula) -> QuantifierStep:
    if isinstance(source, Implies) and isinstance(target, Implies) and isinstance(target.left, Exists):
        if source.right == target.right:
            t = match_instance(target.left.body, source.left)
            if t is NO_HOLE:
                return QuantifierStep("cond", None, source.right)
            if t is not None and _eigen_name(t) and not mentions(target, _eigen_name(t)):
                return QuantifierStep("cond", _eigen_name(t), source.right)
    raise NotAnInstance("exgen: expected A(v) -> C  to  (exists x. A(x)) -> C")


# ------------------------------------------------------------------ checking


@dataclass
class LineCheck:
    line: Line
    ok: bool
    message: str = ""


@dataclass
class CheckResult:
    profile: CalculusProfile
    checks: list[LineCheck] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    @property
    def first_bad(self) -> Optional[LineCheck]:
        return next((c for c in self.checks if not c.ok), None)


def check_line(d: Derivation, ln: Line, prof: CalculusProfile, assumptions: list[Formula]) -> str:
    """Validate one line; returns a short description or raises NotAnInstance."""
    phi, j = ln.formula, ln.just
    for r in j.refs:
        if not 1 <= r < ln.number:
            raise MalformedDerivation(f"line {ln.number}: reference {r} is not an earlier line")
    if not prof.quantifiers and not is_quantifier_free(phi):
        raise NotAnInstance(f"{prof.name} admits quantifier-free lines only")
    if prof.proper_only and not is_proper(phi):
        raise NotAnInstance("improper formula: an epsilon term depends on an outside variable")
    ref = [d.line(r).formula for r in j.refs]
    if j.kind == "premise":
        return "premise"
    if j.kind == "hyp":
        if not prof.allow_hypotheses:
            raise NotAnInstance("hypothesis lines are not allowed in a finished derivation")
        return "hypothesis"
    if j.kind == "axiom":
        name = canonical_schema(j.schema or "")
        if name not in prof.schemas:
            raise NotAnInstance(f"schema {name} is not admitted in {prof.name}")
        return f"{name}: {recognize(phi, name)}"
    if j.kind == "taut":
        goal = Implies(conj(*ref), phi) if ref else phi
        if prof.intuitionistic:
            if not is_intuitionistic_tautology(goal):
                raise NotAnInstance("not an intuitionistic propositional consequence of the cited lines")
            return "intuitionistic tautology"
        cv = countervaluation(goal)
        if cv is not None:
            falsify = ", ".join(f"{to_text(a)}={'T' if v else 'F'}" for a, v in cv.items())
            raise NotAnInstance(f"not a tautological consequence of the cited lines (falsified by {falsify})")
        return "tautology"
    if j.kind == "mp":
        a, b = ref
        if b == Implies(a, phi) or a == Implies(b, phi):
            return "modus ponens"
        raise NotAnInstance("modus ponens: cited lines are not A and A -> B")
    if j.kind in ("gen", "exgen"):
        if not prof.quantifiers:
            raise NotAnInstance(f"{prof.name} has no quantifier rules")
        step = (analyze_gen if j.kind == "gen" else analyze_exgen)(ref[0], phi)
        if j.eigen is not None and step.eigen is not None and j.eigen != step.eigen:
            raise NotAnInstance(f"{j.kind}: generalized symbol is {step.eigen}, not {j.eigen}")
        if step.eigen is not None:
            for a in assumptions:
                if mentions(a, step.eigen):
                    raise NotAnInstance(f"{j.kind}: {step.eigen} occurs in the assumption {to_text(a)}")
        return f"{j.kind} on {step.eigen or 'a vacuous variable'}"
    raise NotAnInstance(f"unknown justification {j.kind}")


def check(d: Derivation, profile: CalculusProfile | str | None = None) -> Report:
    prof = get_profile(profile or d.calculus) if not isinstance(profile, CalculusProfile) else profile
    result = check_derivation(d, prof)
    rep = Report(f"check under {prof.name}")
    for c in result.checks:
        status = "ok" if c.ok else "FAIL"
        rep.add(f"{c.line.number}. {to_text(c.line.formula)} ; {c.line.just} [{status}: {c.message}]")
    bad = result.first_bad
    if bad is not None:
        rep.fail(f"line {bad.line.number} rejected: {bad.message}", {"line": bad.line.number, "reason": bad.message})
    elif not d.lines:
        rep.add("empty derivation")
    rep.data = {
        "calculus": prof.name,
        "lines": len(d.lines),
        "conclusion": to_text(d.conclusion) if d.conclusion is not None else None,
        "premises": [to_text(p) for p in d.premises],
        "epsilon_terms": len(d.epsilon_terms()),
        "bad_line": bad.line.number if bad else None,
    }
    return rep


def check_derivation(d: Derivation, prof: CalculusProfile) -> CheckResult:
    """Stops at the first bad line: later lines may depend on it."""
    assumptions = [ln.formula for ln in d.lines if ln.just.kind in ("premise", "hyp")]
    out = CheckResult(prof)
    for ln in d.lines:
        try:
            msg = check_line(d, ln, prof, assumptions)
        except NotAnInstance as exc:
            out.checks.append(LineCheck(ln, False, str(exc)))
            break
        out.checks.append(LineCheck(ln, True, msg))
    return out


def is_valid(d: Derivation, profile: CalculusProfile | str | None = None) -> bool:
    prof = get_profile(profile or d.calculus) if not isinstance(profile, CalculusProfile) else profile
    return check_derivation(d, prof).ok


# ------------------------------------------------------------ critical formulas


@dataclass(frozen=True)
class CriticalFormula:
    formula: Formula
    term: Eps
    witness: Optional[Expr]
    line: int

    def __str__(self) -> str:
        w = to_text(self.witness) if self.witness is not None else "-"
        return f"line {self.line}: {to_text(self.formula)}  [term {to_text(self.term)}, witness {w}]"


def critical_formulas(d: Derivation) -> list[CriticalFormula]:
    """Every line justified by the epsilon schema, in line order."""
    out = []
    for ln in d.lines:
        if ln.just.kind == "axiom" and canonical_schema(ln.just.schema or "") == "eps":
            inst = eps_instance(ln.formula)
            out.append(CriticalFormula(ln.formula, inst.term, inst.witness, ln.number))
    return out


def uses_epsilon(d: Derivation) -> bool:
    return any(has_eps(ln.formula) for ln in d.lines)
