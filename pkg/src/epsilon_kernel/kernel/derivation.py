"""Hilbert-style derivations: lines, justifications and the text format."""

from __future__ import annotations

import re
from dataclasses import dataclass, field, replace
from typing import Iterable, Optional

from ..syntax.ast import Formula
from ..syntax.ops import eps_terms, has_eps
from ..syntax.parser import ParseError, Signature, is_declaration, parse_declaration, parse_formula, strip_comment
from ..syntax.printer import to_text

KINDS = ("premise", "hyp", "taut", "axiom", "mp", "gen", "exgen")


@dataclass(frozen=True)
class Justification:
    """How a line is obtained.

    ``premise``      a member of the premise set
    ``hyp``          a local hypothesis (only produced while transforming proofs)
    ``taut i j ..``  tautological consequence of the cited lines
    ``axiom NAME``   instance of a schema; ``detail`` records the instantiation
    ``mp i j``       from ``A`` (line i) and ``A -> B`` (line j)
    ``gen i [v]``    universal generalization on the variable ``v``
    ``exgen i [v]``  existential introduction in the antecedent on ``v``
    """

    kind: str
    refs: tuple[int, ...] = ()
    schema: Optional[str] = None
    eigen: Optional[str] = None
    detail: Optional[str] = field(default=None, compare=False)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown justification {self.kind!r}")

    def __str__(self) -> str:
        if self.kind == "axiom":
            return f"axiom {self.schema}"
        parts = [self.kind, *map(str, self.refs)]
        if self.eigen:
            parts.append(self.eigen)
        return " ".join(parts)


def premise() -> Justification:
    return Justification("premise")


def hyp() -> Justification:
    return Justification("hyp")


def taut(*refs: int) -> Justification:
    return Justification("taut", tuple(refs))


def axiom(schema: str) -> Justification:
    return Justification("axiom", schema=schema)


def mp(i: int, j: int) -> Justification:
    return Justification("mp", (i, j))


def gen(i: int, var: Optional[str] = None) -> Justification:
    return Justification("gen", (i,), eigen=var)


def exgen(i: int, var: Optional[str] = None) -> Justification:
    return Justification("exgen", (i,), eigen=var)


@dataclass(frozen=True)
class Line:
    number: int
    formula: Formula
    just: Justification

    def __str__(self) -> str:
        return f"{self.number}. {to_text(self.formula)} ; {self.just}"


@dataclass
class Derivation:
    lines: list[Line] = field(default_factory=list)
    calculus: str = "CP"
    signature: Signature = field(default_factory=Signature)
    labels: dict[str, int] = field(default_factory=dict)

    def add(self, formula: Formula, just: Justification, label: Optional[str] = None) -> int:
        n = len(self.lines) + 1
        self.lines.append(Line(n, formula, just))
        if label is not None:
            self.labels[label] = n
        return n

    def line(self, n: int) -> Line:
        if not 1 <= n <= len(self.lines):
            raise IndexError(f"no line {n}")
        return self.lines[n - 1]

    @property
    def conclusion(self) -> Optional[Formula]:
        return self.lines[-1].formula if self.lines else None

    @property
    def premises(self) -> list[Formula]:
        return [ln.formula for ln in self.lines if ln.just.kind == "premise"]

    def epsilon_terms(self) -> list:
        out: dict = {}
        for ln in self.lines:
            for e in eps_terms(ln.formula):
                out.setdefault(e, None)
        return list(out)

    def is_epsilon_free(self) -> bool:
        return not any(has_eps(ln.formula) for ln in self.lines)

    def copy(self) -> "Derivation":
        return Derivation(list(self.lines), self.calculus, self.signature.copy(), dict(self.labels))

    def renumbered(self) -> "Derivation":
        """Lines numbered 1..n in order (they always are, this re-validates)."""
        out = Derivation(calculus=self.calculus, signature=self.signature.copy(), labels=dict(self.labels))
        for ln in self.lines:
            out.lines.append(replace(ln, number=len(out.lines) + 1))
        return out

    def to_text(self) -> str:
        head = [f"calculus {self.calculus}"]
        body = [str(ln) for ln in self.lines]
        return "\n".join(head + body) + "\n"

    def __str__(self) -> str:
        return self.to_text()


# ------------------------------------------------------------ text format

_LINE = re.compile(r"(\d+)\s*\.\s*(.*?)\s*;\s*(.*)\Z")


def parse_justification(text: str, line: int = 1) -> Justification:
    parts = text.replace(",", " ").split()
    if not parts:
        raise ParseError("missing justification", line)
    kind, args = parts[0], parts[1:]
    if kind not in KINDS:
        raise ParseError(f"unknown justification {kind!r}", line)
    if kind == "axiom":
        if len(args) != 1:
            raise ParseError("axiom needs exactly one schema name", line)
        return axiom(args[0])
    refs, eigen = [], None
    for a in args:
        if a.isdigit():
            refs.append(int(a))
        elif kind in ("gen", "exgen") and eigen is None:
            eigen = a
        else:
            raise ParseError(f"bad justification argument {a!r}", line)
    expected = {"premise": 0, "hyp": 0, "mp": 2, "gen": 1, "exgen": 1}
    if kind in expected and len(refs) != expected[kind]:
        raise ParseError(f"{kind} takes {expected[kind]} line references", line)
    return Justification(kind, tuple(refs), eigen=eigen)


def parse_derivation(text: str, sig: Optional[Signature] = None) -> Derivation:
    """Read the numbered-line format (see docs/formats.md)."""
    return parse_derivation_lines(text.splitlines(), sig)


def parse_derivation_lines(lines: Iterable[str], sig: Optional[Signature] = None) -> Derivation:
    d = Derivation(signature=sig or Signature())
    for lineno, raw in enumerate(lines, 1):
        text = strip_comment(raw)
        if not text:
            continue
        if text.startswith("calculus "):
            d.calculus = text.split(None, 1)[1].strip()
            continue
        if is_declaration(text):
            kind, rest = text.split(None, 1)
            parse_declaration(kind, rest, d.signature, lineno)
            continue
        m = _LINE.match(text)
        if not m:
            raise ParseError("expected 'n. formula ; justification'", lineno)
        number = int(m.group(1))
        if number != len(d.lines) + 1:
            raise ParseError(f"line number {number} out of sequence (expected {len(d.lines) + 1})", lineno)
        try:
            phi = parse_formula(m.group(2), d.signature)
        except ParseError as exc:
            raise type(exc)(exc.message, lineno, exc.col) from None
        d.signature.absorb(phi)
        d.lines.append(Line(number, phi, parse_justification(m.group(3), lineno)))
    return d

