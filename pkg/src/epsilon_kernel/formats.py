"""Line-oriented text formats for models, spaces and Kripke structures.

Every format ignores blank lines and ``#`` comments.  Elements are bare
tokens; tokens made of digits are read as integers so that numerals in
formulas denote them.  See docs/formats.md for the full grammar.

Model file::

    universe 0 1 2
    const c = 1
    func f/1: 0 -> 1, 1 -> 2, 2 -> 2
    pred P/1: 0, 2
    pred R/2: (0, 1) (1, 2)
    phi min
    phi {1, 2} -> 2

Topology file::

    points a b c
    open a
    pred X: a

Kripke file::

    worlds M0 M1
    root M0
    edge M0 M1
    domain M0: a
    domain M1: a b
    pred F/1 M1: b
    pred p/0 M1
    choice M1 b: F
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from .classical import ChoiceFunction, Element, FiniteModel, ModelError
from .kripke import KripkeError, KripkeStructure, WorldChoice
from .syntax.ast import Eps
from .syntax.ops import abstract, free_vars
from .syntax.parser import ParseError, parse_formula, strip_comment
from .topology import FiniteTopSpace, TopologyError


class FormatError(ValueError):
    def __init__(self, message: str, line: int = 0):
        super().__init__(f"line {line}: {message}" if line else message)
        self.line = line


def element(token: str) -> Element:
    token = token.strip()
    if not token:
        raise FormatError("empty element")
    return int(token) if token.isdigit() else token


def _tokens(text: str) -> list[Element]:
    return [element(t) for t in re.split(r"[\s,]+", text.strip()) if t]


def _tuples(text: str, arity: int, line: int) -> list[tuple]:
    """``a, b`` for unary, ``(a, b) (c, d)`` for higher arities."""
    text = text.strip()
    if not text:
        return []
    if arity == 1:
        return [(e,) for e in _tokens(text)]
    groups = re.findall(r"\(([^()]*)\)", text)
    if re.sub(r"\(([^()]*)\)", "", text).strip(" ,"):
        raise FormatError(f"tuples must be written as (a, b): {text!r}", line)
    out = []
    for g in groups:
        tup = tuple(_tokens(g))
        if len(tup) != arity:
            raise FormatError(f"expected {arity} elements in ({g})", line)
        out.append(tup)
    return out


def _signature_item(head: str, line: int) -> tuple[str, int]:
    m = re.fullmatch(r"([A-Za-z_][A-Za-z0-9_']*)(?:/(\d+))?", head.strip())
    if not m:
        raise FormatError(f"bad symbol {head!r}", line)
    return m.group(1), int(m.group(2) or 1)


def _lines(text: str):
    for n, raw in enumerate(text.splitlines(), 1):
        body = strip_comment(raw)
        if body:
            kw, _, rest = body.partition(" ")
            yield n, kw, rest.strip()


# ---------------------------------------------------------------- models


@dataclass
class ModelFile:
    model: FiniteModel
    choice: Optional[ChoiceFunction] = None


def parse_model(text: str) -> ModelFile:
    universe: Optional[tuple] = None
    functions: dict[str, dict[tuple, Element]] = {}
    predicates: dict[str, frozenset] = {}
    phi_entries: dict[frozenset, Element] = {}
    phi_min = False
    for n, kw, rest in _lines(text):
        if kw == "universe":
            universe = tuple(_tokens(rest))
        elif kw == "const":
            name, eq, value = rest.partition("=")
            if not eq:
                raise FormatError("expected const NAME = ELEMENT", n)
            functions[name.strip()] = {(): element(value)}
        elif kw == "func":
            head, colon, body = rest.partition(":")
            if not colon:
                raise FormatError("expected func NAME/ARITY: args -> value, ...", n)
            name, arity = _signature_item(head, n)
            table = functions.setdefault(name, {})
            for entry in filter(None, (e.strip() for e in re.split(r",(?![^()]*\))", body))):
                args, arrow, value = entry.partition("->")
                if not arrow:
                    raise FormatError(f"missing '->' in {entry!r}", n)
                key = tuple(_tokens(args.replace("(", " ").replace(")", " ")))
                if len(key) != arity:
                    raise FormatError(f"{name} takes {arity} arguments: {entry!r}", n)
                table[key] = element(value)
        elif kw == "pred":
            head, _, body = rest.partition(":")
            name, arity = _signature_item(head, n)
            if arity == 0:
                # pred p/0: true  or  pred p/0: false
                predicates[name] = frozenset({()}) if body.strip() in ("", "true") else frozenset()
            else:
                predicates[name] = frozenset(_tuples(body, arity, n))
        elif kw == "phi":
            if rest == "min":
                phi_min = True
                continue
            m = re.fullmatch(r"\{([^}]*)\}\s*->\s*(\S+)", rest)
            if not m:
                raise FormatError("expected phi min or phi {a, b} -> a", n)
            phi_entries[frozenset(_tokens(m.group(1)))] = element(m.group(2))
        else:
            raise FormatError(f"unknown keyword {kw!r}", n)
    if universe is None:
        raise FormatError("missing universe line")
    try:
        model = FiniteModel(universe, functions, predicates)
        choice = ChoiceFunction(universe, phi_entries) if phi_entries or phi_min else None
    except ModelError as exc:
        raise FormatError(str(exc)) from None
    return ModelFile(model, choice)


def parse_choice(text: str, universe) -> ChoiceFunction:
    """A standalone choice table: ``min`` or lines ``{a, b} -> a``."""
    entries: dict[frozenset, Element] = {}
    for n, raw in enumerate(text.splitlines(), 1):
        body = strip_comment(raw)
        if not body or body == "min":
            continue
        if body.startswith("phi "):
            body = body[4:].strip()
        m = re.fullmatch(r"\{([^}]*)\}\s*->\s*(\S+)", body)
        if not m:
            raise FormatError("expected {a, b} -> a", n)
        entries[frozenset(_tokens(m.group(1)))] = element(m.group(2))
    try:
        return ChoiceFunction(universe, entries)
    except ModelError as exc:
        raise FormatError(str(exc)) from None


def format_model(model: FiniteModel, choice: Optional[ChoiceFunction] = None) -> str:
    out = ["universe " + " ".join(map(str, model.universe))]
    for name, table in sorted(model.functions.items()):
        arity = len(next(iter(table))) if table else 0
        if arity == 0:
            out.append(f"const {name} = {table[()]}")
        else:
            entries = ", ".join(f"{' '.join(map(str, k))} -> {v}" for k, v in table.items())
            out.append(f"func {name}/{arity}: {entries}")
    for name, ext in sorted(model.predicates.items()):
        tuples = sorted(ext, key=str)
        arity = len(tuples[0]) if tuples else 1
        if arity == 0:
            out.append(f"pred {name}/0: true")
        elif arity == 1:
            out.append(f"pred {name}/1: " + ", ".join(str(t[0]) for t in tuples))
        else:
            out.append(f"pred {name}/{arity}: " + " ".join("(" + ", ".join(map(str, t)) + ")" for t in tuples))
    if choice is not None:
        for subset, value in sorted(choice.table.items(), key=lambda kv: (len(kv[0]), sorted(map(str, kv[0])))):
            out.append("phi {" + ", ".join(str(e) for e in model.universe if e in subset) + f"}} -> {value}")
    return "\n".join(out) + "\n"


# -------------------------------------------------------------- topology


@dataclass
class SpaceFile:
    space: FiniteTopSpace
    interp: dict[str, frozenset] = field(default_factory=dict)


def parse_space(text: str) -> SpaceFile:
    points: Optional[tuple] = None
    opens: list[frozenset] = []
    interp: dict[str, frozenset] = {}
    for n, kw, rest in _lines(text):
        if kw == "points":
            points = tuple(_tokens(rest))
        elif kw == "open":
            opens.append(frozenset(_tokens(rest)))
        elif kw == "pred":
            name, _, body = rest.partition(":")
            interp[name.strip()] = frozenset(_tokens(body))
        else:
            raise FormatError(f"unknown keyword {kw!r}", n)
    if points is None:
        raise FormatError("missing points line")
    full = frozenset(points)
    try:
        space = FiniteTopSpace(points, frozenset(opens) | {frozenset(), full})
    except TopologyError as exc:
        raise FormatError(str(exc)) from None
    for name, ext in interp.items():
        if not space.is_open(ext):
            raise FormatError(f"extension of {name} is not open")
    return SpaceFile(space, interp)


# ---------------------------------------------------------------- kripke


@dataclass
class KripkeFile:
    structure: KripkeStructure
    choice: WorldChoice = field(default_factory=WorldChoice)


def parse_kripke(text: str) -> KripkeFile:
    worlds: Optional[tuple] = None
    root = None
    edges: set[tuple] = set()
    domains: dict = {}
    preds: dict = {}
    choices: list[tuple[int, str, object, Element]] = []
    transitive = True
    for n, kw, rest in _lines(text):
        if kw == "worlds":
            worlds = tuple(_tokens(rest))
        elif kw == "root":
            root = element(rest)
        elif kw == "edge":
            parts = _tokens(rest)
            if len(parts) != 2:
                raise FormatError("expected edge FROM TO", n)
            edges.add(tuple(parts))
        elif kw == "domain":
            w, _, body = rest.partition(":")
            domains[element(w)] = frozenset(_tokens(body))
        elif kw == "pred":
            head, _, body = rest.partition(":")
            parts = head.split()
            if len(parts) != 2:
                raise FormatError("expected pred NAME/ARITY WORLD: tuples", n)
            name, arity = _signature_item(parts[0], n)
            w = element(parts[1])
            ext = frozenset({()}) if arity == 0 else frozenset(_tuples(body, arity, n))
            preds.setdefault(w, {}).setdefault(name, set()).update(ext)
        elif kw == "choice":
            # choice M1 b: F  -- eps x. F(x) denotes b at M1
            head, _, body = rest.partition(":")
            parts = head.split()
            if len(parts) != 2 or not body.strip():
                raise FormatError("expected choice WORLD ELEMENT: PRED", n)
            choices.append((n, body.strip(), element(parts[0]), element(parts[1])))
        elif kw == "intransitive":
            transitive = False
        else:
            raise FormatError(f"unknown keyword {kw!r}", n)
    if worlds is None:
        raise FormatError("missing worlds line")
    if root is None:
        root = worlds[0]
    try:
        ks = KripkeStructure(worlds, frozenset(edges), root, domains, preds, transitive)
    except KripkeError as exc:
        raise FormatError(str(exc)) from None
    wc = WorldChoice()
    for n, pred, w, value in choices:
        wc.set(unary_epsilon(pred, n), w, value)
    return KripkeFile(ks, wc)


def unary_epsilon(pred: str, line: int = 0) -> Eps:
    """``eps x. P(x)`` for a predicate name, or the epsilon term of a formula in x."""
    try:
        phi = parse_formula(pred if "(" in pred else f"{pred}(x)")
    except ParseError as exc:
        raise FormatError(str(exc), line) from None
    fv = sorted(free_vars(phi))
    if len(fv) != 1:
        raise FormatError(f"choice formula needs one free variable: {pred!r}", line)
    return Eps(abstract(phi, fv[0]), fv[0])


# ------------------------------------------------------------------ files


def read_text(path: str | Path) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise FormatError(f"cannot read {path}: {exc.strerror}") from None

