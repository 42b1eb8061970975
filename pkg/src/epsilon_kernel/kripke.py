"""Kripke forcing with growing domains and world-dependent epsilon choices.

Elements of the domains are the constants that name them: the constant
``a`` denotes the element ``"a"``.  A formula is forced at a world only if
all of its constants exist there.  An epsilon term denotes, at each world,
the value of its choice map at that world.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Hashable, Iterable, Iterator, Mapping, Optional

from .parallel import ordered_map
from .report import Report
from .syntax.ast import (
    And,
    App,
    Bot,
    Bound,
    Eps,
    Eq,
    Exists,
    Expr,
    Forall,
    Formula,
    Implies,
    Not,
    Or,
    Pred,
    Top,
    Var,
)
from .syntax.ops import function_symbols, instantiate, walk
from .syntax.printer import to_text

World = Hashable
Element = str


class KripkeError(ValueError):
    pass


class MissingChoiceError(KripkeError):
    pass


@dataclass(frozen=True)
class KripkeStructure:
    """Worlds, accessibility, domains and monotone predicate tables.

    ``access`` is closed reflexively, and transitively unless
    ``transitive=False``.  ``predicates[w][name]`` is a set of tuples of
    elements (the empty tuple for 0-ary predicates).
    """

    worlds: tuple[World, ...]
    access: frozenset
    root: World
    domains: Mapping[World, frozenset]
    predicates: Mapping[World, Mapping[str, frozenset]] = field(default_factory=dict)
    transitive: bool = True

    def __post_init__(self):
        ws = set(self.worlds)
        if self.root not in ws:
            raise KripkeError(f"root {self.root!r} is not a world")
        rel = {(w, w) for w in self.worlds}
        for a, b in self.access:
            if a not in ws or b not in ws:
                raise KripkeError(f"edge {a!r} -> {b!r} mentions an unknown world")
            rel.add((a, b))
        if self.transitive:
            changed = True
            while changed:
                changed = False
                for (a, b), (c, d) in itertools.product(list(rel), list(rel)):
                    if b == c and (a, d) not in rel:
                        rel.add((a, d))
                        changed = True
        object.__setattr__(self, "access", frozenset(rel))
        doms = {w: frozenset(self.domains.get(w, ())) for w in self.worlds}
        object.__setattr__(self, "domains", doms)
        preds = {w: {k: frozenset(map(tuple, v)) for k, v in self.predicates.get(w, {}).items()} for w in self.worlds}
        object.__setattr__(self, "predicates", preds)
        succ = {w: tuple(v for v in self.worlds if (w, v) in rel) for w in self.worlds}
        object.__setattr__(self, "_succ", succ)
        for w in self.worlds:
            if not doms[w]:
                raise KripkeError(f"domain of world {w!r} is empty")
            for name, ext in preds[w].items():
                for tup in ext:
                    if not set(tup) <= doms[w]:
                        raise KripkeError(f"{name}{tup} at {w!r} uses elements outside the domain")
        for a, b in rel:
            if not doms[a] <= doms[b]:
                raise KripkeError(f"domain shrinks from {a!r} to {b!r}")
            for name, ext in preds[a].items():
                if not ext <= preds[b].get(name, frozenset()):
                    raise KripkeError(f"{name} loses tuples from {a!r} to {b!r}")

    def successors(self, w: World) -> tuple[World, ...]:
        return self._succ[w]  # type: ignore[attr-defined]

    def holds(self, w: World, name: str, args: tuple) -> bool:
        return args in self.predicates[w].get(name, frozenset())

    def elements(self) -> frozenset:
        out: frozenset = frozenset()
        for d in self.domains.values():
            out |= d
        return out


def constants_of(node: Expr) -> frozenset:
    return frozenset(s for s, n in function_symbols(node).items() if n == 0)


@dataclass
class WorldChoice:
    """For each epsilon term of the working set, a partial map world -> element."""

    maps: dict[Eps, dict[World, Element]] = field(default_factory=dict)

    def value(self, term: Eps, world: World) -> Element:
        table = self.maps.get(term)
        if table is None or world not in table:
            raise MissingChoiceError(f"no choice for {to_text(term)} at world {world!r}")
        return table[world]

    def set(self, term: Eps, world: World, value: Element) -> None:
        self.maps.setdefault(term, {})[world] = value


# --------------------------------------------------------------- forcing


class Forcing:
    """Memoised forcing relation for one structure and one choice."""

    def __init__(self, ks: KripkeStructure, wc: Optional[WorldChoice] = None):
        self.ks = ks
        self.wc = wc or WorldChoice()
        self.cache: dict[tuple, bool] = {}

    def denote(self, t: Expr, w: World, stack: tuple) -> Optional[Element]:
        match t:
            case Bound(i):
                return stack[-1 - i]
            case App(sym, ()):
                return sym if sym in self.ks.domains[w] else None
            case Eps():
                return self.wc.value(t, w)
            case Var(name):
                raise KripkeError(f"free variable {name!r} must be supplied in the environment")
            case App(sym, _):
                raise KripkeError(f"function symbol {sym!r} has no Kripke interpretation")
        raise KripkeError(f"not a term: {t!r}")

    def force(self, w: World, f: Formula, stack: tuple = ()) -> bool:
        key = (w, f, stack)
        hit = self.cache.get(key)
        if hit is None:
            hit = self._force(w, f, stack)
            self.cache[key] = hit
        return hit

    def _force(self, w: World, f: Formula, stack: tuple) -> bool:
        ks = self.ks
        match f:
            case Top():
                return True
            case Bot():
                return False
            case Pred(name, args):
                vals = tuple(self.denote(a, w, stack) for a in args)
                return None not in vals and ks.holds(w, name, vals)
            case Eq(l, r):
                a, b = self.denote(l, w, stack), self.denote(r, w, stack)
                return a is not None and a == b
            case And(l, r):
                return self.force(w, l, stack) and self.force(w, r, stack)
            case Or(l, r):
                return self.force(w, l, stack) or self.force(w, r, stack)
            case Implies(l, r):
                return all(not self.force(v, l, stack) or self.force(v, r, stack) for v in ks.successors(w))
            case Not(a):
                return not any(self.force(v, a, stack) for v in ks.successors(w))
            case Exists(body, _):
                return any(self.force(w, body, stack + (d,)) for d in sorted(ks.domains[w]))
            case Forall(body, _):
                return all(
                    self.force(v, body, stack + (d,)) for v in ks.successors(w) for d in sorted(ks.domains[v])
                )
        raise KripkeError(f"not a formula: {f!r}")

    def forces(self, w: World, phi: Formula, env: Optional[Mapping[str, Element]] = None) -> bool:
        env = dict(env or {})
        for name, value in env.items():
            if value not in self.ks.domains[w]:
                raise KripkeError(f"{name} = {value!r} is not in the domain of {w!r}")
        if env:
            from .syntax.ops import substitute_many

            phi = substitute_many(phi, {k: App(v) for k, v in env.items()})
        if not constants_of(phi) <= self.ks.domains[w]:
            return False
        return self.force(w, phi)


def kripke_force(
    ks: KripkeStructure,
    world: World,
    phi: Formula,
    env: Optional[Mapping[str, Element]] = None,
    wc: Optional[WorldChoice] = None,
) -> bool:
    return Forcing(ks, wc).forces(world, phi, env)


def forced_worlds(ks: KripkeStructure, phi: Formula, wc: Optional[WorldChoice] = None) -> frozenset:
    fc = Forcing(ks, wc)
    return frozenset(w for w in ks.worlds if fc.forces(w, phi))


# ---------------------------------------------------------- choice maps


def validate_world_choice(ks: KripkeStructure, wc: WorldChoice) -> Report:
    """Check every choice map, tagging a failure with the condition it breaks.

    "i": the map is defined exactly at worlds where the term's constants exist.
    "ii": each value lies in the world's domain.
    "iii": if something is forced to satisfy the body, the chosen value is.
    """
    rep = Report("world-dependent choice")
    fc = Forcing(ks, wc)
    unstable = []
    for term in sorted(wc.maps, key=to_text):
        table = wc.maps[term]
        name = to_text(term)
        consts = constants_of(term)
        for w in ks.worlds:
            defined = consts <= ks.domains[w]
            if defined != (w in table):
                what = "missing" if defined else "defined where its constants do not exist"
                rep.fail(f"(i) {name} at {w}: {what}", (name, w, "i"))
                continue
            if not defined:
                continue
            if table[w] not in ks.domains[w]:
                rep.fail(f"(ii) {name} at {w}: {table[w]!r} is not in the domain", (name, w, "ii"))
                continue
            exists = Exists(term.body, term.hint)
            if fc.forces(w, exists) and not fc.forces(w, instantiate(term.body, App(table[w]))):
                rep.fail(
                    f"(iii) {name} at {w}: something satisfies the body but {table[w]} does not",
                    (name, w, "iii"),
                )
        for a, b in ks.access:
            if a in table and b in table and table[a] != table[b]:
                unstable.append((name, a, b))
    rep.data = {"terms": len(wc.maps), "stable": not unstable}
    rep.add(f"{len(wc.maps)} epsilon terms checked")
    if unstable:
        name, a, b = unstable[0]
        rep.add(f"note: {name} changes value from {a} to {b} (world-dependent choice)")
    else:
        rep.add("every choice is stable along accessibility")
    return rep


# ----------------------------------------------------- structure families


def rooted_preorders(n: int) -> Iterator[frozenset]:
    """Reflexive-transitive relations on ``range(n)`` where 0 sees every world."""
    pairs = [(a, b) for a in range(n) for b in range(n) if a != b]
    for bits in itertools.product((0, 1), repeat=len(pairs)):
        rel = {(a, a) for a in range(n)} | {p for p, bit in zip(pairs, bits) if bit}
        if any((0, b) not in rel for b in range(n)):
            continue
        if all((a, d) in rel for (a, b) in rel for (c, d) in rel if b == c):
            yield frozenset(rel)


def up_sets(worlds: Iterable[World], rel: frozenset) -> list[frozenset]:
    worlds = list(worlds)
    out = []
    for bits in itertools.product((0, 1), repeat=len(worlds)):
        s = frozenset(w for w, b in zip(worlds, bits) if b)
        if all(b in s for a, b in rel if a in s):
            out.append(s)
    return out


def monotone_domains(n: int, rel: frozenset, elements: tuple[Element, ...]) -> Iterator[dict]:
    subsets = [frozenset(c) for k in range(1, len(elements) + 1) for c in itertools.combinations(elements, k)]
    for choice in itertools.product(subsets, repeat=n):
        if all(choice[a] <= choice[b] for a, b in rel):
            yield dict(enumerate(choice))


def propositional_structures(max_worlds: int, atoms: tuple[str, ...] = ("p", "q")) -> Iterator[KripkeStructure]:
    """Every rooted preorder up to ``max_worlds`` with monotone valuations."""
    for n in range(1, max_worlds + 1):
        for rel in rooted_preorders(n):
            ups = up_sets(range(n), rel)
            for vals in itertools.product(ups, repeat=len(atoms)):
                preds = {w: {a: frozenset({()}) if w in v else frozenset() for a, v in zip(atoms, vals)} for w in range(n)}
                yield KripkeStructure(tuple(range(n)), rel, 0, {w: frozenset({"a"}) for w in range(n)}, preds)


def first_order_structures(max_worlds: int, elements: tuple[Element, ...] = ("a", "b")) -> Iterator[KripkeStructure]:
    """Rooted preorders with growing domains, a monotone unary ``P`` and a 0-ary ``p``."""
    for n in range(1, max_worlds + 1):
        for rel in rooted_preorders(n):
            for doms in monotone_domains(n, rel, elements):
                # P: for each element, the worlds where it holds form an up-set inside its existence region
                per_elem = []
                for e in elements:
                    region = frozenset(w for w in range(n) if e in doms[w])
                    per_elem.append([u for u in up_sets(range(n), rel) if u <= region])
                for p_set in up_sets(range(n), rel):
                    for choice in itertools.product(*per_elem):
                        preds = {
                            w: {
                                "P": frozenset((e,) for e, u in zip(elements, choice) if w in u),
                                "p": frozenset({()}) if w in p_set else frozenset(),
                            }
                            for w in range(n)
                        }
                        yield KripkeStructure(tuple(range(n)), rel, 0, doms, preds)


# ------------------------------------------------------------- persistence


def _closure_values(ks: KripkeStructure, atoms: list[frozenset], unary: list[dict]) -> tuple[set, set]:
    """All world-sets (sentences) and element-indexed world-sets (formulas
    in one variable) reachable from the atoms by the forcing clauses."""
    worlds = ks.worlds
    elems = sorted(ks.elements())

    def imp(a, b):
        return frozenset(w for w in worlds if all(v not in a or v in b for v in ks.successors(w)))

    def neg(a):
        return frozenset(w for w in worlds if not any(v in a for v in ks.successors(w)))

    sentences = set(atoms) | {frozenset(), frozenset(worlds)}
    # a formula in x: tuple of world-sets, one per element (empty where the element is absent)
    present = tuple(frozenset(w for w in worlds if e in ks.domains[w]) for e in elems)
    formulas = {tuple(u[e] for e in elems) for u in unary}
    formulas |= {tuple(s & present[i] for i in range(len(elems))) for s in sentences}
    while True:
        new_f = set(formulas)
        fl = list(formulas)
        for a in fl:
            new_f.add(tuple(neg(x) & present[i] for i, x in enumerate(a)))
            for b in fl:
                new_f.add(tuple(x & y for x, y in zip(a, b)))
                new_f.add(tuple(x | y for x, y in zip(a, b)))
                new_f.add(tuple(imp(x, y) & present[i] for i, (x, y) in enumerate(zip(a, b))))
        new_s = set(sentences)
        for a in new_f:
            new_s.add(frozenset(w for w in worlds if any(w in a[i] for i, e in enumerate(elems) if e in ks.domains[w])))
        sl = list(new_s)
        for a in sl:
            new_s.add(neg(a))
            for b in sl:
                new_s.add(a & b)
                new_s.add(a | b)
                new_s.add(imp(a, b))
        new_f |= {tuple(s & present[i] for i in range(len(elems))) for s in new_s}
        if new_f == formulas and new_s == sentences:
            return sentences, formulas
        formulas, sentences = new_f, new_s


def is_up_set(ks: KripkeStructure, s: frozenset) -> bool:
    return all(b in s for a, b in ks.access if a in s)


PERSISTENCE_CORPUS = (
    "p",
    "not p",
    "p or not p",
    "not not p -> p",
    "p -> q",
    "(p -> q) or (q -> p)",
    "exists x. P(x)",
    "not exists x. P(x)",
    "(exists x. P(x)) or not exists x. P(x)",
    "exists x. not P(x)",
    "exists x. P(x) -> p",
    "exists x. not not P(x) and not p",
    "(exists x. P(x)) -> exists x. P(x) and p",
    "not not exists x. P(x) or p",
)


def persistence_check(max_worlds: int = 3) -> Report:
    """Forced formulas stay forced upward.

    Two routes: the syntactic corpus is evaluated with the forcing relation,
    and the closure of the atom values under the forcing clauses covers every
    formula of the propositional plus existential fragment.
    """
    from .syntax.parser import parse_formula

    corpus = [parse_formula(s) for s in PERSISTENCE_CORPUS]
    rep = Report(f"persistence on structures up to {max_worlds} worlds")
    structures = checks = values = 0
    for ks in first_order_structures(max_worlds):
        structures += 1
        fc = Forcing(ks)
        for phi in corpus:
            for w in ks.worlds:
                if fc.forces(w, phi):
                    for v in ks.successors(w):
                        checks += 1
                        if not fc.forces(v, phi):
                            return rep.fail(f"{to_text(phi)} forced at {w} but not at {v}", (ks, phi, w, v))
        atoms = [frozenset(w for w in ks.worlds if ks.holds(w, "p", ()))]
        elems = sorted(ks.elements())
        unary = [{e: frozenset(w for w in ks.worlds if ks.holds(w, "P", (e,))) for e in elems}]
        sentences, formulas = _closure_values(ks, atoms, unary)
        values += len(sentences) + len(formulas)
        for s in sentences:
            if not is_up_set(ks, s):
                return rep.fail(f"a sentence value {sorted(s)} is not upward closed", (ks, s))
        for f in formulas:
            for s in f:
                if not is_up_set(ks, s):
                    return rep.fail("a formula value is not upward closed", (ks, f))
    rep.data = {"structures": structures, "corpus_checks": checks, "closure_values": values}
    rep.add(f"{structures} structures, {len(corpus)} corpus formulas, {checks} upward checks")
    rep.add(f"{values} formula values in the closure of the atoms, all upward closed")
    return rep


def topology_agreement(max_worlds: int = 3) -> Report:
    """Forcing agrees with Heyting evaluation in the topology of up-sets."""
    from .syntax.parser import parse_formula
    from .topology import FiniteTopSpace, heyting_eval

    corpus = [parse_formula(s) for s in PERSISTENCE_CORPUS if "P(" not in s]
    corpus += [parse_formula(s) for s in ("not (p and q) -> not p or not q", "((p -> q) -> p) -> p", "not not (p or not p)")]
    rep = Report(f"forcing vs up-set topology, frames up to {max_worlds} worlds")
    count = 0
    for ks in propositional_structures(max_worlds):
        sp = FiniteTopSpace(ks.worlds, frozenset(up_sets(ks.worlds, ks.access)))
        interp = {a: frozenset(w for w in ks.worlds if ks.holds(w, a, ())) for a in ("p", "q")}
        for phi in corpus:
            count += 1
            if forced_worlds(ks, phi) != heyting_eval(phi, sp, interp):
                return rep.fail(f"disagreement on {to_text(phi)}", (ks, phi))
    rep.data = {"comparisons": count}
    rep.add(f"{count} (structure, formula) comparisons agree")
    return rep


# --------------------------------------------------------------- examples


def two_world_example() -> KripkeStructure:
    """``M0 -> M1``; ``a`` exists at both, ``b`` only at M1 where ``F(b)`` holds."""
    return KripkeStructure(
        ("M0", "M1"),
        frozenset({("M0", "M1")}),
        "M0",
        {"M0": frozenset({"a"}), "M1": frozenset({"a", "b"})},
        {"M0": {"F": frozenset()}, "M1": {"F": frozenset({("b",)})}},
    )


# ------------------------------------------------------------- Bell search


def _bell_formulas():
    from .syntax.parser import parse_formula, parse_term

    a_body = parse_formula("x = a or p")
    b_body = parse_formula("x = b or p")
    eps_a = parse_term("eps x. x = a or p")
    eps_b = parse_term("eps x. x = b or p")
    return {
        "eps_a": eps_a,
        "eps_b": eps_b,
        "schema_a": parse_formula("forall x. (x = a or p) -> (eps x. x = a or p) = a or p"),
        "schema_b": parse_formula("forall x. (x = b or p) -> (eps x. x = b or p) = b or p"),
        "extensional": parse_formula(
            "(forall x. ((x = a or p) -> (x = b or p)) and ((x = b or p) -> (x = a or p)))"
            " -> (eps x. x = a or p) = (eps x. x = b or p)"
        ),
        "antecedent": parse_formula("forall x. ((x = a or p) -> (x = b or p)) and ((x = b or p) -> (x = a or p))"),
        "lem": parse_formula("p or not p"),
        "bodies": (a_body, b_body),
    }


@dataclass
class BellOutcome:
    candidates: int = 0
    admitted: int = 0
    countermodels: int = 0
    example: Optional[tuple] = None


def _choice_maps(ks: KripkeStructure, term: Eps, stable: bool) -> Iterator[dict]:
    """Every map from the worlds where ``term`` is defined into their domains;
    with ``stable`` only those constant along accessibility."""
    consts = constants_of(term)
    dom = [w for w in ks.worlds if consts <= ks.domains[w]]
    for values in itertools.product(*(sorted(ks.domains[w]) for w in dom)):
        table = dict(zip(dom, values))
        if stable and any(table[a] != table[b] for a, b in ks.access if a in table and b in table):
            continue
        yield table


def bell_structures(max_worlds: int, max_domain: int) -> Iterator[KripkeStructure]:
    elements = ("a", "b")[:max_domain]
    for n in range(1, max_worlds + 1):
        for rel in rooted_preorders(n):
            for doms in monotone_domains(n, rel, elements):
                for p_set in up_sets(range(n), rel):
                    preds = {w: {"p": frozenset({()}) if w in p_set else frozenset()} for w in range(n)}
                    yield KripkeStructure(tuple(range(n)), rel, 0, doms, preds)


def bell_lem_search(
    max_worlds: int = 3,
    max_domain: int = 2,
    require_extensionality: bool = True,
    stable: bool = True,
    reading: str = "forcing",
) -> BellOutcome:
    """Search for structures forcing the epsilon schemas but not ``p or not p``.

    The working pair is ``A(x) = (x = a or p)`` and ``B(x) = (x = b or p)``.
    ``reading="forcing"`` requires the extensionality instance to be forced
    at the root; ``reading="global"`` requires equal choices at every world
    only when the antecedent is forced at the root.  ``stable`` restricts
    choice maps to values that do not change along accessibility.
    """
    if max_worlds > 3 or max_domain > 2:
        raise ValueError("search bounds are at most 3 worlds and 2 elements")
    if reading not in ("forcing", "global"):
        raise ValueError(f"unknown reading {reading!r}")
    fm = _bell_formulas()
    out = BellOutcome()
    for ks in bell_structures(max_worlds, max_domain):
        for fa in _choice_maps(ks, fm["eps_a"], stable):
            for fb in _choice_maps(ks, fm["eps_b"], stable):
                out.candidates += 1
                wc = WorldChoice({fm["eps_a"]: fa, fm["eps_b"]: fb})
                fc = Forcing(ks, wc)
                r = ks.root
                if not (fc.forces(r, fm["schema_a"]) and fc.forces(r, fm["schema_b"])):
                    continue
                if require_extensionality:
                    if reading == "forcing":
                        if not fc.forces(r, fm["extensional"]):
                            continue
                    elif fc.forces(r, fm["antecedent"]):
                        if any(fa.get(w) != fb.get(w) for w in ks.worlds if w in fa or w in fb):
                            continue
                out.admitted += 1
                if not fc.forces(r, fm["lem"]):
                    out.countermodels += 1
                    if out.example is None:
                        out.example = (ks, dict(fa), dict(fb))
    return out


def describe_structure(ks: KripkeStructure) -> str:
    edges = sorted((a, b) for a, b in ks.access if a != b)
    parts = [f"worlds {list(ks.worlds)}", f"edges {edges}"]
    parts.append("domains " + ", ".join(f"{w}:{sorted(ks.domains[w])}" for w in ks.worlds))
    facts = []
    for w in ks.worlds:
        for name, ext in sorted(ks.predicates[w].items()):
            for tup in sorted(ext):
                facts.append(f"{name}{'(' + ','.join(tup) + ')' if tup else ''}@{w}")
    parts.append("facts " + (", ".join(facts) or "none"))
    return "; ".join(parts)


def _run_variant(args: tuple) -> BellOutcome:
    max_worlds, max_domain, kw = args
    return bell_lem_search(max_worlds, max_domain, **kw)


def bell_report(max_worlds: int = 3, max_domain: int = 2) -> Report:
    """The primary search plus the variants that show which assumption matters."""
    rep = Report(f"excluded middle from extensional choice, up to {max_worlds} worlds, {max_domain} elements")
    variants = [
        ("stable choice, extensionality forced", dict(stable=True, require_extensionality=True, reading="forcing")),
        ("stable choice, extensionality dropped", dict(stable=True, require_extensionality=False)),
        ("stable choice, extensionality read globally", dict(stable=True, require_extensionality=True, reading="global")),
        ("world-dependent choice, extensionality forced", dict(stable=False, require_extensionality=True, reading="forcing")),
    ]
    outcomes = ordered_map(_run_variant, [(max_worlds, max_domain, kw) for _, kw in variants])
    results = {}
    for (label, _), o in zip(variants, outcomes):
        results[label] = o
        rep.add(f"{label}: {o.candidates} candidates, {o.admitted} admitted, {o.countermodels} countermodels")
        if o.example is not None:
            ks, fa, fb = o.example
            rep.add(f"  e.g. {describe_structure(ks)}; eps_A {fa}; eps_B {fb}")
    primary = results[variants[0][0]]
    dropped = results[variants[1][0]]
    rep.data = {label: {"candidates": o.candidates, "admitted": o.admitted, "countermodels": o.countermodels} for label, o in results.items()}
    rep.add(f"{primary.countermodels} countermodels")
    if primary.countermodels:
        rep.fail("a structure forces both schemas but refutes excluded middle", primary.example)
    if max_worlds >= 2 and not dropped.countermodels:
        rep.fail("without extensionality excluded middle should fail somewhere")
    return rep


# ---------------------------------------------------------------- validity


def cpi_validity_demo(max_size: int = 3) -> Report:
    """``eps x. x = x`` equals ``eps x. x != x`` in every classical model."""
    from .classical import model_choice_pairs, evaluate
    from .syntax.parser import parse_formula

    phi = parse_formula("(eps x. x = x) = (eps x. x != x)")
    rep = Report("validity of (eps x. x = x) = (eps x. x != x)")
    count = 0
    for m, cf in model_choice_pairs(max_size, {"c": 0}, {"P": 1}):
        count += 1
        if not evaluate(phi, m, cf):
            return rep.fail("false in some model", (m, cf.as_table()))
    rep.data = {"instances": count, "derivability_checked": False}
    rep.add(f"true in all {count} (model, choice) instances up to size {max_size}")
    rep.add("derivability not checked: only the validity side is verified")
    return rep
