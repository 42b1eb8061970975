import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from epsilon_kernel.kripke import (
    Forcing,
    KripkeError,
    KripkeStructure,
    MissingChoiceError,
    WorldChoice,
    bell_lem_search,
    bell_report,
    cpi_validity_demo,
    first_order_structures,
    forced_worlds,
    kripke_force,
    persistence_check,
    rooted_preorders,
    topology_agreement,
    two_world_example,
    validate_world_choice,
)
from epsilon_kernel.syntax import And, Exists, Implies, Not, Or, Pred, parse_formula, parse_term
from epsilon_kernel.syntax.ast import Bound

F = parse_formula


def test_structure_closes_access():
    ks = KripkeStructure((0, 1, 2), frozenset({(0, 1), (1, 2)}), 0, {w: {"a"} for w in range(3)})
    assert (0, 2) in ks.access and (1, 1) in ks.access
    flat = KripkeStructure((0, 1, 2), frozenset({(0, 1), (1, 2)}), 0, {w: {"a"} for w in range(3)}, transitive=False)
    assert (0, 2) not in flat.access


@pytest.mark.parametrize(
    "kwargs",
    [
        dict(root=9),
        dict(domains={0: {"a", "b"}, 1: {"a"}}),
        dict(predicates={0: {"P": {("a",)}}, 1: {}}),
        dict(domains={0: {"a"}, 1: set()}),
        dict(predicates={0: {"P": {("b",)}}}),
    ],
)
def test_structure_validation(kwargs):
    base = dict(worlds=(0, 1), access=frozenset({(0, 1)}), root=0, domains={0: {"a"}, 1: {"a"}})
    base.update(kwargs)
    with pytest.raises(KripkeError):
        KripkeStructure(**base)


def test_two_world_forcing():
    ks = two_world_example()
    assert not kripke_force(ks, "M0", F("exists x. F(x)"))
    assert kripke_force(ks, "M1", F("F(b)"))
    assert kripke_force(ks, "M0", F("not not exists x. F(x)"))
    assert not kripke_force(ks, "M0", F("(exists x. F(x)) or not exists x. F(x)"))
    assert not kripke_force(ks, "M0", F("F(b)"))  # b does not exist yet
    assert forced_worlds(ks, F("exists x. F(x)")) == {"M1"}


def test_free_variables_come_from_environment():
    ks = two_world_example()
    assert kripke_force(ks, "M1", F("F(x)"), {"x": "b"})
    with pytest.raises(KripkeError):
        kripke_force(ks, "M0", F("F(x)"), {"x": "b"})


def test_world_choice_lookup_and_validation():
    ks = two_world_example()
    term = parse_term("eps x. F(x)")
    wc = WorldChoice()
    with pytest.raises(MissingChoiceError):
        wc.value(term, "M0")
    wc.set(term, "M0", "a")
    wc.set(term, "M1", "b")
    rep = validate_world_choice(ks, wc)
    assert rep.passed and rep.data == {"terms": 1, "stable": False}
    assert kripke_force(ks, "M1", F("F(eps x. F(x))"), wc=wc)
    assert not kripke_force(ks, "M0", F("F(eps x. F(x))"), wc=wc)

    bad = WorldChoice()
    bad.set(term, "M0", "a")
    bad.set(term, "M1", "a")
    rep = validate_world_choice(ks, bad)
    assert not rep.passed and rep.witness[2] == "iii"


def test_choice_defined_only_where_constants_exist():
    ks = two_world_example()
    term = parse_term("eps x. x = b")
    wc = WorldChoice()
    wc.set(term, "M0", "a")
    wc.set(term, "M1", "b")
    rep = validate_world_choice(ks, wc)
    assert not rep.passed and rep.witness == ("eps x. x = b", "M0", "i")


# ------------------------------------------------ exhaustive families


def _rooted(n):
    """Preorders on range(n) in which 0 sees every world, by brute force."""
    pts = range(n)
    off = [(a, b) for a in pts for b in pts if a != b]
    for bits in itertools.product((0, 1), repeat=len(off)):
        rel = {(a, a) for a in pts} | {p for p, b in zip(off, bits) if b}
        transitive = all((a, c) in rel for a, b in rel for b2, c in rel if b == b2)
        if transitive and all((0, w) in rel for w in pts):
            yield frozenset(rel)


def _up(n, rel):
    for bits in itertools.product((0, 1), repeat=n):
        s = frozenset(w for w in range(n) if bits[w])
        if all(b in s for a, b in rel if a in s):
            yield s


@pytest.mark.parametrize("n", [1, 2, 3])
def test_rooted_preorders_match_oracle(n):
    assert set(rooted_preorders(n)) == set(_rooted(n))


def _bell_oracle(max_worlds):
    """Counts read off the forcing clauses by hand.

    Admitted structures must have both a and b at the root, so every domain
    is {a, b}.  The schema for x = a or p forces the a-choice to be a at every
    world without p, likewise for b; extensionality at a world holds exactly
    when p does.
    """
    out = {"primary": 0, "primary_admitted": 0, "dropped": 0, "world_dependent": 0}
    for n in range(1, max_worlds + 1):
        for rel in _rooted(n):
            # p nowhere: the two forced choices; p everywhere: a = b, two ways
            out["primary_admitted"] += 3
            for s in _up(n, rel):
                if 0 in s or not s:
                    continue
                # p somewhere above a root without p
                out["dropped"] += 1
                out["world_dependent"] += 2 ** len(s)
    return out


def test_bell_counts_match_hand_oracle():
    oracle = _bell_oracle(3)
    assert oracle == {"primary": 0, "primary_admitted": 30, "dropped": 11, "world_dependent": 30}
    primary = bell_lem_search(3, 2)
    assert (primary.countermodels, primary.admitted) == (oracle["primary"], oracle["primary_admitted"])
    assert bell_lem_search(3, 2, require_extensionality=False).countermodels == oracle["dropped"]
    assert bell_lem_search(3, 2, stable=False).countermodels == oracle["world_dependent"]


def test_bell_report_outcome():
    rep = bell_report()
    assert rep.passed
    assert rep.data["stable choice, extensionality forced"]["countermodels"] == 0
    assert rep.data["stable choice, extensionality dropped"]["countermodels"] > 0
    assert "0 countermodels" in rep.lines


def test_bell_example_refutes_excluded_middle():
    out = bell_lem_search(3, 2, require_extensionality=False)
    ks, fa, fb = out.example
    assert not kripke_force(ks, ks.root, F("p or not p"))
    assert ks.domains[ks.root] == {"a", "b"}


def test_bell_search_bounds():
    with pytest.raises(ValueError):
        bell_lem_search(4, 2)
    with pytest.raises(ValueError):
        bell_lem_search(2, 2, reading="other")


def test_persistence_small():
    rep = persistence_check(2)
    assert rep.passed
    assert rep.data == {"structures": 113, "corpus_checks": 2766, "closure_values": 692}


def test_forcing_agrees_with_upset_topology():
    rep = topology_agreement(3)
    assert rep.passed and rep.data["comparisons"] == 945


def test_validity_demo_marks_derivability_unchecked():
    rep = cpi_validity_demo(3)
    assert rep.passed
    assert rep.data == {"instances": 594, "derivability_checked": False}
    assert any("derivability not checked" in line for line in rep.lines)


# ------------------------------------------------------------ properties

STRUCTURES = list(first_order_structures(2))

P_x = Pred("P", (Bound(0),))


def _fragment(bound):
    atoms = [st.just(Pred("p")), st.just(Pred("P", (parse_term("a"),)))]
    if bound:
        atoms.append(st.just(P_x))
    base = st.one_of(*atoms)

    def extend(children):
        return st.one_of(
            st.builds(Not, children),
            st.builds(And, children, children),
            st.builds(Or, children, children),
            st.builds(Implies, children, children),
        )

    return st.recursive(base, extend, max_leaves=6)


fragment_formulas = st.one_of(_fragment(False), _fragment(True).map(lambda b: Exists(b, "x")))


@settings(max_examples=200, deadline=None)
@given(st.sampled_from(STRUCTURES), fragment_formulas)
def test_forcing_is_persistent(ks, phi):
    fc = Forcing(ks)
    for w in ks.worlds:
        if fc.forces(w, phi):
            assert all(fc.forces(v, phi) for v in ks.successors(w))
