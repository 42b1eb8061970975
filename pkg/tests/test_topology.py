import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from epsilon_kernel.syntax import parse_formula
from epsilon_kernel.topology import (
    DOUBLE_NEGATION_ELIM,
    DOUBLE_NEGATION_INTRO,
    EXCLUDED_MIDDLE,
    FiniteTopSpace,
    TopologyError,
    double_negation_gap,
    enumerate_topologies,
    exhaustive_gap_check,
    from_generators,
    heyting_eval,
    heyting_gap_demo,
    markov_check,
    three_point_witness,
)

F = parse_formula


def _preorders(n):
    """Reflexive transitive relations on range(n), by brute force."""
    pts = range(n)
    off = [(a, b) for a in pts for b in pts if a != b]
    for bits in itertools.product((0, 1), repeat=len(off)):
        rel = {(a, a) for a in pts} | {p for p, b in zip(off, bits) if b}
        if all((a, c) in rel for a, b in rel for b2, c in rel if b == b2):
            yield rel


def _up_sets(n, rel):
    pts = range(n)
    for bits in itertools.product((0, 1), repeat=n):
        s = {p for p, b in zip(pts, bits) if b}
        if all(b in s for a, b in rel if a in s):
            yield frozenset(s)


def _kripke_double_negation(n, rel, s):
    # w forces not not X iff every successor sees a successor inside X
    return frozenset(w for w in range(n) if all(any((v, u) in rel and u in s for u in range(n)) for x, v in rel if x == w))


def _oracle_counts(max_points):
    spaces = opens = failures = 0
    for n in range(1, max_points + 1):
        for rel in _preorders(n):
            spaces += 1
            for s in _up_sets(n, rel):
                opens += 1
                failures += _kripke_double_negation(n, rel, s) != s
    return spaces, opens, failures


@pytest.mark.parametrize("n, expected", [(1, 1), (2, 4), (3, 29), (4, 355)])
def test_topology_counts_match_preorder_oracle(n, expected):
    assert sum(1 for _ in enumerate_topologies(n)) == expected
    assert sum(1 for _ in _preorders(n)) == expected


def test_gap_check_matches_kripke_oracle():
    rep = exhaustive_gap_check(4)
    assert rep.passed
    spaces, opens, failures = _oracle_counts(4)
    assert (spaces, opens, failures) == (389, 2482, 1104)
    assert rep.data["spaces"] == spaces
    assert rep.data["opens"] == opens
    assert rep.data["double_negation_elimination_failures"] == failures


def test_space_validation():
    with pytest.raises(TopologyError):
        FiniteTopSpace((0, 1), frozenset({frozenset({0, 1})}))
    with pytest.raises(TopologyError):
        FiniteTopSpace((0, 1), frozenset({frozenset(), frozenset({0}), frozenset({1})}))
    with pytest.raises(TopologyError):
        FiniteTopSpace((0, 1, 2), frozenset({frozenset(), frozenset({0}), frozenset({1}), frozenset({0, 1, 2})}))


def test_from_generators_closes_family():
    sp = from_generators((0, 1, 2), [{0}, {1}])
    assert sp.opens == frozenset(map(frozenset, [(), (0,), (1,), (0, 1), (0, 1, 2)]))


def test_three_point_witness_operators():
    sp = three_point_witness()
    a = frozenset({"a"})
    assert sp.closure(a) == sp.full
    assert sp.neg(a) == frozenset()
    assert double_negation_gap(sp, a) == (a, sp.full)
    assert not sp.is_regular(a)
    with pytest.raises(TopologyError):
        double_negation_gap(sp, {"b"})


def test_heyting_gap_demo():
    rep = heyting_gap_demo()
    assert rep.passed
    assert rep.data == {"X": ["a"], "not_not_X": ["a", "b", "c"]}
    assert "F or not F = {a}" in rep.lines


def test_heyting_eval_connectives():
    sp = three_point_witness()
    interp = {"F": frozenset({"a"})}
    assert heyting_eval(DOUBLE_NEGATION_INTRO, sp, interp) == sp.full
    assert heyting_eval(DOUBLE_NEGATION_ELIM, sp, interp) == frozenset({"a"})
    assert heyting_eval(EXCLUDED_MIDDLE, sp, interp) == frozenset({"a"})
    assert heyting_eval(F("exists x. F(x)"), sp, interp) == sp.full
    assert heyting_eval(F("forall x. F(x)"), sp, interp) == frozenset()


def test_heyting_eval_rejects_bad_input():
    sp = three_point_witness()
    with pytest.raises(TopologyError):
        heyting_eval(EXCLUDED_MIDDLE, sp, {"F": frozenset({"b"})})
    with pytest.raises(TopologyError):
        heyting_eval(F("R(x, y)"), sp, {"R": frozenset()})
    with pytest.raises(TopologyError):
        heyting_eval(EXCLUDED_MIDDLE, sp, {})


def test_markov_on_witness():
    sp = three_point_witness()
    assert markov_check(sp, {"a"}).data == {"antecedent_full": False, "conclusion_full": False}
    assert markov_check(sp, sp.full).passed


SPACES = [sp for n in range(1, 5) for sp in enumerate_topologies(n)]


@st.composite
def spaces_with_open(draw):
    sp = draw(st.sampled_from(SPACES))
    x = draw(st.sampled_from(sorted(sp.opens, key=sorted)))
    return sp, x


@settings(max_examples=150, deadline=None)
@given(spaces_with_open())
def test_heyting_laws(case):
    sp, x = case
    nx = sp.neg(x)
    assert sp.is_open(nx) and not (nx & x)
    assert x <= sp.interior(sp.closure(x))
    assert sp.neg(sp.neg(nx)) == nx
    for y in sp.opens:
        # implication is the largest open O with O & x <= y
        imp = sp.implies(x, y)
        assert imp & x <= y
        assert all(not (o & x <= y) or o <= imp for o in sp.opens)
    if sp.is_clopen(x):
        assert x | nx == sp.full
