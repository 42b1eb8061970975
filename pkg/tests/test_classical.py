import itertools
from fractions import Fraction
from math import comb

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from epsilon_kernel.classical import (
    ChoiceFunction,
    EvaluationError,
    FiniteModel,
    FinitistInterpretation,
    IotaFailure,
    ModelError,
    NotEquivalenceError,
    abstraction_representative,
    all_choice_functions,
    arithmetic_model,
    check_ackermann,
    check_exists_equivalence,
    check_null_collapse,
    count_choice_functions,
    enumerate_models,
    evaluate,
    extension,
    infinitesimal_null_demo,
    iota_check,
    min_choice,
    model_choice_pairs,
    rational_grid,
    verify_matrices,
)
from epsilon_kernel.syntax import parse_formula, parse_term

F = parse_formula
T = parse_term


def _naive_choice_count(n):
    # one pick per nonempty subset; the empty set copies the universe
    out = 1
    for s in range(1, 2**n):
        out *= bin(s).count("1")
    return out


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_choice_function_count_matches_naive_product(n):
    assert count_choice_functions(n) == _naive_choice_count(n)
    if n <= 3:
        assert sum(1 for _ in all_choice_functions(range(n))) == _naive_choice_count(n)


def test_choice_functions_pick_members_and_honour_empty_set():
    U = (0, 1, 2)
    seen = set()
    for cf in all_choice_functions(U):
        table = cf.as_table()
        for s, v in table.items():
            if s:
                assert v in s
        assert table[frozenset()] == table[frozenset(U)]
        seen.add(tuple(sorted((tuple(sorted(k)), v) for k, v in table.items())))
    assert len(seen) == 24


def test_choice_function_rejects_non_members():
    with pytest.raises(ModelError):
        ChoiceFunction((0, 1), {frozenset({0}): 1})
    with pytest.raises(ModelError):
        ChoiceFunction((0, 1), {frozenset(): 1})
    assert ChoiceFunction((0, 1), {frozenset(): 0})(()) == 0


def test_model_validation():
    with pytest.raises(ModelError):
        FiniteModel(())
    with pytest.raises(ModelError):
        FiniteModel((0, 0))
    with pytest.raises(ModelError):
        FiniteModel((0, 1), functions={"f": {(0,): 1}})
    with pytest.raises(ModelError):
        FiniteModel((0, 1), predicates={"P": frozenset({(5,)})})


@pytest.mark.parametrize(
    "size, functions, predicates, expected",
    [
        (1, {"c": 0}, {"P": 1}, 2),
        (2, {"c": 0}, {"P": 1}, 8),
        (3, {"c": 0}, {"P": 1}, 24),
        (2, {}, {"R": 2}, 16),
        (2, {"f": 1}, {}, 4),
        (3, {}, {"q": 0}, 2),
    ],
)
def test_model_counts(size, functions, predicates, expected):
    # |U|^(|U|^arity) per function times 2^(|U|^arity) per predicate
    assert sum(1 for _ in enumerate_models(size, functions, predicates)) == expected


def test_evaluate_terms_and_formulas():
    m = FiniteModel((0, 1, 2), {"c": {(): 1}, "f": {(0,): 1, (1,): 2, (2,): 2}}, {"P": frozenset({(0,), (2,)})})
    assert evaluate(T("f(c)"), m) == 2
    assert evaluate(F("P(f(c))"), m) is True
    assert evaluate(F("exists x. P(x) and x != 0"), m) is True
    assert evaluate(F("forall x. P(f(x))"), m) is False
    assert evaluate(T("eps x. P(x)"), m) == 0
    cf = ChoiceFunction(m.universe, {frozenset({0, 2}): 2})
    assert evaluate(T("eps x. P(x)"), m, cf) == 2
    assert evaluate(F("P(x)"), m, env={"x": 1}) is False


def test_evaluate_errors():
    m = FiniteModel((0, 1))
    with pytest.raises(EvaluationError):
        evaluate(F("P(x)"), m, env={"x": 0})
    with pytest.raises(EvaluationError):
        evaluate(F("x = x"), m)
    with pytest.raises(EvaluationError):
        evaluate(T("5"), m)


def test_numerals_and_order_default_to_arithmetic():
    m = arithmetic_model(4)
    assert evaluate(F("1 < 3"), m)
    assert evaluate(T("eps x. 1 < x"), m) == 2
    assert evaluate(T("eps x. 3 < x"), m) == 0


def test_epsilon_depends_only_on_extension():
    m = FiniteModel((0, 1, 2), predicates={"P": frozenset({(1,), (2,)}), "Q": frozenset({(1,), (2,)})})
    for cf in all_choice_functions(m.universe):
        assert evaluate(T("eps x. P(x)"), m, cf) == evaluate(T("eps x. Q(x) and x = x"), m, cf)


def test_extension_requires_one_free_variable():
    m = FiniteModel((0, 1), predicates={"R": frozenset({(0, 1)})})
    assert extension(F("R(x, 1)"), m) == frozenset({0})
    with pytest.raises(EvaluationError):
        extension(F("R(x, y)"), m)


# ---------------------------------------------- exhaustive equivalences


def _exists_oracle(m):
    return bool(m.predicates["P"])


def _forall_oracle(m):
    return len(m.predicates["P"]) == len(m.universe)


def test_exists_equivalence_against_table_oracle():
    # the epsilon form is compared with a direct reading of the P table,
    # not with the evaluator's own quantifier clause
    phi = F("P(eps x. P(x))")
    psi = F("P(eps x. not P(x))")
    pairs = 0
    for m, cf in model_choice_pairs(3, {"c": 0}, {"P": 1}):
        pairs += 1
        assert evaluate(phi, m, cf) == _exists_oracle(m)
        assert evaluate(psi, m, cf) == _forall_oracle(m)
    assert pairs == 2 * 1 + 8 * 2 + 24 * 24


@pytest.mark.parametrize("which", ["exists", "forall"])
def test_equivalence_report_counts(which):
    rep = check_exists_equivalence(3, which)
    assert rep.passed
    assert rep.data == {"models": 34, "instances": 594, "violations": 0}


def test_equivalence_over_wider_family():
    rep = check_exists_equivalence(2, "exists", family=("P(x)", "not P(x)", "x = c", "P(x) and x != c", "P(c) -> P(x)"))
    assert rep.passed and rep.data["instances"] == 5 * (2 + 16)


def test_equivalence_rejects_large_or_unknown_requests():
    with pytest.raises(ValueError):
        check_exists_equivalence(5)
    with pytest.raises(ValueError):
        check_exists_equivalence(2, "nope")


def test_null_collapse_counts_and_without_convention():
    rep = check_null_collapse(3)
    assert rep.passed and rep.data["instances"] == 594

    # a choice map that treats the empty set separately breaks the collapse
    class Split(ChoiceFunction):
        def __call__(self, subset):
            s = frozenset(subset)
            return self.universe[-1] if not s else super().__call__(s)

    m = FiniteModel((0, 1))
    cf = Split(m.universe)
    assert evaluate(T("eps x. x = x"), m, cf) != evaluate(T("eps x. x != x"), m, cf)


def test_ackermann_pairs():
    m = FiniteModel((0, 1, 2), predicates={"P": frozenset({(0,), (2,)})})
    pairs = [(F("P(x)"), F("P(y) and y = y")), (F("P(x)"), F("not P(x)"))]
    for cf in all_choice_functions(m.universe):
        assert check_ackermann(m, cf, pairs).passed


# ----------------------------------------------------- iota and classes


def test_iota_outcomes():
    m = FiniteModel((0, 1, 2), predicates={"P": frozenset({(1,)}), "Q": frozenset({(0,), (1,)})})
    assert iota_check(F("P(x)"), m) == 1
    assert iota_check(F("Q(x)"), m) == IotaFailure("U", frozenset({0, 1}))
    fail = iota_check(F("x != x"), m)
    assert fail.kind == "E" and "existence" in str(fail)


def test_parity_representatives():
    U = tuple(range(4))
    parity = frozenset((a, b) for a in U for b in U if a % 2 == b % 2)
    m = FiniteModel(U, predicates={"Same": parity})
    assert abstraction_representative("Same", m) == {0: 0, 1: 1, 2: 0, 3: 1}


@settings(max_examples=80, deadline=None)
@given(st.lists(st.integers(0, 3), min_size=4, max_size=4), st.randoms(use_true_random=False))
def test_representatives_characterize_equivalence(labels, rnd):
    U = (0, 1, 2, 3)
    rel = frozenset((a, b) for a in U for b in U if labels[a] == labels[b])
    m = FiniteModel(U, predicates={"E": rel})
    # a random choice function: one random member per nonempty subset
    picks = {}
    for k in range(1, 5):
        for combo in itertools.combinations(U, k):
            picks[frozenset(combo)] = rnd.choice(combo)
    table = abstraction_representative("E", m, ChoiceFunction(U, picks))
    for a, b in itertools.product(U, U):
        assert ((a, b) in rel) == (table[a] == table[b])


@pytest.mark.parametrize(
    "pairs, prop",
    [
        ({(0, 0), (1, 1), (0, 1)}, "symmetric"),
        ({(0, 0)}, "reflexive"),
        ({(0, 0), (1, 1), (2, 2), (0, 1), (1, 0), (1, 2), (2, 1)}, "transitive"),
    ],
)
def test_representative_rejects_non_equivalences(pairs, prop):
    m = FiniteModel((0, 1, 2) if prop == "transitive" else (0, 1), predicates={"E": frozenset(pairs)})
    with pytest.raises(NotEquivalenceError) as exc:
        abstraction_representative("E", m)
    assert exc.value.prop == prop


# ------------------------------------------------ finitist verification


def test_verify_matrices_counts_instances():
    mats = [F("x < S(x)"), F("x + 0 = x"), F("not (x < x)")]
    rep = verify_matrices(mats, 5, FinitistInterpretation())
    assert rep.passed and rep.data["instances"] == 15


def test_verify_matrices_reports_first_failure():
    rep = verify_matrices([F("x < g(x)")], 10, FinitistInterpretation(functions={"g": lambda x: x}))
    assert not rep.passed
    assert rep.witness["env"] == {"x": 0}
    assert rep.witness["instance"] == "0 < g(0)"


def test_verify_matrices_rejects_quantifiers():
    with pytest.raises(EvaluationError):
        verify_matrices([F("forall x. x = x")], 3, FinitistInterpretation())


def test_rational_grid_size():
    # Farey-style count of p/q in [-1, 1] with q <= 3
    grid = rational_grid(2)
    assert grid == tuple(sorted({Fraction(p, q) for q in (1, 2, 3) for p in range(-q, q + 1)}))
    assert len(grid) == 2 * (1 + 1 + 2) + 1


@pytest.mark.parametrize("cap", [2, 3, 4])
def test_infinitesimal_extension_is_empty(cap):
    rep = infinitesimal_null_demo(cap)
    assert rep.passed
    assert rep.data["extension"] == []
    assert rep.data["without_nonzero"] == [0]
    assert rep.data["translated"] is True


def test_infinitesimal_cap_floor():
    with pytest.raises(ValueError):
        infinitesimal_null_demo(1)


def test_binomial_helper():
    assert count_choice_functions(4) == 1 * 2 ** comb(4, 2) * 3 ** comb(4, 3) * 4 == 20736
    assert min_choice((2, 0, 1))({0, 1}) == 0
