import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from epsilon_kernel.arith import (
    BATTERY,
    ArithError,
    ArithInterp,
    CapExceeded,
    battery_formulas,
    battery_report,
    check_E1_E2,
    epsilon_of,
    least_number_eval,
    predecessor,
    schema_instances,
)
from epsilon_kernel.syntax import parse_formula, parse_term

F = parse_formula
T = parse_term

# the battery written as plain Python predicates, evaluated without the library
PY = {
    "x >= 3": lambda x: x >= 3,
    "x + x = 4": lambda x: x + x == 4,
    "x != x": lambda x: False,
    "x = x": lambda x: True,
    "x * x = 9": lambda x: x * x == 9,
    "x * x = 10": lambda x: x * x == 10,
    "2 <= x": lambda x: 2 <= x,
    "x < 0": lambda x: False,
    "x = 7": lambda x: x == 7,
    "x * x > 20": lambda x: x * x > 20,
    "5 < x and x < 9": lambda x: 5 < x < 9,
    "x = 0": lambda x: x == 0,
    "not (x < 5)": lambda x: x >= 5,
    "x + 3 = 2 * x": lambda x: x + 3 == 2 * x,
    "x * x = x": lambda x: x * x == x,
    "x + 1 = 13": lambda x: x + 1 == 13,
    "exists y. y * y = x and 1 < x": lambda x: 1 < x and any(y * y == x for y in range(20)),
    "x > 19": lambda x: x > 19,
    "forall y. y < x -> y * y < 50": lambda x: all(y * y < 50 for y in range(min(x, 20))),
    "x = 4 or x = 11": lambda x: x in (4, 11),
}


def _least(pred, cap):
    for n in range(cap):
        if pred(n):
            return n
    return 0


def test_battery_oracle_covers_battery():
    assert set(PY) == set(BATTERY)


@pytest.mark.parametrize("src", BATTERY)
def test_least_value_matches_direct_loop(src):
    e = epsilon_of(F(src))
    assert least_number_eval(e, ArithInterp(cap=20)) == _least(PY[src], 20)


@pytest.mark.parametrize("src", BATTERY)
def test_schema_instances_hold_for_every_numeral(src):
    rep = check_E1_E2(F(src), cap=20)
    assert rep.passed
    assert rep.data["instances"] == 80 and rep.data["violations"] == 0


def test_battery_report_has_no_violations():
    rep = battery_report(20)
    assert rep.passed
    assert rep.data == {"predicates": 20, "violations": 0}


def test_minimality_is_checked_against_every_smaller_numeral():
    # eps-least at t says the least witness is at most t whenever A(t)
    for src in BATTERY:
        v = _least(PY[src], 20)
        for t in range(20):
            inst = schema_instances(F(src), t)["eps-least"]
            assert least_number_eval(inst, ArithInterp(cap=20))
            if PY[src](t):
                assert v <= t


def test_a_wrong_value_breaks_the_schemas():
    A = F("x + x = 4")
    e = epsilon_of(A)
    interp = ArithInterp(cap=20)
    # pretend eps x. x + x = 4 were 3
    bad = {e: 3}
    insts = schema_instances(A, 2)
    assert not least_number_eval(insts["eps"], interp, bad)
    assert not least_number_eval(insts["eps-least"], interp, bad)
    assert not least_number_eval(schema_instances(A, 2)["E2"], interp, {e: 3})


def test_cap_behaviour():
    e = T("eps x. x > 30")
    lax = ArithInterp(cap=10)
    assert least_number_eval(e, lax) == 0
    assert lax.exhausted == [e]
    with pytest.raises(CapExceeded) as exc:
        least_number_eval(e, ArithInterp(cap=10, strict=True))
    assert exc.value.cap == 10 and "no witness below 10" in str(exc.value)
    assert least_number_eval(e, ArithInterp(cap=40, strict=True)) == 31


def test_values_and_errors():
    assert least_number_eval(T("g(0) + g(5)")) == 4
    assert least_number_eval(F("x * 2 = 6"), env={"x": 3}) is True
    assert least_number_eval(T("eps x. x = y + 2"), env={"y": 5}) == 7
    with pytest.raises(ArithError):
        least_number_eval(F("x = x"))
    with pytest.raises(ArithError):
        least_number_eval(T("h(1)"))
    with pytest.raises(ArithError):
        least_number_eval(F("Q(1)"))
    with pytest.raises(ArithError):
        ArithInterp(cap=0)
    with pytest.raises(ArithError):
        epsilon_of(F("x = y"))


def test_override_assignment_takes_precedence():
    e = T("eps x. x = 5")
    assert least_number_eval(e, S={e: 9}) == 9
    assert least_number_eval(T("(eps x. x = 5) + 1"), S={e: 9}) == 10


def test_predecessor():
    assert [predecessor(n) for n in range(4)] == [0, 0, 1, 2]


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 30), st.integers(0, 30), st.integers(1, 40))
def test_least_solution_of_linear_bound(a, b, cap):
    # eps x. a <= x + b is max(a - b, 0) whenever that is below the cap
    v = least_number_eval(T(f"eps x. {a} <= x + {b}"), ArithInterp(cap=cap))
    expected = max(a - b, 0)
    assert v == (expected if expected < cap else 0)


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(BATTERY), st.integers(0, 19))
def test_e1_e2_as_property(src, t):
    interp = ArithInterp(cap=20)
    for inst in schema_instances(F(src), t).values():
        assert least_number_eval(inst, interp)
