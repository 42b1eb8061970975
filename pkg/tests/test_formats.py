from importlib.resources import files

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from epsilon_kernel.classical import FiniteModel, all_choice_functions, enumerate_models, evaluate
from epsilon_kernel.formats import (
    FormatError,
    element,
    format_model,
    parse_choice,
    parse_kripke,
    parse_model,
    parse_space,
    read_text,
    unary_epsilon,
)
from epsilon_kernel.kripke import kripke_force
from epsilon_kernel.syntax import parse_formula, parse_term

SAMPLES = files("epsilon_kernel") / "data" / "samples"


def sample(name):
    return (SAMPLES / name).read_text()


def test_element_tokens():
    assert element("12") == 12 and element("a") == "a"
    with pytest.raises(FormatError):
        element("  ")


def test_sample_model():
    mf = parse_model(sample("model.txt"))
    m = mf.model
    assert m.universe == (0, 1, 2)
    assert evaluate(parse_term("f(c)"), m) == 2
    assert m.predicates["Same"] == frozenset({(0, 0), (1, 1), (2, 2), (0, 2), (2, 0)})
    assert mf.choice({0, 2}) == 2
    assert evaluate(parse_term("eps x. P(x)"), m, mf.choice) == 2


def test_model_round_trip_keeps_tables():
    mf = parse_model(sample("model.txt"))
    again = parse_model(format_model(mf.model, mf.choice))
    assert again.model.functions == mf.model.functions
    assert again.model.predicates == mf.model.predicates
    assert again.choice.as_table() == mf.choice.as_table()


MODELS = list(enumerate_models(2, {"c": 0, "f": 1}, {"P": 1, "R": 2, "q": 0}))


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(MODELS), st.integers(0, len(list(all_choice_functions((0, 1)))) - 1))
def test_format_then_parse_is_identity(m, k):
    cf = list(all_choice_functions(m.universe))[k]
    back = parse_model(format_model(m, cf))
    assert back.model.universe == m.universe
    assert back.model.functions == m.functions
    # empty relations have no arity on disk; compare extensions
    assert {k: set(v) for k, v in back.model.predicates.items()} == {k: set(v) for k, v in m.predicates.items()}
    assert back.choice.as_table() == cf.as_table()


@pytest.mark.parametrize(
    "text, where",
    [
        ("const c = 1", None),
        ("universe 0 1\nconst c 1", 2),
        ("universe 0 1\nfunc f/1: 0 1", 2),
        ("universe 0 1\nfunc f/2: 0 -> 1", 2),
        ("universe 0 1\npred R/2: 0, 1", 2),
        ("universe 0 1\npred R/2: (0, 1, 1)", 2),
        ("universe 0 1\nphi 0 -> 1", 2),
        ("universe 0 1\nwhatever", 2),
        ("universe 0 1\nconst c = 7", None),
        ("universe 0 1\nphi {0} -> 1", None),
    ],
)
def test_bad_model_files(text, where):
    with pytest.raises(FormatError) as exc:
        parse_model(text)
    assert exc.value.line == (where or 0)


def test_standalone_choice_table():
    cf = parse_choice("# min elsewhere\n{1, 2} -> 2\nphi {0, 2} -> 2\n", (0, 1, 2))
    assert cf({1, 2}) == 2 and cf({0, 2}) == 2 and cf({0, 1}) == 0
    with pytest.raises(FormatError):
        parse_choice("{1, 2} -> 0", (0, 1, 2))
    with pytest.raises(FormatError):
        parse_choice("1 -> 2", (0, 1, 2))


def test_sample_space():
    sf = parse_space(sample("space.txt"))
    assert sf.space.opens == frozenset({frozenset(), frozenset({"a"}), frozenset({"a", "b", "c"})})
    assert sf.interp == {"X": frozenset({"a"})}
    with pytest.raises(FormatError):
        parse_space("points a b\nopen a\npred X: b")
    with pytest.raises(FormatError):
        parse_space("open a")
    with pytest.raises(FormatError):
        parse_space("points a b c\nopen a\nopen b\nopen a c")


def test_sample_kripke():
    kf = parse_kripke(sample("two_worlds.txt"))
    ks = kf.structure
    assert ks.root == "M0" and ks.domains["M1"] == {"a", "b"}
    assert kripke_force(ks, "M1", parse_formula("F(b)"))
    e = parse_term("eps x. F(x)")
    assert kf.choice.value(e, "M1") == "b" and kf.choice.value(e, "M0") == "a"


@pytest.mark.parametrize(
    "text",
    [
        "root M0",
        "worlds A B\nedge A",
        "worlds A B\npred F/1: a",
        "worlds A B\nchoice A a",
        "worlds A B\nroot C",
        "worlds A\nfly A",
    ],
)
def test_bad_kripke_files(text):
    with pytest.raises(FormatError):
        parse_kripke(text)


def test_intransitive_keyword():
    kf = parse_kripke("worlds 0 1 2\nedge 0 1\nedge 1 2\nintransitive\n" + "".join(f"domain {w}: a\n" for w in range(3)))
    assert (0, 2) not in kf.structure.access


def test_unary_epsilon():
    assert unary_epsilon("F") == parse_term("eps x. F(x)")
    assert unary_epsilon("R(y, a)") == parse_term("eps y. R(y, a)")
    with pytest.raises(FormatError):
        unary_epsilon("R(x, y)")
    with pytest.raises(FormatError):
        unary_epsilon("F(")


def test_read_text_missing_file(tmp_path):
    with pytest.raises(FormatError):
        read_text(tmp_path / "nope.txt")
