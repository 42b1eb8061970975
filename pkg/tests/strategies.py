"""Hypothesis strategies for well-scoped ASTs."""

from hypothesis import strategies as st

from epsilon_kernel.syntax import (
    And,
    App,
    Bot,
    Bound,
    Eps,
    Eq,
    Exists,
    Forall,
    Implies,
    Not,
    Or,
    Pred,
    Top,
    Var,
)

VARS = ["x", "y", "z", "u"]
CONSTS = ["a", "b", "c"]
HINTS = ["x", "y", "z", "a", "P", "w1"]


def terms(bound: int, depth: int):
    leaves = [st.sampled_from(VARS).map(Var), st.sampled_from(CONSTS).map(App)]
    if bound:
        leaves.append(st.integers(0, bound - 1).map(Bound))
    base = st.one_of(*leaves)
    if depth <= 0:
        return base
    return st.one_of(
        base,
        st.tuples(terms(bound, depth - 1)).map(lambda a: App("f", a)),
        st.tuples(terms(bound, depth - 1), terms(bound, depth - 1)).map(lambda a: App("g", a)),
        st.tuples(terms(bound, depth - 1), terms(bound, depth - 1)).map(lambda a: App("+", a)),
        st.builds(Eps, formulas(bound + 1, depth - 1), st.sampled_from(HINTS)),
    )


def formulas(bound: int, depth: int):
    t = terms(bound, max(depth - 1, 0))
    base = st.one_of(
        st.just(Top()),
        st.just(Bot()),
        st.just(Pred("Q")),
        st.tuples(t).map(lambda a: Pred("P", a)),
        st.tuples(t, t).map(lambda a: Pred("R", a)),
        st.tuples(t, t).map(lambda a: Pred("<", a)),
        st.builds(Eq, t, t),
    )
    if depth <= 0:
        return base
    sub = formulas(bound, depth - 1)
    inner = formulas(bound + 1, depth - 1)
    return st.one_of(
        base,
        st.builds(Not, sub),
        st.builds(And, sub, sub),
        st.builds(Or, sub, sub),
        st.builds(Implies, sub, sub),
        st.builds(Forall, inner, st.sampled_from(HINTS)),
        st.builds(Exists, inner, st.sampled_from(HINTS)),
    )


def closed_formulas(depth: int):
    """Formulas without free variables (quantifiers supply all variables)."""
    return formulas(0, depth).filter(lambda f: not _has_var(f))


def _has_var(node) -> bool:
    from epsilon_kernel.syntax import free_vars

    return bool(free_vars(node))
