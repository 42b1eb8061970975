from .ast import (
    FALSE,
    TRUE,
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
    Term,
    Top,
    Var,
    conj,
    const,
    disj,
    iff,
    is_formula,
    is_term,
    neq,
    numeral,
)
from .ops import (
    EtaTerm,
    abstract,
    alpha_eq,
    atoms,
    epsilon_rank,
    eps_terms,
    eta_expansion,
    free_vars,
    fresh_name,
    has_eps,
    instantiate,
    is_closed,
    is_proper,
    is_quantifier_free,
    make_eps,
    make_tau,
    quantifier_count,
    replace_term,
    shift,
    substitute,
    substitute_many,
    walk,
)
from .parser import (
    ArityError,
    ParseError,
    Signature,
    UnboundVariableError,
    parse,
    parse_formula,
    parse_lines,
    parse_source,
    parse_term,
)
from .printer import to_text, to_unicode

__all__ = [name for name in dir() if not name.startswith("_")]
