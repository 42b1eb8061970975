"""Hilbert-style derivations: checking, epsilon elimination and replays."""

from .checker import PROFILES, CalculusProfile, check, check_derivation, critical_formulas, get_profile
from .derivation import Derivation, Justification, Line, parse_derivation
from .elimination import EliminationError, eliminate_one_epsilon, second_epsilon_theorem
from .first_theorem import Certificate, Instance, first_theorem_instance_check
from .induction import build_induction, replay_induction

__all__ = [
    "PROFILES",
    "CalculusProfile",
    "Certificate",
    "Derivation",
    "EliminationError",
    "Instance",
    "Justification",
    "Line",
    "build_induction",
    "check",
    "check_derivation",
    "critical_formulas",
    "eliminate_one_epsilon",
    "first_theorem_instance_check",
    "get_profile",
    "parse_derivation",
    "replay_induction",
    "second_epsilon_theorem",
]
