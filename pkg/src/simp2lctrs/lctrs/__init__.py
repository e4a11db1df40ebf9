"""Logically constrained term rewriting over the integer theory."""

from .engine import (
    CALC,
    AmbiguousRedex,
    Engine,
    EngineError,
    FreshVariableError,
    FuelExhausted,
    Redex,
    Step,
    Trace,
    find_redex,
    match,
    replay,
    rewrite_to_nf,
    rule_applies,
)
from .format import FormatError, emit, parse_lctrs, parse_term, show_rule, show_term
from .orthogonality import OrthogonalityReport, check_orthogonal
from .system import ConstrainedRule, FunctionSymbol, Kind, Lctrs, RuleError, SortError, sort_of
from .terms import BOOL, FALSE, INT, TRUE, App, Position, Term, Val, Var
from .theory import interpret_theory

__all__ = [
    "AmbiguousRedex", "App", "BOOL", "CALC", "ConstrainedRule", "Engine", "EngineError",
    "FALSE", "FormatError", "FreshVariableError", "FuelExhausted", "FunctionSymbol", "INT",
    "Kind", "Lctrs", "OrthogonalityReport", "Position", "Redex", "RuleError", "SortError",
    "Step", "TRUE", "Term", "Trace", "Val", "Var", "check_orthogonal", "emit", "find_redex",
    "interpret_theory", "match", "parse_lctrs", "parse_term", "replay", "rewrite_to_nf",
    "rule_applies", "show_rule", "show_term", "sort_of",
]
