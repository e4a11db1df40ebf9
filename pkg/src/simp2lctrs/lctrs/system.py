"""Constrained rewrite rules and LCTRSs over the integer theory."""

from __future__ import annotations

import enum
from functools import cached_property
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional

from .terms import BOOL, INT, TRUE, App, Term, Val, Var
from .theory import CALC_SYMBOLS, THEORY_SORTS, is_theory_term


class SortError(ValueError):
    pass


class RuleError(ValueError):
    pass


class Kind(enum.Enum):
    VALUE = "value"
    CALC = "theory"
    TERMS = "terms"


@dataclass(frozen=True)
class FunctionSymbol:
    name: str
    arg_sorts: tuple[str, ...]
    result: str
    kind: Kind = Kind.TERMS

    @property
    def arity(self) -> int:
        return len(self.arg_sorts)


@dataclass(frozen=True)
class ConstrainedRule:
    lhs: Term
    rhs: Term
    constraint: Term = TRUE

    @property
    def root(self) -> str:
        assert isinstance(self.lhs, App)
        return self.lhs.symbol

    @cached_property
    def constraint_vars(self) -> frozenset[str]:
        return frozenset(v.name for v in self.constraint.variables())

    @cached_property
    def logical_vars(self) -> frozenset[str]:
        """Variables that must be instantiated by values: Var(phi) + fresh rhs vars."""
        lhs = {v.name for v in self.lhs.variables()}
        rhs = {v.name for v in self.rhs.variables()}
        phi = {v.name for v in self.constraint.variables()}
        return frozenset(phi | (rhs - lhs))

    @cached_property
    def fresh_vars(self) -> frozenset[str]:
        lhs = {v.name for v in self.lhs.variables()}
        return frozenset({v.name for v in self.rhs.variables()} - lhs)

    def __str__(self) -> str:
        from .printing import show_rule

        return show_rule(self)


def _builtin_symbol(name: str) -> Optional[FunctionSymbol]:
    sym = CALC_SYMBOLS.get(name)
    if sym is None:
        return None
    return FunctionSymbol(name, sym.arg_sorts or (), sym.result, Kind.CALC)


@dataclass(frozen=True)
class Lctrs:
    """Sorts, a terms signature and rules.  Theory symbols are implicit, as are
    the calculation rules, which the engine evaluates natively."""

    sorts: tuple[str, ...] = (INT, BOOL)
    signature: Mapping[str, FunctionSymbol] = field(default_factory=dict)
    rules: tuple[ConstrainedRule, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "sorts", tuple(self.sorts))
        object.__setattr__(self, "rules", tuple(self.rules))
        object.__setattr__(self, "signature", dict(self.signature))
        for s in THEORY_SORTS:
            if s not in self.sorts:
                raise SortError(f"theory sort {s} must be declared")
        for sym in self.signature.values():
            if sym.name in CALC_SYMBOLS:
                raise SortError(f"{sym.name} is a theory symbol and cannot be redeclared")
            for s in sym.arg_sorts + (sym.result,):
                if s not in self.sorts:
                    raise SortError(f"symbol {sym.name} uses undeclared sort {s}")
        for idx, rule in enumerate(self.rules, 1):
            check_rule(rule, self, idx)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Lctrs):
            return NotImplemented
        return (
            set(self.sorts) == set(other.sorts)
            and self.signature == other.signature
            and self.rules == other.rules
        )

    def __hash__(self) -> int:
        return hash((frozenset(self.sorts), tuple(sorted(self.signature)), self.rules))

    def symbol(self, name: str) -> FunctionSymbol:
        sym = self.signature.get(name) or _builtin_symbol(name)
        if sym is None:
            raise SortError(f"undeclared function symbol {name}")
        return sym

    def rule_id(self, index: int) -> str:
        """Stable identifier of the 0-based rule ``index``."""
        return f"r{index + 1}:{self.rules[index].root}"

    @property
    def defined_symbols(self) -> set[str]:
        return {r.root for r in self.rules}

    def with_rules(self, rules: Iterable[ConstrainedRule]) -> "Lctrs":
        return Lctrs(self.sorts, self.signature, tuple(rules))


def sort_of(t: Term, system: Lctrs) -> str:
    if isinstance(t, (Var, Val)):
        return t.sort
    assert isinstance(t, App)
    if t.symbol in CALC_SYMBOLS:
        return CALC_SYMBOLS[t.symbol].result
    return system.symbol(t.symbol).result


def check_sorts(t: Term, system: Lctrs) -> str:
    """Return the sort of ``t`` after checking it is well-sorted."""
    if isinstance(t, (Var, Val)):
        return t.sort
    assert isinstance(t, App)
    arg_sorts = tuple(check_sorts(a, system) for a in t.args)
    if t.symbol in CALC_SYMBOLS:
        sym = CALC_SYMBOLS[t.symbol]
        if len(arg_sorts) != sym.arity:
            raise SortError(f"{t.symbol} expects {sym.arity} arguments")
        if sym.arg_sorts is None:
            if arg_sorts[0] != arg_sorts[1] or arg_sorts[0] not in THEORY_SORTS:
                raise SortError(f"{t.symbol} needs two arguments of one theory sort")
        elif arg_sorts != sym.arg_sorts:
            raise SortError(f"{t.symbol} expects {sym.arg_sorts}, got {arg_sorts}")
        return sym.result
    sym = system.symbol(t.symbol)
    if arg_sorts != sym.arg_sorts:
        raise SortError(
            f"{t.symbol} expects arguments {' * '.join(sym.arg_sorts) or '()'}, "
            f"got {' * '.join(arg_sorts) or '()'}"
        )
    return sym.result


def check_rule(rule: ConstrainedRule, system: Lctrs, index: int = 0) -> None:
    where = f"rule {index}" if index else "rule"
    if not isinstance(rule.lhs, App):
        raise RuleError(f"{where}: left-hand side must be a function application")
    if is_theory_term(rule.lhs):
        raise RuleError(f"{where}: left-hand side is a theory term")
    ls = check_sorts(rule.lhs, system)
    rs = check_sorts(rule.rhs, system)
    if ls != rs:
        raise SortError(f"{where}: sides have different sorts ({ls} vs {rs})")
    if not is_theory_term(rule.constraint) or check_sorts(rule.constraint, system) != BOOL:
        raise RuleError(f"{where}: constraint must be a boolean theory term")
    seen: dict[str, str] = {}
    for t in (rule.lhs, rule.rhs, rule.constraint):
        for v in t.variables():
            if seen.setdefault(v.name, v.sort) != v.sort:
                raise SortError(f"{where}: variable {v.name} used with two sorts")
