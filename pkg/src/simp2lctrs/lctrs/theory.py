"""The standard integer theory signature and its interpretation."""

from __future__ import annotations

import operator
from typing import Callable, Optional

from .terms import BOOL, INT, App, Term, Val, Var


def _trunc_div(n: int, m: int) -> int:
    if m == 0:
        return 0
    q = abs(n) // abs(m)
    return q if (n >= 0) == (m >= 0) else -q


def _trunc_mod(n: int, m: int) -> int:
    if m == 0:
        return 0
    return n - m * _trunc_div(n, m)


def _exp(n: int, k: int) -> int:
    return 0 if k < 0 else n**k


class TheorySymbol:
    """A calculation symbol of the integer theory.

    ``arg_sorts`` is ``None`` for the sort-polymorphic equality symbols, which
    accept two arguments of one shared theory sort.
    """

    __slots__ = ("name", "arg_sorts", "result", "fn")

    def __init__(self, name: str, arg_sorts: Optional[tuple[str, ...]], result: str, fn: Callable):
        self.name = name
        self.arg_sorts = arg_sorts
        self.result = result
        self.fn = fn

    @property
    def arity(self) -> int:
        return 2 if self.arg_sorts is None else len(self.arg_sorts)


_II = (INT, INT)
_BB = (BOOL, BOOL)

CALC_SYMBOLS: dict[str, TheorySymbol] = {
    s.name: s
    for s in [
        TheorySymbol("+", _II, INT, operator.add),
        TheorySymbol("-", _II, INT, operator.sub),
        TheorySymbol("*", _II, INT, operator.mul),
        TheorySymbol("div", _II, INT, _trunc_div),
        TheorySymbol("mod", _II, INT, _trunc_mod),
        TheorySymbol("exp", _II, INT, _exp),
        TheorySymbol(">=", _II, BOOL, operator.ge),
        TheorySymbol(">", _II, BOOL, operator.gt),
        TheorySymbol("<", _II, BOOL, operator.lt),
        TheorySymbol("<=", _II, BOOL, operator.le),
        TheorySymbol("=", None, BOOL, operator.eq),
        TheorySymbol("!=", None, BOOL, operator.ne),
        TheorySymbol("and", _BB, BOOL, lambda a, b: a and b),
        TheorySymbol("or", _BB, BOOL, lambda a, b: a or b),
        TheorySymbol("=>", _BB, BOOL, lambda a, b: (not a) or b),
        TheorySymbol("not", (BOOL,), BOOL, operator.not_),
    ]
}

THEORY_SORTS = (INT, BOOL)


def is_calc_symbol(name: str) -> bool:
    return name in CALC_SYMBOLS


def is_theory_term(t: Term) -> bool:
    if isinstance(t, Val):
        return True
    if isinstance(t, Var):
        return t.sort in THEORY_SORTS
    assert isinstance(t, App)
    return t.symbol in CALC_SYMBOLS and all(is_theory_term(a) for a in t.args)


def is_calc_redex(t: Term) -> bool:
    """A calculation symbol applied to values only."""
    return (
        isinstance(t, App)
        and t.symbol in CALC_SYMBOLS
        and all(isinstance(a, Val) for a in t.args)
    )


def apply_calc(symbol: str, args: tuple[Val, ...]) -> Val:
    sym = CALC_SYMBOLS[symbol]
    if len(args) != sym.arity:
        raise ValueError(f"{symbol} expects {sym.arity} arguments, got {len(args)}")
    vals = [a.value for a in args]
    if sym.arg_sorts is None:
        if args[0].sort != args[1].sort:
            raise ValueError(f"{symbol} applied to mixed sorts")
    else:
        for a, s in zip(args, sym.arg_sorts):
            if a.sort != s:
                raise ValueError(f"{symbol} expects {s}, got {a.sort} value {a.value!r}")
    res = sym.fn(*vals)
    return Val(bool(res) if sym.result == BOOL else int(res))


def interpret_theory(t: Term) -> Val:
    """Interpret a ground theory term as its unique value."""
    if isinstance(t, Val):
        return t
    if isinstance(t, Var):
        raise ValueError(f"term is not ground: variable {t.name}")
    if t.symbol not in CALC_SYMBOLS:
        raise ValueError(f"not a theory term: symbol {t.symbol}")
    return apply_calc(t.symbol, tuple(interpret_theory(a) for a in t.args))
