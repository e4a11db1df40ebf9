"""Concrete syntax for terms and rules (see :mod:`.format` for the grammar)."""

from __future__ import annotations

from .terms import App, Term, Val, Var

_PREC = {
    "=>": 1,
    "or": 2,
    "and": 3,
    "=": 4, "!=": 4, "<": 4, "<=": 4, ">": 4, ">=": 4,
    "+": 5, "-": 5,
    "*": 6, "div": 6, "mod": 6, "exp": 6,
}
_RIGHT_ASSOC = {"=>"}
_NON_ASSOC = {"=", "!=", "<", "<=", ">", ">="}
_ATOM_PREC = 8


def _is_atomic(t: Term) -> bool:
    # things printed without parentheses
    return not isinstance(t, App) or t.symbol == "bot"


def _prec(t: Term) -> int:
    if isinstance(t, App) and t.symbol in _PREC:
        return _PREC[t.symbol]
    if isinstance(t, App) and t.symbol == "not":
        return 7
    return _ATOM_PREC


def show_term(t: Term) -> str:
    if isinstance(t, Var):
        return t.name
    if isinstance(t, Val):
        if type(t.value) is bool:
            return "true" if t.value else "false"
        return str(t.value)
    assert isinstance(t, App)
    if t.symbol == "not":
        (a,) = t.args
        inner = show_term(a)
        return f"not {inner}" if _prec(a) >= 7 else f"not ({inner})"
    if t.symbol in _PREC:
        p = _PREC[t.symbol]
        left, right = t.args
        ls, rs = show_term(left), show_term(right)
        lp, rp = _prec(left), _prec(right)
        if lp < p or (lp == p and (t.symbol in _RIGHT_ASSOC or t.symbol in _NON_ASSOC)):
            ls = f"({ls})"
        if rp < p or (rp == p and t.symbol not in _RIGHT_ASSOC):
            rs = f"({rs})"
        return f"{ls} {t.symbol} {rs}"
    if not t.args:
        return t.symbol if t.symbol == "bot" else f"{t.symbol}()"
    sep = "," if all(_is_atomic(a) for a in t.args) else ", "
    return f"{t.symbol}({sep.join(show_term(a) for a in t.args)})"


def show_rule(rule) -> str:
    s = f"{show_term(rule.lhs)} -> {show_term(rule.rhs)}"
    if not (isinstance(rule.constraint, Val) and rule.constraint.value is True):
        s += f" [{show_term(rule.constraint)}]"
    return s


