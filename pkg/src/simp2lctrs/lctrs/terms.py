"""Sorted first-order terms.

Terms are immutable and hash-consed only in the weak sense that their hash is
computed once at construction, so equality checks and dictionary lookups on
large ground terms stay cheap.  Positions are tuples of 1-based argument
indices; the root position is ``()``.
"""

from __future__ import annotations

from typing import Callable, Iterator, Mapping, Union

INT = "int"
BOOL = "bool"

Position = tuple[int, ...]


class Term:
    __slots__ = ("_hash",)

    def is_ground(self) -> bool:
        raise NotImplementedError

    def variables(self) -> set["Var"]:
        out: set[Var] = set()
        _collect_vars(self, out)
        return out

    def __repr__(self) -> str:
        from .printing import show_term

        return show_term(self)


class Var(Term):
    __slots__ = ("name", "sort")

    def __init__(self, name: str, sort: str = INT):
        self.name = name
        self.sort = sort
        self._hash = hash(("var", name, sort))

    def __hash__(self) -> int:
        return self._hash

    def __eq__(self, other: object) -> bool:
        return self is other or (
            isinstance(other, Var) and self.name == other.name and self.sort == other.sort
        )

    def is_ground(self) -> bool:
        return False


class Val(Term):
    """A value symbol: an integer literal or ``true``/``false``."""

    __slots__ = ("value",)

    def __init__(self, value: Union[int, bool]):
        if not isinstance(value, (int, bool)):
            raise TypeError(f"values are ints or bools, got {value!r}")
        self.value = value
        # True == 1 in Python, so the type has to be part of the identity
        self._hash = hash(("val", type(value) is bool, value))

    @property
    def sort(self) -> str:
        return BOOL if type(self.value) is bool else INT

    def __hash__(self) -> int:
        return self._hash

    def __eq__(self, other: object) -> bool:
        return self is other or (
            isinstance(other, Val)
            and type(self.value) is type(other.value)
            and self.value == other.value
        )

    def is_ground(self) -> bool:
        return True


class App(Term):
    """Application of a named function symbol to argument terms."""

    __slots__ = ("symbol", "args", "_ground", "_free")

    def __init__(self, symbol: str, args: tuple[Term, ...] = ()):
        self.symbol = symbol
        self.args = tuple(args)
        self._hash = hash((symbol, self.args))
        self._ground = all(a.is_ground() for a in self.args)
        # engine-owned marker: set to an engine token once the subterm is known
        # to contain no redex for that engine
        self._free = None

    def __hash__(self) -> int:
        return self._hash

    def __eq__(self, other: object) -> bool:
        if self is other:
            return True
        if not isinstance(other, App) or self._hash != other._hash:
            return False
        return self.symbol == other.symbol and self.args == other.args

    def is_ground(self) -> bool:
        return self._ground


TRUE = Val(True)
FALSE = Val(False)


def _collect_vars(t: Term, out: set[Var]) -> None:
    if isinstance(t, Var):
        out.add(t)
    elif isinstance(t, App) and not t._ground:
        for a in t.args:
            _collect_vars(a, out)


def var_names(t: Term) -> set[str]:
    return {v.name for v in t.variables()}


def subterm(t: Term, pos: Position) -> Term:
    for i in pos:
        if not isinstance(t, App) or not 1 <= i <= len(t.args):
            raise IndexError(f"invalid position {pos}")
        t = t.args[i - 1]
    return t


def replace(t: Term, pos: Position, new: Term) -> Term:
    """Return ``t[new]_pos``."""
    if not pos:
        return new
    assert isinstance(t, App)
    i = pos[0] - 1
    args = list(t.args)
    args[i] = replace(args[i], pos[1:], new)
    return App(t.symbol, tuple(args))


def positions(t: Term, prefix: Position = ()) -> Iterator[tuple[Position, Term]]:
    """Pre-order enumeration of (position, subterm)."""
    yield prefix, t
    if isinstance(t, App):
        for i, a in enumerate(t.args, 1):
            yield from positions(a, prefix + (i,))


Substitution = Mapping[str, Term]


def substitute(t: Term, gamma: Substitution) -> Term:
    """Apply a substitution keyed by variable name."""
    if isinstance(t, Var):
        return gamma.get(t.name, t)
    if isinstance(t, App) and not t._ground:
        return App(t.symbol, tuple(substitute(a, gamma) for a in t.args))
    return t


def map_symbols(t: Term, fn: Callable[[str], str]) -> Term:
    if isinstance(t, App):
        return App(fn(t.symbol), tuple(map_symbols(a, fn) for a in t.args))
    return t


def rename_vars(t: Term, fn: Callable[[Var], Var]) -> Term:
    if isinstance(t, Var):
        return fn(t)
    if isinstance(t, App):
        return App(t.symbol, tuple(rename_vars(a, fn) for a in t.args))
    return t


def depth(t: Term) -> int:
    if isinstance(t, App) and t.args:
        return 1 + max(depth(a) for a in t.args)
    return 1


def size(t: Term) -> int:
    if isinstance(t, App):
        return 1 + sum(size(a) for a in t.args)
    return 1
