"""Core abstract syntax of SIMP+ after desugaring.

Every node carries an optional source location ``(line, column)`` that is
excluded from equality, so parsed and pretty-printed-then-reparsed trees
compare equal.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Optional, Union

Loc = Optional[tuple[int, int]]


def _loc():
    return field(default=None, compare=False, repr=False)


# ---------------------------------------------------------------- expressions


@dataclass(frozen=True)
class Num:
    value: int
    loc: Loc = _loc()


@dataclass(frozen=True)
class Name:
    name: str
    loc: Loc = _loc()


@dataclass(frozen=True)
class BinOp:
    op: str  # "+", "-" or "*"
    left: "IntExpr"
    right: "IntExpr"
    loc: Loc = _loc()


IntExpr = Union[Num, Name, BinOp]


@dataclass(frozen=True)
class BoolLit:
    value: bool
    loc: Loc = _loc()


@dataclass(frozen=True)
class Compare:
    op: str  # "==" or "<"
    left: IntExpr
    right: IntExpr
    loc: Loc = _loc()


@dataclass(frozen=True)
class Not:
    arg: "BoolExpr"
    loc: Loc = _loc()


@dataclass(frozen=True)
class Or:
    left: "BoolExpr"
    right: "BoolExpr"
    loc: Loc = _loc()


BoolExpr = Union[BoolLit, Compare, Not, Or]

# ---------------------------------------------------------------- statements


@dataclass(frozen=True)
class LocalDecl:
    name: str
    value: int
    loc: Loc = _loc()


@dataclass(frozen=True)
class Assign:
    target: str
    expr: IntExpr
    loc: Loc = _loc()


@dataclass(frozen=True)
class CallAssign:
    target: str
    callee: str
    args: tuple[IntExpr, ...]
    loc: Loc = _loc()


@dataclass(frozen=True)
class If:
    cond: BoolExpr
    then: tuple["Stmt", ...]
    orelse: tuple["Stmt", ...] = ()
    loc: Loc = _loc()


@dataclass(frozen=True)
class While:
    cond: BoolExpr
    body: tuple["Stmt", ...]
    loc: Loc = _loc()


Stmt = Union[LocalDecl, Assign, CallAssign, If, While]
StmtSeq = tuple[Stmt, ...]


@dataclass(frozen=True)
class FunDef:
    name: str
    params: tuple[str, ...]
    body: StmtSeq
    ret: IntExpr
    loc: Loc = _loc()


@dataclass(frozen=True)
class Program:
    globals: tuple[tuple[str, int], ...]
    functions: tuple[FunDef, ...]

    @property
    def global_names(self) -> tuple[str, ...]:
        return tuple(name for name, _ in self.globals)

    def function(self, name: str) -> FunDef:
        for f in self.functions:
            if f.name == name:
                return f
        raise KeyError(name)

    def function_map(self) -> dict[str, FunDef]:
        return {f.name: f for f in self.functions}


# ---------------------------------------------------------------- helpers


def expr_vars(e) -> set[str]:
    """Variables read by an integer or boolean expression."""
    out: set[str] = set()
    stack = [e]
    while stack:
        node = stack.pop()
        if isinstance(node, Name):
            out.add(node.name)
        elif isinstance(node, (BinOp, Compare, Or)):
            stack.extend((node.left, node.right))
        elif isinstance(node, Not):
            stack.append(node.arg)
    return out


def walk_stmts(seq: StmtSeq) -> Iterator[Stmt]:
    """Pre-order traversal of statements, descending into if/while bodies."""
    for s in seq:
        yield s
        if isinstance(s, If):
            yield from walk_stmts(s.then)
            yield from walk_stmts(s.orelse)
        elif isinstance(s, While):
            yield from walk_stmts(s.body)


def walk_expr(e) -> Iterator:
    stack = [e]
    while stack:
        node = stack.pop()
        yield node
        if isinstance(node, (BinOp, Compare, Or)):
            stack.extend((node.right, node.left))
        elif isinstance(node, Not):
            stack.append(node.arg)


def stmt_exprs(s: Stmt) -> list:
    if isinstance(s, Assign):
        return [s.expr]
    if isinstance(s, CallAssign):
        return list(s.args)
    if isinstance(s, (If, While)):
        return [s.cond]
    return []
