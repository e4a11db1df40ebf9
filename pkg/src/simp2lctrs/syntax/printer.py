"""Pretty-printer producing source that parses back to the same AST.

Desugared comparisons are shown in their familiar form where the parser
would rebuild the identical tree: ``!(b < a)`` prints as ``a <= b``,
``!(a == b)`` as ``a != b`` and ``!(!p || !q)`` as ``p && q``.
"""

from __future__ import annotations

from .ast import (
    Assign,
    BinOp,
    BoolLit,
    CallAssign,
    Compare,
    FunDef,
    If,
    LocalDecl,
    Name,
    Not,
    Num,
    Or,
    Program,
    Stmt,
    While,
)

# binding strength, loosest first; matches the parser's levels
_OR, _AND, _EQ, _REL, _ADD, _MUL, _UNARY, _ATOM = range(2, 10)


def _is_and(e) -> bool:
    return isinstance(e, Not) and isinstance(e.arg, Or) and isinstance(e.arg.left, Not) and isinstance(e.arg.right, Not)


def _level(e) -> int:
    if isinstance(e, (Num, Name, BoolLit)):
        return _ATOM
    if isinstance(e, BinOp):
        return _MUL if e.op == "*" else _ADD
    if isinstance(e, Compare):
        return _EQ if e.op == "==" else _REL
    if isinstance(e, Or):
        return _OR
    if isinstance(e, Not):
        if isinstance(e.arg, Compare):
            return _EQ if e.arg.op == "==" else _REL
        if _is_and(e):
            return _AND
        return _UNARY
    raise TypeError(f"not an expression: {e!r}")


def _wrap(e, min_level: int) -> str:
    s = show_expr(e)
    return f"({s})" if _level(e) < min_level else s


def show_expr(e) -> str:
    if isinstance(e, Num):
        return str(e.value)
    if isinstance(e, Name):
        return e.name
    if isinstance(e, BoolLit):
        return "true" if e.value else "false"
    if isinstance(e, BinOp):
        lvl = _level(e)
        return f"{_wrap(e.left, lvl)} {e.op} {_wrap(e.right, lvl + 1)}"
    if isinstance(e, Compare):
        return f"{_wrap(e.left, _ADD)} {e.op} {_wrap(e.right, _ADD)}"
    if isinstance(e, Or):
        return f"{_wrap(e.left, _OR)} || {_wrap(e.right, _OR + 1)}"
    if isinstance(e, Not):
        a = e.arg
        if isinstance(a, Compare):
            if a.op == "==":
                return f"{_wrap(a.left, _ADD)} != {_wrap(a.right, _ADD)}"
            return f"{_wrap(a.right, _ADD)} <= {_wrap(a.left, _ADD)}"
        if _is_and(e):
            return f"{_wrap(a.left.arg, _AND)} && {_wrap(a.right.arg, _AND + 1)}"
        return f"!{_wrap(a, _UNARY)}"
    raise TypeError(f"not an expression: {e!r}")


def _block(stmts, indent: int) -> list[str]:
    out = []
    for s in stmts:
        out.extend(_stmt(s, indent))
    return out


def _stmt(s: Stmt, indent: int) -> list[str]:
    pad = "  " * indent
    if isinstance(s, LocalDecl):
        return [f"{pad}int {s.name} = {s.value};"]
    if isinstance(s, Assign):
        return [f"{pad}{s.target} = {show_expr(s.expr)};"]
    if isinstance(s, CallAssign):
        return [f"{pad}{s.target} = {s.callee}({', '.join(show_expr(a) for a in s.args)});"]
    if isinstance(s, If):
        lines = [f"{pad}if ({show_expr(s.cond)}) {{"] + _block(s.then, indent + 1)
        if s.orelse:
            lines += [f"{pad}}} else {{"] + _block(s.orelse, indent + 1)
        return lines + [f"{pad}}}"]
    if isinstance(s, While):
        return [f"{pad}while ({show_expr(s.cond)}) {{"] + _block(s.body, indent + 1) + [f"{pad}}}"]
    raise TypeError(f"not a statement: {s!r}")


def show_function(f: FunDef) -> str:
    params = ", ".join(f"int {p}" for p in f.params)
    lines = [f"int {f.name}({params}) {{"] + _block(f.body, 1) + [f"  return {show_expr(f.ret)};", "}"]
    return "\n".join(lines)


def show_stmts(stmts, indent: int = 0) -> str:
    return "\n".join(_block(stmts, indent))


def show_program(p: Program) -> str:
    parts = []
    if p.globals:
        parts.append("\n".join(f"int {name} = {value};" for name, value in p.globals))
    parts.extend(show_function(f) for f in p.functions)
    return "\n\n".join(parts) + "\n"
