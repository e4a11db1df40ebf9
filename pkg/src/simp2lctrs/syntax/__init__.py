"""SIMP+ syntax: AST, parser, pretty-printer and validation."""

from .ast import (
    Assign,
    BinOp,
    BoolExpr,
    BoolLit,
    CallAssign,
    Compare,
    FunDef,
    If,
    IntExpr,
    LocalDecl,
    Name,
    Not,
    Num,
    Or,
    Program,
    Stmt,
    StmtSeq,
    While,
    expr_vars,
    walk_stmts,
)
from .parser import INT_MAX, INT_MIN, ParseError, parse_expr, parse_program
from .printer import show_expr, show_program, show_stmts
from .validate import Diagnostic, ValidationError, ensure_valid, validate

__all__ = [
    "Assign", "BinOp", "BoolExpr", "BoolLit", "CallAssign", "Compare", "Diagnostic", "FunDef",
    "INT_MAX", "INT_MIN", "If", "IntExpr", "LocalDecl", "Name", "Not", "Num", "Or", "ParseError",
    "Program", "Stmt", "StmtSeq", "ValidationError", "While", "ensure_valid", "expr_vars",
    "parse_expr", "parse_program", "show_expr", "show_program", "show_stmts", "validate",
    "walk_stmts",
]
