"""Static checks for the well-formedness assumptions on SIMP+ programs."""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Optional

from .ast import (
    Assign,
    BinOp,
    CallAssign,
    FunDef,
    If,
    LocalDecl,
    Loc,
    Name,
    Program,
    While,
    walk_expr,
)

# symbols introduced by the transformation, plus the term-syntax keywords
RESERVED_FUNCTIONS = frozenset({"env", "stack", "return", "bot"})
TERM_KEYWORDS = frozenset({"div", "mod", "exp", "not", "and", "or", "true", "false", "terms"})
_FRESH_SYMBOL = re.compile(r"u\d+$")


@dataclass(frozen=True)
class Diagnostic:
    code: str
    message: str
    name: str
    loc: Loc = None

    def __str__(self) -> str:
        where = f"{self.loc[0]}:{self.loc[1]}: " if self.loc else ""
        return f"{where}{self.code}: {self.message}"


def _reserved(name: str) -> bool:
    return name in RESERVED_FUNCTIONS or name in TERM_KEYWORDS or bool(_FRESH_SYMBOL.match(name))


class _Checker:
    def __init__(self, program: Program, strict: bool):
        self.p = program
        self.strict = strict
        self.out: list[Diagnostic] = []
        self.arity: dict[str, int] = {}
        self.globals: set[str] = set()

    def report(self, code: str, message: str, name: str, loc: Loc = None) -> None:
        self.out.append(Diagnostic(code, message, name, loc))

    def run(self) -> list[Diagnostic]:
        for f in self.p.functions:
            if f.name in self.arity:
                self.report("duplicate-function", f"function {f.name} is defined more than once", f.name, f.loc)
            else:
                self.arity[f.name] = len(f.params)
            if _reserved(f.name):
                self.report("reserved-name", f"{f.name} is reserved and cannot name a function", f.name, f.loc)
        for name, _ in self.p.globals:
            if name in self.globals:
                self.report("duplicate-global", f"global {name} is declared more than once", name)
            self.globals.add(name)
            self._check_var_name(name, None)
        if "main" not in self.arity:
            self.report("missing-main", "the program has no function main", "main")
        elif self.arity["main"] != 0:
            self.report("main-arity", "main must take no parameters", "main", self.p.function("main").loc)
        for f in self.p.functions:
            self.function(f)
        return self.out

    def _check_var_name(self, name: str, loc: Loc) -> None:
        if _reserved(name):
            self.report("reserved-name", f"{name} is reserved and cannot name a variable", name, loc)
        elif name in self.arity:
            self.report("name-clash", f"variable {name} has the same name as a function", name, loc)

    def function(self, f: FunDef) -> None:
        seen: set[str] = set()
        for p in f.params:
            if p in seen:
                self.report("duplicate-parameter", f"parameter {p} of {f.name} is repeated", p, f.loc)
            seen.add(p)
            if p in self.globals:
                self.report("shadowing", f"parameter {p} of {f.name} shadows a global variable", p, f.loc)
            self._check_var_name(p, f.loc)
        scopes = [set(f.params)]
        self.block(f, f.body, scopes)
        self.expr(f, f.ret, scopes)

    def visible(self, name: str, scopes: list[set[str]]) -> bool:
        return name in self.globals or any(name in s for s in scopes)

    def expr(self, f: FunDef, e, scopes: list[set[str]]) -> None:
        for node in walk_expr(e):
            if isinstance(node, Name) and not self.visible(node.name, scopes):
                self.report(
                    "undeclared-variable", f"{node.name} is not declared in {f.name}", node.name, node.loc
                )
            elif self.strict and isinstance(node, BinOp) and node.op == "*":
                self.report("extension", "multiplication is rejected in strict mode", "*", node.loc)

    def block(self, f: FunDef, stmts, scopes: list[set[str]]) -> None:
        for s in stmts:
            if isinstance(s, LocalDecl):
                if s.name in self.globals:
                    self.report("shadowing", f"local {s.name} in {f.name} shadows a global variable", s.name, s.loc)
                elif s.name in f.params:
                    self.report("shadowing", f"local {s.name} in {f.name} shadows a parameter", s.name, s.loc)
                elif any(s.name in sc for sc in scopes):
                    self.report("redeclaration", f"local {s.name} in {f.name} is already declared", s.name, s.loc)
                self._check_var_name(s.name, s.loc)
                scopes[-1].add(s.name)
            elif isinstance(s, Assign):
                self.target(f, s.target, s.loc, scopes)
                self.expr(f, s.expr, scopes)
            elif isinstance(s, CallAssign):
                self.target(f, s.target, s.loc, scopes)
                for a in s.args:
                    self.expr(f, a, scopes)
                want: Optional[int] = self.arity.get(s.callee)
                if want is None:
                    self.report("undefined-function", f"{s.callee} is called but never defined", s.callee, s.loc)
                elif want != len(s.args):
                    self.report(
                        "arity",
                        f"{s.callee} takes {want} arguments but is called with {len(s.args)}",
                        s.callee,
                        s.loc,
                    )
            elif isinstance(s, If):
                self.expr(f, s.cond, scopes)
                self.block(f, s.then, scopes + [set()])
                self.block(f, s.orelse, scopes + [set()])
            elif isinstance(s, While):
                self.expr(f, s.cond, scopes)
                self.block(f, s.body, scopes + [set()])

    def target(self, f: FunDef, name: str, loc: Loc, scopes) -> None:
        if not self.visible(name, scopes):
            self.report("undeclared-variable", f"{name} is assigned but not declared in {f.name}", name, loc)


def validate(program: Program, strict: bool = False) -> list[Diagnostic]:
    """Return every violated well-formedness condition; empty means valid."""
    return _Checker(program, strict).run()


class ValidationError(ValueError):
    def __init__(self, diagnostics: list[Diagnostic]):
        self.diagnostics = diagnostics
        super().__init__("; ".join(str(d) for d in diagnostics))


def ensure_valid(program: Program, strict: bool = False) -> Program:
    diags = validate(program, strict)
    if diags:
        raise ValidationError(diags)
    return program
