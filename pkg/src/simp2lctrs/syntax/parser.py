"""Recursive-descent parser for SIMP+ source text.

Grammar (EBNF; ``//`` starts a line comment)::

    program   := { global | function }
    global    := "int" IDENT "=" literal ";"
    function  := "int" IDENT "(" [ "int" IDENT { "," "int" IDENT } ] ")" [ "=" ]
                 "{" { stmt } "return" expr ";" "}"
    stmt      := "int" IDENT "=" literal ";"
               | simple ";"
               | "if" "(" expr ")" block [ "else" ( block | if-stmt ) ]
               | "while" "(" expr ")" block
               | "for" "(" [ simple | decl ] ";" expr ";" [ simple ] ")" block
    simple    := IDENT "=" ( IDENT "(" [ expr { "," expr } ] ")" | expr )
    block     := "{" { stmt } "}"
    literal   := [ "-" ] INT

Expressions, loosest first: ``=>`` (right associative), ``||``, ``&&``,
``== !=``, ``< <= > >=``, ``+ -``, ``*``, prefix ``!``.  A ``-`` directly in
front of an integer literal in operand position is part of the literal.

Sugar is removed while parsing: ``for`` becomes a ``while`` loop, ``!=``,
``<=``, ``>``, ``>=``, ``&&`` and ``=>`` become combinations of ``==``,
``<``, ``!`` and ``||``.
"""

from __future__ import annotations

import re
from typing import Optional

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

INT_MIN = -(2**63)
INT_MAX = 2**63 - 1

KEYWORDS = frozenset({"int", "if", "else", "while", "for", "return", "true", "false"})


class ParseError(ValueError):
    def __init__(self, message: str, line: int, col: int):
        self.line = line
        self.col = col
        self.message = message
        super().__init__(f"{line}:{col}: {message}")


_TOKEN = re.compile(
    r"(?P<ws>[ \t\r\f]+)|(?P<nl>\n)|(?P<comment>//[^\n]*)"
    r"|(?P<int>\d+)"
    r"|(?P<ident>[A-Za-z_][A-Za-z0-9_]*)"
    r"|(?P<op>==|!=|<=|>=|&&|\|\||=>|[-+*<>=!(){};,])"
)


class _Tok:
    __slots__ = ("kind", "text", "line", "col")

    def __init__(self, kind: str, text: str, line: int, col: int):
        self.kind, self.text, self.line, self.col = kind, text, line, col

    @property
    def loc(self) -> tuple[int, int]:
        return (self.line, self.col)


def tokenize(text: str) -> list[_Tok]:
    toks = []
    line, line_start, pos = 1, 0, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"unknown token {text[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        if kind == "nl":
            line += 1
            line_start = m.end()
        elif kind not in ("ws", "comment"):
            toks.append(_Tok(kind, m.group(), line, m.start() - line_start + 1))
        pos = m.end()
    toks.append(_Tok("eof", "", line, pos - line_start + 1))
    return toks


_INT_NODES = (Num, Name, BinOp)
_BOOL_NODES = (BoolLit, Compare, Not, Or)


class _Parser:
    def __init__(self, text: str, strict: bool):
        self.toks = tokenize(text)
        self.i = 0
        self.strict = strict

    # -- token helpers
    @property
    def cur(self) -> _Tok:
        return self.toks[self.i]

    def peek(self, k: int = 1) -> _Tok:
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def next(self) -> _Tok:
        t = self.toks[self.i]
        self.i += 1
        return t

    def at(self, text: str) -> bool:
        return self.cur.text == text and self.cur.kind != "eof"

    def error(self, msg: str, tok: Optional[_Tok] = None) -> ParseError:
        tok = tok or self.cur
        return ParseError(msg, tok.line, tok.col)

    def expect(self, text: str) -> _Tok:
        if not self.at(text):
            raise self.error(f"expected {text!r}, found {self.cur.text or 'end of input'!r}")
        return self.next()

    def ident(self) -> _Tok:
        tok = self.cur
        if tok.kind != "ident" or tok.text in KEYWORDS:
            raise self.error(f"expected identifier, found {tok.text or 'end of input'!r}")
        return self.next()

    def literal(self) -> int:
        tok = self.cur
        sign = 1
        if self.at("-"):
            self.next()
            sign = -1
        if self.cur.kind != "int":
            raise self.error("expected an integer literal")
        return self._check_range(sign * int(self.next().text), tok)

    def _check_range(self, value: int, tok: _Tok) -> int:
        if not INT_MIN <= value <= INT_MAX:
            raise self.error("integer literal outside the 64-bit range", tok)
        return value

    # -- program structure
    def program(self) -> Program:
        globals_: list[tuple[str, int]] = []
        functions: list[FunDef] = []
        while self.cur.kind != "eof":
            start = self.expect("int")
            name = self.ident()
            if self.at("("):
                functions.append(self.function(name, start))
            else:
                self.expect("=")
                value = self.literal()
                self.expect(";")
                globals_.append((name.text, value))
        return Program(tuple(globals_), tuple(functions))

    def function(self, name: _Tok, start: _Tok) -> FunDef:
        self.expect("(")
        params = []
        if not self.at(")"):
            while True:
                self.expect("int")
                params.append(self.ident().text)
                if not self.at(","):
                    break
                self.next()
        self.expect(")")
        if self.at("="):
            self.next()
        self.expect("{")
        body: list[Stmt] = []
        while not self.at("return"):
            if self.at("}") or self.cur.kind == "eof":
                raise self.error(f"function {name.text} must end with a return statement")
            body.extend(self.stmt())
        self.next()
        ret = self.int_expr()
        self.expect(";")
        if self.at("return"):
            raise self.error("return is only allowed once, at the end of a function body")
        self.expect("}")
        return FunDef(name.text, tuple(params), tuple(body), ret, start.loc)

    def block(self) -> tuple[Stmt, ...]:
        self.expect("{")
        out: list[Stmt] = []
        while not self.at("}"):
            if self.at("return"):
                raise self.error("return is only allowed at the end of a function body")
            if self.cur.kind == "eof":
                raise self.error("unterminated block")
            out.extend(self.stmt())
        self.next()
        return tuple(out)

    def stmt(self) -> list[Stmt]:
        tok = self.cur
        if self.at("int"):
            s = self.decl()
            self.expect(";")
            return [s]
        if self.at("if"):
            return [self.if_stmt()]
        if self.at("while"):
            self.next()
            self.expect("(")
            cond = self.bool_expr()
            self.expect(")")
            return [While(cond, self.block(), tok.loc)]
        if self.at("for"):
            self.next()
            self.expect("(")
            init: list[Stmt] = []
            if not self.at(";"):
                init.append(self.decl() if self.at("int") else self.simple())
            self.expect(";")
            cond = self.bool_expr()
            self.expect(";")
            step: list[Stmt] = []
            if not self.at(")"):
                step.append(self.simple())
            self.expect(")")
            body = self.block()
            return init + [While(cond, body + tuple(step), tok.loc)]
        s = self.simple()
        self.expect(";")
        return [s]

    def decl(self) -> LocalDecl:
        tok = self.expect("int")
        name = self.ident().text
        self.expect("=")
        return LocalDecl(name, self.literal(), tok.loc)

    def if_stmt(self) -> If:
        tok = self.expect("if")
        self.expect("(")
        cond = self.bool_expr()
        self.expect(")")
        then = self.block()
        orelse: tuple[Stmt, ...] = ()
        if self.at("else"):
            self.next()
            orelse = (self.if_stmt(),) if self.at("if") else self.block()
        return If(cond, then, orelse, tok.loc)

    def simple(self) -> Stmt:
        target = self.ident()
        self.expect("=")
        if self.cur.kind == "ident" and self.cur.text not in KEYWORDS and self.peek().text == "(":
            callee = self.next()
            self.next()
            args = []
            if not self.at(")"):
                args.append(self.int_expr())
                while self.at(","):
                    self.next()
                    args.append(self.int_expr())
            self.expect(")")
            if not self.at(";") and not self.at(")"):
                raise self.error("a function call must be the whole right-hand side of an assignment")
            return CallAssign(target.text, callee.text, tuple(args), target.loc)
        return Assign(target.text, self.int_expr(), target.loc)

    # -- expressions
    def int_expr(self):
        tok = self.cur
        e = self.expr()
        if not isinstance(e, _INT_NODES):
            raise self.error("expected an integer expression", tok)
        return e

    def bool_expr(self):
        tok = self.cur
        e = self.expr()
        if not isinstance(e, _BOOL_NODES):
            raise self.error("expected a boolean expression", tok)
        return e

    def _bool(self, e, tok: _Tok):
        if not isinstance(e, _BOOL_NODES):
            raise self.error("expected a boolean operand", tok)
        return e

    def _int(self, e, tok: _Tok):
        if not isinstance(e, _INT_NODES):
            raise self.error("expected an integer operand", tok)
        return e

    def expr(self):
        return self.implication()

    def implication(self):
        tok = self.cur
        left = self.disjunction()
        if self.at("=>"):
            op = self.next()
            rtok = self.cur
            right = self.implication()
            return Or(Not(self._bool(left, tok), op.loc), self._bool(right, rtok), op.loc)
        return left

    def disjunction(self):
        tok = self.cur
        left = self.conjunction()
        while self.at("||"):
            op = self.next()
            rtok = self.cur
            right = self.conjunction()
            left = Or(self._bool(left, tok), self._bool(right, rtok), op.loc)
        return left

    def conjunction(self):
        tok = self.cur
        left = self.equality()
        while self.at("&&"):
            op = self.next()
            rtok = self.cur
            right = self.equality()
            left = Not(
                Or(Not(self._bool(left, tok), op.loc), Not(self._bool(right, rtok), op.loc), op.loc), op.loc
            )
        return left

    def equality(self):
        tok = self.cur
        left = self.relation()
        if self.at("==") or self.at("!="):
            op = self.next()
            rtok = self.cur
            right = self._int(self.relation(), rtok)
            left = self._int(left, tok)
            node = Compare("==", left, right, op.loc)
            left = node if op.text == "==" else Not(node, op.loc)
            if self.at("==") or self.at("!="):
                raise self.error("equality operators do not chain; add parentheses")
        return left

    def relation(self):
        tok = self.cur
        left = self.additive()
        if self.cur.text in ("<", "<=", ">", ">=") and self.cur.kind == "op":
            op = self.next()
            rtok = self.cur
            right = self._int(self.additive(), rtok)
            left = self._int(left, tok)
            if op.text == "<":
                left = Compare("<", left, right, op.loc)
            elif op.text == ">":
                left = Compare("<", right, left, op.loc)
            elif op.text == "<=":
                left = Not(Compare("<", right, left, op.loc), op.loc)
            else:
                left = Not(Compare("<", left, right, op.loc), op.loc)
            if self.cur.text in ("<", "<=", ">", ">="):
                raise self.error("comparison operators do not chain; add parentheses")
        return left

    def additive(self):
        tok = self.cur
        left = self.multiplicative()
        while self.at("+") or self.at("-"):
            op = self.next()
            rtok = self.cur
            right = self._int(self.multiplicative(), rtok)
            left = BinOp(op.text, self._int(left, tok), right, op.loc)
        return left

    def multiplicative(self):
        tok = self.cur
        left = self.unary()
        while self.at("*"):
            op = self.next()
            if self.strict:
                raise self.error("multiplication is an extension and is rejected in strict mode", op)
            rtok = self.cur
            right = self._int(self.unary(), rtok)
            left = BinOp("*", self._int(left, tok), right, op.loc)
        return left

    def unary(self):
        tok = self.cur
        if self.at("!"):
            self.next()
            return Not(self._bool(self.unary(), self.cur), tok.loc)
        if self.at("-"):
            if self.peek().kind != "int":
                raise self.error("unary minus is only allowed on integer literals; write 0 - e")
            self.next()
            value = self._check_range(-int(self.next().text), tok)
            return Num(value, tok.loc)
        return self.primary()

    def primary(self):
        tok = self.cur
        if self.at("("):
            self.next()
            e = self.expr()
            self.expect(")")
            return e
        if tok.kind == "int":
            self.next()
            return Num(self._check_range(int(tok.text), tok), tok.loc)
        if tok.kind == "ident":
            if tok.text in ("true", "false"):
                self.next()
                return BoolLit(tok.text == "true", tok.loc)
            if tok.text in KEYWORDS:
                raise self.error(f"unexpected keyword {tok.text!r}")
            self.next()
            if self.at("("):
                raise self.error(
                    "function calls may only appear as the whole right-hand side of an assignment", tok
                )
            return Name(tok.text, tok.loc)
        raise self.error(f"unexpected {tok.text or 'end of input'!r}")


def parse_program(text: str, strict: bool = False) -> Program:
    """Parse SIMP+ source into a desugared :class:`Program`."""
    p = _Parser(text, strict)
    return p.program()


def parse_expr(text: str, strict: bool = False):
    """Parse a single integer or boolean expression (desugared)."""
    p = _Parser(text, strict)
    e = p.expr()
    if p.cur.kind != "eof":
        raise p.error(f"trailing input {p.cur.text!r}")
    return e
