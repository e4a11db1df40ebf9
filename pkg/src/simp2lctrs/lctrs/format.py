"""The ``.lctrs`` text format.

Grammar::

    document  := { comment } "SORTS" sort { sort }
                 "SIGNATURE" { "terms" IDENT ":" [ sort { "*" sort } "=>" ] sort }
                 [ "RULES" { term "->" term [ "[" term "]" ] } ]
    comment   := "#" ... end of line

Terms use prefix application ``f(t1, ..., tn)`` for declared symbols and infix
notation for the integer theory.  Operator precedence, loosest first::

    =>            (right associative)
    or            (left)
    and           (left)
    = != < <= > >=  (non associative)
    + -           (left)
    * div mod exp (left)
    not           (prefix)

A bare identifier that is not declared in the signature is a variable; its
sort is inferred from the positions it occupies.  Negative integer literals
are written ``-3``.  ``bot`` is printed bare, every other constant as ``c()``.
"""

from __future__ import annotations

import re
from typing import Iterator, Optional

from .system import ConstrainedRule, FunctionSymbol, Kind, Lctrs, SortError, check_rule
from .terms import BOOL, INT, TRUE, App, Term, Val, Var
from .printing import _NON_ASSOC, _PREC, _RIGHT_ASSOC, show_rule, show_term
from .theory import CALC_SYMBOLS

KEYWORDS = frozenset({"div", "mod", "exp", "not", "and", "or", "true", "false", "terms", "SORTS", "SIGNATURE", "RULES"})

class FormatError(ValueError):
    def __init__(self, message: str, line: int = 0, col: int = 0):
        self.line = line
        self.col = col
        loc = f"{line}:{col}: " if line else ""
        super().__init__(f"{loc}{message}")


def _sort_order(sorts) -> list[str]:
    rest = sorted(s for s in sorts if s not in (INT, BOOL))
    return [INT, BOOL] + rest


def emit(system: Lctrs) -> str:
    lines = ["SORTS", "  " + " ".join(_sort_order(system.sorts)), "SIGNATURE"]
    for name in sorted(system.signature):
        sym = system.signature[name]
        decl = " * ".join(sym.arg_sorts) + " => " + sym.result if sym.arg_sorts else sym.result
        lines.append(f"  {sym.kind.value} {name} : {decl}")
    if system.rules:
        lines.append("RULES")
        lines.extend("  " + show_rule(r) for r in system.rules)
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------- parsing

_TOKEN = re.compile(
    r"(?P<ws>[ \t\r]+)|(?P<nl>\n)|(?P<comment>#[^\n]*)"
    r"|(?P<int>\d+)"
    r"|(?P<ident>[A-Za-z_][A-Za-z0-9_']*)"
    r"|(?P<op>->|=>|<=|>=|!=|=|<|>|\+|-|\*|\(|\)|\[|\]|,|:)"
)


class _Tok:
    __slots__ = ("kind", "text", "line", "col")

    def __init__(self, kind: str, text: str, line: int, col: int):
        self.kind, self.text, self.line, self.col = kind, text, line, col

    def __repr__(self) -> str:
        return f"{self.text!r}@{self.line}:{self.col}"


def _tokenize(text: str) -> list[_Tok]:
    toks = []
    line, line_start, pos = 1, 0, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise FormatError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        if kind == "nl":
            line += 1
            line_start = m.end()
        elif kind not in ("ws", "comment"):
            toks.append(_Tok(kind, m.group(), line, m.start() - line_start + 1))
        pos = m.end()
    toks.append(_Tok("eof", "", line, pos - line_start + 1))
    return toks


class _Raw:
    """Untyped parse tree node: variables get their sorts later."""

    __slots__ = ("kind", "name", "args", "value", "tok")

    def __init__(self, kind, name=None, args=(), value=None, tok=None):
        self.kind, self.name, self.args, self.value, self.tok = kind, name, args, value, tok


class _Parser:
    def __init__(self, text: str, signature: dict[str, FunctionSymbol]):
        self.toks = _tokenize(text)
        self.i = 0
        self.signature = signature

    @property
    def cur(self) -> _Tok:
        return self.toks[self.i]

    def peek(self, k: int = 1) -> _Tok:
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def next(self) -> _Tok:
        t = self.toks[self.i]
        self.i += 1
        return t

    def error(self, msg: str, tok: Optional[_Tok] = None):
        tok = tok or self.cur
        return FormatError(msg, tok.line, tok.col)

    def expect(self, text: str) -> _Tok:
        if self.cur.text != text or self.cur.kind == "eof":
            raise self.error(f"expected {text!r}, found {self.cur.text or 'end of input'!r}")
        return self.next()

    def ident(self) -> _Tok:
        if self.cur.kind != "ident":
            raise self.error(f"expected identifier, found {self.cur.text or 'end of input'!r}")
        return self.next()

    # term := implication
    def term(self, level: int = 1) -> _Raw:
        if level > 6:
            return self.unary()
        left = self.term(level + 1)
        while True:
            tok = self.cur
            op = tok.text if tok.kind in ("op", "ident") else None
            if op is None or _PREC.get(op) != level or op in ("div", "mod", "exp") and tok.kind != "ident":
                return left
            self.next()
            if op in _RIGHT_ASSOC:
                right = self.term(level)
                return _Raw("app", op, (left, right), tok=tok)
            right = self.term(level + 1)
            left = _Raw("app", op, (left, right), tok=tok)
            if op in _NON_ASSOC and _PREC.get(self.cur.text) == level and self.cur.kind == "op":
                raise self.error("comparison operators do not associate; add parentheses")

    def unary(self) -> _Raw:
        tok = self.cur
        if tok.kind == "ident" and tok.text == "not":
            self.next()
            return _Raw("app", "not", (self.unary(),), tok=tok)
        return self.primary()

    def primary(self) -> _Raw:
        tok = self.cur
        if tok.text == "(":
            self.next()
            t = self.term()
            self.expect(")")
            return t
        if tok.text == "-" and self.peek().kind == "int":
            self.next()
            return _Raw("val", value=-int(self.next().text), tok=tok)
        if tok.kind == "int":
            self.next()
            return _Raw("val", value=int(tok.text), tok=tok)
        if tok.kind == "ident":
            if tok.text in ("true", "false"):
                self.next()
                return _Raw("val", value=tok.text == "true", tok=tok)
            if tok.text in KEYWORDS:
                raise self.error(f"unexpected keyword {tok.text!r}")
            self.next()
            if self.cur.text == "(":
                self.next()
                args = []
                if self.cur.text != ")":
                    args.append(self.term())
                    while self.cur.text == ",":
                        self.next()
                        args.append(self.term())
                self.expect(")")
                if tok.text not in self.signature:
                    raise self.error(f"undeclared function symbol {tok.text!r}", tok)
                return _Raw("app", tok.text, tuple(args), tok=tok)
            if tok.text in self.signature:
                return _Raw("app", tok.text, (), tok=tok)
            return _Raw("var", tok.text, tok=tok)
        raise self.error(f"unexpected {tok.text or 'end of input'!r}")


class _SortInference:
    def __init__(self, signature: dict[str, FunctionSymbol]):
        self.signature = signature
        self.env: dict[str, str] = {}

    def bind(self, raw: _Raw, sort: str) -> None:
        known = self.env.setdefault(raw.name, sort)
        if known != sort:
            raise FormatError(f"variable {raw.name} used as {known} and as {sort}", raw.tok.line, raw.tok.col)

    def infer(self, raw: _Raw, expected: Optional[str]) -> Optional[str]:
        if raw.kind == "val":
            got = BOOL if type(raw.value) is bool else INT
        elif raw.kind == "var":
            if expected is not None:
                self.bind(raw, expected)
            return self.env.get(raw.name, expected)
        elif raw.name in CALC_SYMBOLS:
            sym = CALC_SYMBOLS[raw.name]
            if len(raw.args) != sym.arity:
                raise FormatError(f"{raw.name} expects {sym.arity} arguments", raw.tok.line, raw.tok.col)
            if sym.arg_sorts is None:
                s = self.infer(raw.args[0], None) or self.infer(raw.args[1], None)
                if s is not None:
                    self.infer(raw.args[0], s)
                    self.infer(raw.args[1], s)
            else:
                for a, s in zip(raw.args, sym.arg_sorts):
                    self.infer(a, s)
            got = sym.result
        else:
            sym = self.signature[raw.name]
            if len(raw.args) != sym.arity:
                raise FormatError(
                    f"{raw.name} expects {sym.arity} arguments, got {len(raw.args)}", raw.tok.line, raw.tok.col
                )
            for a, s in zip(raw.args, sym.arg_sorts):
                self.infer(a, s)
            got = sym.result
        if expected is not None and got != expected:
            raise FormatError(f"expected a term of sort {expected}, got {got}", raw.tok.line, raw.tok.col)
        return got

    def build(self, raw: _Raw) -> Term:
        if raw.kind == "val":
            return Val(raw.value)
        if raw.kind == "var":
            # an unconstrained variable (e.g. only under a polymorphic =) defaults to int
            return Var(raw.name, self.env.get(raw.name, INT))
        return App(raw.name, tuple(self.build(a) for a in raw.args))


def parse_term(text: str, system: Lctrs) -> Term:
    """Parse one term in the syntax of the system's signature."""
    p = _Parser(text, system.signature)
    raw = p.term()
    if p.cur.kind != "eof":
        raise p.error(f"trailing input {p.cur.text!r}")
    inf = _SortInference(system.signature)
    inf.infer(raw, None)
    inf.infer(raw, None)
    return inf.build(raw)


def parse_lctrs(text: str) -> Lctrs:
    """Parse a ``.lctrs`` document and validate its rules."""
    p = _Parser(text, {})
    sorts_tok = p.expect("SORTS")
    sorts: list[str] = []
    while p.cur.kind == "ident" and p.cur.text not in ("SIGNATURE", "RULES"):
        name = p.next().text
        if name in sorts:
            raise p.error(f"sort {name} declared twice", p.toks[p.i - 1])
        sorts.append(name)
    for s in (INT, BOOL):
        if s not in sorts:
            raise p.error(f"theory sort {s} must be declared", sorts_tok)
    signature: dict[str, FunctionSymbol] = {}
    p.expect("SIGNATURE")
    while p.cur.kind == "ident" and p.cur.text != "RULES":
        kind_tok = p.ident()
        if kind_tok.text != Kind.TERMS.value:
            raise p.error(
                f"only 'terms' symbols can be declared; theory symbols and values are built in", kind_tok
            )
        name_tok = p.ident()
        if name_tok.text in KEYWORDS or name_tok.text in CALC_SYMBOLS:
            raise p.error(f"{name_tok.text!r} is reserved", name_tok)
        if name_tok.text in signature:
            raise p.error(f"symbol {name_tok.text} declared twice", name_tok)
        p.expect(":")
        decl = [p.ident().text]
        while p.cur.text == "*":
            p.next()
            decl.append(p.ident().text)
        if p.cur.text == "=>":
            p.next()
            result = p.ident().text
            args = tuple(decl)
        else:
            if len(decl) != 1:
                raise p.error("expected '=>' in sort declaration")
            result, args = decl[0], ()
        for s in args + (result,):
            if s not in sorts:
                raise p.error(f"undeclared sort {s}", name_tok)
        signature[name_tok.text] = FunctionSymbol(name_tok.text, args, result, Kind.TERMS)
    p.signature = signature
    rules: list[ConstrainedRule] = []
    base = Lctrs(tuple(sorts), signature, ())
    if p.cur.text == "RULES":
        p.next()
        while p.cur.kind != "eof":
            start = p.cur
            lhs_raw = p.term()
            p.expect("->")
            rhs_raw = p.term()
            phi_raw = None
            if p.cur.text == "[":
                p.next()
                phi_raw = p.term()
                p.expect("]")
            inf = _SortInference(signature)
            for _ in range(2):
                ls = inf.infer(lhs_raw, None)
                inf.infer(rhs_raw, ls)
                if phi_raw is not None:
                    inf.infer(phi_raw, BOOL)
            rule = ConstrainedRule(
                inf.build(lhs_raw), inf.build(rhs_raw), inf.build(phi_raw) if phi_raw is not None else TRUE
            )
            try:
                check_rule(rule, base, len(rules) + 1)
            except (SortError, ValueError) as e:
                raise FormatError(str(e), start.line, start.col) from None
            rules.append(rule)
    if p.cur.kind != "eof":
        raise p.error(f"unexpected {p.cur.text!r}")
    return Lctrs(tuple(sorts), signature, tuple(rules))


def iter_rule_lines(system: Lctrs) -> Iterator[str]:
    for i, r in enumerate(system.rules):
        yield f"{system.rule_id(i)}  {show_rule(r)}"
