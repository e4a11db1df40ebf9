"""Greedy delta debugging over SIMP+ programs.

Candidates are tried biggest cut first: drop a helper function or a global,
drop or inline a statement, then simplify expressions and literals.  The
first candidate that still validates and still fails replaces the current
program, and the search restarts from it.
"""

from __future__ import annotations

from dataclasses import replace
from typing import Callable, Iterator

from ..syntax.ast import (
    Assign,
    BinOp,
    BoolLit,
    CallAssign,
    Compare,
    FunDef,
    If,
    LocalDecl,
    Not,
    Num,
    Or,
    Program,
    While,
)
from ..syntax.validate import validate


def _int_variants(e) -> Iterator:
    if isinstance(e, Num):
        if e.value != 0:
            yield Num(0)
            if abs(e.value) > 1:
                yield Num(e.value // 2)
    elif isinstance(e, BinOp):
        yield e.left
        yield e.right
        for a in _int_variants(e.left):
            yield replace(e, left=a)
        for b in _int_variants(e.right):
            yield replace(e, right=b)


def _bool_variants(phi) -> Iterator:
    if isinstance(phi, BoolLit):
        return
    yield BoolLit(True)
    yield BoolLit(False)
    if isinstance(phi, Or):
        yield phi.left
        yield phi.right
        for a in _bool_variants(phi.left):
            yield replace(phi, left=a)
        for b in _bool_variants(phi.right):
            yield replace(phi, right=b)
    elif isinstance(phi, Not):
        for a in _bool_variants(phi.arg):
            yield replace(phi, arg=a)
    elif isinstance(phi, Compare):
        for a in _int_variants(phi.left):
            yield replace(phi, left=a)
        for b in _int_variants(phi.right):
            yield replace(phi, right=b)


def _stmt_variants(s) -> Iterator:
    """Same-position replacements of one statement (structure kept)."""
    if isinstance(s, LocalDecl) and s.value != 0:
        yield replace(s, value=0)
    elif isinstance(s, Assign):
        for e in _int_variants(s.expr):
            yield replace(s, expr=e)
    elif isinstance(s, CallAssign):
        for k, a in enumerate(s.args):
            for e in _int_variants(a):
                yield replace(s, args=s.args[:k] + (e,) + s.args[k + 1 :])
    elif isinstance(s, If):
        for t in _seq_variants(s.then, cuts=True):
            yield replace(s, then=t)
        for t in _seq_variants(s.orelse, cuts=True):
            yield replace(s, orelse=t)
        for c in _bool_variants(s.cond):
            yield replace(s, cond=c)
    elif isinstance(s, While):
        for t in _seq_variants(s.body, cuts=True):
            yield replace(s, body=t)
        for c in _bool_variants(s.cond):
            yield replace(s, cond=c)


def _seq_variants(seq: tuple, cuts: bool) -> Iterator[tuple]:
    if cuts:
        for k, s in enumerate(seq):
            yield seq[:k] + seq[k + 1 :]
            if isinstance(s, If):
                yield seq[:k] + s.then + seq[k + 1 :]
                yield seq[:k] + s.orelse + seq[k + 1 :]
            elif isinstance(s, While):
                yield seq[:k] + s.body + seq[k + 1 :]
    for k, s in enumerate(seq):
        for s2 in _stmt_variants(s):
            yield seq[:k] + (s2,) + seq[k + 1 :]


def _function_variants(f: FunDef) -> Iterator[FunDef]:
    for body in _seq_variants(f.body, cuts=True):
        yield replace(f, body=body)
    for e in _int_variants(f.ret):
        yield replace(f, ret=e)


def candidates(p: Program) -> Iterator[Program]:
    for k, f in enumerate(p.functions):
        if f.name != "main":
            yield replace(p, functions=p.functions[:k] + p.functions[k + 1 :])
    for k in range(len(p.globals)):
        yield replace(p, globals=p.globals[:k] + p.globals[k + 1 :])
    for k, f in enumerate(p.functions):
        for f2 in _function_variants(f):
            yield replace(p, functions=p.functions[:k] + (f2,) + p.functions[k + 1 :])
    for k, (name, value) in enumerate(p.globals):
        if value != 0:
            yield replace(p, globals=p.globals[:k] + ((name, 0),) + p.globals[k + 1 :])


def shrink(program: Program, still_fails: Callable[[Program], bool], budget: int = 300) -> Program:
    """Smallest program found within ``budget`` failure checks."""
    current = program
    checks = 0
    improved = True
    while improved and checks < budget:
        improved = False
        for cand in candidates(current):
            if validate(cand):
                continue
            checks += 1
            if still_fails(cand):
                current = cand
                improved = True
                break
            if checks >= budget:
                break
    return current
