"""Seeded random SIMP+ programs that usually halt.

Programs are built directly as validated ASTs.  Function ``f<i>`` may call
``f<j>`` for ``j < i`` and, if it is marked recursive, itself.  A recursive
function opens with ``if (p0 <= 0) { ... } else { ... }`` and calls itself
once, only in the else-branch, with ``p0 - 1`` as first argument; ``p0`` is
never assigned.  Loops count a dedicated local up to a small bound.  A small
fraction of loops are left unbounded on purpose so campaigns also exercise
fuel exhaustion.
"""

from __future__ import annotations

import random
from dataclasses import asdict, dataclass
from typing import Optional

from ..syntax.ast import (
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


@dataclass(frozen=True)
class GenConfig:
    seed: int = 0
    max_functions: int = 3  # helper functions besides main
    max_statements: int = 4  # per statement sequence
    max_expr_depth: int = 2
    globals: int = 2
    max_params: int = 2
    recursion_bias: float = 0.5  # probability that a helper is self-recursive
    loop_bound: int = 4
    wild_loop_probability: float = 0.02
    allow_mul: bool = False
    literal_range: int = 5

    def to_json(self) -> dict:
        return asdict(self)


class _Gen:
    def __init__(self, cfg: GenConfig, rng: random.Random):
        self.cfg = cfg
        self.rng = rng
        self.globals = [f"g{k}" for k in range(cfg.globals)]
        self.arity: dict[str, int] = {}
        self.fresh = 0

    def lit(self) -> int:
        r = self.cfg.literal_range
        return self.rng.randint(-r, r)

    def new_local(self) -> str:
        self.fresh += 1
        return f"v{self.fresh}"

    # -- expressions
    def int_expr(self, readable: list[str], depth: int):
        rng = self.rng
        if depth <= 0 or rng.random() < 0.35:
            if readable and rng.random() < 0.7:
                return Name(rng.choice(readable))
            return Num(self.lit())
        ops = ["+", "-"] + (["*"] if self.cfg.allow_mul else [])
        op = rng.choice(ops)
        return BinOp(op, self.int_expr(readable, depth - 1), self.int_expr(readable, depth - 1))

    def bool_expr(self, readable: list[str], depth: int):
        rng = self.rng
        roll = rng.random()
        if depth <= 0 or roll < 0.6:
            if rng.random() < 0.05:
                return BoolLit(rng.random() < 0.5)
            a = self.int_expr(readable, self.cfg.max_expr_depth - 1)
            b = self.int_expr(readable, self.cfg.max_expr_depth - 1)
            form = rng.randrange(6)  # == != < <= > >=, in desugared shape
            if form == 0:
                return Compare("==", a, b)
            if form == 1:
                return Not(Compare("==", a, b))
            if form == 2:
                return Compare("<", a, b)
            if form == 3:
                return Not(Compare("<", b, a))
            if form == 4:
                return Compare("<", b, a)
            return Not(Compare("<", a, b))
        if roll < 0.8:
            return Or(self.bool_expr(readable, depth - 1), self.bool_expr(readable, depth - 1))
        if roll < 0.9:
            return Not(Or(Not(self.bool_expr(readable, depth - 1)), Not(self.bool_expr(readable, depth - 1))))
        return Not(self.bool_expr(readable, depth - 1))

    # -- statements
    def block(self, fn: str, frozen: set[str], scope: list[str], budget: int, nest: int, callees: list[str]):
        """A statement sequence; ``scope`` lists readable locals and params."""
        scope = list(scope)
        out: list[Stmt] = []
        n = self.rng.randint(0, budget)
        for _ in range(n):
            out.extend(self.stmt(fn, frozen, scope, nest, callees))
        return tuple(out)

    def stmt(self, fn: str, frozen: set[str], scope: list[str], nest: int, callees: list[str]) -> list[Stmt]:
        rng = self.rng
        cfg = self.cfg
        readable = scope + self.globals
        writable = [v for v in scope if v not in frozen] + self.globals
        kinds = ["decl", "assign", "assign"]
        if writable and callees:
            kinds += ["call", "call"]
        if nest < 2:
            kinds += ["if", "while"]
        kind = rng.choice(kinds)
        if kind == "decl" or not writable:
            v = self.new_local()
            scope.append(v)
            return [LocalDecl(v, self.lit())]
        if kind == "assign":
            return [Assign(rng.choice(writable), self.int_expr(readable, cfg.max_expr_depth))]
        if kind == "call":
            callee = rng.choice(callees)
            args = tuple(self.int_expr(readable, cfg.max_expr_depth - 1) for _ in range(self.arity[callee]))
            return [CallAssign(rng.choice(writable), callee, args)]
        sub_budget = max(1, cfg.max_statements // 2)
        if kind == "if":
            cond = self.bool_expr(readable, 1)
            then = self.block(fn, frozen, scope, sub_budget, nest + 1, callees)
            orelse = self.block(fn, frozen, scope, sub_budget, nest + 1, callees)
            return [If(cond, then, orelse)]
        # while
        if rng.random() < cfg.wild_loop_probability:
            cond = self.bool_expr(readable, 1)
            body = self.block(fn, frozen, scope, sub_budget, nest + 1, callees)
            return [While(cond, body)]
        counter = self.new_local()
        bound = rng.randint(0, cfg.loop_bound)
        scope.append(counter)
        inner_frozen = frozen | {counter}
        body = self.block(fn, inner_frozen, scope, sub_budget, nest + 1, callees)
        step = Assign(counter, BinOp("+", Name(counter), Num(1)))
        return [LocalDecl(counter, 0), While(Compare("<", Name(counter), Num(bound)), body + (step,))]

    def function(self, index: int, lower: list[str]) -> FunDef:
        rng = self.rng
        cfg = self.cfg
        name = f"f{index}"
        params = tuple(f"p{k}" for k in range(rng.randint(1, max(1, cfg.max_params))))
        self.arity[name] = len(params)
        recursive = rng.random() < cfg.recursion_bias
        scope = list(params)
        if not recursive:
            body = self.block(name, set(), scope, cfg.max_statements, 0, lower)
            return FunDef(name, params, body, self.int_expr(scope + self.globals, cfg.max_expr_depth))
        frozen = {"p0"}
        res = self.new_local()
        pre = (LocalDecl(res, self.lit()),)
        scope.append(res)
        base = self.block(name, frozen, scope, max(1, cfg.max_statements // 2), 1, lower)
        before = self.block(name, frozen, scope, max(1, cfg.max_statements // 2), 1, lower)
        readable = scope + self.globals
        args = (BinOp("-", Name("p0"), Num(1)),) + tuple(
            self.int_expr(readable, cfg.max_expr_depth - 1) for _ in params[1:]
        )
        target = rng.choice([res] + self.globals)
        call = CallAssign(target, name, args)
        after = self.block(name, frozen, scope, max(1, cfg.max_statements // 2), 1, lower)
        guard = Not(Compare("<", Num(0), Name("p0")))  # p0 <= 0
        body = pre + (If(guard, base, before + (call,) + after),)
        return FunDef(name, params, body, self.int_expr(scope + self.globals, cfg.max_expr_depth))

    def program(self) -> Program:
        cfg = self.cfg
        rng = self.rng
        globals_ = tuple((g, self.lit()) for g in self.globals)
        if cfg.max_statements <= 0:
            main = FunDef("main", (), (), self.int_expr(self.globals, cfg.max_expr_depth))
            return Program(globals_, (main,))
        functions: list[FunDef] = []
        n = rng.randint(0, cfg.max_functions)
        for i in range(n):
            functions.append(self.function(i, [f.name for f in functions]))
        callees = [f.name for f in functions]
        body = self.block("main", set(), [], cfg.max_statements, 0, callees)
        if callees and not any(isinstance(s, CallAssign) for s in body):
            # make sure the helpers actually run
            callee = callees[-1]
            args = tuple(Num(rng.randint(0, cfg.loop_bound)) for _ in range(self.arity[callee]))
            target = self.new_local()
            body = (LocalDecl(target, 0), CallAssign(target, callee, args)) + body
        ret = self.int_expr(_declared_top(body) + self.globals, cfg.max_expr_depth)
        return Program(globals_, tuple(functions) + (FunDef("main", (), body, ret),))


def _declared_top(body) -> list[str]:
    return [s.name for s in body if isinstance(s, LocalDecl)]


def gen_program(cfg: GenConfig, seed: Optional[int] = None) -> Program:
    """Deterministic in ``(cfg, seed)``; ``seed`` defaults to ``cfg.seed``."""
    rng = random.Random(cfg.seed if seed is None else seed)
    return _Gen(cfg, rng).program()
