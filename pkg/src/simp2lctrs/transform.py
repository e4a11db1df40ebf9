"""Translation of SIMP+ programs into LCTRSs with an explicit call stack.

The environment term ``env(x1, ..., xk, stack(frame, rest))`` keeps global
variables at fixed argument positions and the running function at the top
of the stack.  Statements touching a global become rules rooted at ``env``;
all others are rules on the frame symbol itself.  Each statement position
gets a fresh symbol ``u<i>`` from a single counter threaded through the
whole program.

The if-statement's else-branch starts from ``u<j1>``, where ``j1`` is the
counter returned by the then-branch, and continues numbering at ``j1 + 1``.
This keeps every index unique and reproduces the numbering of the reference
system for the summation program.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Optional

from .lctrs.printing import show_rule
from .lctrs.system import ConstrainedRule, FunctionSymbol, Kind, Lctrs
from .lctrs.terms import BOOL, INT, App, Term, Val, Var, rename_vars, substitute
from .syntax.ast import (
    Assign,
    BinOp,
    BoolLit,
    CallAssign,
    Compare,
    If,
    LocalDecl,
    Name,
    Not,
    Num,
    Or,
    Program,
    Stmt,
    While,
    expr_vars,
    walk_stmts,
)

STATE = "state"
ENV = "env"
PROCESS = "process"
BOT = App("bot")

MUTATIONS = ("drop-env", "swap-if", "omit-pop-subst")


class TransformError(Exception):
    pass


@dataclass(frozen=True)
class Options:
    """Switches for the optional constructor-stack variant and fault injection."""

    constructor_stack: bool = False
    mutations: frozenset[str] = frozenset()

    def __post_init__(self):
        unknown = set(self.mutations) - set(MUTATIONS)
        if unknown:
            raise ValueError(f"unknown mutation(s) {sorted(unknown)}; choose from {', '.join(MUTATIONS)}")


# ---------------------------------------------------------------- expressions


_OPS = {"+": "+", "-": "-", "*": "*"}


def int_term(e) -> Term:
    if isinstance(e, Num):
        return Val(e.value)
    if isinstance(e, Name):
        return Var(e.name, INT)
    if isinstance(e, BinOp):
        return App(_OPS[e.op], (int_term(e.left), int_term(e.right)))
    raise TransformError(f"not an integer expression: {e!r}")


def bool_term(phi) -> Term:
    """Boolean expression as a theory formula; ``!(b < a)`` is written ``a <= b``."""
    if isinstance(phi, BoolLit):
        return Val(phi.value)
    if isinstance(phi, Compare):
        op = "=" if phi.op == "==" else "<"
        return App(op, (int_term(phi.left), int_term(phi.right)))
    if isinstance(phi, Not):
        a = phi.arg
        if isinstance(a, Compare) and a.op == "<":
            return App("<=", (int_term(a.right), int_term(a.left)))
        return App("not", (bool_term(a),))
    if isinstance(phi, Or):
        return App("or", (bool_term(phi.left), bool_term(phi.right)))
    raise TransformError(f"not a boolean expression: {phi!r}")


def negate(phi: Term) -> Term:
    return App("not", (phi,))


# ---------------------------------------------------------------- translation


@dataclass
class TransResult:
    head: Term  # the final frame term u_j'(params, locals)
    rules: list[ConstrainedRule]
    next_index: int


def _fresh(base: str, taken: set[str]) -> str:
    if base not in taken:
        return base
    k = 1
    while f"{base}{k}" in taken:
        k += 1
    return f"{base}{k}"


@dataclass
class _FunctionContext:
    globals: tuple[str, ...]
    params: tuple[str, ...]
    options: Options
    stack_var: Var = field(init=False)
    ret_var: Var = field(init=False)

    def setup(self, taken: set[str]) -> None:
        taken = taken | set(self.globals) | set(self.params)
        self.stack_var = Var(_fresh("s", taken), PROCESS)
        self.ret_var = Var(_fresh("y", taken | {self.stack_var.name}), INT)

    @property
    def global_vars(self) -> tuple[Var, ...]:
        return tuple(Var(x, INT) for x in self.globals)

    def touches_globals(self, names: Iterable[str]) -> bool:
        return not set(self.globals).isdisjoint(names)

    def env_frame(self, t: Term) -> Term:
        """``env(x, stack(t, w))``"""
        return App(ENV, self.global_vars + (App("stack", (t, self.stack_var)),))

    def env(self, t: Term) -> Term:
        """``env(x, t)``"""
        return App(ENV, self.global_vars + (t,))


def _frame(symbol: str, params: tuple[str, ...], locals_: tuple[str, ...]) -> App:
    return App(symbol, tuple(Var(v, INT) for v in params + locals_))


class _Translator:
    def __init__(self, ctx: _FunctionContext, symbols: dict[str, int]):
        self.ctx = ctx
        self.symbols = symbols  # fresh symbol name -> arity, shared across functions

    def u(self, i: int, locals_: tuple[str, ...]) -> App:
        name = f"u{i}"
        arity = len(self.ctx.params) + len(locals_)
        if self.symbols.setdefault(name, arity) != arity:
            raise TransformError(f"symbol {name} generated with two arities")
        return _frame(name, self.ctx.params, locals_)

    def trans(self, head: App, locals_: tuple[str, ...], stmts: tuple[Stmt, ...], i: int) -> TransResult:
        rules: list[ConstrainedRule] = []
        # statements are consumed left to right; the recursion of the
        # definition on the remaining sequence becomes this loop
        for s in stmts:
            head, locals_, i = self.step(head, locals_, s, i, rules)
        return TransResult(head, rules, i)

    def step(self, g: App, z: tuple[str, ...], s: Stmt, i: int, rules: list[ConstrainedRule]):
        ctx = self.ctx
        mut = ctx.options.mutations
        if isinstance(s, LocalDecl):
            z2 = z + (s.name,)
            nxt = self.u(i, z2)
            rules.append(ConstrainedRule(g, App(nxt.symbol, g.args + (Val(s.value),))))
            return nxt, z2, i + 1

        if isinstance(s, Assign):
            e = int_term(s.expr)
            nxt = self.u(i, z)
            gamma = {s.target: e}
            if ctx.touches_globals({s.target} | expr_vars(s.expr)) and "drop-env" not in mut:
                rules.append(ConstrainedRule(ctx.env_frame(g), substitute(ctx.env_frame(nxt), gamma)))
            else:
                rules.append(ConstrainedRule(g, substitute(nxt, gamma)))
            return nxt, z, i + 1

        if isinstance(s, CallAssign):
            w = ctx.stack_var
            callee = App(s.callee, tuple(int_term(a) for a in s.args))
            waiting = self.u(i, z)
            nxt = self.u(i + 1, z)
            push_l = App("stack", (g, w))
            push_r = App("stack", (callee, App("stack", (waiting, w))))
            arg_vars = set().union(*(expr_vars(a) for a in s.args)) if s.args else set()
            if ctx.touches_globals(arg_vars) or ctx.options.constructor_stack:
                push_l, push_r = ctx.env(push_l), ctx.env(push_r)
            rules.append(ConstrainedRule(push_l, push_r))
            pop_l = App("stack", (App("return", (ctx.ret_var,)), App("stack", (waiting, w))))
            pop_r: Term = App("stack", (nxt, w))
            if s.target in ctx.globals or ctx.options.constructor_stack:
                pop_l, pop_r = ctx.env(pop_l), ctx.env(pop_r)
            if "omit-pop-subst" not in mut:
                pop_r = substitute(pop_r, {s.target: ctx.ret_var})
            rules.append(ConstrainedRule(pop_l, pop_r))
            return nxt, z, i + 2

        if isinstance(s, If):
            phi = bool_term(s.cond)
            yes, no = phi, negate(phi)
            if "swap-if" in mut:
                yes, no = no, yes
            then_head = self.u(i, z)
            r1 = self.trans(then_head, z, s.then, i + 1)
            else_head = self.u(r1.next_index, z)
            r2 = self.trans(else_head, z, s.orelse, r1.next_index + 1)
            join = self.u(r2.next_index, z)
            wrap = ctx.env_frame if ctx.touches_globals(expr_vars(s.cond)) else (lambda t: t)
            rules.append(ConstrainedRule(wrap(g), wrap(then_head), yes))
            rules.append(ConstrainedRule(wrap(g), wrap(else_head), no))
            rules.extend(r1.rules)
            rules.append(ConstrainedRule(r1.head, join))
            rules.extend(r2.rules)
            rules.append(ConstrainedRule(r2.head, join))
            return join, z, r2.next_index + 1

        if isinstance(s, While):
            phi = bool_term(s.cond)
            body_head = self.u(i, z)
            rb = self.trans(body_head, z, s.body, i + 1)
            exit_head = self.u(rb.next_index, z)
            wrap = ctx.env_frame if ctx.touches_globals(expr_vars(s.cond)) else (lambda t: t)
            rules.append(ConstrainedRule(wrap(g), wrap(body_head), phi))
            rules.append(ConstrainedRule(wrap(g), wrap(exit_head), negate(phi)))
            rules.extend(rb.rules)
            rules.append(ConstrainedRule(rb.head, g))
            return exit_head, z, rb.next_index + 1

        raise TransformError(f"unknown statement {s!r}")


def trans(
    program: Program,
    function: str,
    start: int = 1,
    options: Options = Options(),
    symbols: Optional[dict[str, int]] = None,
) -> TransResult:
    """Translate one function body starting from its entry term ``f(params)``."""
    f = program.function(function)
    ctx = _FunctionContext(program.global_names, f.params, options)
    ctx.setup(_all_local_names(f))
    tr = _Translator(ctx, {} if symbols is None else symbols)
    return tr.trans(_frame(f.name, f.params, ()), (), f.body, start)


def _all_local_names(f) -> set[str]:
    return {s.name for s in walk_stmts(f.body) if isinstance(s, LocalDecl)}


def signature_for(program: Program, symbols: dict[str, int]) -> dict[str, FunctionSymbol]:
    k = len(program.globals)
    sig = {
        ENV: FunctionSymbol(ENV, (INT,) * k + (PROCESS,), ENV, Kind.TERMS),
        "stack": FunctionSymbol("stack", (STATE, PROCESS), PROCESS, Kind.TERMS),
        "bot": FunctionSymbol("bot", (), PROCESS, Kind.TERMS),
        "return": FunctionSymbol("return", (INT,), STATE, Kind.TERMS),
    }
    for f in program.functions:
        sig[f.name] = FunctionSymbol(f.name, (INT,) * len(f.params), STATE, Kind.TERMS)
    for name, arity in symbols.items():
        sig[name] = FunctionSymbol(name, (INT,) * arity, STATE, Kind.TERMS)
    return sig


SORTS = (INT, BOOL, STATE, ENV, PROCESS)


def conv(program: Program, options: Options = Options()) -> Lctrs:
    """The whole-program transformation: all function translations plus return rules."""
    symbols: dict[str, int] = {}
    rules: list[ConstrainedRule] = []
    counter = 1
    for f in program.functions:
        ctx = _FunctionContext(program.global_names, f.params, options)
        ctx.setup(_all_local_names(f))
        tr = _Translator(ctx, symbols)
        res = tr.trans(_frame(f.name, f.params, ()), (), f.body, counter)
        rules.extend(res.rules)
        ret = App("return", (int_term(f.ret),))
        if ctx.touches_globals(expr_vars(f.ret)):
            rules.append(ConstrainedRule(ctx.env_frame(res.head), ctx.env_frame(ret)))
        else:
            rules.append(ConstrainedRule(res.head, ret))
        counter = res.next_index
    return Lctrs(SORTS, signature_for(program, symbols), tuple(rules))


def initial_term(program: Program) -> Term:
    """``env(n1, ..., nk, stack(main(), bot))``"""
    start = App("stack", (App("main"), BOT))
    return App(ENV, tuple(Val(n) for _, n in program.globals) + (start,))


def final_term(value: int, globals_: Iterable[int]) -> Term:
    """The normal form predicted for a run returning ``value``."""
    return App(ENV, tuple(Val(n) for n in globals_) + (App("stack", (App("return", (Val(value),)), BOT)),))


def read_final(term: Term, program: Program) -> Optional[tuple[int, dict[str, int]]]:
    """Decode ``env(globals, stack(return(n), bot))``; None for any other shape."""
    k = len(program.globals)
    if not (isinstance(term, App) and term.symbol == ENV and len(term.args) == k + 1):
        return None
    *gs, st = term.args
    if not (isinstance(st, App) and st.symbol == "stack" and st.args[1] == BOT):
        return None
    top = st.args[0]
    if not (isinstance(top, App) and top.symbol == "return" and isinstance(top.args[0], Val)):
        return None
    if not all(isinstance(v, Val) and type(v.value) is int for v in gs):
        return None
    return top.args[0].value, {name: v.value for (name, _), v in zip(program.globals, gs)}


# ---------------------------------------------------------------- comparison up to renumbering

_U = re.compile(r"u(\d+)$")


def _u_indices(t: Term, out: set[int]) -> None:
    if isinstance(t, App):
        m = _U.match(t.symbol)
        if m:
            out.add(int(m.group(1)))
        for a in t.args:
            _u_indices(a, out)


def _rename_symbols(t: Term, mapping: dict[str, str]) -> Term:
    if isinstance(t, App):
        return App(mapping.get(t.symbol, t.symbol), tuple(_rename_symbols(a, mapping) for a in t.args))
    return t


def _canonical_vars(rule: ConstrainedRule) -> ConstrainedRule:
    order: dict[str, str] = {}

    def visit(t: Term) -> None:
        if isinstance(t, Var):
            order.setdefault(t.name, f"v{len(order)}")
        elif isinstance(t, App):
            for a in t.args:
                visit(a)

    for part in (rule.lhs, rule.rhs, rule.constraint):
        visit(part)
    fn = lambda v: Var(order[v.name], v.sort)  # noqa: E731
    return ConstrainedRule(rename_vars(rule.lhs, fn), rename_vars(rule.rhs, fn), rename_vars(rule.constraint, fn))


def canonical_rules(system: Lctrs) -> list[ConstrainedRule]:
    """Rules with u-indices renumbered densely in order and variables renamed
    by first occurrence, sorted into a canonical multiset order."""
    idx: set[int] = set()
    for r in system.rules:
        for t in (r.lhs, r.rhs):
            _u_indices(t, idx)
    mapping = {f"u{old}": f"u{new}" for new, old in enumerate(sorted(idx), 1)}
    out = []
    for r in system.rules:
        r2 = ConstrainedRule(
            _rename_symbols(r.lhs, mapping), _rename_symbols(r.rhs, mapping), _rename_symbols(r.constraint, mapping)
        )
        out.append(_canonical_vars(r2))
    return sorted(out, key=show_rule)


def equal_up_to_renumbering(a: Lctrs, b: Lctrs) -> bool:
    return canonical_rules(a) == canonical_rules(b)
