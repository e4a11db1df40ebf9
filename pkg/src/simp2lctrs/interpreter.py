"""Big-step reference semantics of SIMP+.

The derivation tree is built depth-first with an explicit stack of call
frames instead of Python recursion, so deeply recursive programs do not hit
the interpreter's recursion limit.  Each inference-rule application costs
one unit of fuel; the empty-sequence axiom closing a function body counts
too.

Arithmetic is checked against the signed 64-bit range; leaving it raises
:class:`IntegerOverflow`.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping, Optional, Union

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
)
from .syntax.parser import INT_MAX, INT_MIN
from .syntax.printer import show_expr

DEFAULT_FUEL = 10**6
RESULT_VAR = "$result"  # cannot clash with a source identifier

Assignment = dict[str, int]


class InterpreterError(Exception):
    pass


class UnboundVariable(InterpreterError):
    def __init__(self, name: str):
        self.name = name
        super().__init__(f"variable {name} is unbound")


class IntegerOverflow(InterpreterError):
    def __init__(self, value: int):
        self.value = value
        super().__init__(f"integer result {value} leaves the 64-bit range")


def _checked(n: int) -> int:
    if not INT_MIN <= n <= INT_MAX:
        raise IntegerOverflow(n)
    return n


def eval_int(e, sigma: Mapping[str, int]) -> int:
    if isinstance(e, Num):
        return e.value
    if isinstance(e, Name):
        try:
            return sigma[e.name]
        except KeyError:
            raise UnboundVariable(e.name) from None
    if isinstance(e, BinOp):
        a = eval_int(e.left, sigma)
        b = eval_int(e.right, sigma)
        if e.op == "+":
            return _checked(a + b)
        if e.op == "-":
            return _checked(a - b)
        if e.op == "*":
            return _checked(a * b)
    raise InterpreterError(f"not an integer expression: {e!r}")


def eval_bool(phi, sigma: Mapping[str, int]) -> bool:
    if isinstance(phi, BoolLit):
        return phi.value
    if isinstance(phi, Compare):
        a = eval_int(phi.left, sigma)
        b = eval_int(phi.right, sigma)
        return a == b if phi.op == "==" else a < b
    if isinstance(phi, Not):
        return not eval_bool(phi.arg, sigma)
    if isinstance(phi, Or):
        # both operands are evaluated, as in the inference rule
        left = eval_bool(phi.left, sigma)
        right = eval_bool(phi.right, sigma)
        return left or right
    raise InterpreterError(f"not a boolean expression: {phi!r}")


class _Union(Mapping[str, int]):
    """Read-only view of two disjoint assignments."""

    __slots__ = ("a", "b")

    def __init__(self, a: Mapping[str, int], b: Mapping[str, int]):
        self.a, self.b = a, b

    def __getitem__(self, k: str) -> int:
        if k in self.b:
            return self.b[k]
        return self.a[k]

    def __iter__(self):
        yield from self.a
        yield from (k for k in self.b if k not in self.a)

    def __len__(self) -> int:
        return len(set(self.a) | set(self.b))


@dataclass(frozen=True)
class Configuration:
    code: tuple[Stmt, ...]
    globals: Mapping[str, int]
    locals: Mapping[str, int]

    def __post_init__(self):
        overlap = set(self.globals) & set(self.locals)
        if overlap:
            raise InterpreterError(f"global and local assignments overlap on {sorted(overlap)}")


@dataclass(frozen=True)
class Halted:
    globals: dict[str, int]
    locals: dict[str, int]
    steps: int = field(default=0, compare=False)


@dataclass(frozen=True)
class FuelExhausted:
    steps: int
    reason: str = "fuel exhausted"


ExecOutcome = Union[Halted, FuelExhausted]


@dataclass(frozen=True)
class TraceEvent:
    depth: int  # call depth, 0 for the entry configuration
    rule: str
    stmt: str
    globals: dict[str, int]
    locals: dict[str, int]

    def to_json(self) -> dict:
        return {
            "depth": self.depth,
            "rule": self.rule,
            "stmt": self.stmt,
            "globals": self.globals,
            "locals": self.locals,
        }


def _describe(s: Stmt) -> str:
    if isinstance(s, LocalDecl):
        return f"int {s.name} = {s.value}"
    if isinstance(s, Assign):
        return f"{s.target} = {show_expr(s.expr)}"
    if isinstance(s, CallAssign):
        return f"{s.target} = {s.callee}({', '.join(show_expr(a) for a in s.args)})"
    if isinstance(s, If):
        return f"if ({show_expr(s.cond)})"
    if isinstance(s, While):
        return f"while ({show_expr(s.cond)})"
    return "?"


class _Frame:
    __slots__ = ("fn", "locals", "conts", "target")

    def __init__(self, fn, locals_: Assignment, code, target: Optional[str]):
        self.fn = fn  # FunDef, or None for the entry configuration
        self.locals = locals_
        self.conts = [(code, 0)]  # pending statement sequences, innermost last
        self.target = target  # caller variable receiving the result


def exec_config(
    config: Configuration,
    program: Program,
    fuel: int = DEFAULT_FUEL,
    on_event: Optional[Callable[[TraceEvent], None]] = None,
) -> ExecOutcome:
    """Derive ``<code, globals, locals> => <eps, globals', locals'>``."""
    gvars = set(program.global_names)
    funcs = program.function_map()
    g: Assignment = dict(config.globals)
    stack = [_Frame(None, dict(config.locals), tuple(config.code), None)]
    steps = 0

    def emit(rule: str, stmt: str) -> None:
        if on_event is not None:
            on_event(TraceEvent(len(stack) - 1, rule, stmt, dict(g), dict(stack[-1].locals)))

    while True:
        frame = stack[-1]
        if steps >= fuel:
            return FuelExhausted(steps)
        code, idx = frame.conts[-1]
        if idx >= len(code):
            frame.conts.pop()
            if frame.conts:
                continue
            steps += 1
            emit("empty", "")
            if frame.fn is None:
                return Halted(g, frame.locals, steps)
            # the callee's derivation is complete: evaluate its return expression
            n = eval_int(frame.fn.ret, _Union(g, frame.locals))
            stack.pop()
            caller = stack[-1]
            if frame.target in gvars:
                g[frame.target] = n
            else:
                caller.locals[frame.target] = n
            emit("call-return", f"return {n}")
            continue
        s = code[idx]
        steps += 1
        sigma = _Union(g, frame.locals)
        if isinstance(s, LocalDecl):
            frame.conts[-1] = (code, idx + 1)
            frame.locals[s.name] = s.value
            emit("decl", _describe(s))
        elif isinstance(s, Assign):
            n = eval_int(s.expr, sigma)
            frame.conts[-1] = (code, idx + 1)
            if s.target in gvars:
                g[s.target] = n
                emit("assign-global", _describe(s))
            else:
                frame.locals[s.target] = n
                emit("assign-local", _describe(s))
        elif isinstance(s, If):
            taken = eval_bool(s.cond, sigma)
            frame.conts[-1] = (code, idx + 1)
            frame.conts.append((s.then if taken else s.orelse, 0))
            emit("if-true" if taken else "if-false", _describe(s))
        elif isinstance(s, While):
            if eval_bool(s.cond, sigma):
                # leave idx on the loop so it is re-tested after the body
                frame.conts.append((s.body, 0))
                emit("while-true", _describe(s))
            else:
                frame.conts[-1] = (code, idx + 1)
                emit("while-false", _describe(s))
        elif isinstance(s, CallAssign):
            callee = funcs.get(s.callee)
            if callee is None:
                raise InterpreterError(f"call to undefined function {s.callee}")
            args = [eval_int(a, sigma) for a in s.args]  # left to right
            frame.conts[-1] = (code, idx + 1)
            emit("call", _describe(s))
            stack.append(_Frame(callee, dict(zip(callee.params, args)), callee.body, s.target))
        else:
            raise InterpreterError(f"unknown statement {s!r}")


def exec(config: Configuration, program: Program, fuel: int = DEFAULT_FUEL) -> ExecOutcome:  # noqa: A001
    return exec_config(config, program, fuel)


def initial_globals(program: Program) -> Assignment:
    return {name: value for name, value in program.globals}


@dataclass(frozen=True)
class RunResult:
    value: int
    globals: dict[str, int]
    steps: int = field(default=0, compare=False)


def run_program(
    program: Program,
    fuel: int = DEFAULT_FUEL,
    on_event: Optional[Callable[[TraceEvent], None]] = None,
) -> Union[RunResult, FuelExhausted]:
    """Run ``main`` from the declared initial globals."""
    entry = CallAssign(RESULT_VAR, "main", ())
    config = Configuration((entry,), initial_globals(program), {RESULT_VAR: 0})
    out = exec_config(config, program, fuel, on_event)
    if isinstance(out, FuelExhausted):
        return out
    return RunResult(out.locals[RESULT_VAR], out.globals, out.steps)


def trace_program(program: Program, fuel: int = DEFAULT_FUEL):
    """Run ``main`` and also return the list of derivation events."""
    events: list[TraceEvent] = []
    return run_program(program, fuel, events.append), events


def format_trace(events: Iterable[TraceEvent]) -> str:
    """Indented judgment log, one line per rule application."""
    lines = []
    for ev in events:
        env = ", ".join(f"{k}={v}" for k, v in ev.globals.items())
        loc = ", ".join(f"{k}={v}" for k, v in ev.locals.items() if k != RESULT_VAR)
        what = f" {ev.stmt}" if ev.stmt else ""
        lines.append(f"{'  ' * ev.depth}[{ev.rule}]{what}  | globals: {{{env}}} locals: {{{loc}}}")
    return "\n".join(lines)


def trace_json(events: Iterable[TraceEvent]) -> str:
    return json.dumps([ev.to_json() for ev in events], indent=1)
