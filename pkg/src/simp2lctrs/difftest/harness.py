"""Run a program through both semantics and compare the outcomes."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Union

from ..interpreter import FuelExhausted as InterpFuel
from ..interpreter import IntegerOverflow, RunResult, TraceEvent, run_program
from ..lctrs.engine import Engine, EngineError, FuelExhausted, Trace
from ..lctrs.printing import show_term
from ..syntax.ast import Program
from ..transform import Options, conv, initial_term, read_final
from .shrink import shrink

INTERPRETER = "interpreter"
REWRITER = "rewriter"
BOTH = "both"


@dataclass(frozen=True)
class Agree:
    value: int
    globals: dict[str, int]


@dataclass(frozen=True)
class Inconclusive:
    side: str  # INTERPRETER, REWRITER or BOTH
    reason: str = "fuel exhausted"


@dataclass
class Disagree:
    interp: str  # human-readable outcome of each side
    rewrite: str
    program: Program
    minimized: Program
    interp_trace: list[TraceEvent] = field(default_factory=list)
    rewrite_trace: Optional[Trace] = None
    shrunk: bool = False


Verdict = Union[Agree, Disagree, Inconclusive]


@dataclass(frozen=True)
class _Sides:
    interp: Union[RunResult, InterpFuel, IntegerOverflow]
    rewrite: Union[tuple, FuelExhausted, EngineError]  # (normal form, decoded) or failure


def _run_sides(program: Program, fuel: int, options: Options) -> _Sides:
    try:
        interp = run_program(program, fuel)
    except IntegerOverflow as e:
        interp = e
    system = conv(program, options)
    try:
        nf, _ = Engine(system).normalize(initial_term(program), fuel, record=False)
        rewrite = (nf, read_final(nf, program))
    except (FuelExhausted, EngineError) as e:
        rewrite = e
    return _Sides(interp, rewrite)


@dataclass(frozen=True)
class _Mismatch:
    interp: str
    rewrite: str


def _classify(s: _Sides) -> Union[Agree, Inconclusive, _Mismatch]:
    # the rewriter has unbounded integers, so past an overflow it may run on forever
    if isinstance(s.interp, IntegerOverflow):
        return Inconclusive(INTERPRETER, "64-bit overflow")
    i_out = isinstance(s.interp, InterpFuel)
    r_out = isinstance(s.rewrite, FuelExhausted)
    if i_out or r_out:
        return Inconclusive(BOTH if i_out and r_out else INTERPRETER if i_out else REWRITER)
    if isinstance(s.rewrite, tuple) and s.rewrite[1] == (s.interp.value, s.interp.globals):
        return Agree(s.interp.value, s.interp.globals)
    return _Mismatch(_describe_interp(s.interp), _describe_rewrite(s.rewrite))


def _describe_interp(out) -> str:
    if isinstance(out, RunResult):
        gs = ", ".join(f"{k} = {v}" for k, v in out.globals.items())
        return f"return = {out.value}" + (f"; {gs}" if gs else "")
    return str(out)


def _describe_rewrite(out) -> str:
    if isinstance(out, tuple):
        return show_term(out[0])
    return f"{type(out).__name__}: {out}"


def disagrees(program: Program, fuel: int, options: Options = Options()) -> bool:
    return isinstance(_classify(_run_sides(program, fuel, options)), _Mismatch)


def check_program(
    program: Program,
    fuel: int = 10**6,
    options: Options = Options(),
    minimize: bool = True,
    shrink_budget: int = 300,
) -> Verdict:
    """Compare the interpreter with rewriting under ``conv``.

    A Disagree verdict carries both traces and, when ``minimize`` is set, a
    shrunk program that still disagrees.
    """
    outcome = _classify(_run_sides(program, fuel, options))
    if not isinstance(outcome, _Mismatch):
        return outcome
    verdict = Disagree(outcome.interp, outcome.rewrite, program, program)
    if minimize:
        verdict.minimized = shrink(program, lambda q: disagrees(q, fuel, options), shrink_budget)
        verdict.shrunk = True
    _, verdict.interp_trace = _safe_trace(program, fuel)
    verdict.rewrite_trace = _rewrite_trace(program, fuel, options)
    return verdict


def _safe_trace(program: Program, fuel: int):
    events: list[TraceEvent] = []
    try:
        return run_program(program, fuel, events.append), events
    except IntegerOverflow as e:
        return e, events


def _rewrite_trace(program: Program, fuel: int, options: Options) -> Trace:
    engine = Engine(conv(program, options))
    term = initial_term(program)
    trace = Trace(term)
    # re-run step by step so that the trace survives an engine error
    try:
        while trace.count < fuel:
            nxt = engine.step(term)
            if nxt is None:
                break
            term, st = nxt
            trace.append(st)
    except EngineError:
        pass
    return trace


__all__ = [
    "Agree", "BOTH", "Disagree", "INTERPRETER", "Inconclusive", "REWRITER", "Verdict",
    "check_program", "disagrees",
]
