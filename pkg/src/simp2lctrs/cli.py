"""Command-line entry point: ``simp2lctrs <subcommand> ...``.

Exit status is 0 on success, 1 when the input has diagnostics or a campaign
finds a disagreement, and 2 on usage or I/O errors.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import fields, is_dataclass
from pathlib import Path
from typing import Optional, Sequence

from .difftest import CAMPAIGN_FUEL, GenConfig, difftest_campaign
from .interpreter import DEFAULT_FUEL, FuelExhausted as InterpFuel
from .interpreter import IntegerOverflow, format_trace, run_program, trace_json
from .lctrs import (
    Engine,
    EngineError,
    FormatError,
    FuelExhausted,
    Lctrs,
    RuleError,
    SortError,
    Trace,
    check_orthogonal,
    emit,
    parse_lctrs,
    parse_term,
    show_term,
)
from .syntax import ParseError, Program, parse_program, show_program, validate
from .transform import MUTATIONS, Options, conv, initial_term, read_final

FUEL_ENV = "SIMP2LCTRS_FUEL"

OK, FAILED, USAGE = 0, 1, 2


class _UsageError(Exception):
    pass


# ---------------------------------------------------------------- helpers


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise _UsageError(f"cannot read {path}: {e.strerror or e}") from None


def _fuel(args, fallback: int = DEFAULT_FUEL) -> int:
    if args.fuel is not None:
        return args.fuel
    raw = os.environ.get(FUEL_ENV)
    if raw is None:
        return fallback
    try:
        value = int(raw)
    except ValueError:
        raise _UsageError(f"{FUEL_ENV} must be an integer, got {raw!r}") from None
    if value < 0:
        raise _UsageError(f"{FUEL_ENV} must be non-negative")
    return value


def _options(args) -> Options:
    return Options(
        constructor_stack=getattr(args, "constructor_stack", False),
        mutations=frozenset(getattr(args, "mutate", None) or ()),
    )


def _load_program(path: str, strict: bool, out) -> Optional[Program]:
    """Parse and validate; on failure print diagnostics and return None."""
    try:
        program = parse_program(_read(path), strict=strict)
    except ParseError as e:
        print(f"{path}:{e.line}:{e.col}: syntax-error: {e.message}", file=out)
        return None
    diags = validate(program, strict=strict)
    if diags:
        for d in diags:
            print(f"{path}:{d}", file=out)
        return None
    return program


def _load_system(path: str) -> Lctrs:
    try:
        return parse_lctrs(_read(path))
    except (FormatError, SortError, RuleError) as e:
        raise _DiagnosticError(f"{path}: {e}") from None


class _DiagnosticError(Exception):
    pass


def ast_json(node):
    """JSON-ready view of an AST, tagging each node with its class name."""
    if is_dataclass(node):
        out = {"node": type(node).__name__}
        for f in fields(node):
            if f.name != "loc":
                out[f.name] = ast_json(getattr(node, f.name))
        return out
    if isinstance(node, (tuple, list)):
        return [ast_json(x) for x in node]
    return node


def _trace_lines(trace: Trace) -> list[str]:
    width = max((len(s.rule) for s in trace.steps), default=0)
    out = []
    for s in trace.steps:
        where = ".".join(map(str, s.position)) or "root"
        out.append(f"{s.rule:<{width}} @ {where:<8} {show_term(s.term)}")
    return out


def _rewrite(system: Lctrs, term, fuel: int, args) -> int:
    try:
        nf, trace = Engine(system).normalize(term, fuel, record=args.trace or args.json)
    except FuelExhausted as e:
        if args.json:
            print(json.dumps({"status": "fuel-exhausted", "steps": e.steps, "term": show_term(e.term)}))
        else:
            print(f"fuel exhausted after {e.steps} steps; last term: {show_term(e.term)}", file=sys.stderr)
        return FAILED
    except EngineError as e:
        print(f"error: {e}", file=sys.stderr)
        return FAILED
    if args.json:
        doc = {"status": "normal-form", "steps": trace.count, "normal_form": show_term(nf)}
        doc["trace"] = trace.to_json()["steps"] if args.trace else None
        print(json.dumps(doc, indent=1))
    elif args.trace:
        lines = _trace_lines(trace)
        print("\n".join(lines) if lines else show_term(nf))
    else:
        print(show_term(nf))
    return OK


# ---------------------------------------------------------------- subcommands


def cmd_parse(args) -> int:
    try:
        program = parse_program(_read(args.file), strict=args.strict)
    except ParseError as e:
        print(f"{args.file}:{e.line}:{e.col}: syntax-error: {e.message}", file=sys.stderr)
        return FAILED
    if args.json:
        print(json.dumps(ast_json(program), indent=1))
    else:
        sys.stdout.write(show_program(program))
    return OK


def cmd_check(args) -> int:
    if args.file.endswith(".lctrs"):
        system = _load_system(args.file)
        report = check_orthogonal(system)
        if args.json:
            print(json.dumps({"orthogonal": report.orthogonal, "problems": report.lines()}, indent=1))
        else:
            for line in report.lines():
                print(f"{args.file}: {line}")
            print(f"{args.file}: {len(system.rules)} rules, {'orthogonal' if report.orthogonal else 'not orthogonal'}")
        return OK if report.orthogonal else FAILED
    try:
        program = parse_program(_read(args.file), strict=args.strict)
    except ParseError as e:
        diags = [{"code": "syntax-error", "message": e.message, "line": e.line, "col": e.col}]
    else:
        diags = [
            {"code": d.code, "message": d.message, "line": d.loc[0] if d.loc else None, "col": d.loc[1] if d.loc else None}
            for d in validate(program, strict=args.strict)
        ]
    if args.json:
        print(json.dumps({"file": args.file, "diagnostics": diags}, indent=1))
    else:
        for d in diags:
            where = f"{d['line']}:{d['col']}:" if d["line"] is not None else ""
            print(f"{args.file}:{where} {d['code']}: {d['message']}")
        if not diags:
            print(f"{args.file}: ok")
    return FAILED if diags else OK


def cmd_run(args) -> int:
    program = _load_program(args.file, args.strict, sys.stderr)
    if program is None:
        return FAILED
    events = [] if args.trace else None
    try:
        out = run_program(program, _fuel(args), events.append if events is not None else None)
    except IntegerOverflow as e:
        print(f"error: {e}", file=sys.stderr)
        return FAILED
    if isinstance(out, InterpFuel):
        print(f"fuel exhausted after {out.steps} steps", file=sys.stderr)
        return FAILED
    if args.json:
        doc = {"return": out.value, "globals": out.globals, "steps": out.steps}
        if events is not None:
            doc["trace"] = json.loads(trace_json(events))
        print(json.dumps(doc, indent=1))
        return OK
    if events is not None:
        print(format_trace(events))
    print(f"return = {out.value}")
    for name, value in out.globals.items():
        print(f"{name} = {value}")
    return OK


def cmd_transform(args) -> int:
    program = _load_program(args.file, args.strict, sys.stderr)
    if program is None:
        return FAILED
    text = emit(conv(program, _options(args)))
    if args.output:
        try:
            Path(args.output).write_text(text, encoding="utf-8")
        except OSError as e:
            raise _UsageError(f"cannot write {args.output}: {e.strerror or e}") from None
    else:
        sys.stdout.write(text)
    return OK


def cmd_rewrite(args) -> int:
    system = _load_system(args.system)
    try:
        term = parse_term(args.term, system)
    except (FormatError, SortError) as e:
        print(f"term: {e}", file=sys.stderr)
        return FAILED
    return _rewrite(system, term, _fuel(args), args)


def cmd_trace(args) -> int:
    program = _load_program(args.file, args.strict, sys.stderr)
    if program is None:
        return FAILED
    system = conv(program, _options(args))
    args.trace = True
    status = _rewrite(system, initial_term(program), _fuel(args), args)
    return status


def cmd_difftest(args) -> int:
    cfg = GenConfig(seed=args.seed, allow_mul=args.allow_mul)
    summary = difftest_campaign(
        cfg,
        count=args.count,
        fuel=_fuel(args, CAMPAIGN_FUEL),
        options=_options(args),
        out_dir=Path(args.out) if args.out else None,
        workers=args.workers,
    )
    if args.json:
        print(json.dumps(summary.to_json(), indent=1))
    else:
        print(summary.summary_line())
        for rec in summary.disagreements:
            v = rec.verdict
            print(f"seed {rec.seed}: interpreter {v.interp} | rewriter {v.rewrite}")
        if args.out:
            print(f"report written to {Path(args.out) / 'report.json'}")
    return OK if summary.ok else FAILED


# ---------------------------------------------------------------- argument parsing


def _nonneg(text: str) -> int:
    try:
        value = int(float(text)) if "e" in text.lower() else int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if value < 0:
        raise argparse.ArgumentTypeError("must be non-negative")
    return value


def _positive(text: str) -> int:
    value = _nonneg(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return value


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--strict", action="store_true", help="reject extensions such as '*'")

    fuel = argparse.ArgumentParser(add_help=False)
    fuel.add_argument("--fuel", type=_nonneg, default=None, help=f"step budget (default 10^6, or ${FUEL_ENV})")

    shape = argparse.ArgumentParser(add_help=False)
    shape.add_argument("--constructor-stack", action="store_true", help="declare stack/bot as constructors of sort state")
    shape.add_argument("--mutate", action="append", choices=MUTATIONS, metavar="FAULT",
                       help=f"inject a fault into conv: {', '.join(MUTATIONS)} (repeatable)")

    p = argparse.ArgumentParser(prog="simp2lctrs", description="SIMP+ to LCTRS toolkit")
    sub = p.add_subparsers(dest="command", required=True, metavar="COMMAND")

    s = sub.add_parser("parse", parents=[common], help="parse a .simp file and print it back")
    s.add_argument("file")
    s.set_defaults(func=cmd_parse)

    s = sub.add_parser("check", parents=[common], help="validate a .simp file, or check a .lctrs file for orthogonality")
    s.add_argument("file")
    s.set_defaults(func=cmd_check)

    s = sub.add_parser("run", parents=[common, fuel], help="interpret a program")
    s.add_argument("file")
    s.add_argument("--trace", action="store_true", help="print the derivation")
    s.set_defaults(func=cmd_run)

    s = sub.add_parser("transform", parents=[common, shape], help="convert a program into an LCTRS")
    s.add_argument("file")
    s.add_argument("-o", "--output", help="write the .lctrs here instead of stdout")
    s.set_defaults(func=cmd_transform)

    s = sub.add_parser("rewrite", parents=[common, fuel], help="rewrite a ground term to normal form")
    s.add_argument("system", help=".lctrs file")
    s.add_argument("term", help="ground term, e.g. 'env(0, stack(main(), bot))'")
    s.add_argument("--trace", action="store_true", help="print one line per step")
    s.set_defaults(func=cmd_rewrite)

    s = sub.add_parser("trace", parents=[common, fuel, shape], help="transform, then rewrite from the initial term")
    s.add_argument("file")
    s.set_defaults(func=cmd_trace)

    s = sub.add_parser("difftest", parents=[common, fuel, shape], help="interpreter vs rewriter on generated programs")
    s.add_argument("--seed", type=_nonneg, default=0)
    s.add_argument("--count", type=_positive, default=200)
    s.add_argument("--out", help="directory for report.json and disagreement artifacts")
    s.add_argument("--workers", type=_positive, default=1)
    s.add_argument("--allow-mul", action="store_true", help="let the generator use the '*' extension")
    s.set_defaults(func=cmd_difftest)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        return args.func(args)
    except _UsageError as e:
        print(f"simp2lctrs: {e}", file=sys.stderr)
        return USAGE
    except _DiagnosticError as e:
        print(e, file=sys.stderr)
        return FAILED


if __name__ == "__main__":
    sys.exit(main())
