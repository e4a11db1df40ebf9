"""The acceptance criteria, each checked at its stated tolerance and time limit.

Every test prints one PASS/FAIL line (collected in the terminal summary) and
fails if either the check or the time budget is missed.
"""

import random
import time

import pytest

from simp2lctrs import corpus_dir, corpus_programs
from simp2lctrs.difftest import GenConfig, difftest_campaign
from simp2lctrs.interpreter import Configuration, Halted, IntegerOverflow, RunResult, eval_bool, eval_int, exec_config, run_program
from simp2lctrs.lctrs import (
    INT,
    App,
    ConstrainedRule,
    FunctionSymbol,
    Lctrs,
    Val,
    Var,
    check_orthogonal,
    emit,
    interpret_theory,
    parse_lctrs,
    parse_term,
    rewrite_to_nf,
    show_rule,
)
from simp2lctrs.syntax import BinOp, BoolLit, Compare, Not, Num, Or
from simp2lctrs.transform import MUTATIONS, Options, bool_term, conv, equal_up_to_renumbering, final_term, initial_term, int_term

from conftest import ACCEPTANCE, GOLDEN, load
from systems import random_system


def _criterion(number: int, title: str, limit: float, check) -> None:
    start = time.perf_counter()
    failure = None
    try:
        detail = check()
    except AssertionError as e:
        failure, detail = e, f"check failed: {e}"
    elapsed = time.perf_counter() - start
    passed = failure is None and elapsed < limit
    status = "PASS" if passed else "FAIL"
    ACCEPTANCE.append(f"{status} {number}. {title}: {detail} [{elapsed:.2f}s, limit {limit:g}s]")
    if failure is not None:
        raise failure
    assert elapsed < limit, f"{title} took {elapsed:.2f}s, limit {limit}s"


def _lines(path):
    return [ln for ln in path.read_text(encoding="utf-8").splitlines() if ln and not ln.startswith("#")]


def test_r4_reproduction():
    def check():
        fig2 = load("fig2_sum")
        system = conv(fig2)
        r4 = parse_lctrs("\n".join(_lines(corpus_dir() / "r4.lctrs")) + "\n")
        assert len(system.rules) == 15
        assert equal_up_to_renumbering(system, r4)
        rules = [show_rule(r) for r in system.rules]
        assert "env(num, stack(u1(x,z), s)) -> env(num + 1, stack(u2(x,z), s))" in rules
        assert "stack(u5(x,z), s) -> stack(sum(x - 1), stack(u6(x,z), s))" in rules
        assert "stack(return(y), stack(u6(x,z), s)) -> stack(u7(x,y), s)" in rules
        assert "stack(u10(z), s) -> stack(sum(z), stack(u11(z), s))" in rules
        assert "stack(return(y), stack(u11(z), s)) -> stack(u12(y), s)" in rules
        return "15 rules, equal to R4 up to renumbering"

    _criterion(1, "R4 reproduction", 1.0, check)


def test_fig6_reduction():
    def check():
        fig2 = load("fig2_sum")
        system = conv(fig2)
        expected = [parse_term(t, system) for t in _lines(GOLDEN / "fig6_prefix.txt")]
        nf, trace = rewrite_to_nf(initial_term(fig2), system)
        assert nf == final_term(0, [4])
        assert trace.terms()[: len(expected)] == expected
        return f"normal form env(4, stack(return(0), bot)) after {trace.count} steps, {len(expected)}-term prefix matches"

    _criterion(2, "summation reduction trace", 1.0, check)


def test_fig5_semantics():
    def check():
        out = run_program(load("fig2_sum"))
        assert out == RunResult(0, {"num": 4})
        return "return = 0, num = 4"

    _criterion(3, "summation interpreter result", 1.0, check)


def test_factorial_example():
    def check():
        system = parse_lctrs((corpus_dir() / "fact.lctrs").read_text(encoding="utf-8"))
        nf, trace = rewrite_to_nf(parse_term("fact(3)", system), system)
        assert (nf, trace.count) == (Val(6), 10)
        nf, trace = rewrite_to_nf(parse_term("3 * (2 * (1 * 1))", system), system)
        assert (nf, trace.count) == (Val(6), 3)
        return "fact(3) ->* 6 in 10 steps, 3*(2*(1*1)) ->* 6 in 3 steps"

    _criterion(4, "factorial example", 1.0, check)


def test_sum1_transition():
    def check():
        p = load("fig1_sum1")
        assert run_program(p) == RunResult(6, {})
        body = p.function("sum1").body
        # (x, i, z) = (3, 3, 6) at the end of the body
        assert exec_config(Configuration(body, {}, {"x": 3}), p) == Halted({}, {"x": 3, "i": 3, "z": 6})
        return "sum1(3) = 6, final (x,i,z) = (3,3,6)"

    _criterion(5, "sum1 transition", 1.0, check)


def test_correctness_campaigns():
    def check():
        clean = difftest_campaign(GenConfig(), count=200)
        parts = [f"default: {clean.summary_line()}"]
        assert clean.counts["disagree"] == 0, clean.summary_line()
        for fault in MUTATIONS:
            # a mutant needs only one witness, so the campaign stops at the first
            mutant = difftest_campaign(GenConfig(), count=200, options=Options(mutations=frozenset({fault})), stop_after=1)
            parts.append(f"{fault}: disagree at seed {mutant.disagreements[0].seed if mutant.disagreements else 'none'}")
            assert mutant.counts["disagree"] >= 1, f"{fault} never disagreed"
        return "; ".join(parts)

    _criterion(6, "interpreter/rewriter correspondence", 60.0, check)


def _random_int_expr(rng: random.Random, depth: int):
    if depth == 0 or rng.random() < 0.25:
        return Num(rng.randint(-100, 100))
    return BinOp(rng.choice("+-*"), _random_int_expr(rng, depth - 1), _random_int_expr(rng, depth - 1))


def _random_bool_expr(rng: random.Random, depth: int):
    roll = rng.random()
    if depth == 0 or roll < 0.2:
        return BoolLit(rng.random() < 0.5)
    if roll < 0.6:
        return Compare(rng.choice(["==", "<"]), _random_int_expr(rng, depth - 1), _random_int_expr(rng, depth - 1))
    if roll < 0.75:
        return Not(_random_bool_expr(rng, depth - 1))
    return Or(_random_bool_expr(rng, depth - 1), _random_bool_expr(rng, depth - 1))


def test_expression_semantics():
    def check():
        rng = random.Random(2024)
        checked = overflow = 0
        while checked < 1000:
            if checked % 2:
                e, to_term, evaluate = _random_bool_expr(rng, 4), bool_term, eval_bool
            else:
                e, to_term, evaluate = _random_int_expr(rng, 5), int_term, eval_int
            try:
                expected = Val(evaluate(e, {}))
            except IntegerOverflow:
                overflow += 1
                continue
            term = to_term(e)
            assert interpret_theory(term) == expected, e
            nf, _ = rewrite_to_nf(term, Lctrs(), record=False)
            assert nf == expected, e
            checked += 1
        return f"{checked} ground expressions agree three ways ({overflow} overflowing samples redrawn)"

    _criterion(7, "expression semantics", 5.0, check)


def test_orthogonality():
    def check():
        programs = corpus_programs()
        assert len(programs) >= 10
        for path in programs:
            assert check_orthogonal(conv(load(path.stem))).orthogonal, path.stem
        fact = parse_lctrs((corpus_dir() / "fact.lctrs").read_text(encoding="utf-8"))
        assert check_orthogonal(fact).orthogonal
        fx = App("f", (Var("x", INT),))
        bad = Lctrs(
            signature={"f": FunctionSymbol("f", (INT,), INT)},
            rules=(ConstrainedRule(fx, Val(1)), ConstrainedRule(fx, Val(2))),
        )
        report = check_orthogonal(bad)
        assert not report.orthogonal and [o.position for o in report.overlaps] == [()]
        return f"{len(programs)} corpus systems and the factorial system orthogonal; f(x)->1 / f(x)->2 overlap at the root"

    _criterion(8, "orthogonality", 5.0, check)


def test_format_round_trip():
    def check():
        systems = [conv(load(p.stem)) for p in corpus_programs()]
        systems += [parse_lctrs(p.read_text(encoding="utf-8")) for p in sorted(corpus_dir().glob("*.lctrs"))]
        corpus_count = len(systems)
        systems += [random_system(seed) for seed in range(500)]
        for system in systems:
            text = emit(system)
            again = parse_lctrs(text)
            assert again == system, text
            assert emit(again) == text
        return f"{corpus_count} corpus systems and 500 generated systems round-trip"

    _criterion(9, "format round trip", 10.0, check)


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q"]))
