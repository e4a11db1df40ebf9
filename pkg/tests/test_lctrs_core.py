from functools import lru_cache

import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from simp2lctrs import corpus_dir
from simp2lctrs.interpreter import IntegerOverflow, eval_bool, eval_int
from simp2lctrs.lctrs import (
    BOOL,
    CALC,
    FALSE,
    INT,
    TRUE,
    AmbiguousRedex,
    App,
    ConstrainedRule,
    Engine,
    FreshVariableError,
    FuelExhausted,
    FunctionSymbol,
    Lctrs,
    RuleError,
    SortError,
    Val,
    Var,
    check_orthogonal,
    find_redex,
    interpret_theory,
    match,
    parse_lctrs,
    parse_term,
    replay,
    rewrite_to_nf,
    rule_applies,
    sort_of,
)
from simp2lctrs.lctrs.terms import positions, replace, subterm
from simp2lctrs.lctrs.theory import apply_calc, is_calc_redex
from simp2lctrs.syntax import BinOp, BoolLit, Compare, Name, Not, Num, Or
from simp2lctrs.transform import bool_term, conv, initial_term, int_term

from conftest import load


def fact_system() -> Lctrs:
    return parse_lctrs((corpus_dir() / "fact.lctrs").read_text(encoding="utf-8"))


def r4() -> Lctrs:
    return parse_lctrs((corpus_dir() / "r4.lctrs").read_text(encoding="utf-8"))


def T(text: str, system: Lctrs):
    return parse_term(text, system)


def op(symbol, *args):
    return App(symbol, tuple(Val(a) if isinstance(a, (int, bool)) else a for a in args))


# ---------------------------------------------------------------- theory


@pytest.mark.parametrize(
    "term, value",
    [
        (op("-", 3, 1), 2),
        (op("div", 5, 0), 0),
        (op("mod", 5, 0), 0),
        (op("exp", 2, -1), 0),
        (op("+", 0, 1), 1),
        (op("exp", 2, 10), 1024),
        (op("div", -7, 2), -3),
        (op("mod", -7, 2), -1),
        (op("div", 7, -2), -3),
        (op("=>", False, False), True),
        (op("!=", True, False), True),
    ],
)
def test_interpret_theory(term, value):
    assert interpret_theory(term) == Val(value)


def test_bool_and_int_values_differ():
    assert Val(1) != Val(True)
    assert Val(0) != FALSE
    assert Val(1).sort == INT and TRUE.sort == BOOL


def _trunc(a: int, b: int) -> int:
    q = abs(a) // abs(b)
    return q if (a >= 0) == (b > 0) else -q


@given(st.integers(-10**6, 10**6), st.integers(-50, 50))
def test_div_mod_truncate(a, b):
    q = interpret_theory(op("div", a, b)).value
    r = interpret_theory(op("mod", a, b)).value
    if b == 0:
        assert (q, r) == (0, 0)
    else:
        assert q == _trunc(a, b)
        assert a == b * q + r


# ---------------------------------------------------------------- matching


def test_match_single_binding():
    assert match(App("sum", (Var("x"),)), App("sum", (Val(3),))) == {"x": Val(3)}


def test_match_fig6_frame():
    system = r4()
    pattern = system.rules[1].lhs  # env(num, stack(u1(x,z), s))
    subject = T("env(0, stack(u1(3,0), stack(u11(3), bot)))", system)
    assert match(pattern, subject) == {
        "num": Val(0),
        "x": Val(3),
        "z": Val(0),
        "s": T("stack(u11(3), bot)", system),
    }


def test_match_nonlinear():
    f = lambda a, b: App("f", (a, b))  # noqa: E731
    assert match(f(Var("x"), Var("x")), f(Val(1), Val(2))) is None
    assert match(f(Var("x"), Var("x")), f(Val(1), Val(1))) == {"x": Val(1)}


def test_rule_applies_checks_constraint():
    system = r4()
    then_rule, else_rule = system.rules[2], system.rules[3]  # u2 -> u3 [x <= 0], u2 -> u5 [not (x <= 0)]
    subject = T("u2(3,0)", system)
    assert rule_applies(else_rule, subject) == {"x": Val(3), "z": Val(0)}
    assert rule_applies(then_rule, subject) is None
    assert rule_applies(then_rule, T("u7(3,0)", system)) is None


def test_rule_applies_needs_values_for_logical_variables():
    system = Lctrs(signature={"f": FunctionSymbol("f", (INT,), INT)},
                   rules=(ConstrainedRule(App("f", (Var("x"),)), Var("x"), op(">", Var("x"), 0)),))
    assert rule_applies(system.rules[0], App("f", (op("+", 1, 2),))) is None
    assert rule_applies(system.rules[0], App("f", (Val(3),))) == {"x": Val(3)}


# ---------------------------------------------------------------- strategy


def test_find_redex_prefers_calc():
    system = r4()
    t = T("env(0 + 1, stack(u2(3,0), stack(u11(3), bot)))", system)
    red = find_redex(t, system)
    assert (red.position, red.rule) == ((1,), CALC)


def test_find_redex_rule_position():
    system = r4()
    t = T("env(1, stack(u2(3,0), stack(u11(3), bot)))", system)
    red = find_redex(t, system)
    assert red.position == (2, 1)
    assert system.rule_id(red.rule) == "r4:u2"


def test_value_is_normal():
    assert find_redex(Val(5), Lctrs()) is None


def test_calc_is_leftmost_innermost():
    t = op("+", op("*", 2, 3), op("-", 4, 1))
    assert find_redex(t, Lctrs()).position == (1,)


def test_ambiguity_is_reported():
    sig = {"f": FunctionSymbol("f", (INT,), INT), "g": FunctionSymbol("g", (INT,), INT)}
    rules = (
        ConstrainedRule(App("f", (Var("x"),)), Val(1)),
        ConstrainedRule(App("g", (Var("x"),)), Val(2)),
    )
    system = Lctrs(signature=sig, rules=rules)
    t = op("+", App("f", (Val(0),)), App("g", (Val(0),)))
    with pytest.raises(AmbiguousRedex) as exc:
        find_redex(t, system)
    assert [p for p, _ in exc.value.redexes] == [(1,), (2,)]


def test_fresh_variables_are_rejected():
    sig = {"f": FunctionSymbol("f", (INT,), INT)}
    system = Lctrs(signature=sig, rules=(ConstrainedRule(App("f", (Var("x"),)), Var("y"), op(">", Var("y"), 0)),))
    with pytest.raises(FreshVariableError):
        rewrite_to_nf(App("f", (Val(0),)), system)


# ---------------------------------------------------------------- rewriting


def test_fact_in_ten_steps():
    system = fact_system()
    nf, trace = rewrite_to_nf(T("fact(3)", system), system)
    assert nf == Val(6)
    assert len(trace) == 10 == len(trace.steps)
    assert [s.rule for s in trace.steps].count(CALC) == 6


def test_product_in_three_steps():
    t = op("*", 3, op("*", 2, op("*", 1, 1)))
    nf, trace = rewrite_to_nf(t, Lctrs())
    assert nf == Val(6) and len(trace) == 3


def test_fig6_normal_form():
    system = r4()
    nf, trace = rewrite_to_nf(T("env(0, stack(main(), bot))", system), system)
    assert nf == T("env(4, stack(return(0), bot))", system)
    assert len(trace) == 44


def test_fuel_exhaustion():
    sig = {"loop": FunctionSymbol("loop", (INT,), INT)}
    x = Var("x")
    system = Lctrs(signature=sig, rules=(ConstrainedRule(App("loop", (x,)), App("loop", (op("+", x, 1),))),))
    with pytest.raises(FuelExhausted) as exc:
        rewrite_to_nf(App("loop", (Val(0),)), system, fuel=25)
    assert exc.value.steps == 25
    # rule and calc steps alternate, so 25 steps leave loop(12 + 1)
    assert exc.value.term == App("loop", (op("+", 12, 1),))


def test_nonground_input_is_rejected():
    system = fact_system()
    from simp2lctrs.lctrs import EngineError

    with pytest.raises(EngineError):
        rewrite_to_nf(App("fact", (Var("n"),)), system)


# ---------------------------------------------------------------- system invariants


def test_theory_lhs_is_rejected():
    with pytest.raises(RuleError):
        Lctrs(rules=(ConstrainedRule(op("+", 1, Var("x")), Var("x")),))


def test_sort_mismatch_is_rejected():
    sig = {"f": FunctionSymbol("f", (INT,), INT)}
    with pytest.raises(SortError):
        Lctrs(signature=sig, rules=(ConstrainedRule(App("f", (Var("x"),)), TRUE),))


def test_constraint_must_be_boolean():
    sig = {"f": FunctionSymbol("f", (INT,), INT)}
    with pytest.raises((SortError, RuleError)):
        Lctrs(signature=sig, rules=(ConstrainedRule(App("f", (Var("x"),)), Var("x"), Var("x")),))


# ---------------------------------------------------------------- orthogonality


def test_fact_is_orthogonal():
    assert check_orthogonal(fact_system()).orthogonal


def test_r4_is_orthogonal():
    assert check_orthogonal(r4()).orthogonal


def _f_system(*rules) -> Lctrs:
    return Lctrs(signature={"f": FunctionSymbol("f", (INT,), INT)}, rules=rules)


def test_complementary_guards_do_not_overlap():
    x = Var("x")
    fx = App("f", (x,))
    le = op("<=", x, 0)
    system = _f_system(ConstrainedRule(fx, Val(1), le), ConstrainedRule(fx, x, App("not", (le,))))
    assert check_orthogonal(system).orthogonal


def test_root_overlap_is_found():
    fx = App("f", (Var("x"),))
    report = check_orthogonal(_f_system(ConstrainedRule(fx, Val(1)), ConstrainedRule(fx, Val(2))))
    assert not report.orthogonal
    (ov,) = report.overlaps
    assert ov.position == () and {ov.outer, ov.inner} == {"r1:f", "r2:f"}


def test_enumerated_guards():
    x = Var("x")
    fx = App("f", (x,))
    # no witness in the window is not a proof over the integers
    disjoint = _f_system(ConstrainedRule(fx, Val(1), op(">", x, 5)), ConstrainedRule(fx, Val(2), op("<", x, 3)))
    report = check_orthogonal(disjoint)
    assert not report.overlaps and len(report.unknown) == 1 and not report.orthogonal
    touching = _f_system(ConstrainedRule(fx, Val(1), op(">", x, 5)), ConstrainedRule(fx, Val(2), op("<", x, 7)))
    assert [o.position for o in check_orthogonal(touching).overlaps] == [()]


def test_nonlinear_lhs_is_reported():
    sig = {"g": FunctionSymbol("g", (INT, INT), INT)}
    x = Var("x")
    report = check_orthogonal(Lctrs(signature=sig, rules=(ConstrainedRule(App("g", (x, x)), x),)))
    assert report.nonlinear == [("r1:g", "x")] and not report.orthogonal


def test_undecided_guard_is_unknown_not_orthogonal():
    x = Var("x")
    fx = App("f", (x,))
    big = op(">", op("*", x, x), 10**9)  # no witness inside the enumeration window
    report = check_orthogonal(_f_system(ConstrainedRule(fx, Val(1), big), ConstrainedRule(fx, Val(2))))
    assert report.unknown and not report.orthogonal


def test_nested_overlap():
    sig = {"f": FunctionSymbol("f", (INT,), INT), "g": FunctionSymbol("g", (INT,), INT)}
    x = Var("x")
    rules = (
        ConstrainedRule(App("f", (App("g", (x,)),)), x),
        ConstrainedRule(App("g", (x,)), Val(0)),
    )
    report = check_orthogonal(Lctrs(signature=sig, rules=rules))
    assert [(o.outer, o.inner, o.position) for o in report.overlaps] == [("r1:f", "r2:g", (1,))]


# ---------------------------------------------------------------- properties

_int_leaf = st.integers(-30, 30).map(Val)
_ground_ints = st.recursive(
    _int_leaf,
    lambda sub: st.builds(lambda s, a, b: App(s, (a, b)), st.sampled_from(["+", "-", "*", "div", "mod"]), sub, sub),
    max_leaves=8,
)
_ground_bools = st.recursive(
    st.sampled_from([TRUE, FALSE])
    | st.builds(lambda s, a, b: App(s, (a, b)), st.sampled_from(["<", "<=", ">", ">=", "=", "!="]), _ground_ints, _ground_ints),
    lambda sub: st.builds(lambda a: App("not", (a,)), sub)
    | st.builds(lambda s, a, b: App(s, (a, b)), st.sampled_from(["and", "or", "=>"]), sub, sub),
    max_leaves=6,
)


def _depth(t) -> int:
    return 1 + max((_depth(a) for a in t.args), default=0) if isinstance(t, App) else 1


@lru_cache(maxsize=None)
def _all_normal_forms(t) -> frozenset:
    """Every normal form reachable by calculation steps in any order."""
    redexes = [p for p, s in positions(t) if is_calc_redex(s)]
    if not redexes:
        return frozenset({t})
    out = set()
    for p in redexes:
        s = subterm(t, p)
        out |= _all_normal_forms(replace(t, p, apply_calc(s.symbol, s.args)))
    return frozenset(out)


@given(_ground_ints | _ground_bools)
def test_calc_is_confluent(t):
    assume(_depth(t) <= 4)
    assert _all_normal_forms(t) == {interpret_theory(t)}


@given(_ground_ints | _ground_bools)
def test_engine_calc_agrees_with_interpretation(t):
    nf, trace = rewrite_to_nf(t, Lctrs())
    assert nf == interpret_theory(t)
    assert replay(trace, Lctrs())[-1] == nf


_names = ["a", "b", "c"]
_exprs = st.recursive(
    st.builds(Num, st.integers(-100, 100)) | st.builds(Name, st.sampled_from(_names)),
    lambda sub: st.builds(BinOp, st.sampled_from(["+", "-", "*"]), sub, sub),
    max_leaves=16,
)
_conds = st.recursive(
    st.builds(BoolLit, st.booleans()) | st.builds(Compare, st.sampled_from(["==", "<"]), _exprs, _exprs),
    lambda sub: st.builds(Not, sub) | st.builds(Or, sub, sub),
    max_leaves=4,
)
_sigmas = st.fixed_dictionaries({n: st.integers(-100, 100) for n in _names})


def _ground(term, sigma):
    from simp2lctrs.lctrs.terms import substitute

    return substitute(term, {k: Val(v) for k, v in sigma.items()})


def _three_way(e, sigma, to_term, evaluate):
    try:
        expected = evaluate(e, sigma)
    except IntegerOverflow:
        assume(False)  # the interpreter is 64-bit checked, the theory is unbounded
    ground = _ground(to_term(e), sigma)
    assert interpret_theory(ground) == Val(expected)
    nf, _ = rewrite_to_nf(ground, Lctrs())
    assert nf == Val(expected)


@given(_exprs, _sigmas)
def test_expression_semantics_agree(e, sigma):
    _three_way(e, sigma, int_term, eval_int)


@given(_conds, _sigmas)
def test_condition_semantics_agree(phi, sigma):
    _three_way(phi, sigma, bool_term, eval_bool)


def test_trace_replay_and_sort_preservation():
    for name in ["fig2_sum", "ackermann", "nested_loops", "params_globals"]:
        p = load(name)
        system = conv(p)
        nf, trace = rewrite_to_nf(initial_term(p), system)
        terms = trace.terms()
        assert replay(trace, system) == terms
        assert {sort_of(t, system) for t in terms} == {"env"}
        assert find_redex(nf, system) is None


def test_normal_form_has_no_redex_left(corpus_program):
    _, p = corpus_program
    system = conv(p)
    nf, _ = rewrite_to_nf(initial_term(p), system, record=False)
    assert all(not is_calc_redex(s) for _, s in positions(nf))
    assert find_redex(nf, system) is None


def test_no_ambiguity_on_corpus(corpus_program):
    # rewrite_to_nf raises AmbiguousRedex if two rule redexes ever coexist
    _, p = corpus_program
    engine = Engine(conv(p))
    t = initial_term(p)
    steps = 0
    while (nxt := engine.step(t)) is not None:
        t = nxt[0]
        steps += 1
    assert steps > 0
