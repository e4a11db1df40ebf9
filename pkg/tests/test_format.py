import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from simp2lctrs import corpus_dir, corpus_programs
from simp2lctrs.lctrs import (
    INT,
    App,
    ConstrainedRule,
    FormatError,
    FunctionSymbol,
    Lctrs,
    Val,
    Var,
    emit,
    parse_lctrs,
    parse_term,
    show_term,
)
from simp2lctrs.transform import conv

from conftest import load
from systems import random_system

FACT = (corpus_dir() / "fact.lctrs").read_text(encoding="utf-8")


def test_fact_emits_guarded_rule():
    text = emit(parse_lctrs(FACT))
    assert "  fact(x) -> 1 [x <= 0]\n" in text
    assert "  fact(x) -> x * fact(x - 1) [not (x <= 0)]\n" in text


def test_fact_has_two_rules():
    assert len(parse_lctrs(FACT).rules) == 2


def test_empty_system_is_headers_only():
    assert emit(Lctrs()) == "SORTS\n  int bool\nSIGNATURE\n"
    assert parse_lctrs(emit(Lctrs())) == Lctrs()


def test_increment_rule_text(fig2):
    assert "  env(num, stack(u1(x,z), s)) -> env(num + 1, stack(u2(x,z), s))\n" in emit(conv(fig2))


def test_signature_is_sorted(fig2):
    text = emit(conv(fig2))
    names = [ln.split()[1] for ln in text.splitlines() if ln.startswith("  terms ")]
    assert names == sorted(names)


def test_theory_lhs_is_rejected():
    with pytest.raises(FormatError, match="theory term"):
        parse_lctrs("SORTS\n  int bool\nSIGNATURE\nRULES\n  1 + x -> x\n")


@pytest.mark.parametrize(
    "text, line",
    [
        ("SORTS\n  int bool\nSIGNATURE\n  terms f : int => int\nRULES\n  f(x -> x\n", 6),
        ("SORTS\n  int bool\nSIGNATURE\n  terms f : int => int\nRULES\n  f(x) -> true\n", 6),
        ("SORTS\n  int bool\nSIGNATURE\n  terms f : int => nope\n", 4),
        ("SORTS\n  int\nSIGNATURE\n", 1),
        ("SORTS\n  int bool\nSIGNATURE\n  terms f : int => int\nRULES\n  g(x) -> x\n", 6),
        ("SORTS\n  int bool\nSIGNATURE\n  terms f : int => int\nRULES\n  f(x, x) -> x\n", 6),
    ],
)
def test_errors_have_locations(text, line):
    with pytest.raises(FormatError) as exc:
        parse_lctrs(text)
    assert exc.value.line == line


def test_comments_are_ignored():
    assert parse_lctrs("# a comment\n" + FACT + "# trailing\n") == parse_lctrs(FACT)


def test_operator_precedence():
    system = parse_lctrs(FACT)
    t = parse_term("1 + 2 * 3 - 4 div 2", system)
    assert t == App("-", (App("+", (Val(1), App("*", (Val(2), Val(3))))), App("div", (Val(4), Val(2)))))
    b = parse_term("not true and 1 < 2 or false => false", system)
    assert b.symbol == "=>"
    assert b.args[0].symbol == "or"
    assert b.args[0].args[0].symbol == "and"
    assert b.args[0].args[0].args[0].symbol == "not"
    with pytest.raises(FormatError):
        parse_term("not 1 < 2", system)  # not binds tighter than <


def test_negative_literals():
    system = parse_lctrs(FACT)
    t = parse_term("fact(-3) - -2", system)
    assert t == App("-", (App("fact", (Val(-3),)), Val(-2)))
    assert parse_term(show_term(t), system) == t


def test_ground_term_in_fig2_syntax(fig2):
    system = conv(fig2)
    t = parse_term("env(0, stack(main(), bot))", system)
    assert show_term(t) == "env(0, stack(main(), bot))"


def test_parse_term_rejects_unknown_shapes():
    system = parse_lctrs(FACT)
    with pytest.raises(FormatError):
        parse_term("fact(1, 2)", system)
    with pytest.raises(FormatError):
        parse_term("fact(1) extra", system)


def test_fresh_variables_round_trip():
    sig = {"f": FunctionSymbol("f", (INT,), INT)}
    rule = ConstrainedRule(App("f", (Var("x"),)), Var("y"), App("<", (Var("x"), Var("y"))))
    system = Lctrs(signature=sig, rules=(rule,))
    assert parse_lctrs(emit(system)) == system


def _round_trip(system: Lctrs) -> None:
    text = emit(system)
    again = parse_lctrs(text)
    assert again == system
    assert emit(again) == text


def test_corpus_round_trip(corpus_program):
    _, p = corpus_program
    _round_trip(conv(p))


def test_hand_written_round_trip():
    for path in sorted(corpus_dir().glob("*.lctrs")):
        _round_trip(parse_lctrs(path.read_text(encoding="utf-8")))


@settings(max_examples=500)
@given(st.integers(0, 2**32))
def test_random_systems_round_trip(seed):
    _round_trip(random_system(seed))


def test_emission_is_deterministic():
    for path in corpus_programs():
        p = load(path.stem)
        assert emit(conv(p)) == emit(conv(load(path.stem)))
