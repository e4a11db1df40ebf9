"""Left-linearity and non-overlap checks for constrained systems.

Overlaps are found by unifying each left-hand side with every non-variable
subterm of every left-hand side (renamed apart), then asking whether the joint
constraint is satisfiable.  Satisfiability is only decided in two cheap cases:
a complementary pair ``phi`` / ``not phi`` (or a ground conjunct) refutes it,
and a witness found by enumerating integer variables over ``[-64, 64]``
proves it.  Everything else is reported as unknown.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Optional

from .system import ConstrainedRule, Lctrs
from .terms import INT, TRUE, App, Position, Term, Val, Var, positions, rename_vars, substitute
from .theory import CALC_SYMBOLS, interpret_theory

ENUM_RANGE = range(-64, 65)
ENUM_BUDGET = 200_000


@dataclass(frozen=True)
class Overlap:
    outer: str  # rule id, the one whose lhs contains the overlap position
    inner: str  # rule id or "calc"
    position: Position

    def __str__(self) -> str:
        where = "root" if not self.position else ".".join(map(str, self.position))
        return f"{self.inner} overlaps {self.outer} at {where}"


@dataclass
class OrthogonalityReport:
    nonlinear: list[tuple[str, str]] = field(default_factory=list)  # (rule id, variable)
    overlaps: list[Overlap] = field(default_factory=list)
    unknown: list[Overlap] = field(default_factory=list)

    @property
    def left_linear(self) -> bool:
        return not self.nonlinear

    @property
    def orthogonal(self) -> bool:
        """True only when orthogonality is established, not merely unrefuted."""
        return not (self.nonlinear or self.overlaps or self.unknown)

    def lines(self) -> list[str]:
        out = [f"{rid}: variable {v} occurs more than once in the left-hand side" for rid, v in self.nonlinear]
        out += [f"overlap: {o}" for o in self.overlaps]
        out += [f"unknown: {o} (constraint satisfiability undecided)" for o in self.unknown]
        return out


def _occurrences(t: Term, counts: dict[str, int]) -> None:
    if isinstance(t, Var):
        counts[t.name] = counts.get(t.name, 0) + 1
    elif isinstance(t, App):
        for a in t.args:
            _occurrences(a, counts)


def _walk(t: Term, s: dict[str, Term]) -> Term:
    while isinstance(t, Var) and t.name in s:
        t = s[t.name]
    return t


def _occurs(name: str, t: Term, s: dict[str, Term]) -> bool:
    t = _walk(t, s)
    if isinstance(t, Var):
        return t.name == name
    if isinstance(t, App):
        return any(_occurs(name, a, s) for a in t.args)
    return False


def unify(a: Term, b: Term) -> Optional[dict[str, Term]]:
    """Most general unifier (Robinson, triangular form resolved at the end)."""
    s: dict[str, Term] = {}
    work = [(a, b)]
    while work:
        x, y = work.pop()
        x, y = _walk(x, s), _walk(y, s)
        if x == y:
            continue
        if isinstance(x, Var) or isinstance(y, Var):
            if not isinstance(x, Var):
                x, y = y, x
            if isinstance(y, Var) and y.sort != x.sort:
                return None
            if _occurs(x.name, y, s):
                return None
            s[x.name] = y
            continue
        if isinstance(x, Val) or isinstance(y, Val):
            return None
        if x.symbol != y.symbol or len(x.args) != len(y.args):
            return None
        work.extend(zip(x.args, y.args))
    return {k: _resolve(v, s) for k, v in s.items()}


def _resolve(t: Term, s: dict[str, Term]) -> Term:
    t = _walk(t, s)
    if isinstance(t, App) and not t.is_ground():
        return App(t.symbol, tuple(_resolve(a, s) for a in t.args))
    return t


def _conjuncts(phi: Term) -> list[Term]:
    if isinstance(phi, App) and phi.symbol == "and":
        return _conjuncts(phi.args[0]) + _conjuncts(phi.args[1])
    return [phi]


def satisfiable(phi: Term) -> Optional[bool]:
    """Decide satisfiability where cheap; None when undecided."""
    parts = _conjuncts(phi)
    for c in parts:
        if c.is_ground() and interpret_theory(c).value is False:
            return False
    for c in parts:
        if isinstance(c, App) and c.symbol == "not" and c.args[0] in parts:
            return False
    free = sorted(phi.variables(), key=lambda v: v.name)
    domains = [ENUM_RANGE if v.sort == INT else (False, True) for v in free]
    total = 1
    for d in domains:
        total *= len(d)
    if total > ENUM_BUDGET:
        return None
    for combo in itertools.product(*domains):
        gamma = {v.name: Val(x) for v, x in zip(free, combo)}
        if interpret_theory(substitute(phi, gamma)).value is True:
            return True
    return None if free else False


def _rename(rule: ConstrainedRule, suffix: str) -> ConstrainedRule:
    fn = lambda v: Var(v.name + suffix, v.sort)  # noqa: E731
    return ConstrainedRule(rename_vars(rule.lhs, fn), rename_vars(rule.rhs, fn), rename_vars(rule.constraint, fn))


def _values_ok(rule: ConstrainedRule, theta: dict[str, Term]) -> bool:
    # logical variables must be instantiable by values
    for name in rule.logical_vars:
        t = theta.get(name)
        if t is not None and not isinstance(t, (Var, Val)):
            return False
    return True


def _and(a: Term, b: Term) -> Term:
    if a == TRUE:
        return b
    if b == TRUE:
        return a
    return App("and", (a, b))


def check_orthogonal(system: Lctrs) -> OrthogonalityReport:
    report = OrthogonalityReport()
    rules = list(system.rules)
    ids = [system.rule_id(i) for i in range(len(rules))]

    for rid, rule in zip(ids, rules):
        counts: dict[str, int] = {}
        _occurrences(rule.lhs, counts)
        report.nonlinear.extend((rid, v) for v, c in sorted(counts.items()) if c > 1)

    by_root: dict[str, list[int]] = {}
    for j, r in enumerate(rules):
        by_root.setdefault(r.root, []).append(j)

    for i, outer in enumerate(rules):
        r1 = _rename(outer, "'1")
        for pos, sub in positions(r1.lhs):
            if not isinstance(sub, App):
                continue
            if pos and sub.symbol in CALC_SYMBOLS:
                report.overlaps.append(Overlap(ids[i], "calc", pos))
                continue
            for j in by_root.get(sub.symbol, ()):
                if not pos and j <= i:
                    continue  # root overlaps are symmetric; report each pair once
                r2 = _rename(rules[j], "'2")
                theta = unify(sub, r2.lhs)
                if theta is None or not (_values_ok(r1, theta) and _values_ok(r2, theta)):
                    continue
                phi = _and(substitute(r1.constraint, theta), substitute(r2.constraint, theta))
                verdict = satisfiable(phi)
                if verdict is False:
                    continue
                ov = Overlap(ids[i], ids[j], pos)
                (report.overlaps if verdict else report.unknown).append(ov)
    return report
