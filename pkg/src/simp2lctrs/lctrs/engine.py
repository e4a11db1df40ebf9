"""Ground rewriting with constrained rules and native calculation steps.

Strategy: the leftmost-innermost calculation redex is contracted first; when
no calculation is possible the unique rule redex is contracted.  Two distinct
rule redexes in one term mean the system is not orthogonal on that input and
raise :class:`AmbiguousRedex`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Union

from .system import ConstrainedRule, Lctrs
from .terms import App, Position, Term, Val, Var, replace, subterm, substitute
from .theory import CALC_SYMBOLS, apply_calc, interpret_theory

CALC = "calc"


class EngineError(Exception):
    pass


class AmbiguousRedex(EngineError):
    def __init__(self, redexes: list[tuple[Position, str]]):
        self.redexes = redexes
        desc = ", ".join(f"{rid} at {list(p)}" for p, rid in redexes)
        super().__init__(f"more than one rule redex: {desc}")


class FreshVariableError(EngineError):
    def __init__(self, rule_id: str, names: frozenset[str]):
        self.rule_id = rule_id
        self.names = names
        super().__init__(
            f"rule {rule_id} introduces fresh variables {sorted(names)}; "
            "instantiating them would need a search over values"
        )


class FuelExhausted(EngineError):
    def __init__(self, steps: int, term: Term, trace: Optional["Trace"] = None):
        self.steps = steps
        self.term = term
        self.trace = trace
        super().__init__(f"no normal form within {steps} steps")


def match(pattern: Term, subject: Term, gamma: Optional[dict[str, Term]] = None) -> Optional[dict[str, Term]]:
    """Syntactic matching; non-linear patterns need equal subterms."""
    gamma = {} if gamma is None else gamma
    stack = [(pattern, subject)]
    while stack:
        p, s = stack.pop()
        if isinstance(p, Var):
            bound = gamma.get(p.name)
            if bound is None:
                gamma[p.name] = s
            elif bound != s:
                return None
        elif isinstance(p, Val):
            if p != s:
                return None
        else:
            if not isinstance(s, App) or s.symbol != p.symbol or len(s.args) != len(p.args):
                return None
            stack.extend(zip(p.args, s.args))
    return gamma


def rule_applies(rule: ConstrainedRule, subject: Term, pos: Position = (), rule_id: str = "rule") -> Optional[dict[str, Term]]:
    """Return a substitution respecting ``rule`` at ``subject|pos``, or None."""
    target = subterm(subject, pos)
    if not isinstance(target, App) or target.symbol != rule.root:
        return None
    gamma = match(rule.lhs, target)
    if gamma is None:
        return None
    return _respects(rule, gamma, rule_id)


def _respects(rule: ConstrainedRule, gamma: dict[str, Term], rule_id: str) -> Optional[dict[str, Term]]:
    if rule.fresh_vars:
        raise FreshVariableError(rule_id, rule.fresh_vars)
    for name in rule.constraint_vars:
        if not isinstance(gamma.get(name), Val):
            return None
    phi = rule.constraint
    if not (isinstance(phi, Val) and phi.value is True):
        if interpret_theory(substitute(phi, gamma)).value is not True:
            return None
    return gamma


@dataclass(frozen=True)
class Step:
    position: Position
    rule: str  # rule identifier or "calc"
    term: Term


@dataclass
class Trace:
    start: Term
    steps: list[Step] = field(default_factory=list)
    count: int = 0  # number of steps taken, also when steps are not recorded

    def __len__(self) -> int:
        return self.count

    @property
    def final(self) -> Term:
        return self.steps[-1].term if self.steps else self.start

    def append(self, st: Step) -> None:
        self.steps.append(st)
        self.count += 1

    def terms(self) -> list[Term]:
        return [self.start] + [s.term for s in self.steps]

    def to_json(self) -> dict:
        from .printing import show_term

        return {
            "start": show_term(self.start),
            "steps": [
                {"position": list(s.position), "rule": s.rule, "term": show_term(s.term)}
                for s in self.steps
            ],
        }


@dataclass(frozen=True)
class Redex:
    position: Position
    rule: Union[int, str]  # rule index, or CALC


def _head_key(t: Term):
    if isinstance(t, App):
        return t.symbol
    if isinstance(t, Val):
        return (type(t.value) is bool, t.value)
    return None


_ANY = object()  # trie edge for a pattern variable


class _Trie:
    """Discrimination tree over the pre-order symbol sequence of left-hand sides."""

    __slots__ = ("children", "rules")

    def __init__(self):
        self.children: dict = {}
        self.rules: list[int] = []

    def insert(self, pattern: Term, index: int) -> None:
        node = self
        pending = [pattern]
        while pending:
            t = pending.pop()
            key = _ANY if isinstance(t, Var) else _head_key(t)
            node = node.children.setdefault(key, _Trie())
            if isinstance(t, App):
                pending.extend(reversed(t.args))
        node.rules.append(index)

    def candidates(self, subject: Term) -> list[int]:
        out: list[int] = []
        work = [(self, (subject,))]
        while work:
            node, pending = work.pop()
            if not pending:
                out.extend(node.rules)
                continue
            t, rest = pending[0], pending[1:]
            nxt = node.children.get(_ANY)
            if nxt is not None:
                work.append((nxt, rest))
            nxt = node.children.get(_head_key(t))
            if nxt is not None:
                work.append((nxt, t.args + rest if isinstance(t, App) else rest))
        out.sort()
        return out


class Engine:
    """A rewriting session bound to one system."""

    def __init__(self, system: Lctrs):
        self.system = system
        self._token = object()
        self._trie = _Trie()
        self._roots = set()
        for i, rule in enumerate(system.rules):
            self._trie.insert(rule.lhs, i)
            self._roots.add(rule.root)

    def rule_id(self, index: int) -> str:
        return self.system.rule_id(index)

    def _rules_at(self, node: App) -> list[tuple[int, dict[str, Term]]]:
        found = []
        if node.symbol not in self._roots:
            return found
        rules = self.system.rules
        for i in self._trie.candidates(node):
            gamma = match(rules[i].lhs, node)
            if gamma is None:
                continue
            gamma = _respects(rules[i], gamma, self.rule_id(i))
            if gamma is not None:
                found.append((i, gamma))
        return found

    def _scan(self, node: Term, pos: Position, calcs: list, rules: list) -> None:
        if not isinstance(node, App) or node._free is self._token:
            return
        if not node._ground:
            raise EngineError(f"rewriting needs ground terms; {node!r} has variables")
        nc, nr = len(calcs), len(rules)
        for i, a in enumerate(node.args, 1):
            self._scan(a, pos + (i,), calcs, rules)
        if node.symbol in CALC_SYMBOLS:
            if all(isinstance(a, Val) for a in node.args):
                calcs.append(pos)
        else:
            for i, gamma in self._rules_at(node):
                rules.append((pos, i, gamma))
        if len(calcs) == nc and len(rules) == nr:
            node._free = self._token

    def find_redex(self, term: Term) -> Optional[Redex]:
        redex, _ = self._find(term)
        return redex

    def _find(self, term: Term):
        calcs: list[Position] = []
        rules: list = []
        self._scan(term, (), calcs, rules)
        if calcs:
            # post-order collection: the first entry is leftmost-innermost
            return Redex(calcs[0], CALC), None
        if not rules:
            return None, None
        if len(rules) > 1:
            raise AmbiguousRedex([(p, self.rule_id(i)) for p, i, _ in rules])
        pos, i, gamma = rules[0]
        return Redex(pos, i), gamma

    def step(self, term: Term) -> Optional[tuple[Term, Step]]:
        redex, gamma = self._find(term)
        if redex is None:
            return None
        target = subterm(term, redex.position)
        if redex.rule == CALC:
            assert isinstance(target, App)
            new = apply_calc(target.symbol, target.args)
            rid = CALC
        else:
            new = substitute(self.system.rules[redex.rule].rhs, gamma)
            rid = self.rule_id(redex.rule)
        result = replace(term, redex.position, new)
        return result, Step(redex.position, rid, result)

    def normalize(self, term: Term, fuel: int = 10**6, record: bool = True) -> tuple[Term, Trace]:
        trace = Trace(term)
        steps = 0
        while True:
            nxt = self.step(term)
            if nxt is None:
                return term, trace
            if steps >= fuel:
                raise FuelExhausted(steps, term, trace if record else None)
            term, st = nxt
            steps += 1
            trace.count = steps
            if record:
                trace.steps.append(st)


def find_redex(term: Term, system: Lctrs) -> Optional[Redex]:
    return Engine(system).find_redex(term)


def rewrite_to_nf(term: Term, system: Lctrs, fuel: int = 10**6, record: bool = True) -> tuple[Term, Trace]:
    """Rewrite a ground term to normal form, returning it with the trace."""
    return Engine(system).normalize(term, fuel, record)


def apply_at(term: Term, system: Lctrs, pos: Position, rule: str) -> Term:
    """Contract the redex at ``pos`` with ``rule`` (an identifier or "calc")."""
    target = subterm(term, pos)
    if rule == CALC:
        if not (isinstance(target, App) and target.symbol in CALC_SYMBOLS):
            raise EngineError(f"no calculation redex at {list(pos)}")
        return replace(term, pos, interpret_theory(target))
    idx = int(rule.split(":", 1)[0].lstrip("r")) - 1
    gamma = rule_applies(system.rules[idx], term, pos, rule)
    if gamma is None:
        raise EngineError(f"rule {rule} does not apply at {list(pos)}")
    return replace(term, pos, substitute(system.rules[idx].rhs, gamma))


def replay(trace: Trace, system: Lctrs) -> list[Term]:
    """Recompute every intermediate term from the recorded (position, rule) pairs."""
    out = [trace.start]
    t = trace.start
    for st in trace.steps:
        t = apply_at(t, system, st.position, st.rule)
        out.append(t)
    return out
