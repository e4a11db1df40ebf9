"""Random well-sorted LCTRSs for round-trip testing."""

import random

from simp2lctrs.lctrs import BOOL, INT, App, ConstrainedRule, FunctionSymbol, Lctrs, Val, Var

_INT_OPS = ["+", "-", "*", "div", "mod", "exp"]
_CMP_OPS = ["<", "<=", ">", ">=", "=", "!="]
_BOOL_OPS = ["and", "or", "=>"]


class _SystemGen:
    def __init__(self, rng: random.Random):
        self.rng = rng
        self.sorts = [INT, BOOL] + rng.sample(["state", "stream", "tree"], rng.randint(0, 3))
        self.symbols: list[FunctionSymbol] = []
        for k in range(rng.randint(1, 5)):
            arity = rng.randint(0, 3)
            args = tuple(rng.choice(self.sorts) for _ in range(arity))
            self.symbols.append(FunctionSymbol(f"f{k}", args, rng.choice(self.sorts)))
        # keep every sort inhabited by a constant so terms always exist
        for s in self.sorts[2:]:
            self.symbols.append(FunctionSymbol(f"c_{s}", (), s))

    def var(self, sort: str, pool: list[Var]) -> Var:
        if pool and self.rng.random() < 0.6:
            same = [v for v in pool if v.sort == sort]
            if same:
                return self.rng.choice(same)
        v = Var(f"{sort[0]}{len(pool)}", sort)
        pool.append(v)
        return v

    def term(self, sort: str, depth: int, pool: list[Var], allow_theory: bool = True, theory_only: bool = False):
        rng = self.rng
        makers = [] if theory_only else [s for s in self.symbols if s.result == sort and (depth > 0 or not s.arg_sorts)]
        roll = rng.random()
        if depth <= 0 or roll < 0.3:
            if sort == INT and roll < 0.15:
                return Val(rng.randint(-20, 20))
            if sort == BOOL and roll < 0.15:
                return Val(rng.random() < 0.5)
            if sort not in (INT, BOOL) and makers and roll < 0.15:
                return App(rng.choice([m for m in makers if not m.arg_sorts] or makers).name, ())
            return self.var(sort, pool)
        if allow_theory and sort == INT and roll < 0.6:
            a = self.term(INT, depth - 1, pool, theory_only=theory_only)
            b = self.term(INT, depth - 1, pool, theory_only=theory_only)
            return App(rng.choice(_INT_OPS), (a, b))
        if allow_theory and sort == BOOL and (roll < 0.6 or theory_only):
            return self.condition(depth, pool)
        if makers:
            f = rng.choice(makers)
            return App(f.name, tuple(self.term(s, depth - 1, pool, allow_theory) for s in f.arg_sorts))
        return self.var(sort, pool)

    def condition(self, depth: int, pool: list[Var]):
        rng = self.rng
        roll = rng.random()
        if depth <= 0 or roll < 0.5:
            op = rng.choice(_CMP_OPS)
            left = self.term(INT, depth - 1, pool, theory_only=True)
            if op in ("=", "!=") and isinstance(left, Var):
                # equality is polymorphic, so pin the sort with a literal
                return App(op, (left, Val(rng.randint(-5, 5))))
            return App(op, (left, self.term(INT, depth - 1, pool, theory_only=True)))
        if roll < 0.65:
            return App("not", (self.condition(depth - 1, pool),))
        return App(rng.choice(_BOOL_OPS), (self.condition(depth - 1, pool), self.condition(depth - 1, pool)))

    def rule(self):
        rng = self.rng
        roots = [s for s in self.symbols if s.name.startswith("f")]
        f = rng.choice(roots)
        pool: list[Var] = []
        lhs = App(f.name, tuple(self.term(s, 2, pool, allow_theory=False) for s in f.arg_sorts))
        rhs = self.term(f.result, 3, pool)
        constraint = self.condition(2, pool) if rng.random() < 0.5 else Val(True)
        return ConstrainedRule(lhs, rhs, constraint)

    def system(self) -> Lctrs:
        sig = {s.name: s for s in self.symbols}
        rules = tuple(self.rule() for _ in range(self.rng.randint(0, 6)))
        return Lctrs(tuple(self.sorts), sig, rules)


def random_system(seed: int) -> Lctrs:
    return _SystemGen(random.Random(seed)).system()
