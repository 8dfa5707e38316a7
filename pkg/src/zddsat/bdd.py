"""Plain reduced ordered BDDs (no complement edges) over SAT variables."""

from __future__ import annotations

import time
from functools import reduce
from typing import Iterable

from .clause_zdd import MAX_COUNT, ClauseSetZdd, CountOverflowError
from .dd_store import ONE, ZERO, BudgetExceeded, LiteralOrder

FALSE = 0
TRUE = 1


class BddManager:
    """Unique table and ``and`` cache for BDDs; levels follow ``order``."""

    _CHECK_EVERY = 512

    def __init__(
        self,
        order: LiteralOrder,
        *,
        max_nodes: int | None = None,
        deadline: float | None = None,
    ):
        self.order = order
        self.max_nodes = max_nodes
        self.deadline = deadline
        self._sink_level = order.nvars
        self.level: list[int] = [self._sink_level, self._sink_level]
        self.hi: list[int] = [-1, -1]
        self.lo: list[int] = [-1, -1]
        self._unique: dict[tuple[int, int, int], int] = {}
        self._and_cache: dict[tuple[int, int], int] = {}
        self._ticks = self._CHECK_EVERY

    def __len__(self) -> int:
        return len(self.level) - 2

    def _check_budget(self) -> None:
        self._ticks = self._CHECK_EVERY
        if self.max_nodes is not None and len(self) > self.max_nodes:
            raise BudgetExceeded(f"node budget of {self.max_nodes} exceeded")
        if self.deadline is not None and time.perf_counter() > self.deadline:
            raise BudgetExceeded("time budget exceeded")

    def mk(self, level: int, hi: int, lo: int) -> int:
        self._ticks -= 1
        if self._ticks <= 0:
            self._check_budget()
        if hi == lo:
            return hi
        key = (level, hi, lo)
        h = self._unique.get(key)
        if h is None:
            h = len(self.level)
            self.level.append(level)
            self.hi.append(hi)
            self.lo.append(lo)
            self._unique[key] = h
        return h

    def var(self, v: int) -> int:
        return self.mk(self.order.level(v), TRUE, FALSE)

    def nodes(self):
        for h in range(2, len(self.level)):
            yield h, self.level[h], self.hi[h], self.lo[h]

    def bdd_and(self, f: int, g: int) -> int:
        if f == FALSE or g == FALSE:
            return FALSE
        if f == TRUE or f == g:
            return g
        if g == TRUE:
            return f
        if f > g:
            f, g = g, f
        r = self._and_cache.get((f, g))
        if r is not None:
            return r
        lf, lg = self.level[f], self.level[g]
        lvl = min(lf, lg)
        f1, f0 = (self.hi[f], self.lo[f]) if lf == lvl else (f, f)
        g1, g0 = (self.hi[g], self.lo[g]) if lg == lvl else (g, g)
        r = self.mk(lvl, self.bdd_and(f1, g1), self.bdd_and(f0, g0))
        self._and_cache[(f, g)] = r
        return r

    def clause_to_bdd(self, clause: Iterable[int]) -> int:
        lits = set(clause)
        if any(-l in lits for l in lits):
            raise ValueError("tautological clause")
        f = FALSE
        for lit in sorted(lits, key=lambda l: self.order.level(abs(l)), reverse=True):
            lvl = self.order.level(abs(lit))
            f = self.mk(lvl, TRUE, f) if lit > 0 else self.mk(lvl, f, TRUE)
        return f

    def conjoin_direct(self, cnf, *, balanced: bool = False) -> int:
        """Conjunction of all clause BDDs, folded in file order by default."""
        parts = [self.clause_to_bdd(c) for c in cnf.clauses]
        if not balanced:
            return reduce(self.bdd_and, parts, TRUE)
        while len(parts) > 1:
            parts = [
                self.bdd_and(parts[i], parts[i + 1]) if i + 1 < len(parts) else parts[i]
                for i in range(0, len(parts), 2)
            ]
        return parts[0] if parts else TRUE

    def zdd_to_bdd(self, s: ClauseSetZdd) -> int:
        """BDD of the models of a clause-set ZDD, memoised per ZDD node."""
        z = s.manager
        if z.order != self.order:
            raise ValueError("ZDD and BDD use different variable orders")
        memo = {ZERO: TRUE, ONE: FALSE}

        def conv(h: int) -> int:
            r = memo.get(h)
            if r is None:
                lvl = z.label[h] >> 1
                n1, n2, n3 = z.cofactors(h, lvl)
                b3 = conv(n3)
                # v true satisfies the +v clauses and leaves the -v remainders
                r = self.mk(lvl, self.bdd_and(conv(n2), b3), self.bdd_and(conv(n1), b3))
                memo[h] = r
            return r

        return conv(s.root)

    def satcount(self, f: int, nvars: int) -> int:
        """Satisfying assignments of ``f`` over the first ``nvars`` levels."""
        memo = {FALSE: 0, TRUE: 1}
        level = self.level

        def lvl(h: int) -> int:
            return nvars if h < 2 else level[h]

        def count(h: int) -> int:
            c = memo.get(h)
            if c is None:
                if level[h] >= nvars:
                    raise ValueError(f"BDD depends on level {level[h]} >= {nvars}")
                hi, lo = self.hi[h], self.lo[h]
                c = (count(hi) << (lvl(hi) - level[h] - 1)) + (
                    count(lo) << (lvl(lo) - level[h] - 1)
                )
                memo[h] = c
            return c

        total = count(f) << lvl(f)
        if total > MAX_COUNT:
            raise CountOverflowError(f"model count exceeds {MAX_COUNT}")
        return total

    def any_model(self, f: int) -> dict[int, bool] | None:
        """A partial assignment along some path to TRUE, or None for FALSE."""
        if f == FALSE:
            return None
        model = {}
        while f != TRUE:
            v = self.order.variable_at(self.level[f])
            if self.hi[f] != FALSE:
                model[v], f = True, self.hi[f]
            else:
                model[v], f = False, self.lo[f]
        return model

    def evaluate(self, f: int, assignment: dict[int, bool]) -> bool:
        """Value of ``f``; variables missing from ``assignment`` raise KeyError."""
        while f >= 2:
            v = self.order.variable_at(self.level[f])
            f = self.hi[f] if assignment[v] else self.lo[f]
        return f == TRUE
