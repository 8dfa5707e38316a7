"""Davis-Putnam elimination on clause-set ZDDs, plus the BDD route."""

from __future__ import annotations

import enum
import logging
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from . import clause_zdd as cz
from .bdd import FALSE, BddManager
from .clause_zdd import ClauseSetZdd
from .dd_store import ZERO, BudgetExceeded, LiteralOrder, ZddManager
from .dimacs import CnfInstance

logger = logging.getLogger(__name__)

STRATEGIES = ("original", "node_bound", "clause_bound")
METHODS = ("dp", "bdd-direct", "bdd-zdd")


class Verdict(enum.Enum):
    SAT = "SAT"
    UNSAT = "UNSAT"


@dataclass(frozen=True)
class Strategy:
    kind: str = "node_bound"
    bound: int = 0

    def __post_init__(self):
        if self.kind not in STRATEGIES:
            raise ValueError(f"unknown strategy {self.kind!r}; pick one of {STRATEGIES}")
        if self.bound < 0:
            raise ValueError("bound must be >= 0")


@dataclass(frozen=True)
class Step:
    """One speculative or forced elimination of ``variable``."""

    variable: int
    accepted: bool
    nodes_before: int
    nodes_after: int
    clauses_before: int
    clauses_after: int
    # accepted only because no candidate stayed within the bound
    fallback: bool = False


@dataclass
class SolveReport:
    verdict: Verdict
    method: str = "dp"
    strategy: Strategy | None = None
    model: dict[int, bool] | None = None
    steps: list[Step] = field(default_factory=list)
    initial_nodes: int = 0
    initial_literals: int = 0
    compression_ratio_initial: Fraction = Fraction(0)
    elapsed: float = 0.0

    @property
    def eliminated(self) -> list[int]:
        return [s.variable for s in self.steps if s.accepted]


def _deadline(max_seconds: float | None) -> float | None:
    if max_seconds is None:
        return None
    if max_seconds <= 0:
        raise BudgetExceeded("time budget exceeded")
    return time.perf_counter() + max_seconds


def eliminate_variable(c: ClauseSetZdd, var: int) -> ClauseSetZdd:
    """All resolvents on ``var`` joined with the clauses not mentioning it."""
    plus, minus, rest = cz.extract(c, var)
    return cz.union_subsuming(rest, cz.distribute(plus, minus))


def _size(s: ClauseSetZdd, kind: str) -> int:
    if kind == "clause_bound":
        return cz.clause_count(s)
    return s.manager.node_count(s.root)


def select_and_eliminate(
    c: ClauseSetZdd,
    remaining: Sequence[int],
    strategy: Strategy,
    steps: list[Step] | None = None,
) -> tuple[int, ClauseSetZdd, bool]:
    """Pick the next variable, eliminate it, say whether it met the bound.

    Bounded strategies take the first candidate whose size stays within
    ``size(c) + bound``.  If none does, the candidate with the smallest
    increase wins, earliest in ``remaining`` on ties.
    """
    if not remaining:
        raise ValueError("no variables left to eliminate")
    m = c.manager
    nodes_before = m.node_count(c.root)
    clauses_before = cz.clause_count(c)

    def record(v: int, result: ClauseSetZdd, accepted: bool, fallback: bool = False):
        if steps is not None:
            steps.append(
                Step(v, accepted, nodes_before, m.node_count(result.root),
                     clauses_before, cz.clause_count(result), fallback)
            )

    if strategy.kind == "original":
        v = remaining[0]
        result = eliminate_variable(c, v)
        record(v, result, True)
        return v, result, True

    base = nodes_before if strategy.kind == "node_bound" else clauses_before
    best = None
    for v in remaining:
        cand = eliminate_variable(c, v)
        size = _size(cand, strategy.kind)
        if size <= base + strategy.bound:
            record(v, cand, True)
            return v, cand, True
        record(v, cand, False)
        if best is None or size < best[0]:
            best = (size, v, cand)
    _, v, cand = best
    record(v, cand, True, fallback=True)
    return v, cand, False


def compression_ratio(s: ClauseSetZdd) -> Fraction:
    lits = cz.literal_count(s)
    return Fraction(s.manager.node_count(s.root), lits) if lits else Fraction(0)


def dp_solve(
    cnf: CnfInstance,
    strategy: Strategy = Strategy(),
    *,
    max_nodes: int | None = None,
    max_seconds: float | None = None,
    order: LiteralOrder | None = None,
) -> SolveReport:
    """Decide ``cnf`` by eliminating variables until a sink is reached.

    Raises :class:`BudgetExceeded` when a budget runs out; never guesses.
    """
    start = time.perf_counter()
    deadline = _deadline(max_seconds)
    order = order or LiteralOrder(cnf.nvars)
    m = ZddManager(order, max_nodes=max_nodes, deadline=deadline)
    report = SolveReport(Verdict.UNSAT, method="dp", strategy=strategy)

    c = cz.build_from_clauses(cnf.clauses, m)
    report.initial_nodes = m.node_count(c.root)
    report.initial_literals = cz.literal_count(c)
    report.compression_ratio_initial = compression_ratio(c)
    if any(len(cl) == 0 for cl in cnf.clauses):
        report.elapsed = time.perf_counter() - start
        return report

    # elimination keeps the set subsumption-free only if it starts that way
    c = cz.subsumption_free(c)
    first_seen = cnf.variable_order()
    while True:
        if cz.has_empty_clause(c):
            report.verdict = Verdict.UNSAT
            break
        if c.root == ZERO:
            report.verdict = Verdict.SAT
            break
        live = cz.support(c)
        remaining = [v for v in first_seen if v in live]
        v, c, within = select_and_eliminate(c, remaining, strategy, report.steps)
        logger.debug("eliminated %d (within bound: %s), %d nodes", v, within,
                     m.node_count(c.root))
        m.check_budget()
    report.elapsed = time.perf_counter() - start
    return report


def bdd_solve(
    cnf: CnfInstance,
    method: str = "bdd-zdd",
    *,
    max_nodes: int | None = None,
    max_seconds: float | None = None,
    order: LiteralOrder | None = None,
) -> SolveReport:
    """Build the BDD of all models, either clause by clause or via the ZDD."""
    if method not in ("bdd-direct", "bdd-zdd"):
        raise ValueError(f"unknown BDD method {method!r}")
    start = time.perf_counter()
    deadline = _deadline(max_seconds)
    order = order or LiteralOrder(cnf.nvars)
    zm = ZddManager(order, max_nodes=max_nodes, deadline=deadline)
    z = cz.build_from_clauses(cnf.clauses, zm)
    report = SolveReport(Verdict.UNSAT, method=method)
    report.initial_nodes = zm.node_count(z.root)
    report.initial_literals = cz.literal_count(z)
    report.compression_ratio_initial = compression_ratio(z)

    bm = BddManager(order, max_nodes=max_nodes, deadline=deadline)
    f = bm.conjoin_direct(cnf) if method == "bdd-direct" else bm.zdd_to_bdd(z)
    if f != FALSE:
        report.verdict = Verdict.SAT
        report.model = bm.any_model(f)
    report.elapsed = time.perf_counter() - start
    return report


def solve(
    cnf: CnfInstance,
    method: str = "dp",
    strategy: Strategy = Strategy(),
    **budgets,
) -> SolveReport:
    if method == "dp":
        return dp_solve(cnf, strategy, **budgets)
    return bdd_solve(cnf, method, **budgets)
