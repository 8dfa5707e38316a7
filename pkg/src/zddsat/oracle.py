"""Brute-force reference implementations.

Nothing here touches the decision-diagram code.  Clauses are frozensets of
``(variable, polarity)`` pairs so that a shared bug in literal handling cannot
hide on both sides of a comparison.
"""

from __future__ import annotations

from typing import Iterable

import numpy as np

TT_MAX_VARS = 20

Lit = tuple[int, bool]
ExplicitClause = frozenset[Lit]
ExplicitClauseSet = frozenset[ExplicitClause]


def to_explicit(clauses: Iterable[Iterable[int]]) -> ExplicitClauseSet:
    return frozenset(frozenset((abs(l), l > 0) for l in c) for c in clauses)


def from_explicit(clauses: Iterable[ExplicitClause]) -> set[frozenset[int]]:
    return {frozenset(v if pos else -v for v, pos in c) for c in clauses}


def is_tautology(clause: ExplicitClause) -> bool:
    return any((v, not pos) in clause for v, pos in clause)


def ref_minimal(clauses: Iterable[ExplicitClause]) -> ExplicitClauseSet:
    """Keep the clauses that have no proper subset in the set."""
    uniq = set(clauses)
    if len(uniq) > 10_000:
        raise ValueError("ref_minimal is limited to 10^4 clauses")
    return frozenset(c for c in uniq if not any(o < c for o in uniq))


def ref_subdiff(a: Iterable[ExplicitClause], b: Iterable[ExplicitClause]) -> ExplicitClauseSet:
    b = list(b)
    return frozenset(c for c in a if not any(o <= c for o in b))


def ref_distribute(a: Iterable[ExplicitClause], b: Iterable[ExplicitClause]) -> ExplicitClauseSet:
    b = list(b)
    unions = {c1 | c2 for c1 in a for c2 in b}
    return ref_minimal(u for u in unions if not is_tautology(u))


def ref_extract(c: Iterable[ExplicitClause], var: int):
    plus = frozenset(x - {(var, True)} for x in c if (var, True) in x)
    minus = frozenset(x - {(var, False)} for x in c if (var, False) in x)
    rest = frozenset(x for x in c if (var, True) not in x and (var, False) not in x)
    return plus, minus, rest


def model_mask(clauses: Iterable[Iterable[int]], nvars: int) -> np.ndarray:
    """Boolean vector over all ``2**nvars`` assignments; bit ``i-1`` is variable ``i``."""
    if nvars > TT_MAX_VARS:
        raise ValueError(f"truth tables are limited to {TT_MAX_VARS} variables")
    idx = np.arange(1 << nvars, dtype=np.int64)
    bits = [(idx >> i) & 1 == 1 for i in range(nvars)]
    ok = np.ones(1 << nvars, dtype=bool)
    for clause in clauses:
        sat = np.zeros(1 << nvars, dtype=bool)
        for lit in clause:
            v = abs(lit)
            if v > nvars:
                raise ValueError(f"literal {lit} exceeds {nvars} variables")
            sat |= bits[v - 1] if lit > 0 else ~bits[v - 1]
        ok &= sat
    return ok


def tt_sat(cnf) -> tuple[bool, int]:
    """(satisfiable, model count) of a CNF instance by full enumeration."""
    mask = model_mask(cnf.clauses, cnf.nvars)
    n = int(mask.sum())
    return n > 0, n


def same_models(a, b, nvars: int) -> bool:
    """Whether two clause lists have identical model sets over ``nvars``."""
    return bool(np.array_equal(model_mask(a, nvars), model_mask(b, nvars)))
