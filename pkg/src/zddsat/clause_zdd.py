"""Clause sets as ZDDs and the subsumption-aware operators on them.

Every binary operator recurses on the smaller top variable of its operands.
An operand whose top variable is larger acts as a node with empty ``+v`` and
``-v`` branches and itself as the don't-care branch, so only the same-variable
case needs a rule of its own.

Operator summary (``A``, ``B`` clause sets):

* :func:`union`            clauses of both, with absorption at the sinks
* :func:`subdiff`          clauses of ``A`` not subsumed by a clause of ``B``
* :func:`subsumption_free` minimal clauses of ``A``
* :func:`union_subsuming`  union that also drops cross-subsumed clauses
* :func:`distribute`       pairwise clause unions (logical OR of two CNFs)
* :func:`extract`          split on one variable
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .dd_store import ONE, ZERO, LiteralOrder, ZddManager

Clause = Sequence[int]

MAX_COUNT = (1 << 64) - 1


class CountOverflowError(OverflowError):
    """A clause or model count does not fit in 64 unsigned bits."""


class OrderMismatchError(ValueError):
    """Operands belong to different managers."""


@dataclass(frozen=True)
class ClauseSetZdd:
    manager: ZddManager
    root: int

    @property
    def order(self) -> LiteralOrder:
        return self.manager.order

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, ClauseSetZdd)
            and other.manager is self.manager
            and other.root == self.root
        )

    def __hash__(self) -> int:
        return hash((id(self.manager), self.root))

    def __repr__(self) -> str:
        return f"ClauseSetZdd(root={self.root}, nodes={self.manager.node_count(self.root)})"


def _same(a: ClauseSetZdd, b: ClauseSetZdd) -> ZddManager:
    if a.manager is not b.manager:
        raise OrderMismatchError("operands come from different ZDD managers")
    return a.manager


# -- construction and inspection -------------------------------------------


def normalize_clause(clause: Iterable[int]) -> tuple[int, ...]:
    """Drop duplicate literals; reject tautologies and the literal 0."""
    seen: dict[int, None] = {}
    for lit in clause:
        if lit == 0:
            raise ValueError("0 is not a literal")
        if -lit in seen:
            raise ValueError(f"tautological clause contains {abs(lit)} and {-abs(lit)}")
        seen[lit] = None
    return tuple(seen)


def build_from_clauses(clauses: Iterable[Iterable[int]], manager: ZddManager) -> ClauseSetZdd:
    """ZDD holding exactly ``clauses`` (duplicates collapse, nothing else)."""
    order = manager.order
    ranked = set()
    for clause in clauses:
        lits = normalize_clause(clause)
        for lit in lits:
            if abs(lit) not in order:
                raise ValueError(f"literal {lit} outside the literal order")
        ranked.add(tuple(sorted(order.rank(lit) for lit in lits)))
    rows = sorted(ranked)
    mk = manager.mk

    def build(rows: list[tuple[int, ...]], pos: int) -> int:
        # all rows share their first ``pos`` ranks; a row of length ``pos``
        # (the empty remainder) sorts first
        if not rows:
            return ZERO
        has_empty = len(rows[0]) == pos
        start = 1 if has_empty else 0
        if start == len(rows):
            return ONE
        r = rows[start][pos]
        k = start
        while k < len(rows) and rows[k][pos] == r:
            k += 1
        hi = build(rows[start:k], pos + 1)
        rest = rows[k:]
        if has_empty:
            rest.insert(0, rows[0])
        return mk(r, hi, build(rest, pos))

    return ClauseSetZdd(manager, build(rows, 0))


def empty_set(manager: ZddManager) -> ClauseSetZdd:
    return ClauseSetZdd(manager, ZERO)


def _paths(m: ZddManager, h: int) -> list[tuple[int, ...]]:
    out: list[tuple[int, ...]] = []
    prefix: list[int] = []

    def walk(h: int) -> None:
        while h >= 2:
            prefix.append(m.label[h])
            walk(m.then[h])
            prefix.pop()
            h = m.els[h]
        if h == ONE:
            out.append(tuple(prefix))

    walk(h)
    return out


def enumerate_clauses(s: ClauseSetZdd) -> list[frozenset[int]]:
    """All clauses, sorted by length and then by literal rank."""
    m = s.manager
    paths = sorted(_paths(m, s.root), key=lambda p: (len(p), p))
    lit = m.order.literal
    return [frozenset(lit(r) for r in p) for p in paths]


def clause_count(s: ClauseSetZdd) -> int:
    """Number of clauses, by memoised path counting."""
    return _count(s.manager, s.root)


def _count(m: ZddManager, h: int) -> int:
    memo = m.count_memo
    c = memo.get(h)
    if c is None:
        c = _count(m, m.then[h]) + _count(m, m.els[h])
        if c > MAX_COUNT:
            raise CountOverflowError(f"clause count exceeds {MAX_COUNT}")
        memo[h] = c
    return c


def literal_count(s: ClauseSetZdd) -> int:
    """Total number of literal occurrences over all clauses."""
    m = s.manager
    memo: dict[int, int] = {ZERO: 0, ONE: 0}

    def lits(h: int) -> int:
        v = memo.get(h)
        if v is None:
            t = m.then[h]
            v = lits(t) + _count(m, t) + lits(m.els[h])
            memo[h] = v
        return v

    return lits(s.root)


def has_empty_clause(s: ClauseSetZdd) -> bool:
    m, h = s.manager, s.root
    while h >= 2:
        h = m.els[h]
    return h == ONE


def support(s: ClauseSetZdd) -> set[int]:
    m = s.manager
    return {m.order.variable_at(m.label[h] >> 1) for h in m.reachable(s.root)}


# -- recursive kernels on raw handles ---------------------------------------


def _union(m: ZddManager, a: int, b: int) -> int:
    if a == ZERO:
        return b
    if b == ZERO or a == b:
        return a
    if a == ONE or b == ONE:
        return ONE
    if a > b:
        a, b = b, a
    cache = m.c_union
    r = cache.get((a, b))
    if r is not None:
        return r
    lvl = min(m.label[a], m.label[b]) >> 1
    a1, a2, a3 = m.cofactors(a, lvl)
    b1, b2, b3 = m.cofactors(b, lvl)
    r = m.mk_combined(lvl, _union(m, a1, b1), _union(m, a2, b2), _union(m, a3, b3))
    cache[(a, b)] = r
    return r


def _subdiff(m: ZddManager, a: int, b: int) -> int:
    # every clause subsumes itself, so a == b leaves nothing
    if a == ZERO or b == ONE or a == b:
        return ZERO
    if b == ZERO:
        return a
    if a == ONE:
        # only an empty clause in b subsumes the empty clause
        while b >= 2:
            b = m.els[b]
        return ZERO if b == ONE else ONE
    cache = m.c_subdiff
    r = cache.get((a, b))
    if r is not None:
        return r
    label = m.label
    la = label[a] >> 1
    b0 = b
    # only b's clauses without its top variable can subsume anything in a
    while label[b] >> 1 < la:
        b = m.cofactors(b, label[b] >> 1)[2]
        if b < 2:
            r = ZERO if b == ONE else a
            cache[(a, b0)] = r
            return r
    if b != b0:
        r = _subdiff(m, a, b)
    elif label[b] >> 1 > la:
        a1, a2, a3 = m.cofactors(a, la)
        r = m.mk_combined(
            la,
            _subdiff(m, a1, b) if a1 else ZERO,
            _subdiff(m, a2, b) if a2 else ZERO,
            _subdiff(m, a3, b),
        )
    else:
        a1, a2, a3 = m.cofactors(a, la)
        b1, b2, b3 = m.cofactors(b, la)
        if a1 and b1:
            a1 = _subdiff(m, a1, b1)
        if a1 and b3:
            a1 = _subdiff(m, a1, b3)
        if a2 and b2:
            a2 = _subdiff(m, a2, b2)
        if a2 and b3:
            a2 = _subdiff(m, a2, b3)
        r = m.mk_combined(la, a1, a2, _subdiff(m, a3, b3))
    cache[(a, b0)] = r
    return r


def _sf(m: ZddManager, a: int) -> int:
    if a < 2:
        return a
    cache = m.c_sf
    r = cache.get(a)
    if r is not None:
        return r
    lvl = m.label[a] >> 1
    a1, a2, a3 = m.cofactors(a, lvl)
    s3 = _sf(m, a3)
    r = m.mk_combined(lvl, _subdiff(m, _sf(m, a1), s3), _subdiff(m, _sf(m, a2), s3), s3)
    cache[a] = r
    return r


def _union_s(m: ZddManager, a: int, b: int) -> int:
    if a == ZERO:
        return b
    if b == ZERO:
        return a
    if a == ONE or b == ONE:
        return ONE
    if a > b:
        a, b = b, a
    cache = m.c_union_s
    r = cache.get((a, b))
    if r is not None:
        return r
    lvl = min(m.label[a], m.label[b]) >> 1
    a1, a2, a3 = m.cofactors(a, lvl)
    b1, b2, b3 = m.cofactors(b, lvl)
    d = _union_s(m, a3, b3)
    r = m.mk_combined(
        lvl,
        _subdiff(m, _union_s(m, a1, b1), d),
        _subdiff(m, _union_s(m, a2, b2), d),
        d,
    )
    cache[(a, b)] = r
    return r


def _distribute(m: ZddManager, a: int, b: int) -> int:
    if a == ZERO or b == ZERO:
        return ZERO
    if a == ONE:
        return b
    if b == ONE:
        return a
    if a > b:
        a, b = b, a
    cache = m.c_distribute
    r = cache.get((a, b))
    if r is not None:
        return r
    lvl = min(m.label[a], m.label[b]) >> 1
    a1, a2, a3 = m.cofactors(a, lvl)
    b1, b2, b3 = m.cofactors(b, lvl)
    d = _distribute(m, a3, b3)
    # +v with -v would be a tautology: those pairs are never formed
    pos = _union_s(
        m,
        _union_s(m, _distribute(m, a1, b1), _distribute(m, a1, b3)),
        _distribute(m, a3, b1),
    )
    neg = _union_s(
        m,
        _union_s(m, _distribute(m, a2, b2), _distribute(m, a2, b3)),
        _distribute(m, a3, b2),
    )
    r = m.mk_combined(lvl, _subdiff(m, pos, d), _subdiff(m, neg, d), d)
    cache[(a, b)] = r
    return r


def _extract(m: ZddManager, a: int, lvl: int) -> tuple[int, int, int]:
    top = m.label[a] >> 1
    if top > lvl:
        return ZERO, ZERO, a
    if top == lvl:
        return m.cofactors(a, lvl)
    cache = m.c_extract
    r = cache.get((a, lvl))
    if r is not None:
        return r
    parts = [_extract(m, c, lvl) for c in m.cofactors(a, top)]
    r = tuple(m.mk_combined(top, *(p[i] for p in parts)) for i in range(3))
    cache[(a, lvl)] = r
    return r


# -- public operators --------------------------------------------------------


def union(a: ClauseSetZdd, b: ClauseSetZdd) -> ClauseSetZdd:
    m = _same(a, b)
    return ClauseSetZdd(m, _union(m, a.root, b.root))


def subdiff(a: ClauseSetZdd, b: ClauseSetZdd) -> ClauseSetZdd:
    m = _same(a, b)
    return ClauseSetZdd(m, _subdiff(m, a.root, b.root))


def subsumption_free(a: ClauseSetZdd) -> ClauseSetZdd:
    return ClauseSetZdd(a.manager, _sf(a.manager, a.root))


def union_subsuming(a: ClauseSetZdd, b: ClauseSetZdd) -> ClauseSetZdd:
    m = _same(a, b)
    return ClauseSetZdd(m, _union_s(m, a.root, b.root))


def distribute(a: ClauseSetZdd, b: ClauseSetZdd) -> ClauseSetZdd:
    m = _same(a, b)
    return ClauseSetZdd(m, _distribute(m, a.root, b.root))


def extract(c: ClauseSetZdd, var: int) -> tuple[ClauseSetZdd, ClauseSetZdd, ClauseSetZdd]:
    """``(clauses with +var minus it, clauses with -var minus it, the rest)``."""
    m = c.manager
    p, n, r = _extract(m, c.root, m.order.level(var))
    return ClauseSetZdd(m, p), ClauseSetZdd(m, n), ClauseSetZdd(m, r)
