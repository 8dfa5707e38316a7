"""Hash-consed node arena for clause-set ZDDs.

Nodes are labelled by literal *ranks*.  With the default order the literal
``+v`` has rank ``2*(v-1)`` and ``-v`` has rank ``2*(v-1)+1``, so a variable's
two literals are adjacent and the positive one comes first.  The variable a
rank belongs to is therefore ``rank >> 1`` (its *level*).

Handles are plain ints: ``ZERO`` (the empty clause set) and ``ONE`` (the set
holding only the empty clause) are reserved, every other handle indexes the
arena.  Nodes are never freed.
"""

from __future__ import annotations

import threading
import time
from typing import Iterable, Iterator, Sequence

ZERO = 0
ONE = 1

#: rank given to both sinks; larger than any literal rank
SINK_RANK = 1 << 62


class OrderingError(RuntimeError):
    """A node was requested whose children are not below its label."""


class BudgetExceeded(Exception):
    """Raised when a node or time budget runs out mid-computation."""

    def __init__(self, reason: str):
        super().__init__(reason)
        self.reason = reason


CACHE_TAGS = ("union", "subdiff", "sf", "union_s", "distribute", "extract")


class _NullCache(dict):
    """Stands in for a memo table when caching is switched off."""

    def __setitem__(self, key, value) -> None:
        pass


class LiteralOrder:
    """Total order on literals, ``[v1, -v1, v2, -v2, ...]``.

    ``variables`` lists the SAT variables from first to last; by default they
    are ``1..nvars`` in ascending order.
    """

    def __init__(self, nvars: int | None = None, variables: Sequence[int] | None = None):
        if variables is None:
            if nvars is None or nvars < 0:
                raise ValueError("need nvars >= 0 or an explicit variable list")
            variables = range(1, nvars + 1)
        variables = tuple(variables)
        if any(v < 1 for v in variables) or len(set(variables)) != len(variables):
            raise ValueError("variables must be distinct positive integers")
        self.variables = variables
        self._level = {v: i for i, v in enumerate(variables)}

    @property
    def nvars(self) -> int:
        return len(self.variables)

    def __contains__(self, var: int) -> bool:
        return var in self._level

    def __eq__(self, other: object) -> bool:
        return isinstance(other, LiteralOrder) and self.variables == other.variables

    def __hash__(self) -> int:
        return hash(self.variables)

    def __repr__(self) -> str:
        return f"LiteralOrder(variables={list(self.variables)!r})"

    def level(self, var: int) -> int:
        try:
            return self._level[var]
        except KeyError:
            raise ValueError(f"variable {var} is not in the literal order") from None

    def rank(self, lit: int) -> int:
        if lit == 0:
            raise ValueError("0 is not a literal")
        return 2 * self.level(abs(lit)) + (lit < 0)

    def literal(self, rank: int) -> int:
        var = self.variables[rank >> 1]
        return -var if rank & 1 else var

    def variable_at(self, level: int) -> int:
        return self.variables[level]


class ZddManager:
    """Arena + unique table + operation caches for one literal order.

    ``cache_limit`` bounds the total number of memo entries; when exceeded the
    memo tables are dropped wholesale.  The unique table is never pruned.
    ``max_nodes`` and ``deadline`` (a ``time.perf_counter()`` value) are checked
    every few hundred node requests and raise :class:`BudgetExceeded`.
    """

    _CHECK_EVERY = 512

    def __init__(
        self,
        order: LiteralOrder,
        *,
        cache: bool = True,
        cache_limit: int = 20_000_000,
        max_nodes: int | None = None,
        deadline: float | None = None,
    ):
        self.order = order
        self.cache_limit = cache_limit
        self.max_nodes = max_nodes
        self.deadline = deadline
        self.label: list[int] = [SINK_RANK, SINK_RANK]
        self.then: list[int] = [-1, -1]
        self.els: list[int] = [-1, -1]
        self._unique: dict[tuple[int, int, int], int] = {}
        self._lock = threading.Lock()
        self._ticks = self._CHECK_EVERY
        self.cache_enabled = cache
        # per-handle measures; valid forever because nodes are immutable
        self.count_memo: dict[int, int] = {ZERO: 0, ONE: 1}

    def __len__(self) -> int:
        """Number of internal nodes ever created."""
        return len(self.label) - 2

    # -- memo tables -------------------------------------------------------

    @property
    def cache_enabled(self) -> bool:
        return self._cache_enabled

    @cache_enabled.setter
    def cache_enabled(self, on: bool) -> None:
        self._cache_enabled = on
        for tag in CACHE_TAGS:
            setattr(self, "c_" + tag, {} if on else _NullCache())

    def cache(self, tag: str) -> dict:
        """Memo table of operation ``tag`` (see ``CACHE_TAGS``)."""
        return getattr(self, "c_" + tag)

    def clear_caches(self) -> None:
        for tag in CACHE_TAGS:
            self.cache(tag).clear()

    def cache_size(self) -> int:
        return sum(len(self.cache(tag)) for tag in CACHE_TAGS)

    def _check_budget(self) -> None:
        self._ticks = self._CHECK_EVERY
        if self.max_nodes is not None and len(self) > self.max_nodes:
            raise BudgetExceeded(f"node budget of {self.max_nodes} exceeded")
        if self.deadline is not None and time.perf_counter() > self.deadline:
            raise BudgetExceeded("time budget exceeded")
        if self.cache_size() > self.cache_limit:
            self.clear_caches()

    def check_budget(self) -> None:
        self._check_budget()

    # -- node construction -------------------------------------------------

    def mk(self, rank: int, then_child: int, else_child: int) -> int:
        """Unchecked node constructor used by the operators."""
        self._ticks -= 1
        if self._ticks <= 0:
            self._check_budget()
        if then_child == ZERO:
            return else_child
        key = (rank, then_child, else_child)
        h = self._unique.get(key)
        if h is None:
            h = len(self.label)
            self.label.append(rank)
            self.then.append(then_child)
            self.els.append(else_child)
            self._unique[key] = h
        return h

    def mk_combined(self, level: int, n1: int, n2: int, n3: int) -> int:
        """Node pair ``+v -> n1``, ``-v -> n2``, neither -> ``n3`` at ``level``."""
        neg = n3 if n2 == ZERO else self.mk(2 * level + 1, n2, n3)
        return neg if n1 == ZERO else self.mk(2 * level, n1, neg)

    def _check_order(self, rank: int, *children: int) -> None:
        for c in children:
            if not (0 <= c < len(self.label)):
                raise OrderingError(f"unknown handle {c}")
            if self.label[c] <= rank:
                raise OrderingError(
                    f"child {c} labelled {self.label[c]} is not below rank {rank}"
                )

    def make_node(self, label: int, then_child: int, else_child: int) -> int:
        """Reduced, hash-consed node for literal ``label`` (DIMACS sign)."""
        rank = self.order.rank(label)
        self._check_order(rank, then_child, else_child)
        with self._lock:
            return self.mk(rank, then_child, else_child)

    def make_combined(self, var: int, n1: int, n2: int, n3: int) -> int:
        """Reduced ZDD for ``+var -> n1``, ``-var -> n2``, otherwise ``n3``."""
        level = self.order.level(var)
        self._check_order(2 * level + 1, n1, n2, n3)
        with self._lock:
            return self.mk_combined(level, n1, n2, n3)

    # -- structure queries -------------------------------------------------

    def top_level(self, h: int) -> int:
        return self.label[h] >> 1

    def cofactors(self, h: int, level: int) -> tuple[int, int, int]:
        """Split ``h`` w.r.t. the variable at ``level`` (which must be <= top)."""
        label = self.label
        r = label[h]
        if r >> 1 != level:
            return ZERO, ZERO, h
        if r & 1:
            return ZERO, self.then[h], self.els[h]
        e = self.els[h]
        if label[e] == r + 1:
            return self.then[h], self.then[e], self.els[e]
        return self.then[h], ZERO, e

    def reachable(self, root: int) -> Iterator[int]:
        """Internal nodes reachable from ``root`` (each once, DFS preorder)."""
        if root < 2:
            return
        seen = {root}
        stack = [root]
        then, els = self.then, self.els
        while stack:
            h = stack.pop()
            yield h
            for c in (els[h], then[h]):
                if c >= 2 and c not in seen:
                    seen.add(c)
                    stack.append(c)

    def node_count(self, root: int) -> int:
        if root < 2:
            return 0
        seen = {root}
        stack = [root]
        then, els = self.then, self.els
        while stack:
            h = stack.pop()
            t, e = then[h], els[h]
            if t >= 2 and t not in seen:
                seen.add(t)
                stack.append(t)
            if e >= 2 and e not in seen:
                seen.add(e)
                stack.append(e)
        return len(seen)

    def nodes(self) -> Iterable[tuple[int, int, int, int]]:
        """Every arena node as ``(handle, rank, then, else)``."""
        for h in range(2, len(self.label)):
            yield h, self.label[h], self.then[h], self.els[h]

    def dump(self, root: int) -> str:
        """Text dump, one ``id label then_id else_id`` line per reachable node.

        Labels are DIMACS literals; sinks appear as ``0`` and ``1``.
        """
        lines = []
        for h in sorted(self.reachable(root)):
            lit = self.order.literal(self.label[h])
            lines.append(f"{h} {lit} {self.then[h]} {self.els[h]}")
        return "\n".join(lines) + ("\n" if lines else "")


def parse_dump(text: str) -> dict[int, tuple[int, int, int]]:
    """Inverse of :meth:`ZddManager.dump`: ``{id: (literal, then, else)}``."""
    out = {}
    for line in text.splitlines():
        if line.strip():
            h, lit, t, e = map(int, line.split())
            out[h] = (lit, t, e)
    return out
