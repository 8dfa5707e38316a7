"""DIMACS CNF reading/writing and the pigeonhole generator."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

logger = logging.getLogger(__name__)


class DimacsError(ValueError):
    """Malformed DIMACS input; ``kind`` names the problem, ``line`` is 1-based."""

    def __init__(self, kind: str, line: int, detail: str = ""):
        msg = f"line {line}: {kind}" + (f" ({detail})" if detail else "")
        super().__init__(msg)
        self.kind = kind
        self.line = line


@dataclass
class CnfInstance:
    """Variable count plus clauses as tuples of signed ints (file order kept)."""

    nvars: int
    clauses: list[tuple[int, ...]]
    tautologies_dropped: int = field(default=0, compare=False)

    def __post_init__(self):
        for c in self.clauses:
            for lit in c:
                if lit == 0 or abs(lit) > self.nvars:
                    raise ValueError(f"literal {lit} outside 1..{self.nvars}")

    def clause_sets(self) -> set[frozenset[int]]:
        return {frozenset(c) for c in self.clauses}

    def variable_order(self) -> list[int]:
        """Variables in order of first occurrence, unused ones omitted."""
        seen: dict[int, None] = {}
        for c in self.clauses:
            for lit in c:
                seen.setdefault(abs(lit))
        return list(seen)

    def literal_count(self) -> int:
        return sum(len(c) for c in self.clauses)


def _header(fields: list[str], lineno: int) -> tuple[int, int]:
    if len(fields) != 4 or fields[0] != "p" or fields[1] != "cnf":
        raise DimacsError("malformed header", lineno, " ".join(fields))
    try:
        nvars, ncls = int(fields[2]), int(fields[3])
    except ValueError:
        raise DimacsError("malformed header", lineno, " ".join(fields)) from None
    if nvars < 0 or ncls < 0:
        raise DimacsError("malformed header", lineno, "negative count")
    return nvars, ncls


def parse(text: str | bytes) -> CnfInstance:
    """Parse DIMACS CNF text.

    Repeated literals inside a clause are merged and tautological clauses are
    dropped (counted in ``tautologies_dropped``).  An empty clause is kept.
    """
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    nvars = declared = None
    clauses: list[tuple[int, ...]] = []
    current: dict[int, None] = {}
    open_line = 0
    dropped = 0
    lineno = 0
    for lineno, line in enumerate(text.splitlines(), start=1):
        fields = line.split()
        if not fields or fields[0].startswith("c"):
            continue
        if fields[0] == "%":
            break
        if fields[0].startswith("p"):
            if nvars is not None:
                raise DimacsError("malformed header", lineno, "duplicate header")
            nvars, declared = _header(fields, lineno)
            continue
        if nvars is None:
            raise DimacsError("missing header", lineno)
        for tok in fields:
            try:
                lit = int(tok)
            except ValueError:
                raise DimacsError("non-integer token", lineno, repr(tok)) from None
            if lit == 0:
                if any(-l in current for l in current):
                    dropped += 1
                    logger.warning("line %d: dropping tautological clause", lineno)
                else:
                    clauses.append(tuple(current))
                current = {}
                continue
            if abs(lit) > nvars:
                raise DimacsError("literal out of declared range", lineno, str(lit))
            if not current:
                open_line = lineno
            current[lit] = None
    if nvars is None:
        raise DimacsError("missing header", lineno)
    if current:
        raise DimacsError("unterminated clause", open_line)
    if declared != len(clauses) + dropped:
        logger.info("header declares %d clauses, found %d", declared, len(clauses) + dropped)
    return CnfInstance(nvars, clauses, dropped)


def write(cnf: CnfInstance) -> str:
    lines = [f"p cnf {cnf.nvars} {len(cnf.clauses)}"]
    lines += [" ".join(map(str, (*c, 0))) for c in cnf.clauses]
    return "\n".join(lines) + "\n"


def gen_pigeonhole(n: int) -> CnfInstance:
    """``n + 1`` pigeons in ``n`` holes; pigeon ``i``, hole ``j`` is ``(i-1)*n + j``."""
    if n < 1:
        raise ValueError("pigeonhole needs at least one hole")

    def p(i: int, j: int) -> int:
        return (i - 1) * n + j

    clauses = [tuple(p(i, j) for j in range(1, n + 1)) for i in range(1, n + 2)]
    for j in range(1, n + 1):
        for i in range(1, n + 2):
            for k in range(i + 1, n + 2):
                clauses.append((-p(i, j), -p(k, j)))
    return CnfInstance(n * (n + 1), clauses)
