"""SAT solving with clause-set ZDDs and BDDs."""

from .bdd import FALSE, TRUE, BddManager
from .clause_zdd import (
    ClauseSetZdd,
    CountOverflowError,
    build_from_clauses,
    clause_count,
    distribute,
    enumerate_clauses,
    extract,
    has_empty_clause,
    subdiff,
    subsumption_free,
    support,
    union,
    union_subsuming,
)
from .dd_store import ONE, ZERO, BudgetExceeded, LiteralOrder, ZddManager
from .dimacs import CnfInstance, DimacsError, gen_pigeonhole, parse, write
from .solver import (
    SolveReport,
    Strategy,
    Verdict,
    bdd_solve,
    dp_solve,
    eliminate_variable,
    select_and_eliminate,
    solve,
)

__version__ = "0.1.0"
