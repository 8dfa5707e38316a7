"""Exit criteria, one test per criterion (``test_cN_*``).

A PASS/FAIL line per criterion is printed in the terminal summary.
"""

import contextlib
import io
import random
import time
from math import comb

import pytest

from zddsat import (
    BddManager, BudgetExceeded, CnfInstance, LiteralOrder, Strategy, Verdict, ZddManager,
    bdd_solve, build_from_clauses, clause_count, cli, distribute, dp_solve, enumerate_clauses,
    extract, gen_pigeonhole, subdiff, subsumption_free, union, union_subsuming,
)
from zddsat import dimacs, oracle
from zddsat.oracle import from_explicit, is_tautology, to_explicit

from conftest import random_clauses, random_cnf_clauses

KINDS = ("original", "node_bound", "clause_bound")
BDD_METHODS = ("bdd-direct", "bdd-zdd")
SEED = 20240601

C1_SECONDS = 60.0
C3_SECONDS = 60.0
SCALING_TIMEOUT = 120.0
SCALING_TARGET = 10


def _random_cnfs(count=1000, max_vars=8, max_clauses=15):
    rng = random.Random(SEED)
    for _ in range(count):
        nv = rng.randint(1, max_vars)
        yield CnfInstance(nv, random_cnf_clauses(rng, nv, max_clauses, width=min(3, nv)))


def test_c1_oracle_verdict_agreement():
    start = time.perf_counter()
    mismatches = []
    for i, cnf in enumerate(_random_cnfs()):
        expected = Verdict.SAT if oracle.tt_sat(cnf)[0] else Verdict.UNSAT
        got = [dp_solve(cnf, Strategy(k)).verdict for k in KINDS]
        got += [bdd_solve(cnf, m).verdict for m in BDD_METHODS]
        if any(g is not expected for g in got):
            mismatches.append((i, got, expected))
    elapsed = time.perf_counter() - start
    assert mismatches == []
    assert elapsed < C1_SECONDS, f"took {elapsed:.1f}s"


def test_c2_operator_oracle_suite():
    rng = random.Random(SEED + 2)
    nv = 6
    for _ in range(1000):
        m = ZddManager(LiteralOrder(nv))
        ca = random_clauses(rng, rng.randint(1, nv), 8)
        cb = random_clauses(rng, rng.randint(1, nv), 8)
        a, b = build_from_clauses(ca, m), build_from_clauses(cb, m)
        ea, eb = to_explicit(ca), to_explicit(cb)

        assert set(enumerate_clauses(subdiff(a, b))) == from_explicit(oracle.ref_subdiff(ea, eb))
        sfa, sfb = subsumption_free(a), subsumption_free(b)
        assert set(enumerate_clauses(sfa)) == from_explicit(oracle.ref_minimal(ea))
        var = rng.randint(1, nv)
        got = tuple(set(enumerate_clauses(p)) for p in extract(a, var))
        assert got == tuple(from_explicit(p) for p in oracle.ref_extract(ea, var))

        u = set(enumerate_clauses(union(a, b)))
        both = from_explicit(ea | eb)
        assert u <= both
        assert all(any(r <= c for r in u) for c in both)
        assert oracle.same_models(list(u), ca + cb, nv)

        esa, esb = to_explicit(enumerate_clauses(sfa)), to_explicit(enumerate_clauses(sfb))
        us = union_subsuming(sfa, sfb)
        assert set(enumerate_clauses(us)) == from_explicit(oracle.ref_minimal(esa | esb))
        d = distribute(sfa, sfb)
        dset = set(enumerate_clauses(d))
        assert dset == from_explicit(oracle.ref_distribute(esa, esb))
        mask = oracle.model_mask(ca, nv) | oracle.model_mask(cb, nv)
        assert (oracle.model_mask(list(dset), nv) == mask).all()
        for out in (u, dset, set(enumerate_clauses(us))):
            assert not any(is_tautology(c) for c in to_explicit(out))


def test_c3_pigeonhole_all_methods():
    n = 6
    start = time.perf_counter()
    for k in range(1, n + 1):
        cnf = gen_pigeonhole(k)
        for kind in KINDS:
            assert dp_solve(cnf, Strategy(kind)).verdict is Verdict.UNSAT
        for method in BDD_METHODS:
            assert bdd_solve(cnf, method).verdict is Verdict.UNSAT
    elapsed = time.perf_counter() - start
    assert elapsed < C3_SECONDS, f"took {elapsed:.1f}s"


def _max_solved(kind, start_n, cap):
    """Largest n with ph(start_n..n) all solved under the per-instance timeout."""
    best = start_n - 1
    for n in range(start_n, cap + 1):
        try:
            r = cli.run_deep(dp_solve, gen_pigeonhole(n), Strategy(kind), max_seconds=SCALING_TIMEOUT)
        except BudgetExceeded:
            break
        assert r.verdict is Verdict.UNSAT
        best = n
    return best


@pytest.mark.slow
def test_c4_strategy_ordering():
    # ph1..ph6 are covered by criterion 3; the scan starts above that
    node = _max_solved("node_bound", 7, 30)
    original = _max_solved("original", 7, node)
    clause = _max_solved("clause_bound", 7, node)
    print(f"\nmax solved at {SCALING_TIMEOUT:.0f}s: node ph{node}, original ph{original}, clause ph{clause}")
    assert node >= SCALING_TARGET
    assert node > original
    assert node > clause


@pytest.mark.slow
def test_c5_bdd_scaling_and_pipeline_equality():
    for n in range(1, SCALING_TARGET + 1):
        cnf = gen_pigeonhole(n)
        order = LiteralOrder(cnf.nvars)
        deadline = time.perf_counter() + SCALING_TIMEOUT
        zm = ZddManager(order, deadline=deadline)
        bm = BddManager(order, deadline=deadline)
        via_zdd = cli.run_deep(bm.zdd_to_bdd, build_from_clauses(cnf.clauses, zm))
        direct = cli.run_deep(bm.conjoin_direct, cnf)
        assert via_zdd == direct
        assert bm.satcount(direct, cnf.nvars) == 0


def test_c6_counting():
    bm_cache = {}
    for cnf in _random_cnfs():
        sat, count = oracle.tt_sat(cnf)
        order = LiteralOrder(cnf.nvars)
        bm = bm_cache.setdefault(cnf.nvars, BddManager(order))
        assert bm.satcount(bm.conjoin_direct(cnf), cnf.nvars) == count
        m = ZddManager(order)
        z = build_from_clauses(cnf.clauses, m)
        for s in (z, subsumption_free(z), *extract(z, 1)):
            assert clause_count(s) == len(enumerate_clauses(s))
    for n in range(1, 11):
        cnf = gen_pigeonhole(n)
        assert cnf.nvars == n * (n + 1)
        assert len(cnf.clauses) == (n + 1) + n * comb(n + 1, 2)
    big = gen_pigeonhole(10)
    assert (big.nvars, len(big.clauses)) == (110, 561)
    z = build_from_clauses(big.clauses, ZddManager(LiteralOrder(110)))
    assert clause_count(z) == 561 == len(enumerate_clauses(z))


def _cli_output(argv):
    buf = io.StringIO()
    with contextlib.redirect_stdout(buf):
        code = cli.main(argv)
    lines = [l for l in buf.getvalue().splitlines() if not l.startswith(("elapsed", "c elapsed"))]
    return code, lines


def test_c7_determinism(tmp_path):
    files = []
    for n in (1, 2, 3, 4):
        p = tmp_path / f"ph{n}.cnf"
        p.write_text(dimacs.write(gen_pigeonhole(n)))
        files.append(p)
    rng = random.Random(SEED + 7)
    for i in range(4):
        p = tmp_path / f"rand{i}.cnf"
        p.write_text(dimacs.write(CnfInstance(8, random_cnf_clauses(rng, 8, 15))))
        files.append(p)
    configs = [["--method", "dp", "--strategy", s] for s in ("original", "node", "clause")]
    configs += [["--method", "bdd-direct"], ["--method", "bdd-zdd"]]
    for f in files:
        for cfg in configs:
            for machine in ([], ["--machine"]):
                runs = set()
                for w in (1, 4):
                    for _ in range(3):
                        code, lines = _cli_output(["solve", str(f), *cfg, *machine, "--workers", str(w)])
                        runs.add((code, tuple(lines)))
                assert len(runs) == 1, (f, cfg)


def test_c8_canonicity():
    rng = random.Random(SEED + 8)
    m = ZddManager(LiteralOrder(8))
    for _ in range(10):
        clauses = random_clauses(rng, 8, 15)
        roots = set()
        for _ in range(100):
            shuffled = [tuple(rng.sample(c, len(c))) for c in clauses]
            rng.shuffle(shuffled)
            roots.add(build_from_clauses(shuffled, m).root)
        assert len(roots) == 1
