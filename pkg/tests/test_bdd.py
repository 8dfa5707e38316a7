import random

import pytest

from zddsat import FALSE, TRUE, BddManager, CnfInstance, LiteralOrder, ZddManager, build_from_clauses, gen_pigeonhole
from zddsat import oracle
from zddsat.clause_zdd import ClauseSetZdd, CountOverflowError

from conftest import random_clauses


@pytest.fixture
def bm():
    return BddManager(LiteralOrder(8))


def test_and_base_cases(bm):
    g = bm.var(3)
    assert bm.bdd_and(TRUE, g) == g
    assert bm.bdd_and(g, FALSE) == FALSE
    assert bm.bdd_and(bm.var(1), bm.clause_to_bdd([-1])) == FALSE


def test_clause_to_bdd(bm):
    assert bm.clause_to_bdd([]) == FALSE
    h = bm.clause_to_bdd([1])
    assert (bm.level[h], bm.hi[h], bm.lo[h]) == (0, TRUE, FALSE)
    assert bm.satcount(bm.clause_to_bdd([1, -2]), 2) == 3
    with pytest.raises(ValueError):
        bm.clause_to_bdd([2, -2])


def test_conjoin_direct_examples():
    bm = BddManager(LiteralOrder(1))
    assert bm.conjoin_direct(CnfInstance(1, [(1,), (-1,)])) == FALSE
    assert bm.conjoin_direct(CnfInstance(1, [])) == TRUE
    bm6 = BddManager(LiteralOrder(6))
    assert bm6.conjoin_direct(gen_pigeonhole(2)) == FALSE
    assert oracle.tt_sat(gen_pigeonhole(2)) == (False, 0)


def test_zdd_to_bdd_examples():
    order = LiteralOrder(2)
    zm, bm = ZddManager(order), BddManager(order)
    assert bm.zdd_to_bdd(ClauseSetZdd(zm, 0)) == TRUE
    assert bm.zdd_to_bdd(build_from_clauses([(1,), (-1,)], zm)) == FALSE
    assert bm.satcount(bm.zdd_to_bdd(build_from_clauses([(1, 2)], zm)), 2) == 3


def test_satcount(bm):
    assert bm.satcount(TRUE, 3) == 8
    assert bm.satcount(FALSE, 5) == 0
    assert bm.satcount(bm.clause_to_bdd([1, 2]), 2) == 3
    with pytest.raises(ValueError):
        bm.satcount(bm.var(5), 2)


def test_satcount_overflow():
    bm = BddManager(LiteralOrder(70))
    assert bm.satcount(TRUE, 63) == 1 << 63
    with pytest.raises(CountOverflowError):
        bm.satcount(TRUE, 64)


def test_any_model(bm):
    assert bm.any_model(FALSE) is None
    assert bm.any_model(TRUE) == {}
    assert bm.any_model(bm.clause_to_bdd([1])) == {1: True}


def test_balanced_fold_same_handle():
    rng = random.Random(2)
    bm = BddManager(LiteralOrder(6))
    for _ in range(50):
        cnf = CnfInstance(6, random_clauses(rng, 6, 10))
        assert bm.conjoin_direct(cnf) == bm.conjoin_direct(cnf, balanced=True)


def test_pipeline_equivalence_and_counts():
    rng = random.Random(17)
    order = LiteralOrder(8)
    zm, bm = ZddManager(order), BddManager(order)
    for _ in range(500):
        cnf = CnfInstance(8, random_clauses(rng, 8, 12, max_len=4))
        direct = bm.conjoin_direct(cnf)
        assert direct == bm.zdd_to_bdd(build_from_clauses(cnf.clauses, zm))
        sat, count = oracle.tt_sat(cnf)
        assert bm.satcount(direct, 8) == count
        model = bm.any_model(direct)
        assert (model is not None) == sat
        if model is not None:
            full = {v: model.get(v, False) for v in range(1, 9)}
            assert all(any(full[abs(l)] == (l > 0) for l in c) for c in cnf.clauses)


def test_adding_clause_never_increases_count():
    rng = random.Random(4)
    bm = BddManager(LiteralOrder(6))
    for _ in range(100):
        cl = random_clauses(rng, 6, 8)
        extra = random_clauses(rng, 6, 1) or [(1,)]
        before = bm.satcount(bm.conjoin_direct(CnfInstance(6, cl)), 6)
        after = bm.satcount(bm.conjoin_direct(CnfInstance(6, cl + extra)), 6)
        assert after <= before


def test_canonical_across_clause_orders():
    rng = random.Random(9)
    bm = BddManager(LiteralOrder(6))
    for _ in range(50):
        cl = random_clauses(rng, 6, 8)
        shuffled = cl[:]
        rng.shuffle(shuffled)
        assert bm.conjoin_direct(CnfInstance(6, cl)) == bm.conjoin_direct(CnfInstance(6, shuffled))
