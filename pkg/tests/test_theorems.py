from math import comb

import pytest
from conftest import bike_halves, corpus

from effalg.algebra import blocks, build_L1, build_powerset, coproduct, product
from effalg.cohomology import hc_dims, hh_dims
from effalg.report import NotOrthoalgebraError, PreconditionError
from effalg.theorems import (
    binomial_table,
    coproduct_check,
    default_degree,
    generalized_mv_check,
    height_vanishing_check,
    hh_eq_hc_product_L1_check,
    kunneth_cyclic_consistency,
    kunneth_hochschild_check,
    mayer_vietoris_check,
    trivial_tests_check,
)


def test_mv_firefly(ff):
    b0, b1 = blocks(ff)
    rep = mayer_vietoris_check(ff, b0.elements, b1.elements, 4)
    assert rep.passed, rep.failures
    # [REFERENCE] the sequence yields HC^1(E) = R^3
    assert rep.info["derived_dims"] == [1, 3, 2, 0, 0]
    assert all(r["exact"] for r in rep.rows) and all(r["exact"] for r in rep.info["les"])


def test_mv_self_union(ff):
    A = frozenset(range(ff.size))
    rep = mayer_vietoris_check(ff, A, A, 3)
    assert rep.passed, rep.failures


def test_mv_bike_halves():
    E, A, B, _ = bike_halves()
    rep = mayer_vietoris_check(E, A, B, 4)
    assert rep.passed, rep.failures
    # [REFERENCE] bike table
    assert rep.info["derived_dims"] == [1, 5, 8, 4, 0]
    assert rep.info["dims"]["A"] == rep.info["dims"]["B"] == [1, 4, 5, 2, 0]
    assert rep.info["dims"]["AnB"] == [1, 3, 2, 0, 0]


def test_mv_bike_naive_rejected():
    E, A, B, (top, left, right, bot) = bike_halves()
    with pytest.raises(PreconditionError):
        mayer_vietoris_check(E, top.elements | bot.elements | left.elements, right.elements, 3)


def test_mv_not_a_union(ff):
    b0, _ = blocks(ff)
    with pytest.raises(PreconditionError):
        mayer_vietoris_check(ff, b0.elements, b0.elements, 2)


@pytest.mark.parametrize("name,nmax,nblocks", [("firefly", 4, 2), ("bike", 4, 4), ("pentagon", 4, 5)])
def test_generalized_mv(name, nmax, nblocks):
    E = corpus(name)
    rep = generalized_mv_check(E, nmax, samples=2, seed=7)
    assert rep.passed, rep.failures
    assert f"over {nblocks} blocks" in rep.name
    assert rep.info["derived_dims"] == hc_dims(E, nmax).dims
    assert rep.info["witnesses"] > 0


def test_generalized_mv_needs_orthoalgebra():
    from effalg.algebra import EffectAlgebra

    chain = EffectAlgebra(["0", "h", "1"], 0, 2, [(0, 0, 0), (0, 1, 1), (1, 0, 1), (0, 2, 2), (2, 0, 2), (1, 1, 2)], [2, 1, 0])
    with pytest.raises((NotOrthoalgebraError, PreconditionError)):
        generalized_mv_check(chain, 2)
    with pytest.raises(NotOrthoalgebraError):
        height_vanishing_check(chain)
    with pytest.raises(PreconditionError):
        default_degree(chain)


def test_kunneth_hochschild_examples():
    L1 = build_L1()
    rep = kunneth_hochschild_check(L1, L1, 3)
    assert rep.passed
    # [DERIVED] HH(P(2)) = binomials C(2, n)
    assert [r["product"] for r in rep.rows] == [1, 2, 1, 0]
    assert kunneth_hochschild_check(build_powerset(2), build_powerset(1), 4).passed
    assert kunneth_hochschild_check(corpus("firefly"), L1, 3).passed


@pytest.mark.parametrize("name,expected", [("L1", [1, 1, 0]), ("P2", [1, 2, 1, 0]), ("P3", None), ("firefly", None)])
def test_lemma_map(name, expected):
    A = corpus(name)
    n = len(expected) - 1 if expected else 3
    rep = hh_eq_hc_product_L1_check(A, n)
    assert rep.passed, rep.failures
    assert all(r["bijective"] and r["commutes"] for r in rep.rows)
    if expected:
        # [REFERENCE] HH(P(1)) = HC(P(2)); HH(P(2)) binomials
        assert [r["hh"] for r in rep.rows] == expected


@pytest.mark.parametrize("a,b", [("L1", "L1"), ("P2", "P2"), ("firefly", "L1"), ("P2", "P3")])
def test_kunneth_cyclic(a, b):
    rep = kunneth_cyclic_consistency(corpus(a), corpus(b))
    assert rep.passed, rep.failures
    assert "skipped" not in rep.info
    assert rep.info["alternating_sum"] == 0


def test_kunneth_cyclic_reproduces_binomials():
    rep = kunneth_cyclic_consistency(corpus("P2"), corpus("P2"))
    # [DERIVED] P(2) x P(2) = P(4)
    hp = rep.info["hc_product"]
    assert hp == [comb(3, n) for n in range(len(hp))]


def test_coproduct():
    P2 = build_powerset(2)
    rep = coproduct_check(P2, P2, 2)
    assert rep.passed
    # [DERIVED] [1,1,0] twice gives [1,2,0]
    assert hc_dims(coproduct(P2, P2), 2).dims == [1, 2, 0]
    assert coproduct_check(corpus("firefly"), corpus("P3"), 3).passed


def test_trivial_tests(ff):
    rep = trivial_tests_check(ff, 4)
    assert rep.passed and rep.info["les_passed"]


@pytest.mark.parametrize("name", ["L1", "P3", "firefly", "bike", "pentagon", "bike_half_a"])
def test_height_vanishing(name):
    rep = height_vanishing_check(corpus(name))
    assert rep.passed, rep.failures


def test_binomial_table():
    assert binomial_table(4, 5) == [1, 4, 6, 4, 1, 0]


def test_product_hh():
    X = product(corpus("P2"), corpus("L1"))
    assert hh_dims(X, 3).dims == [1, 3, 3, 1]
