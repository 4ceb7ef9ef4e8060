"""Acceptance suite: one test per criterion, each reporting a PASS/FAIL line.

Run on its own with ``pytest tests/test_acceptance.py`` or ``python tests/test_acceptance.py``;
the summary lines appear at the end of the pytest output.
"""

import functools
import itertools
import random
import sys
import time
from fractions import Fraction
from math import comb

import pytest
from conftest import CORPUS_ORTHO, bike_halves, corpus, extension_instances

from effalg import io
from effalg.algebra import blocks, build_L1, build_powerset, coproduct, product
from effalg.bell import bell_paper_box, chsh, is_local, pr_box, uniform_box, verify_no_signaling
from effalg.cohomology import hc_dims, hc_dims_bruteforce, hh_dims
from effalg.report import PreconditionError
from effalg.states import (
    POSITIVE,
    SIGNED,
    ExtensionProblem,
    cyclic_obstruction,
    decompose_additive,
    extend_state,
    faithful_state,
    is_classical,
    precone_lp,
    random_additive,
    separating_embedding,
    two_valued_states,
)
from effalg.testspace import count_tests, verify_cyclic_relations
from effalg.theorems import (
    coproduct_check,
    generalized_mv_check,
    height_vanishing_check,
    hh_eq_hc_product_L1_check,
    kunneth_hochschild_check,
    mayer_vietoris_check,
)

RESULTS: dict[int, str] = {}


def criterion(number, title):
    def wrap(fn):
        @functools.wraps(fn)
        def run(*args, **kwargs):
            try:
                fn(*args, **kwargs)
            except BaseException:
                RESULTS[number] = f"FAIL  {number:2d}. {title}"
                print(RESULTS[number])
                raise
            RESULTS[number] = f"PASS  {number:2d}. {title}"
            print(RESULTS[number])
        return run
    return wrap


def timed(limit):
    """Context check on wall time, in seconds."""
    class T:
        def __enter__(self):
            self.t = time.perf_counter()
            return self

        def __exit__(self, *exc):
            self.elapsed = time.perf_counter() - self.t
            if exc[0] is None:
                assert self.elapsed < limit, f"took {self.elapsed:.2f}s, limit {limit}s"
    return T()


def mv_ses_exact(rep):
    """Injective phi, im phi = ker psi and surjective psi at every degree."""
    for r in rep.rows:
        assert r["rank_phi"] == r["dim_E"], r
        assert r["rank_phi"] + r["rank_psi"] == r["dim_A+B"] and r["psi_phi_zero"], r
        assert r["rank_psi"] == r["dim_AnB"], r
    assert all(node["exact"] for node in rep.info["les"])


@criterion(1, "HC(L1) = [1,0,0,0,0]")
def test_c01_point():
    with timed(1):
        assert hc_dims(build_L1(), 4).dims == [1, 0, 0, 0, 0]


@criterion(2, "HC^n(P(m)) = C(m-1,n), HH^n(P(m)) = C(m,n) for m <= 5, n <= 6")
def test_c02_binomials():
    with timed(60):
        for m in range(1, 6):
            P = build_powerset(m)
            assert hc_dims(P, 6).dims == [comb(m - 1, n) for n in range(7)]
            assert hh_dims(P, 6).dims == [comb(m, n) for n in range(7)]


@criterion(3, "firefly HC = [1,3,2,0,0] directly, by binary MV and by generalized MV")
def test_c03_firefly():
    E = corpus("firefly")
    b0, b1 = blocks(E)
    direct = hc_dims(E, 4).dims
    mv = mayer_vietoris_check(E, b0.elements, b1.elements, 4)
    gmv = generalized_mv_check(E, 4)
    assert mv.passed and gmv.passed
    assert direct == mv.info["derived_dims"] == gmv.info["derived_dims"] == [1, 3, 2, 0, 0]


@criterion(4, "bike HC = [1,5,8,4,0], halves [1,4,5,2,0]; naive split rejected")
def test_c04_bike():
    E, A, B, (top, left, right, bot) = bike_halves()
    mv = mayer_vietoris_check(E, A, B, 4)
    gmv = generalized_mv_check(E, 4)
    assert mv.passed and gmv.passed
    assert len(blocks(E)) == 4
    assert hc_dims(E, 4).dims == mv.info["derived_dims"] == gmv.info["derived_dims"] == [1, 5, 8, 4, 0]
    assert mv.info["dims"]["A"] == mv.info["dims"]["B"] == [1, 4, 5, 2, 0]
    for name in ("bike_half_a", "bike_half_b"):
        H = corpus(name)
        assert hc_dims(H, 4).dims == generalized_mv_check(H, 4).info["derived_dims"] == [1, 4, 5, 2, 0]
    with pytest.raises(PreconditionError):
        mayer_vietoris_check(E, top.elements | left.elements | bot.elements, right.elements, 3)


@criterion(5, "Height Theorem: HC^n = 0 for h <= n <= h+2 on every corpus orthoalgebra")
def test_c05_height():
    for name in CORPUS_ORTHO + ("bell_EB",):
        rep = height_vanishing_check(corpus(name))
        assert rep.passed, (name, rep.failures)


@criterion(6, "HC(A+B) = HC(A) + HC(B) in degrees 1..3 for all corpus pairs")
def test_c06_coproduct():
    checked = 0
    for a, b in itertools.combinations_with_replacement(io.CORPUS, 2):
        A, B = corpus(a), corpus(b)
        C = coproduct(A, B)
        if max(count_tests(C, n) for n in range(5)) > 10 ** 5:
            continue
        rep = coproduct_check(A, B, 3)
        assert rep.passed, (a, b, rep.failures)
        checked += 1
    assert checked == comb(len(io.CORPUS) + 1, 2)


KUNNETH_BUDGET = 10_000


@criterion(8, "Hochschild Kunneth identity for all corpus pairs within the test cap")
def test_c08_kunneth():
    checked = 0
    for a, b in itertools.combinations_with_replacement(io.CORPUS, 2):
        A, B = corpus(a), corpus(b)
        P = product(A, B)
        n = 3
        while n > 0 and count_tests(P, n + 1) > KUNNETH_BUDGET:
            n -= 1
        if n == 0:
            continue
        rep = kunneth_hochschild_check(A, B, n)
        assert rep.passed, (a, b, rep.failures)
        checked += 1
    assert checked >= 50


@criterion(7, "HH(A) = HC(A x L1) with the signed map a chain isomorphism")
def test_c07_lemma():
    for name in ("L1", "P2", "P3", "firefly"):
        A = corpus(name)
        rep = hh_eq_hc_product_L1_check(A, 4)
        assert rep.passed, (name, rep.failures)
        assert all(r["bijective"] and r["commutes"] for r in rep.rows)
        assert hh_dims(A, 4).dims == hc_dims(product(A, build_L1()), 4).dims


@criterion(9, "Mayer-Vietoris short sequences and long sequence exact, firefly and bike")
def test_c09_mv_exact():
    E = corpus("firefly")
    b0, b1 = blocks(E)
    mv_ses_exact(mayer_vietoris_check(E, b0.elements, b1.elements, 4))
    E, A, B, _ = bike_halves()
    mv_ses_exact(mayer_vietoris_check(E, A, B, 4))


@criterion(10, "generalized MV exact over 2, 4 and 5 blocks with averaging witnesses")
def test_c10_generalized_mv():
    for name, k in (("firefly", 2), ("bike", 4), ("pentagon", 5)):
        E = corpus(name)
        assert len(blocks(E)) == k
        rep = generalized_mv_check(E, 4, samples=3, seed=1)
        assert rep.passed, (name, rep.failures)
        assert all(r["exact"] for r in rep.rows)
        assert rep.info["witnesses"] > 0


@criterion(11, "cyclic-set identities up to degree 3 on every corpus algebra")
def test_c11_identities():
    for name in io.CORPUS:
        rep = verify_cyclic_relations(corpus(name), 3)
        assert rep.ok, (name, rep.lines()[:3])


@criterion(12, "positive decomposition of 50 random additive maps, both modes")
def test_c12_decomposition():
    rng = random.Random(12)
    for name in ("firefly", "P3"):
        A = corpus(name)
        beta, low = faithful_state(A)
        assert low > 0 and all(beta(x) > 0 for x in range(A.size) if x != A.zero)
        for _ in range(50):
            alpha = random_additive(A, rng)
            for mode in ("lp", "constructive"):
                d = decompose_additive(A, alpha, mode)
                assert d is not None and d.reconstructs(alpha)
                assert d.alpha1.is_positive() and d.alpha2.is_positive()
                if mode == "constructive":
                    assert all(d.beta(x) > 0 for x in range(A.size) if x != A.zero)


@criterion(13, "Bell: table no-signaling, CHSH 5/2, nonlocal; uniform local; PR 4, nonlocal")
def test_c13_bell():
    with timed(1):
        box = bell_paper_box()
        assert verify_no_signaling(box).passed
        assert chsh(box) == Fraction(5, 2)
        assert is_local(box) is None
        assert is_local(uniform_box()) is not None
        assert chsh(pr_box()) == 4 and is_local(pr_box()) is None


@criterion(14, "pentagon: obstruction vanishes, positive extension infeasible, not classical")
def test_c14_pentagon():
    E = corpus("pentagon")
    half = io.load_state(io.corpus_path("pentagon_half.json"), E)
    P, j = separating_embedding(E)
    assert j.injective
    pos = ExtensionProblem(j, half, POSITIVE)
    assert cyclic_obstruction(pos, two_valued_states(E)[0])
    assert extend_state(ExtensionProblem(j, half, SIGNED)) is not None
    assert extend_state(pos) is None
    assert is_classical(E, half) is None


@criterion(15, "extension LP and precone LP agree on >= 30 seeded instances")
def test_c15_precone():
    inst = extension_instances(seed=15)
    assert len(inst) >= 30
    verdicts = []
    for p in inst:
        ext = extend_state(p) is not None
        pre = precone_lp(p) is not None
        assert ext == pre, (p.source.name, p.target.name)
        verdicts.append(ext)
    assert True in verdicts and False in verdicts


@criterion(16, "orbit-basis cyclic dims equal full-basis dims with invariance equations")
def test_c16_bruteforce():
    checked = 0
    for name in io.CORPUS:
        A = corpus(name)
        if count_tests(A, 2) > 2000:
            continue
        n = 3 if count_tests(A, 4) <= 5000 else 2
        assert hc_dims_bruteforce(A, n) == hc_dims(A, n).dims, name
        checked += 1
    assert checked == len(io.CORPUS)


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q"]))
