import itertools
from math import comb

import pytest
from conftest import CORPUS_ORTHO, corpus
from hypothesis import given, settings
from hypothesis import strategies as st

from effalg.algebra import build_powerset, height
from effalg.report import SizeCapError
from effalg.testspace import (
    count_tests,
    degeneracy,
    enumerate_tests,
    face,
    is_test,
    orbit,
    rotate,
    verify_cyclic_relations,
)
from effalg.testspace import test_table as table_of


def brute_tests(A, n):
    """Oracle: filter all (n+1)-tuples of elements by their left-associated sum."""
    out = []
    for t in itertools.product(range(A.size), repeat=n + 1):
        acc = A.zero
        for x in t:
            acc = A.add(acc, x)
            if acc is None:
                break
        if acc == A.one:
            out.append(t)
    return sorted(out)


@pytest.mark.parametrize("name,nmax", [("L1", 4), ("P2", 3), ("P3", 3), ("firefly", 3), ("pentagon", 2), ("bell_EA", 3)])
def test_enumeration_matches_bruteforce(name, nmax):
    A = corpus(name)
    for n in range(nmax + 1):
        assert sorted(enumerate_tests(A, n)) == brute_tests(A, n)
        assert count_tests(A, n) == len(brute_tests(A, n))


@pytest.mark.parametrize("m", [1, 2, 3, 4, 5])
def test_powerset_counts(m):
    # [DERIVED] an n-test of P(m) assigns each of the m atoms to one of n+1 slots
    A = build_powerset(m)
    for n in range(5):
        assert count_tests(A, n) == (n + 1) ** m


def test_low_degrees(ff):
    # T_0 = {(1)}, T_1 = {(a, a^perp)} in bijection with the elements
    assert enumerate_tests(ff, 0) == ((ff.one,),)
    T1 = enumerate_tests(ff, 1)
    assert len(T1) == ff.size
    assert sorted(t[0] for t in T1) == list(range(ff.size))


@pytest.mark.parametrize("name", CORPUS_ORTHO)
def test_cyclic_identities(name):
    A = corpus(name)
    nmax = 3 if count_tests(A, 4) > 200_000 else 4
    assert verify_cyclic_relations(A, nmax).ok


def test_faces_and_degeneracies_land_in_tests(ff):
    for n in range(1, 4):
        for t in enumerate_tests(ff, n):
            for i in range(n + 1):
                assert is_test(ff, face(ff, t, i))
            for i in range(n + 2):
                assert is_test(ff, degeneracy(ff, t, i))
            assert is_test(ff, rotate(t))


def test_face_examples():
    P = corpus("P3")
    x1, x2, x3 = (P.index(f"x{i}") for i in (1, 2, 3))
    t = (x1, x2, x3)
    assert face(P, t, 0) == (P.index("x1+x2"), x3)
    assert face(P, t, 1) == (x1, P.index("x2+x3"))
    assert face(P, t, 2) == (P.index("x1+x3"), x2)
    assert degeneracy(P, t, 1) == (x1, P.zero, x2, x3)
    assert rotate(t) == (x3, x1, x2)


@settings(max_examples=200, deadline=None)
@given(st.lists(st.integers(0, 9), min_size=1, max_size=7), st.integers(-10, 10))
def test_rotation_group(t, k):
    t = tuple(t)
    assert rotate(rotate(t, k), -k) == t
    assert rotate(t, len(t)) == t
    o = orbit(t)
    assert len(t) % len(o) == 0
    assert len(set(o)) == len(o)


def test_orbit_table_signs(ff):
    for n in range(4):
        T = table_of(ff, n)
        assert sum(T.sizes) == len(T.tests)
        for k, t in enumerate(T.tests):
            rep = T.tests[T.reps[T.orbit_of[k]]]
            j = orbit(rep).index(t)
            assert T.sign[k] == (-1) ** (n * j)


def test_cap():
    with pytest.raises(SizeCapError):
        enumerate_tests(corpus("P5"), 6, cap=1000)


def test_count_identity_union():
    """|T_n(E)| = |T_n(A)| + |T_n(B)| - |T_n(A n B)| for the bike halves."""
    from conftest import bike_halves

    from effalg.theorems import union_count_check

    E, A, B, _ = bike_halves()
    assert union_count_check(E, A, B, height(E)).passed


def test_binomial_degree_two():
    # [DERIVED] tests of P(m) in degree 1 are pairs (S, complement): 2^m of them
    for m in range(1, 6):
        assert count_tests(build_powerset(m), 1) == 2**m == sum(comb(m, k) for k in range(m + 1))
