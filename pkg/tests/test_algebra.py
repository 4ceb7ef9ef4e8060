import itertools

import pytest
from conftest import CORPUS_ORTHO, corpus

from effalg.algebra import (
    EffectAlgebra,
    GreechieDiagram,
    Morphism,
    atoms,
    blocks,
    build_L1,
    build_powerset,
    coprojections,
    coproduct,
    find_isomorphism,
    from_greechie,
    generated_subset,
    height,
    intersect_subalgebras,
    is_isomorphic,
    is_subalgebra,
    is_union,
    maximal_tests,
    product,
    restrict,
    verify_axioms,
)
from effalg.report import EffectAlgebraError, InadmissibleDiagramError, SizeCapError
from effalg.testspace import test_table as table_of


@pytest.mark.parametrize("name", CORPUS_ORTHO)
def test_corpus_axioms(name):
    A = corpus(name)
    assert verify_axioms(A).ok
    assert A.is_orthoalgebra()


def test_firefly_twelve_elements(ff):
    # [REFERENCE] the firefly orthoalgebra has 12 elements
    assert ff.size == 12
    assert ff.add(ff.index("a"), ff.index("b")) == ff.add(ff.index("c"), ff.index("d"))
    assert ff.comp(ff.index("e")) == ff.index("a+b")


def test_bike_and_pentagon_sizes(bike, pent):
    # [DERIVED] 4 Boolean blocks of 16 glued pairwise along 4-element subalgebras
    assert bike.size == 36
    assert len(atoms(bike)) == 8 and len(blocks(bike)) == 4
    # [DERIVED] 5 blocks of 8; each shared atom merges 4 pairs -> 2 + 10 + 10
    assert pent.size == 22
    assert len(blocks(pent)) == 5


def test_powerset_structure():
    P = build_powerset(3)
    assert P.size == 8 and verify_axioms(P).ok
    assert P.add(1, 2) == 3 and P.add(1, 1) is None
    assert len(atoms(P)) == 3 and height(P) == 3


def test_L1():
    L = build_L1()
    assert L.size == 2 and L.zero != L.one and verify_axioms(L).ok
    assert is_isomorphic(L, corpus("L1"))


def test_effect_algebra_not_ortho():
    # the three-element chain {0, h, 1} with h + h = 1 (a fragment of [0,1])
    E = EffectAlgebra(["0", "h", "1"], 0, 2, [(0, 0, 0), (0, 1, 1), (1, 0, 1), (0, 2, 2), (2, 0, 2), (1, 1, 2)], [2, 1, 0])
    assert verify_axioms(E).ok
    assert not E.is_orthoalgebra()
    with pytest.raises(EffectAlgebraError):
        blocks(E)


def test_axiom_witnesses():
    # commutativity broken on purpose
    bad = EffectAlgebra(["0", "x", "y", "1"], 0, 3, [(0, 0, 0), (0, 1, 1), (1, 0, 1), (0, 2, 2), (2, 0, 2),
                                                     (0, 3, 3), (3, 0, 3), (1, 2, 3)], [3, 2, 1, 0])
    rep = verify_axioms(bad)
    assert not rep.ok
    assert any(v.axiom == "commutativity" for v in rep.violations)


def test_single_line_is_powerset():
    for m in range(1, 6):
        G = from_greechie(GreechieDiagram(tuple(f"a{i}" for i in range(m)), (tuple(range(m)),)))
        assert is_isomorphic(G, build_powerset(m))


def test_greechie_rejections():
    with pytest.raises(InadmissibleDiagramError):
        from_greechie(GreechieDiagram(("a", "b", "c"), ((0, 1), (0, 1, 2))))
    with pytest.raises(InadmissibleDiagramError):
        # a loop of order two would merge the atoms c and d
        from_greechie(GreechieDiagram(tuple("abcd"), ((0, 1, 2), (0, 1, 3))))
    with pytest.raises(InadmissibleDiagramError):
        from_greechie(GreechieDiagram(tuple("abcdef"), ((0, 1, 2, 3), (0, 1, 4, 5), (2, 4))))


def test_size_cap():
    with pytest.raises(SizeCapError):
        build_powerset(13)


def test_product_and_coproduct():
    P2, P3 = build_powerset(2), build_powerset(3)
    X = product(P2, P3)
    assert X.size == 32 and verify_axioms(X).ok
    assert is_isomorphic(X, build_powerset(5))
    C = coproduct(P2, P3)
    assert C.size == 4 + 8 - 2 and verify_axioms(C).ok
    ia, ib = coprojections(P2, P3, C)
    assert ia.check().ok and ib.check().ok
    assert ia.injective and ib.injective
    assert ia.image() & ib.image() == {C.zero, C.one}


@pytest.mark.parametrize("pair", [("L1", "P2"), ("P2", "P3"), ("firefly", "P2"), ("firefly", "L1")])
def test_height_product_coproduct(pair):
    A, B = corpus(pair[0]), corpus(pair[1])
    assert height(product(A, B)) == height(A) + height(B)
    assert height(coproduct(A, B)) == max(height(A), height(B))


def test_heights():
    assert [height(corpus(n)) for n in ("L1", "P2", "P3", "firefly", "bike", "pentagon")] == [1, 2, 3, 3, 4, 3]


def test_blocks_match_maximal_tests(bike):
    assert len(blocks(bike)) == len(maximal_tests(bike)) == 4
    for b in blocks(bike):
        assert is_subalgebra(bike, b.elements) and len(b.elements) == 16


def test_subalgebras(ff):
    S = generated_subset(ff, [ff.index("a")])
    assert S == {ff.zero, ff.one, ff.index("a"), ff.comp(ff.index("a"))}
    assert is_subalgebra(ff, S)
    assert not is_subalgebra(ff, {ff.zero, ff.one, ff.index("a")})
    R, inc = restrict(ff, S, "sub")
    assert R.size == 4 and inc.check().ok and inc.injective


def test_firefly_intersection(ff):
    # [REFERENCE] the blocks of the firefly meet in {0, e, a+b, 1}
    b0, b1 = blocks(ff)
    I, _ = intersect_subalgebras(ff, b0.elements, b1.elements)
    assert sorted(I.labels) == sorted(["0", "e", "a+b", "1"])


def test_bike_union_and_naive_split():
    from conftest import bike_halves

    E, A, B, (top, left, right, bot) = bike_halves()
    assert len(A) == len(B) == 24
    assert is_subalgebra(E, A) and is_subalgebra(E, B)
    assert is_union(E, A, B)
    # [REFERENCE] c + g is defined in E but the three-block diagram (top, bottom, left)
    # does not contain it, so that union of blocks is no subalgebra
    naive = top.elements | bot.elements | left.elements
    assert E.add(E.index("c"), E.index("g")) is not None
    assert not is_subalgebra(E, naive)


def test_prop_test_union():
    """Every test of a union restricts to one side (exhaustive up to the height)."""
    from conftest import bike_halves

    E, A, B, _ = bike_halves()
    for n in range(height(E) + 1):
        for t in table_of(E, n).tests:
            assert A.issuperset(t) or B.issuperset(t)


def test_isomorphism_search():
    A = corpus("bike_half_a")
    B = corpus("bike_half_b")
    f = find_isomorphism(A, B)
    assert f is not None
    assert Morphism(A, B, f).check().ok
    assert find_isomorphism(corpus("firefly"), corpus("P3")) is None


def test_morphism_check_detects_failure():
    P2 = build_powerset(2)
    bad = Morphism(P2, P2, (0, 1, 1, 3))
    assert not bad.check().ok


def test_coproduct_sums_across_summands_undefined():
    C = coproduct(build_powerset(2, ["a0", "a1"]), build_powerset(2, ["a'0", "a'1"]))
    for x, y in itertools.product(["a0", "a1"], ["a'0", "a'1"]):
        assert C.add(C.index(x), C.index(y)) is None
    assert C.add(C.index("a0"), C.index("a1")) == C.one
