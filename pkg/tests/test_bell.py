import random
from fractions import Fraction
from itertools import product as cartesian

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from effalg.algebra import find_isomorphism
from effalg.bell import (
    NoSignalingBox,
    bell_obstruction,
    bell_paper_box,
    box_as_bimorphism_check,
    chsh,
    deterministic_box,
    deterministic_boxes,
    is_local,
    pr_box,
    scenario_algebras,
    signed_local_weights,
    uniform_box,
    verify_no_signaling,
)
from effalg.report import EffectAlgebraError

h, q, t = Fraction(1, 2), Fraction(3, 8), Fraction(1, 8)


def test_reference_box_rows():
    # [REFERENCE] the table of joint probabilities
    assert bell_paper_box().rows == ((h, 0, 0, h), (q, t, t, q), (q, t, t, q), (t, q, q, t))


def test_chsh_values():
    # [REFERENCE] 5/2 for the table; [DERIVED] 0 uniform, 4 PR
    assert chsh(bell_paper_box()) == Fraction(5, 2)
    assert chsh(uniform_box()) == 0
    assert chsh(pr_box()) == 4


@pytest.mark.parametrize("box", [bell_paper_box(), uniform_box(), pr_box()] + deterministic_boxes())
def test_no_signaling(box):
    assert verify_no_signaling(box).passed


def test_locality():
    assert is_local(bell_paper_box()) is None
    assert is_local(pr_box()) is None
    w = is_local(uniform_box())
    assert w is not None and sum(w) == 1 and all(x >= 0 for x in w)


def test_deterministic_boxes():
    D = deterministic_boxes()
    assert len(D) == 16 and len({d.rows for d in D}) == 16
    for i, d in enumerate(D):
        assert abs(chsh(d)) == 2
        w = is_local(d)
        assert w is not None
        # a vertex of the polytope is only its own mixture
        assert w[i] == 1 and sum(w) == 1


def test_deterministic_box_semantics():
    d = deterministic_box(1, 0, 0, 1)
    assert d.p(0, 0, 1, 0) == 1 and d.p(0, 1, 1, 1) == 1
    assert d.p(1, 0, 0, 0) == 1 and d.p(1, 1, 0, 1) == 1


@st.composite
def local_mixtures(draw):
    w = draw(st.lists(st.integers(0, 5), min_size=16, max_size=16).filter(any))
    total = sum(w)
    D = deterministic_boxes()
    rows = [[sum(Fraction(wi, total) * d.rows[r][c] for wi, d in zip(w, D)) for c in range(4)] for r in range(4)]
    return NoSignalingBox(rows)


@settings(max_examples=60, deadline=None)
@given(local_mixtures())
def test_local_mixtures(box):
    assert verify_no_signaling(box).passed
    assert abs(chsh(box)) <= 2
    assert is_local(box) is not None


def mix(a, b, s):
    return NoSignalingBox([[s * x + (1 - s) * y for x, y in zip(ra, rb)] for ra, rb in zip(a.rows, b.rows)])


@pytest.mark.parametrize("s", [Fraction(k, 8) for k in range(9)])
def test_pr_uniform_segment(s):
    """Oracle: on the PR/uniform segment chsh = 4s and the box is local iff 4s <= 2."""
    box = mix(pr_box(), uniform_box(), s)
    assert chsh(box) == 4 * s
    assert (is_local(box) is not None) == (s <= h)


def relabel(box, flip_a, flip_a2, flip_b, flip_b2, swap_a, swap_b):
    """Apply a local symmetry of the scenario (outcome flips and setting swaps)."""
    fa, fb = (flip_a, flip_a2), (flip_b, flip_b2)
    rows = [[Fraction(0)] * 4 for _ in range(4)]
    for al, bo, x, y in cartesian((0, 1), repeat=4):
        al2, bo2 = al ^ swap_a, bo ^ swap_b
        x2, y2 = x ^ fa[al], y ^ fb[bo]
        rows[2 * al2 + bo2][2 * x2 + y2] = box.p(al, bo, x, y)
    return NoSignalingBox(rows)


def test_chsh_facets_oracle():
    """Locality oracle: a no-signaling box is local iff all eight CHSH
    variants obtained by local relabelings are at most 2."""
    rng = random.Random(4)
    for _ in range(40):
        a, b = rng.choice([pr_box(), bell_paper_box(), uniform_box()]), rng.choice(deterministic_boxes())
        sym = [rng.randint(0, 1) for _ in range(6)]
        box = mix(relabel(a, *sym), b, Fraction(rng.randint(0, 8), 8))
        variants = {chsh(relabel(box, *s)) for s in cartesian((0, 1), repeat=6)}
        assert (is_local(box) is not None) == (max(variants) <= 2)


def test_signed_weights():
    for box in (bell_paper_box(), pr_box(), uniform_box()):
        w = signed_local_weights(box)
        assert w is not None and sum(w) == 1
        D = deterministic_boxes()
        assert [sum(wi * d.entries()[k] for wi, d in zip(w, D)) for k in range(16)] == box.entries()
    assert any(x < 0 for x in signed_local_weights(pr_box()))


def test_obstruction_gap():
    ob = bell_obstruction(bell_paper_box())
    assert ob == {"chsh": "5/2", "vanishes": True, "local": False, "gap": True}
    assert bell_obstruction(uniform_box())["gap"] is False


def test_scenario_algebras():
    EA, EB = scenario_algebras()
    assert EA.size == EB.size == 6
    a0, a1, a20 = EA.index("a0"), EA.index("a1"), EA.index("a'0")
    assert EA.add(a0, a1) == EA.one
    assert EA.add(a0, a20) is None
    assert find_isomorphism(EA, EB) is not None


def test_box_as_bimorphism():
    EA, EB = scenario_algebras()
    rep = box_as_bimorphism_check(bell_paper_box(), EA, EB)
    assert rep.passed, rep.failures
    vals = {(r["a"], r["b"]): r["value"] for r in rep.rows}
    assert vals[("a0", "1")] == "1/2" and vals[("1", "1")] == "1"


def test_signaling_is_reported():
    rows = [list(r) for r in bell_paper_box().rows]
    rows[0] = [Fraction(1), 0, 0, 0]
    box = NoSignalingBox(rows)
    assert not verify_no_signaling(box).passed
    EA, EB = scenario_algebras()
    rep = box_as_bimorphism_check(box, EA, EB)
    assert not rep.passed
    assert any("signals" in f for f in rep.failures)


def test_bad_shape():
    with pytest.raises(EffectAlgebraError):
        NoSignalingBox([[1, 0, 0, 0]])
