import functools
import random
import sys
from fractions import Fraction

import pytest

from effalg import io
from effalg.algebra import blocks, generated_subset, restrict
from effalg.states import AdditiveMap, ExtensionProblem, as_state, two_valued_states

CORPUS_ORTHO = ("L1", "P2", "P3", "P4", "P5", "firefly", "bike", "bike_half_a", "bike_half_b", "pentagon", "bell_EA")


@functools.lru_cache(maxsize=None)
def corpus(name):
    return io.load_algebra(name)


def bike_halves():
    """The two subalgebras of the bike: (left circle + bottom line), (top line + right circle)."""
    E = corpus("bike")
    by_atoms = {"".join(sorted(E.label(a) for a in b.atoms)): b for b in blocks(E)}
    top, left, right, bot = (by_atoms[k] for k in ("abcd", "abef", "cdgh", "efgh"))
    A = generated_subset(E, left.elements | bot.elements)
    B = generated_subset(E, top.elements | right.elements)
    return E, A, B, (top, left, right, bot)


@pytest.fixture
def ff():
    return corpus("firefly")


@pytest.fixture
def bike():
    return corpus("bike")


@pytest.fixture
def pent():
    return corpus("pentagon")


def random_convex(rng, vertices):
    """A random rational convex combination of additive maps on one algebra."""
    w = [Fraction(rng.randint(0, 4)) for _ in vertices]
    if not any(w):
        w[rng.randrange(len(w))] = Fraction(1)
    total = sum(w)
    A = vertices[0].algebra
    vals = [sum((wi * v.values[x] for wi, v in zip(w, vertices)), Fraction(0)) / total for x in range(A.size)]
    return as_state(AdditiveMap(A, tuple(vals)))


def extension_instances(seed=2024):
    """Seeded (inclusion, state) pairs with both extendable and obstructed states."""
    rng = random.Random(seed)
    out = []
    # blocks and halves inside their ambient algebras
    for name in ("firefly", "bike", "pentagon"):
        E = corpus(name)
        for k, b in enumerate(blocks(E)):
            B, inc = restrict(E, b.elements, f"{name}-block{k}")
            out.append(ExtensionProblem(inc, random_convex(rng, two_valued_states(B))))
    E, A, B, _ = bike_halves()
    for half in (A, B):
        H, inc = restrict(E, half, "bike-half")
        for _ in range(2):
            out.append(ExtensionProblem(inc, random_convex(rng, two_valued_states(H))))
    # pentagon into P(5): only mixtures of the five chosen states extend
    P = corpus("pentagon")
    f = io.load_morphism(io.corpus_path("pentagon_to_P5.json"), P, corpus("P5"))
    half = io.load_state(io.corpus_path("pentagon_half.json"), P)
    V = two_valued_states(P)
    for _ in range(16):
        vs = rng.sample(V, rng.randint(1, 4))
        if rng.random() < 0.5:
            vs.append(half)
        out.append(ExtensionProblem(f, random_convex(rng, vs)))
    # Boolean refinements P(2) -> P(3), P(3) -> P(5)
    for k, m, table in ((2, 3, {"x1": "x1+x2", "x2": "x3"}), (3, 5, {"x1": "x1", "x2": "x2+x3", "x3": "x4+x5"})):
        src = corpus(f"P{k}")
        g = io.morphism_from_json({"map": table}, src, corpus(f"P{m}"))
        out.append(ExtensionProblem(g, random_convex(rng, two_valued_states(src))))
    return out


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[k])
