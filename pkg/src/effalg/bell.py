"""Two-party, two-setting, two-outcome Bell scenario.

A box lists joint outcome probabilities for the four contexts
(a,b), (a,b'), (a',b), (a',b') with outcomes ordered (0,0), (0,1), (1,0), (1,1).
States on the tensor of the two local scenario algebras are handled through
their bimorphism data, which is exactly such a box.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product as cartesian
from typing import Sequence

from . import linalg
from .algebra import EffectAlgebra, build_powerset, coproduct
from .lp import RationalLP, lp_feasible
from .report import EffectAlgebraError, Report

CONTEXTS = (("a", "b"), ("a", "b'"), ("a'", "b"), ("a'", "b'"))
OUTCOMES = ((0, 0), (0, 1), (1, 0), (1, 1))
PRIME_A, PRIME_B = "a'", "b'"


@dataclass(frozen=True)
class NoSignalingBox:
    rows: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        rows = tuple(tuple(Fraction(x) for x in r) for r in self.rows)
        if len(rows) != 4 or any(len(r) != 4 for r in rows):
            raise EffectAlgebraError("a box has 4 contexts with 4 outcomes each")
        object.__setattr__(self, "rows", rows)

    def p(self, alice: int, bob: int, x: int, y: int) -> Fraction:
        """Probability of outcomes (x, y) for settings alice, bob in {0, 1} (0 = unprimed)."""
        return self.rows[2 * alice + bob][2 * x + y]

    def entries(self) -> list[Fraction]:
        return [x for r in self.rows for x in r]

    def to_strings(self) -> list[list[str]]:
        return [[_fmt(x) for x in r] for r in self.rows]


def _fmt(v: Fraction) -> str:
    return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"


def bell_paper_box() -> NoSignalingBox:
    q, t = Fraction(3, 8), Fraction(1, 8)
    h = Fraction(1, 2)
    return NoSignalingBox(((h, 0, 0, h), (q, t, t, q), (q, t, t, q), (t, q, q, t)))


def uniform_box() -> NoSignalingBox:
    u = Fraction(1, 4)
    return NoSignalingBox(((u,) * 4,) * 4)


def pr_box() -> NoSignalingBox:
    h = Fraction(1, 2)
    corr, anti = (h, 0, 0, h), (0, h, h, 0)
    return NoSignalingBox((corr, corr, corr, anti))


def deterministic_box(xa: int, xa2: int, yb: int, yb2: int) -> NoSignalingBox:
    """Alice answers xa on a and xa2 on a'; Bob answers yb on b and yb2 on b'."""
    rows = []
    for x, y in ((xa, yb), (xa, yb2), (xa2, yb), (xa2, yb2)):
        r = [0, 0, 0, 0]
        r[2 * x + y] = 1
        rows.append(tuple(r))
    return NoSignalingBox(tuple(rows))


def deterministic_boxes() -> list[NoSignalingBox]:
    return [deterministic_box(*bits) for bits in cartesian((0, 1), repeat=4)]


def verify_no_signaling(box: NoSignalingBox) -> Report:
    rep = Report("no-signaling")
    for (s, t), r in zip(CONTEXTS, box.rows):
        rep.expect(sum(r) == 1, f"context ({s},{t}) sums to {sum(r)}")
        rep.expect(all(x >= 0 for x in r), f"context ({s},{t}) has a negative entry")
    for alice in (0, 1):
        m = [box.p(alice, bob, 0, 0) + box.p(alice, bob, 0, 1) for bob in (0, 1)]
        rep.rows.append({"marginal": f"Alice {CONTEXTS[2 * alice][0]}", "values": [_fmt(x) for x in m]})
        rep.expect(m[0] == m[1], f"Alice's marginal for {CONTEXTS[2 * alice][0]} depends on Bob's setting: {m[0]} vs {m[1]}")
    for bob in (0, 1):
        m = [box.p(alice, bob, 0, 0) + box.p(alice, bob, 1, 0) for alice in (0, 1)]
        rep.rows.append({"marginal": f"Bob {CONTEXTS[bob][1]}", "values": [_fmt(x) for x in m]})
        rep.expect(m[0] == m[1], f"Bob's marginal for {CONTEXTS[bob][1]} depends on Alice's setting: {m[0]} vs {m[1]}")
    return rep


def correlator(row: Sequence[Fraction]) -> Fraction:
    return row[0] + row[3] - row[1] - row[2]


def chsh(box: NoSignalingBox) -> Fraction:
    e = [correlator(r) for r in box.rows]
    return e[0] + e[1] + e[2] - e[3]


def is_local(box: NoSignalingBox) -> list[Fraction] | None:
    """Convex weights over deterministic_boxes() reproducing the box, or None."""
    D = deterministic_boxes()
    lp = RationalLP(len(D))
    for k in range(16):
        lp.add_eq([d.entries()[k] for d in D], box.entries()[k])
    lp.add_eq([1] * len(D), 1)
    w = lp_feasible(lp)
    if w is not None:
        mix = [sum((wi * d.entries()[k] for wi, d in zip(w, D)), Fraction(0)) for k in range(16)]
        assert mix == box.entries()
    return w


def signed_local_weights(box: NoSignalingBox) -> list[Fraction] | None:
    """Affine (possibly negative) weights over the deterministic boxes, or None.

    Exists exactly when the box lies in the affine hull of the local polytope,
    the Bell analogue of a vanishing cyclic obstruction.
    """
    D = deterministic_boxes()
    rows = [{j: Fraction(d.entries()[k]) for j, d in enumerate(D) if d.entries()[k]} for k in range(16)]
    rows.append({j: Fraction(1) for j in range(len(D))})
    return linalg.solve((rows, len(D)), box.entries() + [Fraction(1)])


def scenario_algebras() -> tuple[EffectAlgebra, EffectAlgebra]:
    """E_A = P(2) + P(2) with atoms a0, a1, a'0, a'1, and E_B likewise."""
    out = []
    for p in ("a", "b"):
        E = coproduct(build_powerset(2, [f"{p}0", f"{p}1"]), build_powerset(2, [f"{p}'0", f"{p}'1"]))
        E.name = f"E_{p.upper()}"
        out.append(E)
    return out[0], out[1]


def box_as_bimorphism_check(box: NoSignalingBox, EA: EffectAlgebra, EB: EffectAlgebra) -> Report:
    """Extend the atom-pair probabilities to a map E_A x E_B -> [0,1] that is
    additive in each variable with f(1,1) = 1.

    f(u, 1) and f(1, v) are computed once per measurement of the other party;
    disagreement is exactly signaling and is reported with the marginal.
    """
    rep = Report("box as bimorphism")
    A_set = {("a", x): EA.index(f"a{x}") for x in (0, 1)} | {("a'", x): EA.index(f"a'{x}") for x in (0, 1)}
    B_set = {("b", y): EB.index(f"b{y}") for y in (0, 1)} | {("b'", y): EB.index(f"b'{y}") for y in (0, 1)}
    f: dict[tuple[int, int], Fraction] = {}
    for k, (s, t) in enumerate(CONTEXTS):
        for (x, y), v in zip(OUTCOMES, box.rows[k]):
            f[A_set[(s, x)], B_set[(t, y)]] = v

    # f(u, 1) via each of Bob's measurements
    for (s, x), u in A_set.items():
        via = {t: f[u, B_set[(t, 0)]] + f[u, B_set[(t, 1)]] for t in ("b", "b'")}
        if via["b"] != via["b'"]:
            rep.fail(f"f({s}{x}, 1) is {via['b']} via b but {via[PRIME_B]} via b' (Alice's marginal signals)")
        f[u, EB.one] = via["b"]
    for (t, y), v in B_set.items():
        via = {s: f[A_set[(s, 0)], v] + f[A_set[(s, 1)], v] for s in ("a", "a'")}
        if via["a"] != via["a'"]:
            rep.fail(f"f(1, {t}{y}) is {via['a']} via a but {via[PRIME_A]} via a' (Bob's marginal signals)")
        f[EA.one, v] = via["a"]
    ones = {s + t: sum(box.rows[k]) for k, (s, t) in enumerate(CONTEXTS)}
    if len(set(ones.values())) != 1 or next(iter(ones.values())) != 1:
        rep.fail(f"f(1,1) is not 1 in every context: {ones}")
    f[EA.one, EB.one] = Fraction(1)
    for u in range(EA.size):
        f[u, EB.zero] = Fraction(0)
    for v in range(EB.size):
        f[EA.zero, v] = Fraction(0)
    if rep.passed:
        for u in range(EA.size):
            for a, b, c in EB.sum_items():
                rep.expect(f[u, c] == f[u, a] + f[u, b], f"not additive in the second slot at {EA.label(u)}")
        for v in range(EB.size):
            for a, b, c in EA.sum_items():
                rep.expect(f[c, v] == f[a, v] + f[b, v], f"not additive in the first slot at {EB.label(v)}")
        rep.expect(all(0 <= x <= 1 for x in f.values()), "values outside [0,1]")
    rep.rows = [
        {"a": EA.label(u), "b": EB.label(v), "value": _fmt(x)}
        for (u, v), x in sorted(f.items())
    ]
    return rep


def bell_obstruction(box: NoSignalingBox) -> dict:
    """Compare the signed (chain-level) criterion with classical realizability.

    ``vanishes`` is true when an affine combination of deterministic boxes
    reproduces the box, so the cohomological obstruction cannot detect
    nonlocality there; ``local`` is the positive LP verdict.
    """
    signed = signed_local_weights(box)
    local = is_local(box)
    return {
        "chsh": _fmt(chsh(box)),
        "vanishes": signed is not None,
        "local": local is not None,
        "gap": signed is not None and local is None,
    }
