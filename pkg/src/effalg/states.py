"""States, additive maps, extensions and low-degree order cohomology.

Additive maps on a finite effect algebra are handled in atom coordinates:
every element is a sum of atoms, so an additive map is fixed by its atom
values, subject to the linear relations that make those values consistent.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Mapping, Sequence

from . import linalg
from .algebra import EffectAlgebra, Morphism, atoms, is_subalgebra
from .cohomology import RelativePair, cyclic_complex, hochschild_complex
from .lp import RationalLP, lp_feasible, solve_lp, OPTIMAL
from .report import EffectAlgebraError, PreconditionError, Report
from .testspace import test_table

POSITIVE = "positive"
SIGNED = "signed"


# ---------------------------------------------------------------------------
# additive maps


class AdditiveSpace:
    """Atom coordinates for the additive maps on ``A``.

    ``word[x]`` is one decomposition of x into atoms (position -> multiplicity);
    ``relations`` are the linear conditions on atom values that every
    additive map satisfies (empty for Boolean algebras).
    """

    def __init__(self, A: EffectAlgebra):
        self.algebra = A
        self.atoms = atoms(A)
        pos = {a: i for i, a in enumerate(self.atoms)}
        word: dict[int, dict[int, int]] = {A.zero: {}}
        frontier = [A.zero]
        while frontier:
            nxt = []
            for x in frontier:
                for a in self.atoms:
                    y = A.add(x, a)
                    if y is not None and y not in word:
                        w = dict(word[x])
                        w[pos[a]] = w.get(pos[a], 0) + 1
                        word[y] = w
                        nxt.append(y)
            frontier = nxt
        if len(word) != A.size:
            raise EffectAlgebraError("some element is not a sum of atoms")
        self.word = word
        rels = []
        for x in range(A.size):
            for a in self.atoms:
                y = A.add(x, a)
                if y is None:
                    continue
                r = dict(word[x])
                r[pos[a]] = r.get(pos[a], 0) + 1
                for j, m in word[y].items():
                    r[j] = r.get(j, 0) - m
                r = {j: m for j, m in r.items() if m}
                if r:
                    rels.append(r)
        piv = linalg.echelon_int(rels)
        self.relations: list[dict[int, int]] = [piv[c] for c in sorted(piv)]

    @property
    def dim_atoms(self) -> int:
        return len(self.atoms)

    def values(self, t: Sequence[Fraction]) -> list[Fraction]:
        return [sum((Fraction(m) * t[j] for j, m in self.word[x].items()), Fraction(0)) for x in range(self.algebra.size)]

    def row(self, x: int) -> dict[int, int]:
        """Coefficients of the value at x as a function of the atom values."""
        return dict(self.word[x])

    def basis(self) -> list[list[Fraction]]:
        """Atom-value vectors spanning the additive maps."""
        ker = linalg.kernel_basis((self.relations, self.dim_atoms))
        return [[v.get(j, Fraction(0)) for j in range(self.dim_atoms)] for v in ker]


def additive_space(A: EffectAlgebra) -> AdditiveSpace:
    key = "additive-space"
    if key not in A._cache:
        A._cache[key] = AdditiveSpace(A)
    return A._cache[key]


@dataclass(frozen=True)
class AdditiveMap:
    """A map from the elements of ``algebra`` to the rationals."""

    algebra: EffectAlgebra
    values: tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(Fraction(v) for v in self.values))
        if len(self.values) != self.algebra.size:
            raise ValueError("one value per element is required")

    @classmethod
    def from_atoms(cls, A: EffectAlgebra, t: Sequence) -> "AdditiveMap":
        return cls(A, tuple(additive_space(A).values([Fraction(x) for x in t])))

    @classmethod
    def from_labels(cls, A: EffectAlgebra, values: Mapping[str, object], complete: bool = True) -> "AdditiveMap":
        """Values given on some labelled elements; with ``complete`` the rest
        are filled in by additivity from the atom values."""
        v: dict[int, Fraction] = {A.index(k): Fraction(x) for k, x in values.items()}
        if complete and len(v) < A.size:
            S = additive_space(A)
            missing = [a for a in S.atoms if a not in v]
            if missing:
                raise ValueError(f"atom values missing: {[A.label(a) for a in missing]}")
            t = [v[a] for a in S.atoms]
            for r in S.relations:
                if sum(m * t[j] for j, m in r.items()) != 0:
                    raise ValueError("atom values violate a relation between the atoms")
            full = S.values(t)
            for x, y in v.items():
                if full[x] != y:
                    raise ValueError(f"value at {A.label(x)} inconsistent with additivity")
            return cls(A, tuple(full))
        return cls(A, tuple(v.get(x, Fraction(0)) for x in range(A.size)))

    def __call__(self, x: int) -> Fraction:
        return self.values[x]

    def __sub__(self, other: "AdditiveMap") -> "AdditiveMap":
        return AdditiveMap(self.algebra, tuple(a - b for a, b in zip(self.values, other.values)))

    def __add__(self, other: "AdditiveMap") -> "AdditiveMap":
        return AdditiveMap(self.algebra, tuple(a + b for a, b in zip(self.values, other.values)))

    def scale(self, c) -> "AdditiveMap":
        c = Fraction(c)
        return AdditiveMap(self.algebra, tuple(c * a for a in self.values))

    def atom_values(self) -> list[Fraction]:
        return [self.values[a] for a in additive_space(self.algebra).atoms]

    def is_additive(self) -> bool:
        A = self.algebra
        return all(self.values[c] == self.values[a] + self.values[b] for a, b, c in A.sum_items())

    def is_antisymmetric(self) -> bool:
        A = self.algebra
        return all(self.values[A.comp(a)] == -self.values[a] for a in range(A.size))

    def is_positive(self) -> bool:
        return all(v >= 0 for v in self.values)

    def is_state(self) -> bool:
        return self.is_additive() and self.values[self.algebra.one] == 1 and self.is_positive()

    def is_zero(self) -> bool:
        return not any(self.values)

    def to_dict(self) -> dict[str, str]:
        return {self.algebra.label(x): _fmt(v) for x, v in enumerate(self.values)}


def _fmt(v: Fraction) -> str:
    return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"


class StateVector(AdditiveMap):
    """An additive map with value 1 at the top and values in [0, 1]."""

    def __post_init__(self):
        super().__post_init__()
        if not self.is_state():
            raise ValueError("not a state: needs additivity, sigma(1) = 1 and nonnegative values")


def as_state(m: AdditiveMap) -> StateVector:
    return StateVector(m.algebra, m.values)


def zero_map(A: EffectAlgebra) -> AdditiveMap:
    return AdditiveMap(A, (Fraction(0),) * A.size)


def random_additive(A: EffectAlgebra, rng: random.Random, bound: int = 5) -> AdditiveMap:
    """A random additive map with small integer coordinates in the additive basis."""
    S = additive_space(A)
    t = [Fraction(0)] * S.dim_atoms
    for v in S.basis():
        c = Fraction(rng.randint(-bound, bound), rng.randint(1, 3))
        t = [a + c * b for a, b in zip(t, v)]
    return AdditiveMap.from_atoms(A, t)


# ---------------------------------------------------------------------------
# state polytope


def two_valued_states(A: EffectAlgebra) -> list[StateVector]:
    """All {0,1}-valued states, by backtracking over atom values."""
    key = "two-valued"
    if key in A._cache:
        return A._cache[key]
    S = additive_space(A)
    k = S.dim_atoms
    # check each element as soon as all atoms in its word are assigned
    due: list[list[int]] = [[] for _ in range(k + 1)]
    for x, w in S.word.items():
        due[max(w, default=-1) + 1].append(x)
    rel_due: list[list[dict[int, int]]] = [[] for _ in range(k + 1)]
    for r in S.relations:
        rel_due[max(r) + 1].append(r)
    out: list[StateVector] = []
    t = [0] * k

    def ok(depth: int) -> bool:
        for x in due[depth]:
            v = sum(m * t[j] for j, m in S.word[x].items())
            if v not in (0, 1) or (x == A.one and v != 1):
                return False
        return all(sum(m * t[j] for j, m in r.items()) == 0 for r in rel_due[depth])

    def grow(i: int) -> None:
        if i == k:
            out.append(StateVector(A, tuple(S.values([Fraction(x) for x in t]))))
            return
        for v in (0, 1):
            t[i] = v
            if ok(i + 1):
                grow(i + 1)
        t[i] = 0

    if ok(0):
        grow(0)
    A._cache[key] = out
    return out


def is_classical(A: EffectAlgebra, sigma: AdditiveMap) -> list[Fraction] | None:
    """Convex weights over two_valued_states(A) reproducing sigma, or None."""
    V = two_valued_states(A)
    lp = RationalLP(len(V))
    for x in range(A.size):
        lp.add_eq([s.values[x] for s in V], sigma.values[x])
    lp.add_eq([1] * len(V), 1)
    w = lp_feasible(lp)
    if w is None:
        return None
    for x in range(A.size):
        assert sum((wi * s.values[x] for wi, s in zip(w, V)), Fraction(0)) == sigma.values[x]
    return w


def faithful_state(A: EffectAlgebra) -> tuple[StateVector, Fraction] | None:
    """A state maximizing the least atom value; None if A has no state.

    The state is faithful (positive on every nonzero element) iff the
    returned optimum is positive.
    """
    S = additive_space(A)
    k = S.dim_atoms
    lp = RationalLP(k + 1, objective={k: 1})
    for r in S.relations:
        lp.add_eq(r, 0)
    lp.add_eq(S.row(A.one), 1)
    for j in range(k):
        lp.add_ge({j: 1, k: -1}, 0)
    res = solve_lp(lp)
    if res.status != OPTIMAL:
        return None
    return as_state(AdditiveMap.from_atoms(A, res.x[:k])), res.x[k]


def embed_state_space(A: EffectAlgebra, sigma0: AdditiveMap, sigma: AdditiveMap) -> AdditiveMap:
    """i(sigma) = sigma - sigma0, an additive complement-antisymmetric map."""
    for s in (sigma0, sigma):
        if s.algebra is not A or not s.is_state():
            raise ValueError("embed_state_space needs two states on A")
    d = sigma - sigma0
    assert d.is_additive() and d.is_antisymmetric()
    return d


# ---------------------------------------------------------------------------
# decomposition into positive parts


@dataclass
class Decomposition:
    mode: str
    alpha1: AdditiveMap
    alpha2: AdditiveMap
    beta: AdditiveMap | None = None
    K: Fraction | None = None
    faithful: bool | None = None

    def reconstructs(self, alpha: AdditiveMap) -> bool:
        return (self.alpha1 - self.alpha2) == alpha


def decompose_additive(A: EffectAlgebra, alpha: AdditiveMap, mode: str = "lp") -> Decomposition | None:
    """alpha = alpha1 - alpha2 with both parts positive and additive.

    ``mode='lp'`` solves for both parts directly. ``mode='constructive'``
    takes a faithful state beta and K = -min(alpha) / min_{a != 0} beta,
    then alpha2 = K beta and alpha1 = alpha + alpha2.
    """
    if not alpha.is_additive():
        raise ValueError("alpha is not additive")
    S = additive_space(A)
    k = S.dim_atoms
    if mode == "lp":
        lp = RationalLP(2 * k)
        for r in S.relations:
            lp.add_eq(r, 0)
            lp.add_eq({j + k: v for j, v in r.items()}, 0)
        for j, a in enumerate(alpha.atom_values()):
            lp.add_eq({j: 1, j + k: -1}, a)
        x = lp_feasible(lp)
        if x is None:
            return None
        d = Decomposition("lp", AdditiveMap.from_atoms(A, x[:k]), AdditiveMap.from_atoms(A, x[k:]))
    elif mode == "constructive":
        fs = faithful_state(A)
        if fs is None or fs[1] <= 0:
            raise PreconditionError("no faithful state: the constructive decomposition does not apply")
        beta = fs[0]
        low = min(alpha.values)
        bmin = min(v for x, v in enumerate(beta.values) if x != A.zero)
        K = -low / bmin if low < 0 else Fraction(0)
        a2 = beta.scale(K)
        d = Decomposition("constructive", alpha + a2, a2, beta, K, True)
    else:
        raise ValueError(f"unknown mode {mode!r}")
    assert d.reconstructs(alpha) and d.alpha1.is_positive() and d.alpha2.is_positive()
    assert d.alpha1.is_additive() and d.alpha2.is_additive()
    return d


# ---------------------------------------------------------------------------
# extensions along injective morphisms


@dataclass
class ExtensionProblem:
    inclusion: Morphism
    state: AdditiveMap
    mode: str = POSITIVE

    def __post_init__(self):
        if self.mode not in (POSITIVE, SIGNED):
            raise ValueError(f"mode must be {POSITIVE!r} or {SIGNED!r}")
        rep = self.inclusion.check()
        if not rep.ok:
            raise EffectAlgebraError(f"inclusion is not a morphism: {rep.lines()[0]}")
        if not self.inclusion.injective:
            raise EffectAlgebraError("inclusion is not injective")
        if self.state.algebra is not self.inclusion.source:
            raise ValueError("state lives on a different algebra than the inclusion's source")

    @property
    def source(self) -> EffectAlgebra:
        return self.inclusion.source

    @property
    def target(self) -> EffectAlgebra:
        return self.inclusion.target


def _pullback_rows(p: ExtensionProblem, values: Sequence[Fraction]) -> list[tuple[dict[int, int], Fraction]]:
    S = additive_space(p.target)
    return [(S.row(p.inclusion(x)), values[x]) for x in range(p.source.size)]


def extend_state(p: ExtensionProblem) -> AdditiveMap | None:
    """tau on the target with tau . i = sigma: positive (an LP) or signed (a linear solve)."""
    S = additive_space(p.target)
    k = S.dim_atoms
    eqs = [(dict(r), Fraction(0)) for r in S.relations] + _pullback_rows(p, p.state.values)
    if p.mode == POSITIVE:
        lp = RationalLP(k)
        for r, b in eqs:
            lp.add_eq(r, b)
        t = lp_feasible(lp)
    else:
        t = linalg.solve(([r for r, _ in eqs], k), [b for _, b in eqs])
    if t is None:
        return None
    tau = AdditiveMap.from_atoms(p.target, t)
    assert all(tau(p.inclusion(x)) == p.state(x) for x in range(p.source.size))
    if p.mode == POSITIVE:
        return as_state(tau) if p.state.values[p.source.one] == 1 else tau
    return tau


def obstruction_witness(p: ExtensionProblem, sigma0: AdditiveMap) -> AdditiveMap | None:
    """An additive antisymmetric psi on the target with psi . i = sigma - sigma0, or None."""
    d = p.state - sigma0
    S = additive_space(p.target)
    eqs = [(dict(r), Fraction(0)) for r in S.relations] + _pullback_rows(p, d.values)
    eqs.append((S.row(p.target.one), Fraction(0)))
    t = linalg.solve(([r for r, _ in eqs], S.dim_atoms), [b for _, b in eqs])
    if t is None:
        return None
    psi = AdditiveMap.from_atoms(p.target, t)
    assert psi.is_antisymmetric()
    return psi


def cyclic_obstruction(p: ExtensionProblem, sigma0: AdditiveMap) -> bool:
    """True iff the class of sigma - sigma0 under the connecting map vanishes.

    At chain level this means sigma - sigma0 extends to an additive,
    complement-antisymmetric map on the target.
    """
    return obstruction_witness(p, sigma0) is not None


def obstruction_via_cohomology(p: ExtensionProblem, sigma0: AdditiveMap) -> bool:
    """The same verdict computed in the relative cyclic complex of the target.

    Needs the image of the inclusion to be a subalgebra. The degree-1
    invariant cochain of sigma - sigma0 takes the value d(a) on the test
    (a, a^perp); it is pushed through the connecting map and tested for
    being a relative coboundary.
    """
    B = p.target
    image = p.inclusion.image()
    if not is_subalgebra(B, image):
        raise PreconditionError("image of the inclusion is not a subalgebra")
    pair = RelativePair(B, image)
    rel, amb, _ = pair.complexes()
    d = p.state - sigma0
    inv = {p.inclusion(x): x for x in range(p.source.size)}
    T = test_table(B, 1)
    z = {}
    for o in cyclic_complex(B).sub(within=image).keys(1):
        a = T.tests[T.reps[o]][0]
        v = d(inv[a])
        if v:
            z[o] = v
    if amb.delta(1, z) and any(k not in set(rel.keys(2)) for k in amb.delta(1, z)):
        raise AssertionError("lift is not a cocycle on the subalgebra")
    img = amb.delta(1, z)
    return rel.induced_rank(2, [img]) == 0 if img else True


# ---------------------------------------------------------------------------
# order cohomology in low degrees


@dataclass
class OrderCochainLevel:
    """An element of Disc(C^n) x C^{n-1} on the full test basis."""

    degree: int
    disc: list[Fraction]
    ordered: list[Fraction]

    @property
    def is_positive(self) -> bool:
        return not any(self.disc) and all(v >= 0 for v in self.ordered)

    @property
    def is_zero(self) -> bool:
        return not any(self.disc) and not any(self.ordered)


def _apply_delta(E: EffectAlgebra, n: int, phi: Sequence[Fraction]) -> list[Fraction]:
    """The Hochschild coboundary of a cochain on T_n(E), as a list on T_{n+1}(E)."""
    if n < 0:
        return [Fraction(0)] * len(test_table(E, 0).tests)
    rows = hochschild_complex(E).rows(n)
    m = len(test_table(E, n + 1).tests)
    out = [Fraction(0)] * m
    for r, row in rows.items():
        out[r] = sum((c * phi[j] for j, c in row.items()), Fraction(0))
    return out


def order_coboundary(E: EffectAlgebra, n: int, phi: Sequence, psi: Sequence) -> OrderCochainLevel:
    """delta(phi, psi) = (delta phi, phi - delta psi) for phi on T_n, psi on T_{n-1}."""
    phi = [Fraction(x) for x in phi]
    psi = [Fraction(x) for x in psi]
    if len(phi) != len(test_table(E, n).tests):
        raise ValueError("phi must have one value per test of degree n")
    if n > 0 and len(psi) != len(test_table(E, n - 1).tests):
        raise ValueError("psi must have one value per test of degree n - 1")
    dpsi = _apply_delta(E, n - 1, psi) if n > 0 else [Fraction(0)] * len(phi)
    return OrderCochainLevel(n + 1, _apply_delta(E, n, phi), [a - b for a, b in zip(phi, dpsi)])


@dataclass
class PositiveAdditiveCone:
    """The first order cohomology monoid: positive additive maps, in atom coordinates."""

    algebra: EffectAlgebra
    equalities: list[dict[int, int]]
    n_atoms: int
    ray_bound: int = 12

    def contains(self, phi: AdditiveMap) -> bool:
        return phi.algebra is self.algebra and phi.is_additive() and phi.is_positive()

    def extreme_rays(self) -> list[AdditiveMap]:
        """Extreme rays by minimal supports: a support S carries a ray iff the
        relations restricted to S have a one-dimensional kernel spanned by a
        vector with no zero entry and a single sign."""
        k = self.n_atoms
        if k > self.ray_bound:
            raise PreconditionError(f"{k} atoms exceed the ray enumeration bound {self.ray_bound}")
        rays = []
        for size in range(1, k + 1):
            for S in combinations(range(k), size):
                pos = {j: i for i, j in enumerate(S)}
                rows = [{pos[j]: v for j, v in r.items() if j in pos} for r in self.equalities]
                rows = [r for r in rows if r]
                ker = linalg.kernel_basis((rows, size))
                if len(ker) != 1:
                    continue
                v = ker[0]
                if len(v) != size:
                    continue
                sgn = 1 if next(iter(v.values())) > 0 else -1
                if any(x * sgn <= 0 for x in v.values()):
                    continue
                t = [Fraction(0)] * k
                for i, x in v.items():
                    t[S[i]] = sgn * x
                # a ray whose support strictly contains another ray's is not extreme
                if any(set(S) > set(j for j, x in enumerate(r.atom_values()) if x) for r in rays):
                    continue
                m = min(x for x in t if x)
                rays.append(AdditiveMap.from_atoms(self.algebra, [x / m for x in t]))
        return rays


@dataclass
class ChordLowDegrees:
    degree0: str
    degree1: PositiveAdditiveCone
    info: dict = field(default_factory=dict)


def chord_low_degrees(E: EffectAlgebra, ray_bound: int = 12) -> ChordLowDegrees:
    S = additive_space(E)
    cone = PositiveAdditiveCone(E, list(S.relations), S.dim_atoms, ray_bound)
    return ChordLowDegrees("nonnegative halfline r >= 0", cone)


def precone_lp(p: ExtensionProblem) -> list[Fraction] | None:
    """The connecting-map positivity criterion for a state sigma, as one LP.

    Lift sigma to b on T_1(F) (cochains on T_1 are functions on F through the
    second entry), extending by zero off the image. The class of delta(b) is
    positive iff some c with p(c) = 0 has delta(b) >= delta(c) in the order
    complex, i.e. delta(b - c) has zero discrete part and b - c >= 0.
    Variables: the values of c off the image. Returns c or None.
    """
    E, F, i = p.source, p.target, p.inclusion
    image = {i(x): x for x in range(E.size)}
    T1 = test_table(F, 1).tests
    b = [Fraction(0)] * len(T1)
    for k, t in enumerate(T1):
        if t[1] in image:
            b[k] = p.state(image[t[1]])
    free = [k for k, t in enumerate(T1) if t[1] not in image]
    col = {k: j for j, k in enumerate(free)}
    lp = RationalLP(len(free), free=frozenset(range(len(free))))
    db = _apply_delta(F, 1, b)
    seen = set()
    for r, row in hochschild_complex(F).rows(1).items():
        # delta(c)(r) = delta(b)(r)
        coeffs = {col[k]: v for k, v in row.items() if k in col}
        key = (tuple(sorted(coeffs.items())), db[r])
        if key in seen:
            continue
        seen.add(key)
        if coeffs:
            lp.add_eq(coeffs, db[r])
        elif db[r]:
            return None
    for k in range(len(T1)):
        # b - c >= 0
        if k in col:
            lp.add_ge({col[k]: -1}, -b[k])
        elif b[k] < 0:
            return None
    return lp_feasible(lp)


def precone_image_check(instances: Iterable[ExtensionProblem]) -> Report:
    """Extendability versus membership in the precone of the connecting map."""
    rep = Report("precone of the connecting map equals the image of restriction")
    for n, p in enumerate(instances):
        q = ExtensionProblem(p.inclusion, p.state, POSITIVE)
        ext = extend_state(q) is not None
        pre = precone_lp(q) is not None
        rep.rows.append({"instance": n, "source": p.source.name, "target": p.target.name,
                         "extends": ext, "in_precone": pre})
        rep.expect(ext == pre, f"instance {n}: extension {ext} but precone {pre}")
    return rep


def separating_embedding(A: EffectAlgebra, states: Sequence[AdditiveMap] | None = None):
    """j: A -> P(S), x -> {s : s(x) = 1}, for a family S of two-valued states.

    Returns (P(S), j). j is a morphism for any family; it is injective iff
    the family separates the elements.
    """
    from .algebra import build_powerset

    S = list(states) if states is not None else two_valued_states(A)
    P = build_powerset(len(S), [f"s{i}" for i in range(len(S))])
    table = tuple(sum(1 << i for i, s in enumerate(S) if s(x) == 1) for x in range(A.size))
    return P, Morphism(A, P, table)
