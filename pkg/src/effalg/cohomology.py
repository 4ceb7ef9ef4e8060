"""Cyclic and Hochschild cochain complexes of an effect algebra.

Cyclic cochains are stored in the orbit basis: one coordinate per rotation
orbit that admits a nonzero invariant value, the coordinate being the value
on the orbit representative (see :class:`effalg.testspace.TestTable`).
Hochschild cochains use one coordinate per test, or per nondegenerate test
in the normalized variant.

Subalgebras and relative complexes are coordinate subsets of the ambient
complex: the invariant cochains on a subalgebra S are the orbits whose
tests only use elements of S, and the relative cochains of a pair (B, A)
are the orbits of B that are not A-orbits. Restriction and extension by
zero are then coordinate projection and inclusion.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Hashable, Iterable, Sequence

from . import linalg
from .algebra import EffectAlgebra, is_subalgebra
from .linalg import Matrix
from .report import NotSubalgebraError, Report
from .testspace import DEFAULT_TEST_CAP, face, test_table

Vector = dict[Hashable, Fraction]

CYCLIC = "cyclic"
HOCHSCHILD = "hochschild"
RELATIVE = "relative-cyclic"


class CochainComplex:
    """Coboundaries of one algebra's full complex, built lazily per degree."""

    theory: str

    def __init__(self, A: EffectAlgebra, cap: int = DEFAULT_TEST_CAP):
        self.algebra = A
        self.cap = cap
        self._rows: dict[int, dict[int, dict[int, int]]] = {}
        self._cols: dict[int, dict[int, dict[int, int]]] = {}

    def table(self, n: int):
        return test_table(self.algebra, n, self.cap)

    def keys(self, n: int) -> list[int]:
        raise NotImplementedError

    def support(self, n: int, key: int) -> tuple[int, ...]:
        raise NotImplementedError

    def _build_row(self, n: int, key: int) -> dict[int, int]:
        raise NotImplementedError

    def rows(self, n: int) -> dict[int, dict[int, int]]:
        """delta^n in row form: degree-(n+1) key -> {degree-n key: coefficient}."""
        if n not in self._rows:
            self._rows[n] = {k: self._build_row(n, k) for k in self.keys(n + 1)}
        return self._rows[n]

    def cols(self, n: int) -> dict[int, dict[int, int]]:
        if n not in self._cols:
            cols: dict[int, dict[int, int]] = {k: {} for k in self.keys(n)}
            for r, row in self.rows(n).items():
                for c, v in row.items():
                    cols[c][r] = v
            self._cols[n] = cols
        return self._cols[n]

    def matrix(self, n: int) -> Matrix:
        ck = {k: i for i, k in enumerate(self.keys(n))}
        rows = [{ck[c]: v for c, v in self.rows(n)[r].items()} for r in self.keys(n + 1)]
        return Matrix.from_sparse(rows, len(ck))

    def sub(self, within: Iterable[int] | None = None, outside: Iterable[int] | None = None) -> "SubComplex":
        return SubComplex(self, within, outside)


class CyclicComplex(CochainComplex):
    theory = CYCLIC

    def keys(self, n: int) -> list[int]:
        T = self.table(n)
        return [o for o, ok in enumerate(T.contributing) if ok]

    def support(self, n: int, key: int) -> tuple[int, ...]:
        T = self.table(n)
        return T.tests[T.reps[key]]

    def _build_row(self, n: int, key: int) -> dict[int, int]:
        A = self.algebra
        T, T1 = self.table(n), self.table(n + 1)
        u = T1.tests[T1.reps[key]]
        row: dict[int, int] = {}
        for i in range(n + 2):
            k = T.index[face(A, u, i)]
            o = T.orbit_of[k]
            if T.contributing[o]:
                v = row.get(o, 0) + (-1 if i % 2 else 1) * T.sign[k]
                if v:
                    row[o] = v
                else:
                    del row[o]
        return row


class HochschildComplex(CochainComplex):
    """Full test-cochain complex; ``normalized`` keeps only nondegenerate tests.

    A test is degenerate when it has a zero at a position other than the
    first (it is then a simplicial degeneracy of a shorter test). Cochains
    vanishing on degenerate tests form a subcomplex with the same cohomology.
    """

    theory = HOCHSCHILD

    def __init__(self, A: EffectAlgebra, cap: int = DEFAULT_TEST_CAP, normalized: bool = False):
        super().__init__(A, cap)
        self.normalized = normalized
        self._keys: dict[int, list[int]] = {}

    def _ok(self, t: tuple[int, ...]) -> bool:
        z = self.algebra.zero
        return not self.normalized or z not in t[1:]

    def keys(self, n: int) -> list[int]:
        if n not in self._keys:
            T = self.table(n)
            self._keys[n] = [k for k, t in enumerate(T.tests) if self._ok(t)]
        return self._keys[n]

    def support(self, n: int, key: int) -> tuple[int, ...]:
        return self.table(n).tests[key]

    def _build_row(self, n: int, key: int) -> dict[int, int]:
        A = self.algebra
        T, T1 = self.table(n), self.table(n + 1)
        u = T1.tests[key]
        row: dict[int, int] = {}
        for i in range(n + 2):
            f = face(A, u, i)
            if not self._ok(f):
                continue
            k = T.index[f]
            v = row.get(k, 0) + (-1 if i % 2 else 1)
            if v:
                row[k] = v
            else:
                del row[k]
        return row


def _relabel(vectors: Sequence[dict]) -> list[dict[int, Fraction]]:
    pos: dict = {}
    out = []
    for v in vectors:
        out.append({pos.setdefault(k, len(pos)): x for k, x in v.items() if x})
    return out


def span_rank(vectors: Sequence[dict]) -> int:
    return linalg.span_rank(_relabel(vectors))


class SubComplex:
    """Coordinates of a complex whose representative tests lie inside ``within``
    and not inside ``outside``. Coboundaries are the ambient ones restricted."""

    def __init__(self, cx: CochainComplex, within=None, outside=None):
        self.cx = cx
        self.within = frozenset(within) if within is not None else None
        self.outside = frozenset(outside) if outside is not None else None
        self._keys: dict[int, list[int]] = {}
        self._cocycles: dict[int, list[Vector]] = {}
        self._bspan: dict[int, list[Vector]] = {}
        self._rank: dict[int, int] = {}
        self._brank: dict[int, int] = {}

    @property
    def algebra(self) -> EffectAlgebra:
        return self.cx.algebra

    def keys(self, n: int) -> list[int]:
        if n < 0:
            return []
        if n not in self._keys:
            out = []
            for k in self.cx.keys(n):
                s = self.cx.support(n, k)
                if self.within is not None and not self.within.issuperset(s):
                    continue
                if self.outside is not None and self.outside.issuperset(s):
                    continue
                out.append(k)
            self._keys[n] = out
        return self._keys[n]

    def delta(self, n: int, v: Vector) -> Vector:
        """delta^n applied to a cochain supported on this subcomplex."""
        allowed = set(self.keys(n + 1))
        cols = self.cx.cols(n)
        out: dict = {}
        for c, x in v.items():
            if not x:
                continue
            for r, a in cols[c].items():
                if r in allowed:
                    out[r] = out.get(r, 0) + a * x
        return {r: Fraction(y) for r, y in out.items() if y}

    def _matrix_rows(self, n: int) -> tuple[list[dict[int, int]], list[int]]:
        ck = self.keys(n)
        pos = {k: i for i, k in enumerate(ck)}
        rows = self.cx.rows(n)
        out = []
        for r in self.keys(n + 1):
            row = {pos[c]: v for c, v in rows[r].items() if c in pos}
            if row:
                out.append(row)
        return out, ck

    def matrix(self, n: int) -> Matrix:
        rows, ck = self._matrix_rows(n)
        return Matrix.from_sparse(rows, len(ck))

    def rank_delta(self, n: int) -> int:
        if n < 0:
            return 0
        if n not in self._rank:
            rows, _ = self._matrix_rows(n)
            self._rank[n] = linalg.rank((rows, len(self.keys(n))))
        return self._rank[n]

    def dim(self, n: int) -> int:
        return len(self.keys(n)) - self.rank_delta(n) - self.rank_delta(n - 1)

    def cocycles(self, n: int) -> list[Vector]:
        if n < 0:
            return []
        if n not in self._cocycles:
            rows, ck = self._matrix_rows(n)
            ker = linalg.kernel_basis((rows, len(ck)))
            self._cocycles[n] = [{ck[i]: x for i, x in v.items()} for v in ker]
        return self._cocycles[n]

    def coboundaries(self, n: int) -> list[Vector]:
        """Spanning set of im delta^{n-1} (images of the degree n-1 basis vectors)."""
        if n <= 0:
            return []
        if n not in self._bspan:
            allowed = set(self.keys(n))
            cols = self.cx.cols(n - 1)
            out = []
            for c in self.keys(n - 1):
                v = {r: Fraction(a) for r, a in cols[c].items() if r in allowed}
                if v:
                    out.append(v)
            self._bspan[n] = out
        return self._bspan[n]

    def coboundary_rank(self, n: int) -> int:
        if n not in self._brank:
            self._brank[n] = self.rank_delta(n - 1)
        return self._brank[n]

    def induced_rank(self, n: int, images: Sequence[Vector]) -> int:
        """Rank, in H^n of this complex, of the classes of the given cocycles."""
        return span_rank(list(images) + self.coboundaries(n)) - self.coboundary_rank(n)

    def class_coordinates(self, n: int, vectors: Sequence[Vector]) -> Matrix:
        """Coordinates of cocycle classes in the basis given by :meth:`cohomology_basis`."""
        basis = self.cohomology_basis(n)
        bvecs = self._coboundary_basis(n)
        keys = self.keys(n)
        pos = {k: i for i, k in enumerate(keys)}
        cols = bvecs + basis
        rows = [dict() for _ in keys]
        for j, v in enumerate(cols):
            for k, x in v.items():
                rows[pos[k]][j] = x
        out = []
        for v in vectors:
            b = [Fraction(0)] * len(keys)
            for k, x in v.items():
                b[pos[k]] = x
            sol = linalg.solve((rows, len(cols)), b)
            if sol is None:
                raise ValueError("vector is not a cocycle of this complex")
            out.append(sol[len(bvecs):])
        return Matrix([[out[j][i] for j in range(len(out))] for i in range(len(basis))], len(out))

    def _coboundary_basis(self, n: int) -> list[Vector]:
        span = self.coboundaries(n)
        idx = _independent(span)
        return [span[i] for i in idx]

    def cohomology_basis(self, n: int) -> list[Vector]:
        """Cocycles whose classes form a basis of H^n."""
        b = self._coboundary_basis(n)
        z = self.cocycles(n)
        idx = _independent(b + z)
        return [z[i - len(b)] for i in idx if i >= len(b)]


def _independent(vectors: Sequence[Vector]) -> list[int]:
    """Indices of a greedy maximal independent subfamily."""
    rows = _relabel(vectors)
    # columns of the matrix whose columns are the vectors
    ncols = len(rows)
    trans: dict[int, dict[int, Fraction]] = {}
    for j, v in enumerate(rows):
        for i, x in v.items():
            trans.setdefault(i, {})[j] = x
    piv = linalg.rref(list(trans.values()))
    del ncols
    return sorted(piv)


@dataclass
class CohomologyTable:
    theory: str
    dims: list[int]
    algebra: str = ""
    info: dict = field(default_factory=dict)

    def __getitem__(self, n: int) -> int:
        return self.dims[n]

    def to_dict(self) -> dict:
        return {"theory": self.theory, "algebra": self.algebra, "dims": list(self.dims)}


def cyclic_complex(A: EffectAlgebra, cap: int = DEFAULT_TEST_CAP) -> CyclicComplex:
    key = ("cyclic-complex", cap)
    if key not in A._cache:
        A._cache[key] = CyclicComplex(A, cap)
    return A._cache[key]


def hochschild_complex(A: EffectAlgebra, normalized: bool = False, cap: int = DEFAULT_TEST_CAP) -> HochschildComplex:
    key = ("hochschild-complex", normalized, cap)
    if key not in A._cache:
        A._cache[key] = HochschildComplex(A, cap, normalized)
    return A._cache[key]


def coboundary_matrix(A: EffectAlgebra, n: int, theory: str = CYCLIC, check: bool = True) -> Matrix:
    """delta^n on the orbit basis (cyclic) or on the test basis (hochschild).

    With ``check`` the composite delta^{n+1} delta^n is verified to vanish.
    """
    cx = cyclic_complex(A) if theory == CYCLIC else hochschild_complex(A)
    M = cx.matrix(n)
    if check:
        N = cx.matrix(n + 1)
        if M.cols and N.rows and not (N @ M).is_zero():
            raise AssertionError(f"delta^{n + 1} delta^{n} != 0 for {A.name}")
    return M


def verify_dd_zero(cx: CochainComplex | SubComplex, nmax: int) -> bool:
    """Exact check that delta^{n+1} delta^n = 0 for n <= nmax."""
    sub = cx if isinstance(cx, SubComplex) else cx.sub()
    for n in range(nmax + 1):
        for c in sub.keys(n):
            v = sub.delta(n, {c: Fraction(1)})
            if v and sub.delta(n + 1, v):
                return False
    return True


def _dims(sub: SubComplex, nmax: int) -> list[int]:
    return [sub.dim(n) for n in range(nmax + 1)]


def hc_dims(A: EffectAlgebra, nmax: int, cap: int = DEFAULT_TEST_CAP) -> CohomologyTable:
    sub = cyclic_complex(A, cap).sub()
    return CohomologyTable(CYCLIC, _dims(sub, nmax), A.name)


def hh_dims(A: EffectAlgebra, nmax: int, normalized: bool = False, cap: int = DEFAULT_TEST_CAP) -> CohomologyTable:
    sub = hochschild_complex(A, normalized, cap).sub()
    t = CohomologyTable(HOCHSCHILD, _dims(sub, nmax), A.name)
    t.info["basis"] = "normalized" if normalized else "full"
    return t


def hc_dims_bruteforce(A: EffectAlgebra, nmax: int) -> list[int]:
    """Cyclic dims from the full test basis with invariance imposed as equations.

    Independent of the orbit bookkeeping: the invariant cochains of degree n
    are the kernel of the equations alpha(t) - (-1)^n alpha(rot t) = 0, and
    HC^n = dim Z - dim B computed inside that subspace.
    """
    from .testspace import enumerate_tests, rotate

    H = hochschild_complex(A)
    inv: dict[int, list[dict[int, Fraction]]] = {}

    def invariant_basis(n: int) -> list[dict[int, Fraction]]:
        if n not in inv:
            tests = enumerate_tests(A, n)
            idx = {t: k for k, t in enumerate(tests)}
            sgn = -1 if n % 2 else 1
            eqs = []
            for k, t in enumerate(tests):
                j = idx[rotate(t)]
                row = {k: Fraction(1)}
                row[j] = row.get(j, 0) - sgn
                row = {c: v for c, v in row.items() if v}
                if row:
                    eqs.append(row)
            inv[n] = linalg.kernel_basis((eqs, len(tests)))
        return inv[n]

    def image(n: int, vecs):
        cols = H.cols(n)
        out = []
        for v in vecs:
            w: dict[int, Fraction] = {}
            for c, x in v.items():
                for r, a in cols[c].items():
                    w[r] = w.get(r, 0) + a * x
            out.append({r: y for r, y in w.items() if y})
        return out

    dims = []
    for n in range(nmax + 1):
        basis = invariant_basis(n)
        r_out = linalg.span_rank(image(n, basis))
        r_in = linalg.span_rank(image(n - 1, invariant_basis(n - 1))) if n > 0 else 0
        dims.append(len(basis) - r_out - r_in)
    return dims


# ---------------------------------------------------------------------------
# relative cohomology and the long exact sequence of a pair


@dataclass
class RelativePair:
    """An ambient algebra B and a subalgebra A given by its element set in B."""

    ambient: EffectAlgebra
    sub: frozenset[int]

    def __post_init__(self):
        self.sub = frozenset(self.sub)
        if not is_subalgebra(self.ambient, self.sub):
            raise NotSubalgebraError("relative pair needs a subalgebra")

    def partition(self, n: int) -> tuple[list[int], list[int]]:
        """Indices of A-tests and of the remaining tests in T_n(B)."""
        T = test_table(self.ambient, n)
        a_tests, rest = [], []
        for k, t in enumerate(T.tests):
            (a_tests if self.sub.issuperset(t) else rest).append(k)
        return a_tests, rest

    def complexes(self) -> tuple[SubComplex, SubComplex, SubComplex]:
        """(relative, ambient, sub) as coordinate views of the ambient cyclic complex."""
        cx = cyclic_complex(self.ambient)
        return cx.sub(outside=self.sub), cx.sub(), cx.sub(within=self.sub)


def relative_dims(pair: RelativePair, nmax: int) -> CohomologyTable:
    rel, _, _ = pair.complexes()
    return CohomologyTable(RELATIVE, _dims(rel, nmax), pair.ambient.name)


def _connecting_image(pair_rel: SubComplex, ambient: SubComplex, n: int, z: Vector) -> Vector:
    # extend by zero (same coordinates), apply the ambient coboundary, keep relative rows
    w = ambient.delta(n, z)
    rel_keys = set(pair_rel.keys(n + 1))
    leftover = {k: x for k, x in w.items() if k not in rel_keys}
    if leftover:
        raise AssertionError("coboundary of a lifted cocycle is nonzero on sub-tests")
    return w


def connecting_hom(pair: RelativePair, n: int) -> Matrix:
    """The connecting map HC^n(A) -> HC^{n+1}(B, A) on cohomology bases.

    Independence of representatives is verified: coboundaries of A map to
    relative coboundaries.
    """
    rel, amb, sub = pair.complexes()
    for b in sub.coboundaries(n):
        img = _connecting_image(rel, amb, n, b)
        if img and rel.induced_rank(n + 1, [img]) != 0:
            raise AssertionError("connecting map depends on the representative")
    basis = sub.cohomology_basis(n)
    images = [_connecting_image(rel, amb, n, z) for z in basis]
    if not rel.cohomology_basis(n + 1):
        return Matrix.zeros(0, len(basis))
    return rel.class_coordinates(n + 1, images)


def exactness_row(node: str, dim: int, rank_in: int, rank_out: int, composite_zero: bool) -> dict:
    return {
        "node": node,
        "dim": dim,
        "rank_in": rank_in,
        "rank_out": rank_out,
        "composite_zero": composite_zero,
        "exact": composite_zero and rank_in + rank_out == dim,
    }


def les_exactness_check(pair: RelativePair, nmax: int) -> Report:
    """Exactness of ... -> HC^n(B,A) -> HC^n(B) -> HC^n(A) -> HC^{n+1}(B,A) -> ...

    Every map is built on cocycle representatives; at each node the report
    records (dim, rank in, rank out) and whether the composite through the
    node vanishes in cohomology.
    """
    rel, amb, sub = pair.complexes()
    rep = Report(f"long exact sequence of ({pair.ambient.name}, subalgebra)")

    def incl_images(n):  # HC^n(B,A) -> HC^n(B)
        return rel.cocycles(n)

    def p_images(n, vecs):  # restriction to A coordinates
        keep = set(sub.keys(n))
        return [{k: x for k, x in v.items() if k in keep} for v in vecs]

    def d_images(n, vecs):
        return [_connecting_image(rel, amb, n, v) for v in vecs]

    for n in range(nmax + 1):
        # node HC^n(B,A): in = connecting from HC^{n-1}(A), out = inclusion
        r_in = rel.induced_rank(n, d_images(n - 1, sub.cocycles(n - 1))) if n > 0 else 0
        r_out = amb.induced_rank(n, incl_images(n))
        comp = amb.induced_rank(n, d_images(n - 1, sub.cocycles(n - 1))) == 0 if n > 0 else True
        rep.rows.append(exactness_row(f"HC^{n}(B,A)", rel.dim(n), r_in, r_out, comp))
        # node HC^n(B)
        r_in2 = r_out
        r_out2 = sub.induced_rank(n, p_images(n, amb.cocycles(n)))
        comp2 = sub.induced_rank(n, p_images(n, incl_images(n))) == 0
        rep.rows.append(exactness_row(f"HC^{n}(B)", amb.dim(n), r_in2, r_out2, comp2))
        # node HC^n(A)
        r_in3 = r_out2
        r_out3 = rel.induced_rank(n + 1, d_images(n, sub.cocycles(n)))
        comp3 = rel.induced_rank(n + 1, d_images(n, p_images(n, amb.cocycles(n)))) == 0
        rep.rows.append(exactness_row(f"HC^{n}(A)", sub.dim(n), r_in3, r_out3, comp3))
    for row in rep.rows:
        rep.expect(row["exact"], f"not exact at {row['node']}: {row}")
    return rep
