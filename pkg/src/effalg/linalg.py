"""Exact rational linear algebra.

``Matrix`` is the dense public type. The elimination kernels work on sparse
rows (``dict`` column -> value) because coboundary matrices have a handful
of nonzeros per row; dense input is converted on the way in. Integer rows
are eliminated fraction-free (cross-multiplication plus content removal),
everything else over :class:`fractions.Fraction`. No floating point.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence

Row = dict[int, int | Fraction]


class DimensionError(ValueError):
    pass


class Matrix:
    """Dense row-major matrix of Fractions."""

    __slots__ = ("rows", "cols", "_data")

    def __init__(self, data: Sequence[Sequence], cols: int | None = None):
        self._data = [[Fraction(x) for x in r] for r in data]
        self.rows = len(self._data)
        if cols is None:
            cols = len(self._data[0]) if self._data else 0
        self.cols = cols
        if any(len(r) != cols for r in self._data):
            raise DimensionError("ragged matrix")

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "Matrix":
        return cls([[0] * cols for _ in range(rows)], cols)

    @classmethod
    def identity(cls, n: int) -> "Matrix":
        return cls([[int(i == j) for j in range(n)] for i in range(n)], n)

    @classmethod
    def from_sparse(cls, rows: Sequence[Row], cols: int) -> "Matrix":
        data = [[0] * cols for _ in rows]
        for i, r in enumerate(rows):
            for j, v in r.items():
                data[i][j] = v
        return cls(data, cols)

    def sparse_rows(self) -> list[Row]:
        return [{j: v for j, v in enumerate(r) if v} for r in self._data]

    def __getitem__(self, ij: tuple[int, int]) -> Fraction:
        i, j = ij
        return self._data[i][j]

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    @property
    def entries(self) -> list[Fraction]:
        return [x for r in self._data for x in r]

    def tolist(self) -> list[list[Fraction]]:
        return [list(r) for r in self._data]

    def transpose(self) -> "Matrix":
        return Matrix([[self._data[i][j] for i in range(self.rows)] for j in range(self.cols)], self.rows)

    @property
    def T(self) -> "Matrix":
        return self.transpose()

    def __matmul__(self, other):
        if isinstance(other, Matrix):
            if self.cols != other.rows:
                raise DimensionError(f"{self.shape} @ {other.shape}")
            ot = other.transpose()._data
            return Matrix([[sum((a * b for a, b in zip(r, c)), Fraction(0)) for c in ot] for r in self._data], other.cols)
        vec = list(other)
        if len(vec) != self.cols:
            raise DimensionError(f"{self.shape} @ vector of length {len(vec)}")
        return [sum((a * Fraction(b) for a, b in zip(r, vec)), Fraction(0)) for r in self._data]

    def is_zero(self) -> bool:
        return all(x == 0 for r in self._data for x in r)

    def __eq__(self, other) -> bool:
        return isinstance(other, Matrix) and self.shape == other.shape and self._data == other._data

    def __repr__(self) -> str:
        return f"Matrix({self.rows}x{self.cols})"


def _as_rows(M) -> tuple[list[Row], int]:
    if isinstance(M, Matrix):
        return M.sparse_rows(), M.cols
    rows, cols = M
    return list(rows), cols


# ---------------------------------------------------------------------------
# elimination kernels


def _int_row(r: Row) -> dict[int, int] | None:
    out = {}
    for j, v in r.items():
        if isinstance(v, Fraction):
            if v.denominator != 1:
                return None
            v = v.numerator
        if v:
            out[j] = int(v)
    return out


def _primitive(r: dict[int, int]) -> dict[int, int]:
    g = 0
    for v in r.values():
        g = gcd(g, v)
        if g == 1:
            return r
    if g > 1:
        return {j: v // g for j, v in r.items()}
    return r


def echelon_int(rows: Iterable[dict[int, int]]) -> dict[int, dict[int, int]]:
    """Fraction-free row echelon form of an integer matrix.

    Returns pivot column -> primitive integer row whose smallest column is
    the pivot. Rows are processed in order of increasing weight so that
    sparse pivots are placed first.
    """
    pivots: dict[int, dict[int, int]] = {}
    for r in sorted((dict(r) for r in rows if r), key=len):
        r = {j: v for j, v in r.items() if v}
        while r:
            c = min(r)
            p = pivots.get(c)
            if p is None:
                pivots[c] = _primitive(r)
                break
            a, b = p[c], r[c]
            g = gcd(a, b)
            ma, mb = a // g, b // g
            if ma != 1:
                r = {j: v * ma for j, v in r.items()}
            for j, v in p.items():
                nv = r.get(j, 0) - mb * v
                if nv:
                    r[j] = nv
                else:
                    r.pop(j, None)
            if r:
                r = _primitive(r)
    return pivots


def echelon_frac(rows: Iterable[Row]) -> dict[int, dict[int, Fraction]]:
    """Row echelon form over Q with unit pivots: pivot column -> row."""
    pivots: dict[int, dict[int, Fraction]] = {}
    for r in sorted((dict(r) for r in rows if r), key=len):
        r = {j: Fraction(v) for j, v in r.items() if v}
        while r:
            c = min(r)
            p = pivots.get(c)
            if p is None:
                lead = r[c]
                pivots[c] = {j: v / lead for j, v in r.items()}
                break
            f = r[c]
            for j, v in p.items():
                nv = r.get(j, 0) - f * v
                if nv:
                    r[j] = nv
                else:
                    r.pop(j, None)
    return pivots


def _echelon(rows: list[Row]) -> dict[int, Row]:
    int_rows = []
    for r in rows:
        ir = _int_row(r)
        if ir is None:
            return echelon_frac(rows)
        int_rows.append(ir)
    return echelon_int(int_rows)


def rref(rows: list[Row]) -> dict[int, dict[int, Fraction]]:
    """Reduced row echelon form over Q: pivot column -> row with 1 at the pivot and
    zeros in every other pivot column."""
    ech = _echelon(rows)
    piv: dict[int, dict[int, Fraction]] = {}
    for c in sorted(ech, reverse=True):
        r = {j: Fraction(v) for j, v in ech[c].items()}
        lead = r[c]
        if lead != 1:
            r = {j: v / lead for j, v in r.items()}
        for j in [j for j in r if j != c and j in piv]:
            f = r.get(j)
            if not f:
                continue
            for k, v in piv[j].items():
                nv = r.get(k, 0) - f * v
                if nv:
                    r[k] = nv
                else:
                    r.pop(k, None)
        piv[c] = r
    return piv


# ---------------------------------------------------------------------------
# public operations


def rank(M) -> int:
    """Row rank of a Matrix or of ``(sparse_rows, cols)``."""
    rows, _ = _as_rows(M)
    return len(_echelon(rows))


def bareiss_rank(M: Matrix) -> int:
    """Rank by dense fraction-free (Bareiss) elimination; a second route for cross-checks."""
    den = 1
    for x in M.entries:
        den = den * x.denominator // gcd(den, x.denominator)
    a = [[int(x * den) for x in row] for row in M.tolist()]
    m, n = M.rows, M.cols
    r, prev = 0, 1
    for c in range(n):
        p = next((i for i in range(r, m) if a[i][c]), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        for i in range(r + 1, m):
            for j in range(c + 1, n):
                a[i][j] = (a[i][j] * a[r][c] - a[i][c] * a[r][j]) // prev
            a[i][c] = 0
        prev = a[r][c]
        r += 1
        if r == m:
            break
    return r


def kernel_basis(M) -> list[dict[int, Fraction]]:
    """Basis of {x : M x = 0} as sparse vectors."""
    rows, cols = _as_rows(M)
    piv = rref(rows)
    basis = []
    for f in range(cols):
        if f in piv:
            continue
        v = {f: Fraction(1)}
        for c, r in piv.items():
            x = r.get(f)
            if x:
                v[c] = -x
        basis.append(v)
    return basis


def image_basis(M) -> list[dict[int, Fraction]]:
    """Basis of the column space: the pivot columns of M itself."""
    rows, cols = _as_rows(M)
    out = []
    for j in sorted(_echelon(rows)):
        out.append({i: Fraction(r[j]) for i, r in enumerate(rows) if r.get(j)})
    return out


def _transpose(rows: list[Row], cols: int) -> list[Row]:
    out: list[Row] = [dict() for _ in range(cols)]
    for i, r in enumerate(rows):
        for j, v in r.items():
            out[j][i] = v
    return out


def solve(M, b: Sequence) -> list[Fraction] | None:
    """Some x with M x = b exactly, or None if the system is inconsistent."""
    rows, cols = _as_rows(M)
    b = [Fraction(x) for x in b]
    if len(b) != len(rows):
        raise DimensionError(f"{len(rows)} equations but rhs of length {len(b)}")
    aug = []
    for r, bi in zip(rows, b):
        a = dict(r)
        if bi:
            a[cols] = bi
        aug.append(a)
    piv = rref(aug)
    if cols in piv:
        return None
    x = [Fraction(0)] * cols
    for c, r in piv.items():
        x[c] = r.get(cols, Fraction(0))
    return x


def matvec(rows: Sequence[Row], v: dict[int, Fraction] | Sequence) -> list[Fraction]:
    if not isinstance(v, dict):
        v = {j: x for j, x in enumerate(v) if x}
    out = []
    for r in rows:
        s = Fraction(0)
        if len(r) <= len(v):
            for j, a in r.items():
                x = v.get(j)
                if x:
                    s += a * x
        else:
            for j, x in v.items():
                a = r.get(j)
                if a:
                    s += a * x
        out.append(s)
    return out


def sparse_matvec(rows: Sequence[Row], v: dict[int, Fraction]) -> dict[int, Fraction]:
    return {i: s for i, s in enumerate(matvec(rows, v)) if s}


def span_rank(vectors: Iterable[dict]) -> int:
    """Dimension of the span of sparse vectors."""
    return len(_echelon([dict(v) for v in vectors]))
