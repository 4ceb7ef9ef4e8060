"""Exact linear programming over the rationals.

Two-phase dense tableau simplex with Bland's rule, so it terminates without
cycling. Every returned point is checked against the original constraints by
exact substitution before it leaves this module.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from . import linalg

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"


def _vec(coeffs, n: int) -> list[Fraction]:
    if isinstance(coeffs, dict):
        v = [Fraction(0)] * n
        for j, x in coeffs.items():
            v[j] = Fraction(x)
        return v
    v = [Fraction(x) for x in coeffs]
    if len(v) != n:
        raise ValueError(f"coefficient vector of length {len(v)} for {n} variables")
    return v


@dataclass
class RationalLP:
    """maximize c.x subject to eq rows a.x = b, ge rows a.x >= b, and x_i >= 0
    for every variable not listed in ``free``. Coefficient vectors may be
    dense sequences or sparse dicts."""

    n: int
    eq: list[tuple] = field(default_factory=list)
    ge: list[tuple] = field(default_factory=list)
    objective: Sequence | dict | None = None
    free: frozenset[int] = frozenset()

    def add_eq(self, coeffs, rhs=0) -> None:
        self.eq.append((coeffs, rhs))

    def add_ge(self, coeffs, rhs=0) -> None:
        self.ge.append((coeffs, rhs))

    def check(self, x: Sequence[Fraction]) -> bool:
        """Exact substitution test of a candidate point."""
        if len(x) != self.n:
            return False
        dot = lambda a: sum((ai * xi for ai, xi in zip(_vec(a, self.n), x)), Fraction(0))  # noqa: E731
        if any(dot(a) != Fraction(b) for a, b in self.eq):
            return False
        if any(dot(a) < Fraction(b) for a, b in self.ge):
            return False
        return all(x[i] >= 0 for i in range(self.n) if i not in self.free)


@dataclass
class LPResult:
    status: str
    x: list[Fraction] | None = None
    value: Fraction | None = None


class _Tableau:
    def __init__(self, rows: list[list[Fraction]], rhs: list[Fraction], basis: list[int]):
        self.T = [r + [b] for r, b in zip(rows, rhs)]
        self.basis = basis

    @property
    def width(self) -> int:
        return len(self.T[0]) - 1 if self.T else 0

    def pivot(self, r: int, c: int) -> None:
        T = self.T
        p = T[r][c]
        if p != 1:
            T[r] = [v / p for v in T[r]]
        pr = T[r]
        for i, row in enumerate(T):
            if i != r and row[c]:
                f = row[c]
                T[i] = [a - f * b if b else a for a, b in zip(row, pr)]
        self.basis[r] = c

    def run(self, cost: list[Fraction], allowed: set[int]) -> str:
        """Minimize cost.x over the current basis with Bland's rule."""
        while True:
            # reduced costs
            red = list(cost) + [Fraction(0)]
            for i, b in enumerate(self.basis):
                cb = cost[b]
                if cb:
                    red = [rj - cb * tij for rj, tij in zip(red, self.T[i])]
            enter = next((j for j in range(self.width) if j in allowed and red[j] < 0), None)
            if enter is None:
                return OPTIMAL
            best, leave = None, None
            for i, row in enumerate(self.T):
                a = row[enter]
                if a > 0:
                    ratio = row[-1] / a
                    if best is None or ratio < best or (ratio == best and self.basis[i] < self.basis[leave]):
                        best, leave = ratio, i
            if leave is None:
                return UNBOUNDED
            self.pivot(leave, enter)

    def solution(self, ncols: int) -> list[Fraction]:
        x = [Fraction(0)] * ncols
        for i, b in enumerate(self.basis):
            if b < ncols:
                x[b] = self.T[i][-1]
        return x


def optimize(p: RationalLP) -> LPResult:
    n = p.n
    # column layout: original variables, negative parts of free variables, slacks
    neg = {i: n + k for k, i in enumerate(sorted(p.free))}
    ns = len(p.ge)
    ncols = n + len(neg) + ns
    rows, rhs = [], []
    for k, (a, b) in enumerate(list(p.eq) + list(p.ge)):
        v = _vec(a, n)
        row = v + [-v[i] for i in sorted(p.free)] + [Fraction(0)] * ns
        if k >= len(p.eq):
            row[n + len(neg) + k - len(p.eq)] = Fraction(-1)
        b = Fraction(b)
        if b < 0:
            row, b = [-x for x in row], -b
        rows.append(row)
        rhs.append(b)
    m = len(rows)
    # phase one with one artificial per row
    full = [r + [Fraction(int(i == j)) for j in range(m)] for i, r in enumerate(rows)]
    tab = _Tableau(full, rhs, [ncols + i for i in range(m)])
    cost1 = [Fraction(0)] * ncols + [Fraction(1)] * m
    tab.run(cost1, set(range(ncols + m)))
    if any(tab.T[i][-1] != 0 for i, b in enumerate(tab.basis) if b >= ncols):
        return LPResult(INFEASIBLE)
    # drive artificials out of the basis; drop redundant rows
    keep = []
    for i in range(m):
        b = tab.basis[i]
        if b >= ncols:
            c = next((j for j in range(ncols) if tab.T[i][j]), None)
            if c is None:
                continue
            tab.pivot(i, c)
        keep.append(i)
    tab.T = [tab.T[i][:ncols] + [tab.T[i][-1]] for i in keep]
    tab.basis = [tab.basis[i] for i in keep]
    cost2 = [Fraction(0)] * ncols
    if p.objective is not None:
        c = _vec(p.objective, n)
        for i in range(n):
            cost2[i] = -c[i]
        for i, j in neg.items():
            cost2[j] = c[i]
    if tab.T:
        status = tab.run(cost2, set(range(ncols)))
    else:
        status = UNBOUNDED if any(c < 0 for c in cost2) else OPTIMAL
    y = tab.solution(ncols) if tab.T else [Fraction(0)] * ncols
    x = y[:n]
    for i, j in neg.items():
        x[i] -= y[j]
    if not p.check(x):
        raise AssertionError("simplex produced a point violating the constraints")
    if status == UNBOUNDED:
        return LPResult(UNBOUNDED, x)
    value = sum((ci * xi for ci, xi in zip(_vec(p.objective, n), x)), Fraction(0)) if p.objective is not None else Fraction(0)
    return LPResult(OPTIMAL, x, value)


def _reduce(p: RationalLP) -> tuple[RationalLP, list[Fraction], list[dict[int, Fraction]]] | None:
    """Eliminate the equality rows: x = x0 + N y with y free.

    Returns the reduced problem in y together with (x0, N), or None when
    the equalities are inconsistent.
    """
    n = p.n
    rows = [{j: Fraction(v) for j, v in enumerate(_vec(a, n)) if v} for a, _ in p.eq]
    x0 = linalg.solve((rows, n), [Fraction(b) for _, b in p.eq])
    if x0 is None:
        return None
    N = linalg.kernel_basis((rows, n))
    k = len(N)

    def sub(a) -> tuple[list[Fraction], Fraction]:
        v = _vec(a, n)
        return [sum((v[j] * x for j, x in col.items()), Fraction(0)) for col in N], sum(
            (vi * xi for vi, xi in zip(v, x0)), Fraction(0)
        )

    q = RationalLP(k, free=frozenset(range(k)))
    for a, b in p.ge:
        c, off = sub(a)
        q.add_ge(c, Fraction(b) - off)
    for i in range(n):
        if i not in p.free:
            q.add_ge([col.get(i, Fraction(0)) for col in N], -x0[i])
    if p.objective is not None:
        q.objective = sub(p.objective)[0]
    return q, x0, N


def _lift(y: Sequence[Fraction], x0: list[Fraction], N: list[dict[int, Fraction]]) -> list[Fraction]:
    x = list(x0)
    for yj, col in zip(y, N):
        if yj:
            for i, v in col.items():
                x[i] += yj * v
    return x


def solve_lp(p: RationalLP, presolve: bool = True) -> LPResult:
    """optimize(), after eliminating equality rows exactly when ``presolve``."""
    if not presolve or not p.eq:
        return optimize(p)
    red = _reduce(p)
    if red is None:
        return LPResult(INFEASIBLE)
    q, x0, N = red
    res = optimize(q)
    if res.status == INFEASIBLE:
        return res
    x = _lift(res.x, x0, N)
    if not p.check(x):
        raise AssertionError("presolved point violates the original constraints")
    value = None
    if res.status == OPTIMAL:
        value = sum((ci * xi for ci, xi in zip(_vec(p.objective, p.n), x)), Fraction(0)) if p.objective is not None else Fraction(0)
    return LPResult(res.status, x, value)


def lp_feasible(p: RationalLP, presolve: bool = True) -> list[Fraction] | None:
    """A feasible point (verified by substitution) or None."""
    q = RationalLP(p.n, p.eq, p.ge, None, p.free)
    res = solve_lp(q, presolve)
    return res.x if res.status != INFEASIBLE else None
