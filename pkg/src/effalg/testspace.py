"""Tests T_n(A) and the cyclic-set operators on them.

A test of degree n is a tuple of n+1 element indices whose left-associated
sum is 1. Tests of a degree are enumerated once per algebra in
lexicographic order and cached on the algebra.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

from .algebra import EffectAlgebra
from .report import SizeCapError, ValidationReport

DEFAULT_TEST_CAP = 2_000_000

Test = tuple[int, ...]


def count_tests(A: EffectAlgebra, n: int) -> int:
    """|T_n(A)| without enumerating, by dynamic programming over partial sums."""
    if n < 0:
        raise ValueError("degree must be >= 0")
    ways = {A.zero: 1}
    for _ in range(n):
        nxt: dict[int, int] = {}
        for s, w in ways.items():
            for x in A.partners(s):
                y = A.add(s, x)
                nxt[y] = nxt.get(y, 0) + w
        ways = nxt
    return sum(ways.values())


def enumerate_tests(A: EffectAlgebra, n: int, cap: int = DEFAULT_TEST_CAP) -> tuple[Test, ...]:
    key = ("tests", n)
    hit = A._cache.get(key)
    if hit is not None:
        if len(hit) > cap:
            raise SizeCapError(f"T_{n} holds {len(hit)} tests, above the cap of {cap}")
        return hit
    if n < 0:
        raise ValueError("degree must be >= 0")
    projected = count_tests(A, n)
    if projected > cap:
        raise SizeCapError(f"T_{n} would hold {projected} tests, above the cap of {cap}")
    out: list[Test] = []
    prefix: list[int] = []
    one = A.one

    def grow(acc: int, k: int) -> None:
        if k == n:
            out.append((*prefix, A.comp(acc)))
            return
        for x in A.partners(acc):
            prefix.append(x)
            grow(A.add(acc, x), k + 1)
            prefix.pop()

    if n == 0:
        out.append((one,))
    else:
        grow(A.zero, 0)
    res = tuple(out)
    A._cache[key] = res
    return res


def is_test(A: EffectAlgebra, t: Test) -> bool:
    return len(t) >= 1 and A.add_all(t) == A.one


def face(A: EffectAlgebra, t: Test, i: int) -> Test:
    """Add neighbours i and i+1; the last face wraps around to the front."""
    n = len(t) - 1
    if n < 1 or not 0 <= i <= n:
        raise IndexError(f"face {i} undefined on a test of degree {n}")
    if i < n:
        s = A.add(t[i], t[i + 1])
        return (*t[:i], s, *t[i + 2:])
    return (A.add(t[n], t[0]), *t[1:n])


def degeneracy(A: EffectAlgebra, t: Test, i: int) -> Test:
    """Insert a zero at position i (i == len(t) appends)."""
    if not 0 <= i <= len(t):
        raise IndexError(f"degeneracy {i} undefined on a test of length {len(t)}")
    return (*t[:i], A.zero, *t[i:])


def rotate(t: Test, k: int = 1) -> Test:
    """Cyclic right shift by k places."""
    k %= len(t)
    if k == 0:
        return tuple(t)
    return (*t[-k:], *t[:-k])


def orbit(t: Test) -> list[Test]:
    out = [tuple(t)]
    r = rotate(t)
    while r != out[0]:
        out.append(r)
        r = rotate(r)
    return out


@dataclass
class TestTable:
    """Tests of one degree with their rotation orbits.

    ``sign[k]`` is the factor relating an invariant cochain's value on test k
    to its value on the orbit representative: alpha(rot^j rep) = (-1)^(n j) alpha(rep).
    An orbit carries a basis vector of the invariant cochains iff that rule is
    consistent around the orbit, i.e. n is even or the orbit size is even.
    """

    algebra: EffectAlgebra
    degree: int
    tests: tuple[Test, ...]
    orbit_of: list[int]
    sign: list[int]
    reps: list[int]
    sizes: list[int]

    @cached_property
    def index(self) -> dict[Test, int]:
        return {t: k for k, t in enumerate(self.tests)}

    @cached_property
    def contributing(self) -> list[bool]:
        n = self.degree
        return [n % 2 == 0 or d % 2 == 0 for d in self.sizes]

    def __len__(self) -> int:
        return len(self.tests)


def test_table(A: EffectAlgebra, n: int, cap: int = DEFAULT_TEST_CAP) -> TestTable:
    key = ("table", n)
    hit = A._cache.get(key)
    if hit is not None and len(hit.tests) <= cap:
        return hit
    tests = enumerate_tests(A, n, cap)
    index = {t: k for k, t in enumerate(tests)}
    orbit_of = [-1] * len(tests)
    sign = [0] * len(tests)
    reps: list[int] = []
    sizes: list[int] = []
    for k, t in enumerate(tests):
        if orbit_of[k] >= 0:
            continue
        oid = len(reps)
        reps.append(k)
        members = orbit(t)
        sizes.append(len(members))
        for j, u in enumerate(members):
            m = index[u]
            orbit_of[m] = oid
            sign[m] = -1 if (n * j) % 2 else 1
    table = TestTable(A, n, tests, orbit_of, sign, reps, sizes)
    table.index = index
    A._cache[key] = table
    return table


def verify_cyclic_relations(A: EffectAlgebra, nmax: int) -> ValidationReport:
    """Exhaustively check the cyclic-set identities on T_0..T_nmax.

    Faces d_0..d_n and rotation t obey the usual cyclic relations
    (d_i d_j = d_{j-1} d_i for i < j, d_i t = t d_{i-1}, d_0 t = d_n,
    t^{n+1} = 1). Inserting a zero at position j (1 <= j <= n) plays the
    role of the simplicial degeneracy s_{j-1}; inserting it in front is the
    extra degeneracy, tied to the others by s_0-front = t s_last.
    """
    rep = ValidationReport(f"cyclic relations on {A.name or 'algebra'}")
    d = lambda t, i: face(A, t, i)  # noqa: E731

    def s(t: Test, j: int) -> Test:
        # simplicial degeneracy s_j on a test of degree m, j = 0..m
        return degeneracy(A, t, j + 1)

    for n in range(nmax + 1):
        tests = enumerate_tests(A, n)
        for t in tests:
            if not is_test(A, t):
                rep.add("membership", n, t)
            r = t
            for _ in range(n + 1):
                r = rotate(r)
            if r != t:
                rep.add("rotation order", t)
            if not is_test(A, rotate(t)):
                rep.add("rotation closure", t)
            for i in range(n + 1):
                if n >= 1:
                    f = d(t, i)
                    if not is_test(A, f):
                        rep.add("face closure", t, i)
                if not is_test(A, degeneracy(A, t, i)):
                    rep.add("degeneracy closure", t, i)
            if n >= 2:
                for j in range(n + 1):
                    for i in range(j):
                        if d(d(t, j), i) != d(d(t, i), j - 1):
                            rep.add("d_i d_j = d_{j-1} d_i", t, i, j)
            if n >= 1:
                lt = rotate(t)
                if d(lt, 0) != d(t, n):
                    rep.add("d_0 t = d_n", t)
                for i in range(1, n + 1):
                    if d(lt, i) != rotate(d(t, i - 1)):
                        rep.add("d_i t = t d_{i-1}", t, i)
            # degeneracies s_0..s_n : T_n -> T_{n+1}
            for j in range(n + 1):
                sj = s(t, j)
                for i in range(n + 2):
                    lhs = d(sj, i)
                    if i < j:
                        rhs = s(d(t, i), j - 1) if n >= 1 else None
                    elif i in (j, j + 1):
                        rhs = t
                    else:
                        rhs = s(d(t, i - 1), j) if n >= 1 else None
                    if rhs is not None and lhs != rhs:
                        rep.add("d_i s_j", t, i, j)
                for i in range(j + 1):
                    if s(s(t, j), i) != s(s(t, i), j + 1):
                        rep.add("s_i s_j = s_{j+1} s_i", t, i, j)
                if j >= 1 and s(rotate(t), j) != rotate(s(t, j - 1)):
                    rep.add("s_j t = t s_{j-1}", t, j)
            if s(rotate(t), 0) != rotate(s(t, n), 2):
                rep.add("s_0 t = t^2 s_n", t)
            if degeneracy(A, t, 0) != rotate(s(t, n)):
                rep.add("front zero = t s_n", t)
    return rep
