"""Finite effect algebras: construction, axiom checking, structural data.

Elements are dense integer indices ``0..size-1``. The partial sum is stored
as one dict per element mapping each summable partner to the result, so the
usual queries (``add``, ``partners``, the order) are table lookups.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Sequence

from .report import (
    EffectAlgebraError,
    InadmissibleDiagramError,
    NotOrthoalgebraError,
    NotSubalgebraError,
    SizeCapError,
    ValidationReport,
)

DEFAULT_ELEMENT_CAP = 4096


class EffectAlgebra:
    """A finite partial commutative structure with 0, 1 and complements.

    Instances are treated as immutable. Nothing is validated here; the
    named constructors in this module run :func:`verify_axioms` and refuse
    invalid results, and raw tables from files go through the same check.
    """

    def __init__(
        self,
        labels: Sequence[str],
        zero: int,
        one: int,
        sums: dict[tuple[int, int], int] | Iterable[tuple[int, int, int]],
        complement: Sequence[int],
        name: str = "",
    ):
        self._labels = tuple(str(x) for x in labels)
        self._zero = zero
        self._one = one
        self._comp = tuple(complement)
        self.name = name
        n = len(self._labels)
        table: list[dict[int, int]] = [dict() for _ in range(n)]
        items = sums.items() if isinstance(sums, dict) else ((a, b, c) for a, b, c in sums)
        for item in items:
            if isinstance(sums, dict):
                (a, b), c = item
            else:
                a, b, c = item
            if not (0 <= a < n and 0 <= b < n and 0 <= c < n):
                raise EffectAlgebraError(f"sum entry {(a, b, c)} out of range for {n} elements")
            table[a][b] = c
        self._sum = table
        self._partners = tuple(tuple(sorted(row)) for row in table)
        self._index = {lab: i for i, lab in enumerate(self._labels)}
        self._leq: list[frozenset[int]] | None = None
        self._cache: dict = {}

    # basic accessors -------------------------------------------------------

    @property
    def size(self) -> int:
        return len(self._labels)

    def __len__(self) -> int:
        return len(self._labels)

    @property
    def zero(self) -> int:
        return self._zero

    @property
    def one(self) -> int:
        return self._one

    @property
    def labels(self) -> tuple[str, ...]:
        return self._labels

    @property
    def complement_table(self) -> tuple[int, ...]:
        return self._comp

    def label(self, a: int) -> str:
        return self._labels[a]

    def index(self, label: str) -> int:
        try:
            return self._index[label]
        except KeyError:
            raise EffectAlgebraError(f"no element labelled {label!r}") from None

    def add(self, a: int, b: int) -> int | None:
        """``a ⊞ b``, or None when undefined."""
        return self._sum[a].get(b)

    def summable(self, a: int, b: int) -> bool:
        return b in self._sum[a]

    def comp(self, a: int) -> int:
        return self._comp[a]

    def partners(self, a: int) -> tuple[int, ...]:
        return self._partners[a]

    def sum_items(self):
        for a, row in enumerate(self._sum):
            for b, c in row.items():
                yield a, b, c

    def add_all(self, elems: Iterable[int]) -> int | None:
        """Left-associated iterated sum; None as soon as a partial sum is undefined."""
        acc = self._zero
        for x in elems:
            acc = self._sum[acc].get(x)
            if acc is None:
                return None
        return acc

    def down_set(self, b: int) -> frozenset[int]:
        """All ``a`` with ``a <= b``."""
        if self._leq is None:
            below: list[set[int]] = [set() for _ in range(self.size)]
            for a, row in enumerate(self._sum):
                for c in row.values():
                    below[c].add(a)
            self._leq = [frozenset(s) for s in below]
        return self._leq[b]

    def leq(self, a: int, b: int) -> bool:
        return a in self.down_set(b)

    def is_orthoalgebra(self) -> bool:
        return all(a == self._zero or a not in self._sum[a] for a in range(self.size))

    def __repr__(self) -> str:
        nm = f" {self.name!r}" if self.name else ""
        return f"<EffectAlgebra{nm} with {self.size} elements>"


@dataclass(frozen=True)
class Morphism:
    source: EffectAlgebra
    target: EffectAlgebra
    map: tuple[int, ...]

    def __call__(self, a: int) -> int:
        return self.map[a]

    def check(self) -> ValidationReport:
        """Structure preservation: 0, 1, complements and defined sums."""
        A, B, f = self.source, self.target, self.map
        rep = ValidationReport("morphism")
        if len(f) != A.size:
            rep.add("table size", len(f), A.size)
            return rep
        if f[A.zero] != B.zero:
            rep.add("preserves 0", A.zero, f[A.zero])
        if f[A.one] != B.one:
            rep.add("preserves 1", A.one, f[A.one])
        for a in range(A.size):
            if f[A.comp(a)] != B.comp(f[a]):
                rep.add("preserves complement", a)
        for a, b, c in A.sum_items():
            if B.add(f[a], f[b]) != f[c]:
                rep.add("preserves sums", a, b, c)
        return rep

    @property
    def injective(self) -> bool:
        return len(set(self.map)) == len(self.map)

    @property
    def strong(self) -> bool:
        A, B, f = self.source, self.target, self.map
        for a in range(A.size):
            for b in range(A.size):
                if B.summable(f[a], f[b]) and not A.summable(a, b):
                    return False
        return True

    def image(self) -> frozenset[int]:
        return frozenset(self.map)


@dataclass(frozen=True)
class GreechieDiagram:
    """Atoms and lines (maximal tests) of a finite orthoalgebra."""

    atoms: tuple[str, ...]
    lines: tuple[tuple[int, ...], ...]
    name: str = ""

    def validate(self) -> list[str]:
        problems = []
        covered = set()
        for k, line in enumerate(self.lines):
            if not line:
                problems.append(f"line {k} is empty")
            if len(set(line)) != len(line):
                problems.append(f"line {k} repeats an atom")
            for i in line:
                if not 0 <= i < len(self.atoms):
                    problems.append(f"line {k} refers to unknown atom index {i}")
            covered.update(line)
        for i, a in enumerate(self.atoms):
            if i not in covered:
                problems.append(f"atom {a!r} lies on no line")
        if len(set(self.atoms)) != len(self.atoms):
            problems.append("duplicate atom names")
        sets = [frozenset(line) for line in self.lines]
        for i, j in itertools.permutations(range(len(sets)), 2):
            if sets[i] <= sets[j] and (sets[i] != sets[j] or i < j):
                problems.append(f"line {i} is contained in line {j}")
        return problems


# ---------------------------------------------------------------------------
# axioms


def verify_axioms(A: EffectAlgebra) -> ValidationReport:
    """Exhaustively check the effect-algebra axioms; violations come with witnesses."""
    rep = ValidationReport(A.name or "algebra")
    n = A.size
    if not (0 <= A.zero < n and 0 <= A.one < n) or len(A.complement_table) != n:
        rep.add("table sizes", n, A.zero, A.one, len(A.complement_table))
        return rep
    if any(not 0 <= c < n for c in A.complement_table):
        rep.add("table sizes", "complement out of range")
        return rep

    for a, b, c in A.sum_items():
        if A.add(b, a) != c:
            rep.add("commutativity", a, b)
    for a in range(n):
        for b in A.partners(a):
            ab = A.add(a, b)
            for c in A.partners(ab):
                bc = A.add(b, c)
                if bc is None or A.add(a, bc) != A.add(ab, c):
                    rep.add("associativity", a, b, c)
    for a in range(n):
        if A.add(A.zero, a) != a:
            rep.add("zero", a)
    for a in range(n):
        if A.add(a, A.comp(a)) != A.one:
            rep.add("orthocomplement", a, A.comp(a))
        others = [x for x in A.partners(a) if A.add(a, x) == A.one and x != A.comp(a)]
        if others:
            rep.add("orthocomplement uniqueness", a, A.comp(a), others[0])
    for a in A.partners(A.one):
        if a != A.zero:
            rep.add("zero-one law", a)
    for b in range(n):
        for a in A.down_set(b):
            if a != b and b in A.down_set(a):
                rep.add("antisymmetry", a, b)
    return rep


def describe_violations(A: EffectAlgebra, rep: ValidationReport, limit: int = 3) -> str:
    """Violations with element indices replaced by labels."""

    def show(w):
        return A.label(w) if isinstance(w, int) and 0 <= w < A.size else str(w)

    return "; ".join(f"{v.axiom} at ({', '.join(show(w) for w in v.witness)})" for v in rep.violations[:limit])


def _checked(A: EffectAlgebra) -> EffectAlgebra:
    rep = verify_axioms(A)
    if not rep.ok:
        raise EffectAlgebraError("construction violates the axioms: " + describe_violations(A, rep))
    return A


def _cap(n: int, cap: int) -> None:
    if n > cap:
        raise SizeCapError(f"{n} elements exceeds the cap of {cap}")


# ---------------------------------------------------------------------------
# constructors


def build_L1() -> EffectAlgebra:
    return EffectAlgebra(["0", "1"], 0, 1, [(0, 0, 0), (0, 1, 1), (1, 0, 1)], [1, 0], name="L1")


def build_powerset(m: int, atom_names: Sequence[str] | None = None, cap: int = DEFAULT_ELEMENT_CAP) -> EffectAlgebra:
    """The Boolean algebra of subsets of an m-set; sum is disjoint union."""
    if m < 1:
        raise EffectAlgebraError("powerset needs m >= 1")
    if m.bit_length() > 20:
        raise SizeCapError(f"2^{m} elements exceeds the cap of {cap}")
    _cap(2**m, cap)
    names = list(atom_names) if atom_names is not None else [f"x{i + 1}" for i in range(m)]
    if len(names) != m:
        raise EffectAlgebraError("need one name per atom")
    full = 2**m - 1
    labels = []
    for s in range(2**m):
        if s == 0:
            labels.append("0")
        elif s == full:
            labels.append("1")
        else:
            labels.append("+".join(names[i] for i in range(m) if s >> i & 1))
    sums = [(a, b, a | b) for a in range(2**m) for b in range(2**m) if not a & b]
    comp = [full ^ s for s in range(2**m)]
    return EffectAlgebra(labels, 0, full, sums, comp, name=f"P({m})")


def product(A: EffectAlgebra, B: EffectAlgebra, cap: int = DEFAULT_ELEMENT_CAP) -> EffectAlgebra:
    """Cartesian product with pointwise operations; (a, b) has index a*|B| + b."""
    _cap(A.size * B.size, cap)
    nb = B.size
    labels = [f"({x},{y})" for x in A.labels for y in B.labels]
    sums = []
    for a1, a2, a3 in A.sum_items():
        for b1, b2, b3 in B.sum_items():
            sums.append((a1 * nb + b1, a2 * nb + b2, a3 * nb + b3))
    comp = [A.comp(a) * nb + B.comp(b) for a in range(A.size) for b in range(nb)]
    return _checked(
        EffectAlgebra(labels, A.zero * nb + B.zero, A.one * nb + B.one, sums, comp,
                      name=f"{A.name or 'A'}x{B.name or 'B'}")
    )


def coproduct(A: EffectAlgebra, B: EffectAlgebra, cap: int = DEFAULT_ELEMENT_CAP) -> EffectAlgebra:
    """Disjoint union with the two zeros and the two ones identified.

    Index layout: 0, 1, then A's other elements, then B's.
    """
    _cap(A.size + B.size - 2, cap)
    amap, bmap = {A.zero: 0, A.one: 1}, {B.zero: 0, B.one: 1}
    labels = ["0", "1"]
    for a in range(A.size):
        if a not in amap:
            amap[a] = len(labels)
            labels.append(A.label(a))
    taken = set(labels)
    for b in range(B.size):
        if b not in bmap:
            bmap[b] = len(labels)
            lab = B.label(b)
            while lab in taken:
                lab = lab + "'"
            taken.add(lab)
            labels.append(lab)
    sums = {}
    for a, b, c in A.sum_items():
        sums[amap[a], amap[b]] = amap[c]
    for a, b, c in B.sum_items():
        sums[bmap[a], bmap[b]] = bmap[c]
    comp = [0] * len(labels)
    for a in range(A.size):
        comp[amap[a]] = amap[A.comp(a)]
    for b in range(B.size):
        comp[bmap[b]] = bmap[B.comp(b)]
    return _checked(EffectAlgebra(labels, 0, 1, sums, comp, name=f"{A.name or 'A'}+{B.name or 'B'}"))


def coprojections(A: EffectAlgebra, B: EffectAlgebra, AB: EffectAlgebra) -> tuple[Morphism, Morphism]:
    """The two coprojections into ``AB = coproduct(A, B)``, following its index layout."""
    ia, ib = [0] * A.size, [0] * B.size
    nxt = 2
    for a in range(A.size):
        if a == A.zero:
            ia[a] = 0
        elif a == A.one:
            ia[a] = 1
        else:
            ia[a] = nxt
            nxt += 1
    for b in range(B.size):
        if b == B.zero:
            ib[b] = 0
        elif b == B.one:
            ib[b] = 1
        else:
            ib[b] = nxt
            nxt += 1
    return Morphism(A, AB, tuple(ia)), Morphism(B, AB, tuple(ib))


def from_greechie(d: GreechieDiagram, cap: int = DEFAULT_ELEMENT_CAP) -> EffectAlgebra:
    """Paste the Boolean blocks of a Greechie diagram into one orthoalgebra.

    Elements are classes of (line, atom subset) pairs under the closure of:
    equal atom sets are identified, and identified pairs have identified
    in-line complements. Sums exist only between disjoint representatives
    inside one line. The result is axiom-checked; a diagram whose pasting
    is inconsistent raises :class:`InadmissibleDiagramError`.
    """
    problems = d.validate()
    if problems:
        raise InadmissibleDiagramError("bad diagram: " + "; ".join(problems))
    lines = [frozenset(line) for line in d.lines]
    nodes: list[tuple[int, frozenset[int]]] = []
    node_id: dict[tuple[int, frozenset[int]], int] = {}
    for l, line in enumerate(d.lines):
        for r in range(len(line) + 1):
            for sub in itertools.combinations(line, r):
                key = (l, frozenset(sub))
                node_id[key] = len(nodes)
                nodes.append(key)

    parent = list(range(len(nodes)))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(x: int, y: int) -> bool:
        rx, ry = find(x), find(y)
        if rx == ry:
            return False
        parent[max(rx, ry)] = min(rx, ry)
        return True

    by_set: dict[frozenset[int], list[int]] = {}
    for i, (_, s) in enumerate(nodes):
        by_set.setdefault(s, []).append(i)
    for ids in by_set.values():
        for j in ids[1:]:
            union(ids[0], j)

    def comp_node(i: int) -> int:
        l, s = nodes[i]
        return node_id[(l, lines[l] - s)]

    changed = True
    while changed:
        changed = False
        classes: dict[int, list[int]] = {}
        for i in range(len(nodes)):
            classes.setdefault(find(i), []).append(i)
        for members in classes.values():
            c0 = comp_node(members[0])
            for m in members[1:]:
                if union(c0, comp_node(m)):
                    changed = True

    classes = {}
    for i in range(len(nodes)):
        classes.setdefault(find(i), []).append(i)
    _cap(len(classes), cap)

    for members in classes.values():
        seen_lines: dict[int, frozenset[int]] = {}
        for i in members:
            l, s = nodes[i]
            if l in seen_lines and seen_lines[l] != s:
                names = lambda t: "{" + ",".join(d.atoms[k] for k in sorted(t)) + "}"  # noqa: E731
                raise InadmissibleDiagramError(
                    f"pasting identifies {names(seen_lines[l])} with {names(s)} inside line {l}"
                )
            seen_lines[l] = s
        singles = {next(iter(nodes[i][1])) for i in members if len(nodes[i][1]) == 1}
        if len(singles) > 1:
            raise InadmissibleDiagramError(
                "pasting identifies the distinct atoms " + ", ".join(d.atoms[k] for k in sorted(singles))
            )

    def min_rep(members: list[int]) -> tuple[int, tuple[int, ...]]:
        return min((len(nodes[i][1]), tuple(sorted(nodes[i][1]))) for i in members)

    zero_root = find(node_id[(0, frozenset())])
    one_root = find(node_id[(0, lines[0])])
    roots = sorted(
        (r for r in classes if r not in (zero_root, one_root)), key=lambda r: min_rep(classes[r])
    )
    order = [zero_root, *roots, one_root]
    idx = {r: k for k, r in enumerate(order)}
    labels = []
    for r in order:
        if r == zero_root:
            labels.append("0")
        elif r == one_root:
            labels.append("1")
        else:
            labels.append("+".join(d.atoms[k] for k in min_rep(classes[r])[1]))

    elem = [idx[find(i)] for i in range(len(nodes))]
    sums: dict[tuple[int, int], int] = {}
    for l, line in enumerate(d.lines):
        subsets = [frozenset(s) for r in range(len(line) + 1) for s in itertools.combinations(line, r)]
        for s, t in itertools.product(subsets, repeat=2):
            if s & t:
                continue
            x, y = elem[node_id[(l, s)]], elem[node_id[(l, t)]]
            z = elem[node_id[(l, s | t)]]
            prev = sums.setdefault((x, y), z)
            if prev != z:
                raise InadmissibleDiagramError(
                    f"sum {labels[x]} + {labels[y]} is ambiguous ({labels[prev]} vs {labels[z]})"
                )
    comp = [0] * len(order)
    for i in range(len(nodes)):
        comp[elem[i]] = elem[comp_node(i)]
    A = EffectAlgebra(labels, 0, len(order) - 1, sums, comp, name=d.name)
    rep = verify_axioms(A)
    if not rep.ok:
        raise InadmissibleDiagramError("pasted structure is not an effect algebra: " + describe_violations(A, rep), rep)
    return A


# ---------------------------------------------------------------------------
# subalgebras


def is_subalgebra(A: EffectAlgebra, subset: Iterable[int]) -> bool:
    s = frozenset(subset)
    if A.zero not in s or A.one not in s:
        return False
    for a in s:
        if A.comp(a) not in s:
            return False
        for b in A.partners(a):
            if b in s and A.add(a, b) not in s:
                return False
    return True


def restrict(A: EffectAlgebra, subset: Iterable[int], name: str = "") -> tuple[EffectAlgebra, Morphism]:
    """The subset with inherited operations, plus its inclusion into ``A``.

    Elements keep the ambient order. The subset must be a subalgebra.
    """
    elems = sorted(set(subset))
    if not is_subalgebra(A, elems):
        raise NotSubalgebraError(f"subset of size {len(elems)} is not a subalgebra of {A.name or 'the algebra'}")
    pos = {e: i for i, e in enumerate(elems)}
    sums = []
    for a in elems:
        for b in A.partners(a):
            if b in pos:
                sums.append((pos[a], pos[b], pos[A.add(a, b)]))
    comp = [pos[A.comp(a)] for a in elems]
    S = EffectAlgebra([A.label(a) for a in elems], pos[A.zero], pos[A.one], sums, comp, name=name)
    return S, Morphism(S, A, tuple(elems))


def generated_subset(A: EffectAlgebra, seed: Iterable[int]) -> frozenset[int]:
    s = set(seed) | {A.zero, A.one}
    frontier = list(s)
    while frontier:
        new = []
        for a in frontier:
            cands = [A.comp(a)] + [A.add(a, b) for b in A.partners(a) if b in s]
            for c in cands:
                if c not in s:
                    s.add(c)
                    new.append(c)
        frontier = new
    return frozenset(s)


def subalgebra_generated(A: EffectAlgebra, seed: Iterable[int], name: str = "") -> tuple[EffectAlgebra, Morphism]:
    """Smallest subalgebra containing ``seed``, with its strong injective inclusion."""
    seed = list(seed)
    if not seed:
        raise EffectAlgebraError("seed must be nonempty")
    return restrict(A, generated_subset(A, seed), name=name)


def intersect_subalgebras(E: EffectAlgebra, A: Iterable[int], B: Iterable[int], name: str = "") -> tuple[EffectAlgebra, Morphism]:
    A, B = frozenset(A), frozenset(B)
    for nm, s in (("first", A), ("second", B)):
        if not is_subalgebra(E, s):
            raise NotSubalgebraError(f"{nm} subset is not a subalgebra")
    return restrict(E, A & B, name=name)


# ---------------------------------------------------------------------------
# structure


def atoms(A: EffectAlgebra) -> list[int]:
    """Minimal nonzero elements."""
    return [a for a in range(A.size) if a != A.zero and A.down_set(a) == {A.zero, a}]


def maximal_tests(A: EffectAlgebra) -> list[tuple[int, ...]]:
    """Tests made only of atoms, as sorted index tuples (orthoalgebras only)."""
    if not A.is_orthoalgebra():
        raise NotOrthoalgebraError("maximal tests / blocks need an orthoalgebra")
    cached = A._cache.get("maximal_tests")
    if cached is not None:
        return cached
    ats = atoms(A)
    found = []

    def grow(start: int, acc: int, chosen: list[int]) -> None:
        if acc == A.one:
            found.append(tuple(chosen))
            return
        for k in range(start, len(ats)):
            nxt = A.add(acc, ats[k])
            if nxt is not None:
                chosen.append(ats[k])
                grow(k + 1, nxt, chosen)
                chosen.pop()

    grow(0, A.zero, [])
    A._cache["maximal_tests"] = found
    return found


@dataclass(frozen=True)
class Block:
    atoms: tuple[int, ...]
    elements: frozenset[int]


def blocks(A: EffectAlgebra) -> list[Block]:
    """Maximal Boolean subalgebras, one per maximal test."""
    out = []
    for test in maximal_tests(A):
        elems = set()
        for r in range(len(test) + 1):
            for sub in itertools.combinations(test, r):
                elems.add(A.add_all(sub))
        out.append(Block(test, frozenset(elems)))
    return out


def height(A: EffectAlgebra) -> int:
    """Length of the longest chain 0 < a1 < ... < 1 (brute force over the order)."""
    memo: dict[int, int] = {A.one: 0}
    order = sorted(range(A.size), key=lambda x: -len(A.down_set(x)))
    for x in order:
        if x in memo:
            continue
        best = 0
        for c in A.partners(x):
            if c != A.zero:
                best = max(best, 1 + memo[A.add(x, c)])
        memo[x] = best
    return memo[A.zero]


def is_union(E: EffectAlgebra, A: Iterable[int], B: Iterable[int], nmax: int | None = None) -> bool:
    """Whether every element of E lies in A or B.

    When it does, every enumerated test up to degree ``nmax`` (default: the
    height) is additionally confirmed to be a test on A or on B.
    """
    A, B = frozenset(A), frozenset(B)
    if not (A | B) >= set(range(E.size)):
        return False
    from .testspace import enumerate_tests

    top = height(E) if nmax is None else nmax
    for n in range(top + 1):
        for t in enumerate_tests(E, n):
            s = set(t)
            if not (s <= A or s <= B):
                raise AssertionError(f"test {t} of a union lies in neither part")
    return True


# ---------------------------------------------------------------------------
# isomorphism


def find_isomorphism(A: EffectAlgebra, B: EffectAlgebra) -> tuple[int, ...] | None:
    """A bijection preserving 0, 1, complements and the sum table, or None."""
    if A.size != B.size or sum(len(A.partners(a)) for a in range(A.size)) != sum(
        len(B.partners(b)) for b in range(B.size)
    ):
        return None

    def sig(X: EffectAlgebra, x: int) -> tuple[int, int, int]:
        up = sum(1 for y in range(X.size) if x in X.down_set(y))
        return (len(X.partners(x)), len(X.down_set(x)), up)

    sa = [sig(A, a) for a in range(A.size)]
    sb = [sig(B, b) for b in range(B.size)]
    if sorted(sa) != sorted(sb):
        return None
    order = sorted(range(A.size), key=lambda a: (a != A.zero, a != A.one, sa[a][1], a))
    cands = {a: [b for b in range(B.size) if sb[b] == sa[a]] for a in range(A.size)}
    f: dict[int, int] = {}
    used: set[int] = set()

    def consistent(a: int, b: int) -> bool:
        ca = A.comp(a)
        if ca in f and f[ca] != B.comp(b):
            return False
        if ca == a and B.comp(b) != b:
            return False
        for x, y in f.items():
            s1, s2 = A.add(a, x), B.add(b, y)
            if (s1 is None) != (s2 is None):
                return False
            if s1 is not None and s1 in f and f[s1] != s2:
                return False
            if s1 == a and s2 != b:
                return False
        # sums landing on a must land on b
        for x, y in f.items():
            for z, w in f.items():
                if A.add(x, z) == a and B.add(y, w) != b:
                    return False
        return True

    def search(k: int) -> bool:
        if k == len(order):
            return True
        a = order[k]
        for b in cands[a]:
            if b in used or not consistent(a, b):
                continue
            f[a] = b
            used.add(b)
            if search(k + 1):
                return True
            del f[a]
            used.discard(b)
        return False

    if not search(0):
        return None
    result = tuple(f[a] for a in range(A.size))
    if not Morphism(A, B, result).check().ok:
        return None
    return result


def is_isomorphic(A: EffectAlgebra, B: EffectAlgebra) -> bool:
    return find_isomorphism(A, B) is not None
