"""File formats: the Greechie DSL, explicit tables, states, maps and boxes.

Greechie DSL (UTF-8, ``#`` starts a comment)::

    algebra firefly
    atoms: a b c d e
    test: a b e
    test: c d e

Explicit tables are JSON objects
``{"name", "elements", "zero", "one", "sums": [[i, j, k], ...], "complement"}``.
Rationals are always written as "p/q" strings.
"""

from __future__ import annotations

import csv
import io as _io
import json
from fractions import Fraction
from importlib import resources
from pathlib import Path
from typing import Any

from .algebra import (
    EffectAlgebra,
    GreechieDiagram,
    Morphism,
    _checked,
    from_greechie,
    generated_subset,
)
from .bell import NoSignalingBox
from .report import EffectAlgebraError, InadmissibleDiagramError
from .states import AdditiveMap, additive_space


class InputError(EffectAlgebraError):
    """Malformed input file; ``line`` and ``column`` are 1-based when known."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None, source: str = ""):
        where = ""
        if line is not None:
            where = f"{source + ':' if source else ''}{line}:{column or 1}: "
        super().__init__(where + message)
        self.line = line
        self.column = column


def fmt_rational(v: Fraction) -> str:
    v = Fraction(v)
    return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"


def parse_rational(s: Any) -> Fraction:
    if isinstance(s, bool) or isinstance(s, float):
        raise InputError(f"rational expected as an integer or 'p/q' string, got {s!r}")
    try:
        return Fraction(str(s).strip())
    except (ValueError, ZeroDivisionError) as e:
        raise InputError(f"not a rational: {s!r}") from e


# ---------------------------------------------------------------------------
# Greechie DSL


def parse_greechie_dsl(text: str, source: str = "") -> GreechieDiagram:
    name = ""
    atoms: list[str] | None = None
    lines: list[tuple[int, ...]] = []
    seen_name = False
    for ln, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0]
        if not body.strip():
            continue
        col = len(body) - len(body.lstrip()) + 1
        stripped = body.strip()
        if stripped.startswith("algebra") and (len(stripped) == 7 or stripped[7].isspace()):
            parts = stripped.split()
            if len(parts) != 2:
                raise InputError("expected 'algebra <name>'", ln, col, source)
            if seen_name:
                raise InputError("algebra name given twice", ln, col, source)
            name, seen_name = parts[1], True
            continue
        key, sep, rest = stripped.partition(":")
        key = key.strip()
        if not sep or key not in ("atoms", "test"):
            raise InputError(f"expected 'algebra', 'atoms:' or 'test:', got {stripped.split()[0]!r}", ln, col, source)
        tokens = _tokens(body, body.index(":") + 1)
        if key == "atoms":
            if atoms is not None:
                raise InputError("atoms declared twice", ln, col, source)
            names = [t for t, _ in tokens]
            for t, c in tokens:
                if names.count(t) > 1:
                    raise InputError(f"atom {t!r} declared twice", ln, c, source)
            atoms = names
            continue
        if atoms is None:
            raise InputError("'test:' before 'atoms:'", ln, col, source)
        if not tokens:
            raise InputError("empty test", ln, col, source)
        idx, used = [], set()
        for t, c in tokens:
            if t not in atoms:
                raise InputError(f"unknown atom {t!r}", ln, c, source)
            if t in used:
                raise InputError(f"atom {t!r} repeated in a test", ln, c, source)
            used.add(t)
            idx.append(atoms.index(t))
        lines.append(tuple(idx))
    if atoms is None:
        raise InputError("no 'atoms:' line", source=source)
    if not lines:
        raise InputError("no 'test:' lines", source=source)
    d = GreechieDiagram(tuple(atoms), tuple(lines), name)
    problems = d.validate()
    if problems:
        raise InadmissibleDiagramError("bad diagram: " + "; ".join(problems))
    return d


def _tokens(body: str, start: int) -> list[tuple[str, int]]:
    out, i = [], start
    while i < len(body):
        if body[i].isspace():
            i += 1
            continue
        j = i
        while j < len(body) and not body[j].isspace():
            j += 1
        out.append((body[i:j], i + 1))
        i = j
    return out


def serialize_greechie(d: GreechieDiagram) -> str:
    out = []
    if d.name:
        out.append(f"algebra {d.name}")
    out.append("atoms: " + " ".join(d.atoms))
    out.extend("test: " + " ".join(d.atoms[i] for i in line) for line in d.lines)
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------------------
# explicit tables


def algebra_to_json(A: EffectAlgebra) -> dict:
    return {
        "name": A.name,
        "elements": list(A.labels),
        "zero": A.zero,
        "one": A.one,
        "sums": [[a, b, c] for a, b, c in sorted(A.sum_items())],
        "complement": [A.comp(a) for a in range(A.size)],
    }


def algebra_from_json(obj: Any, source: str = "") -> EffectAlgebra:
    if not isinstance(obj, dict):
        raise InputError("explicit table must be a JSON object", source=source)
    missing = [k for k in ("elements", "zero", "one", "sums", "complement") if k not in obj]
    if missing:
        raise InputError(f"explicit table lacks {missing}", source=source)
    els = obj["elements"]
    if not isinstance(els, list) or len(set(map(str, els))) != len(els):
        raise InputError("'elements' must be a list of distinct names", source=source)
    n = len(els)

    def idx(v, what):
        if not isinstance(v, int) or isinstance(v, bool) or not 0 <= v < n:
            raise InputError(f"{what}: {v!r} is not an element index", source=source)
        return v

    sums = []
    for t in obj["sums"]:
        if not isinstance(t, list) or len(t) != 3:
            raise InputError(f"sum entry {t!r} is not a triple", source=source)
        sums.append(tuple(idx(v, "sum entry") for v in t))
    comp = [idx(v, "complement") for v in obj["complement"]]
    if len(comp) != n:
        raise InputError("one complement per element is required", source=source)
    A = EffectAlgebra(els, idx(obj["zero"], "zero"), idx(obj["one"], "one"), sums, comp, name=str(obj.get("name", "")))
    return _checked(A)


# ---------------------------------------------------------------------------
# algebras by path or corpus name

CORPUS = ("L1", "P2", "P3", "P4", "P5", "firefly", "bike", "bike_half_a", "bike_half_b", "pentagon", "bell_EA", "bell_EB")


def corpus_path(name: str) -> Path | None:
    root = resources.files("effalg") / "corpus"
    for cand in (name, name + ".ea", name + ".json"):
        p = root / cand
        if p.is_file():
            return Path(str(p))
    return None


def load_algebra(ref: str | Path) -> EffectAlgebra:
    """Load from a ``.ea`` or ``.json`` file, or by bundled corpus name."""
    path = Path(ref)
    if not path.is_file():
        found = corpus_path(str(ref))
        if found is None:
            raise InputError(f"no such file or corpus algebra: {ref}")
        path = found
    text = _read(path)
    if path.suffix == ".json":
        try:
            obj = json.loads(text)
        except json.JSONDecodeError as e:
            raise InputError(e.msg, e.lineno, e.colno, path.name) from e
        A = algebra_from_json(obj, path.name)
    else:
        A = from_greechie(parse_greechie_dsl(text, path.name))
    if not A.name:
        A.name = path.stem
    return A


def _read(path: Path) -> str:
    try:
        return path.read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as e:
        raise InputError(f"cannot read {path}: {e}") from e


def _read_json(path: str | Path) -> Any:
    path = Path(path)
    try:
        return json.loads(_read(path))
    except json.JSONDecodeError as e:
        raise InputError(e.msg, e.lineno, e.colno, path.name) from e


def subalgebra_spec(A: EffectAlgebra, spec: str) -> frozenset[int]:
    """Subalgebra generated by comma-separated element labels, e.g. ``a,b,e``."""
    labels = [s.strip() for s in spec.split(",") if s.strip()]
    if not labels:
        raise InputError("empty subalgebra spec")
    try:
        seed = [A.index(s) for s in labels]
    except (KeyError, ValueError) as e:
        raise InputError(f"unknown element in subalgebra spec: {e}") from e
    return generated_subset(A, seed)


# ---------------------------------------------------------------------------
# states and maps


def state_to_json(m: AdditiveMap) -> dict:
    return {"algebra": m.algebra.name, "values": m.to_dict()}


def state_from_json(obj: Any, A: EffectAlgebra, source: str = "") -> AdditiveMap:
    if not isinstance(obj, dict) or not isinstance(obj.get("values"), dict):
        raise InputError("state file needs a 'values' object", source=source)
    if obj.get("algebra") not in (None, A.name):
        raise InputError(f"state is for algebra {obj['algebra']!r}, not {A.name!r}", source=source)
    vals = {}
    for k, v in obj["values"].items():
        if k not in A.labels:
            raise InputError(f"state names unknown element {k!r}", source=source)
        vals[k] = parse_rational(v)
    try:
        return AdditiveMap.from_labels(A, vals)
    except ValueError as e:
        raise InputError(str(e), source=source) from e


def _resolve(ref: str | Path, what: str) -> Path:
    path = Path(ref)
    if path.is_file():
        return path
    found = corpus_path(str(ref))
    if found is None:
        raise InputError(f"no such {what} file: {ref}")
    return found


def load_state(path: str | Path, A: EffectAlgebra) -> AdditiveMap:
    path = _resolve(path, "state")
    return state_from_json(_read_json(path), A, path.name)


def morphism_to_json(f: Morphism) -> dict:
    A, B = f.source, f.target
    return {"source": A.name, "target": B.name, "map": {A.label(x): B.label(f(x)) for x in range(A.size)}}


def morphism_from_json(obj: Any, A: EffectAlgebra, B: EffectAlgebra, source: str = "") -> Morphism:
    """Images of labelled elements; entries left out are filled in from the
    atoms by additivity (so giving the atoms is enough)."""
    if not isinstance(obj, dict) or not isinstance(obj.get("map"), dict):
        raise InputError("map file needs a 'map' object", source=source)
    given: dict[int, int] = {}
    for k, v in obj["map"].items():
        if k not in A.labels:
            raise InputError(f"map names unknown source element {k!r}", source=source)
        if v not in B.labels:
            raise InputError(f"map names unknown target element {v!r}", source=source)
        given[A.index(k)] = B.index(v)
    S = additive_space(A)
    given.setdefault(A.zero, B.zero)
    missing = [A.label(a) for a in S.atoms if a not in given]
    table = []
    for x in range(A.size):
        if x in given:
            table.append(given[x])
            continue
        if missing:
            raise InputError(f"map gives no image for atoms {missing}", source=source)
        y = B.zero
        for j, m in sorted(S.word[x].items()):
            for _ in range(m):
                y = B.add(y, given[S.atoms[j]])
                if y is None:
                    raise InputError(f"images of the atoms of {A.label(x)} are not summable", source=source)
        table.append(y)
    f = Morphism(A, B, tuple(table))
    rep = f.check()
    if not rep.ok:
        raise InputError("not a morphism: " + rep.lines()[0], source=source)
    return f


def load_morphism(path: str | Path, A: EffectAlgebra, B: EffectAlgebra) -> Morphism:
    path = _resolve(path, "map")
    return morphism_from_json(_read_json(path), A, B, path.name)


# ---------------------------------------------------------------------------
# boxes


def box_from_csv(text: str, source: str = "") -> NoSignalingBox:
    rows = []
    for ln, row in enumerate(csv.reader(_io.StringIO(text)), start=1):
        if not row or all(not c.strip() for c in row) or row[0].lstrip().startswith("#"):
            continue
        if len(row) != 4:
            raise InputError(f"expected 4 entries, got {len(row)}", ln, 1, source)
        vals = []
        for c in row:
            try:
                vals.append(Fraction(c.strip()))
            except (ValueError, ZeroDivisionError) as e:
                raise InputError(f"not a rational: {c.strip()!r}", ln, 1, source) from e
        rows.append(tuple(vals))
    if len(rows) != 4:
        raise InputError(f"expected 4 rows, got {len(rows)}", source=source)
    return NoSignalingBox(tuple(rows))


def box_to_csv(box: NoSignalingBox) -> str:
    return "".join(",".join(r) + "\n" for r in box.to_strings())


def load_box(path: str | Path) -> NoSignalingBox:
    path = _resolve(path, "box")
    return box_from_csv(_read(path), path.name)
