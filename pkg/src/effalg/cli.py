"""Command-line frontend ``ea``.

Exit status: 0 on success, 1 when a checked property fails or an expected
outcome (``--expect-*``) does not hold, 2 on input errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from typing import Any, Sequence

from . import bell, io, states, theorems
from .algebra import (
    EffectAlgebra,
    blocks,
    generated_subset,
    height,
    is_subalgebra,
)
from .cohomology import CYCLIC, HOCHSCHILD, RelativePair, hc_dims, hh_dims, relative_dims
from .report import EffectAlgebraError, InadmissibleDiagramError, Report
from .testspace import count_tests, enumerate_tests, verify_cyclic_relations

OK, NEGATIVE, INPUT_ERROR = 0, 1, 2

PROPERTIES = (
    "mayer-vietoris",
    "generalized-mv",
    "kunneth-hochschild",
    "kunneth-cyclic",
    "hh-hc-product",
    "coproduct",
    "trivial-tests",
    "height",
    "cyclic-identities",
)


class _Outcome:
    def __init__(self, doc: dict, status: int = OK, text: list[str] | None = None):
        self.doc = doc
        self.status = status
        self.text = text


# ---------------------------------------------------------------------------
# helpers


def _jsonable(x: Any) -> Any:
    if isinstance(x, Fraction):
        return io.fmt_rational(x)
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, (set, frozenset)):
        return sorted(_jsonable(v) for v in x)
    return x


def _rank_strings(row: Any) -> Any:
    """Rank triples go out as strings of exact integers."""
    if isinstance(row, dict) and ("rank_in" in row or any(k.startswith("rank_") for k in row)):
        return {k: (str(v) if (k == "dim" or k.startswith("rank_")) and isinstance(v, int) else v) for k, v in row.items()}
    return row


def _report_doc(rep: Report) -> dict:
    info = dict(rep.info)
    if "les" in info:
        info["les"] = [_rank_strings(r) for r in info["les"]]
    return {
        "name": rep.name,
        "passed": rep.passed,
        "rows": [_rank_strings(r) for r in rep.rows],
        "failures": list(rep.failures),
        "info": info,
    }


def _degree(args, E: EffectAlgebra) -> int:
    """--max-degree, else the height of an orthoalgebra (the first degree the
    Height Theorem guarantees to vanish)."""
    if getattr(args, "max_degree", None) is not None:
        if args.max_degree < 0:
            raise io.InputError("--max-degree must be nonnegative")
        return args.max_degree
    if not E.is_orthoalgebra():
        raise io.InputError(f"{E.name} is not an orthoalgebra; give --max-degree")
    return height(E)


def _labels(E: EffectAlgebra, xs) -> list[str]:
    return [E.label(x) for x in sorted(xs)]


def _find_split(E: EffectAlgebra) -> tuple[frozenset[int], frozenset[int]]:
    """Two proper subalgebras generated by groups of blocks whose union is E."""
    bl = blocks(E)
    n = len(bl)
    everything = frozenset(range(E.size))
    for mask in range(1, 2 ** (n - 1)):
        ga = [b for i, b in enumerate(bl) if mask >> i & 1]
        gb = [b for i, b in enumerate(bl) if not mask >> i & 1]
        A = generated_subset(E, frozenset().union(*(b.elements for b in ga)))
        B = generated_subset(E, frozenset().union(*(b.elements for b in gb)))
        if A != everything and B != everything and A | B == everything:
            return A, B
    raise io.InputError(f"{E.name} has no decomposition into two proper block-generated subalgebras")


def _split(E: EffectAlgebra, spec: str | None) -> tuple[frozenset[int], frozenset[int]]:
    if spec is None:
        return _find_split(E)
    parts = spec.split(";")
    if len(parts) != 2:
        raise io.InputError("--split expects 'labels;labels'")
    return io.subalgebra_spec(E, parts[0]), io.subalgebra_spec(E, parts[1])


def _base_state(p: states.ExtensionProblem) -> states.AdditiveMap:
    """A reference state on the source that extends: a state of the target pulled back."""
    B = p.target
    got = states.faithful_state(B)
    if got is not None:
        tau = got[0]
    else:
        tv = states.two_valued_states(B)
        if not tv:
            raise io.InputError(f"{B.name} has no states")
        tau = tv[0]
    return states.AdditiveMap(p.source, tuple(tau(p.inclusion(x)) for x in range(p.source.size)))


# ---------------------------------------------------------------------------
# commands


def cmd_check(args) -> _Outcome:
    E = io.load_algebra(args.file)
    doc: dict[str, Any] = {
        "algebra": E.name,
        "elements": E.size,
        "orthoalgebra": E.is_orthoalgebra(),
        "axioms": "ok",
    }
    if E.is_orthoalgebra():
        bl = blocks(E)
        doc["atoms"] = len({a for b in bl for a in b.atoms})
        doc["blocks"] = [_labels(E, b.atoms) for b in bl]
        doc["height"] = height(E)
    return _Outcome(doc)


def cmd_tests(args) -> _Outcome:
    E = io.load_algebra(args.file)
    if args.degree < 0:
        raise io.InputError("--degree must be nonnegative")
    doc: dict[str, Any] = {"algebra": E.name, "degree": args.degree, "count": count_tests(E, args.degree)}
    if not args.count_only:
        doc["tests"] = [[E.label(x) for x in t] for t in enumerate_tests(E, args.degree)]
    return _Outcome(doc)


def cmd_cohomology(args) -> _Outcome:
    E = io.load_algebra(args.file)
    nmax = _degree(args, E)
    doc: dict[str, Any] = {"algebra": E.name, "max_degree": nmax}
    if args.relative is not None:
        if args.theory != CYCLIC:
            raise io.InputError("relative cohomology is available for the cyclic theory only")
        sub = io.subalgebra_spec(E, args.relative)
        table = relative_dims(RelativePair(E, sub), nmax)
        doc.update(theory="relative-cyclic", subalgebra=_labels(E, sub), dims=table.dims)
    elif args.theory == CYCLIC:
        doc.update(theory=CYCLIC, dims=hc_dims(E, nmax).dims)
    else:
        doc.update(theory=HOCHSCHILD, dims=hh_dims(E, nmax).dims)
    return _Outcome(doc)


def cmd_verify(args) -> _Outcome:
    E = io.load_algebra(args.file)
    prop = args.property
    other = io.load_algebra(args.other) if args.other else None
    if prop == "mayer-vietoris":
        A, B = _split(E, args.split)
        rep = theorems.mayer_vietoris_check(E, A, B, _degree(args, E))
        rep.info["A"], rep.info["B"] = _labels(E, A), _labels(E, B)
    elif prop == "generalized-mv":
        rep = theorems.generalized_mv_check(E, _degree(args, E), seed=args.seed)
    elif prop == "kunneth-hochschild":
        rep = theorems.kunneth_hochschild_check(E, other or io.load_algebra("P2"), _degree(args, E))
    elif prop == "kunneth-cyclic":
        rep = theorems.kunneth_cyclic_consistency(E, other or io.load_algebra("P2"), args.max_degree)
    elif prop == "hh-hc-product":
        rep = theorems.hh_eq_hc_product_L1_check(E, _degree(args, E))
    elif prop == "coproduct":
        rep = theorems.coproduct_check(E, other or E, _degree(args, E))
    elif prop == "trivial-tests":
        rep = theorems.trivial_tests_check(E, _degree(args, E))
    elif prop == "height":
        rep = theorems.height_vanishing_check(E)
    else:
        nmax = args.max_degree if args.max_degree is not None else 3
        v = verify_cyclic_relations(E, nmax)
        rep = Report(v.subject, failures=[str(x) for x in v.violations], info={"max_degree": nmax})
    doc = {"algebra": E.name, "property": prop, "report": _report_doc(rep)}
    return _Outcome(doc, OK if rep.passed else NEGATIVE)


def cmd_states(args) -> _Outcome:
    E = io.load_algebra(args.file)
    S = states.additive_space(E)
    tv = states.two_valued_states(E)
    doc: dict[str, Any] = {
        "algebra": E.name,
        "atoms": [E.label(a) for a in S.atoms],
        "additive_dimension": len(S.basis()),
        "two_valued_count": len(tv),
    }
    got = states.faithful_state(E)
    doc["faithful_state"] = got[0].to_dict() if got else None
    status = OK
    if args.two_valued:
        doc["two_valued"] = [s.to_dict() for s in tv]
    if args.classical:
        sigma = io.load_state(args.classical, E)
        w = states.is_classical(E, sigma)
        doc["classical"] = w is not None
        if w is not None:
            doc["weights"] = [
                {"state": tv[i].to_dict(), "weight": io.fmt_rational(x)} for i, x in enumerate(w) if x
            ]
        if args.expect_classical and w is None:
            status = NEGATIVE
    return _Outcome(doc, status)


def cmd_extend(args) -> _Outcome:
    A = io.load_algebra(args.base)
    B = io.load_algebra(args.target)
    f = io.load_morphism(args.map, A, B)
    sigma = io.load_state(args.state, A)
    mode = states.SIGNED if args.signed else states.POSITIVE
    try:
        p = states.ExtensionProblem(f, sigma, mode)
    except (EffectAlgebraError, ValueError) as e:
        raise io.InputError(str(e)) from e
    tau = states.extend_state(p)
    doc: dict[str, Any] = {
        "source": A.name,
        "target": B.name,
        "mode": mode,
        "feasible": tau is not None,
        "extension": tau.to_dict() if tau is not None else None,
    }
    if args.check_obstruction:
        sigma0 = _base_state(p)
        doc["obstruction_vanishes"] = states.cyclic_obstruction(p, sigma0)
        doc["reference_state"] = sigma0.to_dict()
        if is_subalgebra(B, f.image()):
            doc["obstruction_vanishes_cohomology"] = states.obstruction_via_cohomology(p, sigma0)
    status = NEGATIVE if args.expect_feasible and tau is None else OK
    return _Outcome(doc, status)


def cmd_bell(args) -> _Outcome:
    box = io.load_box(args.box) if args.box else bell.bell_paper_box()
    everything = not (args.chsh or args.local or args.obstruction)
    doc: dict[str, Any] = {}
    if everything:
        doc["box"] = box.to_strings()
        ns = bell.verify_no_signaling(box)
        doc["no_signaling"] = ns.passed
        if not ns.passed:
            doc["no_signaling_failures"] = ns.failures
        EA, EB = bell.scenario_algebras()
        bi = bell.box_as_bimorphism_check(box, EA, EB)
        doc["bimorphism"] = bi.passed
        if not bi.passed:
            doc["bimorphism_failures"] = bi.failures
    if everything or args.chsh:
        doc["chsh"] = io.fmt_rational(bell.chsh(box))
    if everything or args.local:
        w = bell.is_local(box)
        doc["local"] = w is not None
        if w is not None:
            D = bell.deterministic_boxes()
            doc["weights"] = [
                {"deterministic": D[i].to_strings(), "weight": io.fmt_rational(x)} for i, x in enumerate(w) if x
            ]
    if everything or args.obstruction:
        doc["obstruction"] = bell.bell_obstruction(box)
    text = [doc["chsh"]] if args.chsh and not (args.local or args.obstruction) else None
    return _Outcome(doc, text=text)


# ---------------------------------------------------------------------------
# parsing and output


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", default=argparse.SUPPRESS, help="machine-readable output")
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS, help="seed for randomized steps")
    common.add_argument("--max-degree", type=int, default=argparse.SUPPRESS, dest="max_degree", help="highest degree")

    p = argparse.ArgumentParser(prog="ea", description="Cohomology of finite effect algebras.", parents=[common])
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("check", parents=[common], help="load and validate an algebra")
    s.add_argument("file")
    s.set_defaults(func=cmd_check)

    s = sub.add_parser("tests", parents=[common], help="enumerate tests")
    s.add_argument("file")
    s.add_argument("--degree", type=int, required=True)
    s.add_argument("--count-only", action="store_true")
    s.set_defaults(func=cmd_tests)

    s = sub.add_parser("cohomology", parents=[common], help="cohomology dimensions")
    s.add_argument("file")
    s.add_argument("--theory", choices=[CYCLIC, HOCHSCHILD], default=CYCLIC)
    s.add_argument("--relative", metavar="LABELS", help="subalgebra generated by comma-separated labels")
    s.set_defaults(func=cmd_cohomology)

    s = sub.add_parser("verify", parents=[common], help="check a structural property")
    s.add_argument("file")
    s.add_argument("--property", choices=PROPERTIES, required=True)
    s.add_argument("--with", dest="other", metavar="FILE", help="second algebra for product and coproduct checks")
    s.add_argument("--split", metavar="LABELS;LABELS", help="generators of the two subalgebras for mayer-vietoris")
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("states", parents=[common], help="states and classical realizability")
    s.add_argument("file")
    s.add_argument("--two-valued", action="store_true")
    s.add_argument("--classical", metavar="STATE_JSON")
    s.add_argument("--expect-classical", action="store_true")
    s.set_defaults(func=cmd_states)

    s = sub.add_parser("extend", parents=[common], help="extend a state along an injective morphism")
    s.add_argument("base")
    s.add_argument("target")
    s.add_argument("--map", required=True)
    s.add_argument("--state", required=True)
    s.add_argument("--signed", action="store_true")
    s.add_argument("--check-obstruction", action="store_true")
    s.add_argument("--expect-feasible", action="store_true")
    s.set_defaults(func=cmd_extend)

    s = sub.add_parser("bell", parents=[common], help="the two-party Bell scenario")
    s.add_argument("--box", metavar="CSV")
    s.add_argument("--chsh", action="store_true")
    s.add_argument("--local", action="store_true")
    s.add_argument("--obstruction", action="store_true")
    s.set_defaults(func=cmd_bell)
    return p


def dumps(doc: Any) -> str:
    return json.dumps(_jsonable(doc), sort_keys=True, indent=2) + "\n"


def _text(doc: Any, indent: str = "") -> list[str]:
    out = []
    for k, v in doc.items():
        v = _jsonable(v)
        if isinstance(v, dict):
            out.append(f"{indent}{k}:")
            out.extend(_text(v, indent + "  "))
        elif isinstance(v, list) and v and all(isinstance(r, dict) for r in v):
            out.append(f"{indent}{k}:")
            for r in v:
                out.append(f"{indent}  - " + ", ".join(f"{a}={json.dumps(b)}" for a, b in r.items()))
        elif isinstance(v, list):
            out.append(f"{indent}{k}: " + json.dumps(v))
        elif isinstance(v, bool) or v is None:
            out.append(f"{indent}{k}: {json.dumps(v)}")
        else:
            out.append(f"{indent}{k}: {v}")
    return out


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return INPUT_ERROR if e.code else OK
    as_json = getattr(args, "json", False)
    for k, v in (("seed", 0), ("max_degree", None), ("json", False)):
        if not hasattr(args, k):
            setattr(args, k, v)
    try:
        res = args.func(args)
    except (EffectAlgebraError, ValueError) as e:
        kind = "inadmissible" if isinstance(e, InadmissibleDiagramError) else type(e).__name__
        err = {"error": {"type": kind, "message": str(e)}}
        if as_json:
            sys.stdout.write(dumps(err))
        else:
            sys.stderr.write(f"ea: error: {e}\n")
        return INPUT_ERROR
    if as_json:
        sys.stdout.write(dumps(res.doc))
    else:
        sys.stdout.write("\n".join(res.text if res.text is not None else _text(res.doc)) + "\n")
    return res.status


if __name__ == "__main__":
    sys.exit(main())
