"""Command-line front end: ``momentlag <verb> [inputs] [flags]``.

Inputs are JSON documents, either bare (a polytope ``{"m", "A", "b"}``, a
quadric system ``{"Gamma", "delta", "J"}``, a complex ``{"n",
"min_nonfaces"}``) or wrapped as corpus fixtures.  A path of ``-`` reads
stdin; a bare file name that does not exist locally is looked up in the
embedded fixture directory.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Optional, Sequence

from . import corpus
from .errors import GoldenMismatch, InvalidInput, MomentLagError, NotMonotone
from .face_ring import SimplicialComplex, wedge_complex
from .koszul import DEFAULT_CAP, KoszulCochain, cohomology
from .lagrangian import lagrangian_report, minimal_maslov
from .massey import triple_massey
from .polytope import (
    Polytope,
    enumerate_vertices,
    is_bounded,
    is_delzant,
    is_fano,
    is_generic,
    is_irredundant,
    nerve,
)
from .quadrics import (
    QuadricSystem,
    cp_normal_form,
    embeddedness_failures,
    fano_constant,
    is_smooth_nonempty,
    multiwedge,
    polytope_to_quadrics,
    quadrics_nerve,
    quadrics_to_polytope,
)
from .exact_linalg import fraction_str
from .real_complex import z2_betti_real, z2_betti_real_quotient

VERBS = ("check", "gale", "wedge", "cohomology", "real-cohomology", "massey", "maslov", "report", "fixtures")


class UsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# input handling


def read_document(path: str) -> dict:
    if path == "-":
        text = sys.stdin.read()
    else:
        p = Path(path)
        if not p.exists():
            alt = corpus.fixture_dir() / p.name
            if not alt.exists() and not p.suffix:
                alt = corpus.fixture_dir() / f"{p.name}.json"
            if not alt.exists():
                raise UsageError(f"no such file: {path}")
            p = alt
        text = p.read_text()
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path}: not valid JSON ({exc})") from exc


def _unwrap(doc: dict):
    """Return ('polytope' | 'quadrics' | 'complex', payload)."""
    if "kind" in doc and doc["kind"] in doc:
        return doc["kind"], doc[doc["kind"]]
    # output of the wedge and gale verbs, so that verbs can be chained
    for kind in ("quadrics", "polytope", "complex"):
        if set(doc) == {kind} and isinstance(doc[kind], dict):
            return kind, doc[kind]
    if "Gamma" in doc:
        return "quadrics", doc
    if "A" in doc:
        return "polytope", doc
    if "min_nonfaces" in doc:
        return "complex", doc
    raise InvalidInput("unrecognised input document")


def load_polytope(path: str) -> Polytope:
    kind, data = _unwrap(read_document(path))
    if kind == "polytope":
        return Polytope.from_json(data)
    if kind == "quadrics":
        return quadrics_to_polytope(QuadricSystem.from_json(data))
    raise InvalidInput("expected a polytope or a quadric system")


def load_quadrics(path: str) -> QuadricSystem:
    kind, data = _unwrap(read_document(path))
    if kind == "quadrics":
        return QuadricSystem.from_json(data)
    if kind == "polytope":
        return polytope_to_quadrics(Polytope.from_json(data))
    raise InvalidInput("expected a quadric system or a polytope")


def load_complex(args) -> SimplicialComplex:
    if args.complex:
        kind, data = _unwrap(read_document(args.complex))
        if kind == "complex":
            return SimplicialComplex.from_json(data)
        if kind == "polytope":
            return nerve(Polytope.from_json(data))
        return quadrics_nerve(QuadricSystem.from_json(data))
    if args.polytope:
        return nerve(load_polytope(args.polytope))
    if args.quadrics:
        return quadrics_nerve(load_quadrics(args.quadrics))
    raise UsageError("one of --complex, --polytope, --quadrics is required")


def _need_quadrics(args) -> QuadricSystem:
    if args.quadrics:
        return load_quadrics(args.quadrics)
    if args.polytope:
        return polytope_to_quadrics(load_polytope(args.polytope))
    raise UsageError("one of --quadrics, --polytope is required")


def parse_J(text: Optional[str]) -> list[int]:
    if not text:
        raise UsageError("--J is required, e.g. --J 2,3,1,2")
    try:
        return [int(x) for x in text.split(",")]
    except ValueError as exc:
        raise UsageError(f"bad --J value: {text}") from exc


# ---------------------------------------------------------------------------
# verbs


def check_polytope(P: Polytope) -> dict:
    out: dict = {"m": P.m, "n": P.n, "bounded": is_bounded(P)}
    if not out["bounded"]:
        return out
    V = enumerate_vertices(P)
    out["vertices"] = len(V.active_masks)
    out["irredundant"] = is_irredundant(P)
    out["generic"] = is_generic(P)
    out["delzant"] = is_delzant(P) if P.is_integral else False
    out["fano"] = is_fano(P)
    out["nerve"] = nerve(P).to_json()
    return out


def check_quadrics(QS: QuadricSystem) -> dict:
    out: dict = {"rows": QS.rows, "n": QS.n, "smooth_nonempty": is_smooth_nonempty(QS)}
    if not out["smooth_nonempty"]:
        return out
    fails = embeddedness_failures(QS)
    out["embedded"] = not fails
    out["embeddedness_failures"] = [[v + 1 for v in f] for f in fails]
    C = fano_constant(QS)
    out["fano_constant"] = fraction_str(C) if C is not None else None
    try:
        cp = cp_normal_form(QS)
        out["cp_normal_form"] = cp.to_json()
    except MomentLagError as exc:
        out["cp_normal_form"] = None
        out["cp_normal_form_error"] = exc.message
    return out


def cmd_check(args) -> dict:
    if args.polytope:
        return {"polytope": check_polytope(load_polytope(args.polytope))}
    if args.quadrics:
        QS = load_quadrics(args.quadrics)
        out = {"quadrics": check_quadrics(QS)}
        if QS.base_n <= 16 and out["quadrics"]["smooth_nonempty"]:
            out["polytope"] = check_polytope(quadrics_to_polytope(QS))
        return out
    raise UsageError("check needs --polytope or --quadrics")


def cmd_gale(args) -> dict:
    if args.polytope:
        return {"quadrics": polytope_to_quadrics(load_polytope(args.polytope)).to_json()}
    if args.quadrics:
        return {"polytope": quadrics_to_polytope(load_quadrics(args.quadrics)).to_json()}
    raise UsageError("gale needs --polytope or --quadrics")


def cmd_wedge(args) -> dict:
    J = parse_J(args.J)
    if args.complex:
        return {"complex": wedge_complex(load_complex(args), J).to_json()}
    return {"quadrics": multiwedge(_need_quadrics(args), J).to_json()}


def cmd_cohomology(args) -> dict:
    K = load_complex(args)
    table = cohomology(K, args.coeff or "Z", max_degree=args.max_degree, cap=args.cap or DEFAULT_CAP)
    return table.to_json()


def cmd_real(args) -> dict:
    K = load_complex(args)
    cap = args.real_cap
    out = {"coeff": "Z2", "cover": z2_betti_real(K, cap)}
    if not K.is_face_mask(K.full_mask):
        out["quotient"] = z2_betti_real_quotient(K, cap)
    return out


def cmd_massey(args) -> dict:
    K = load_complex(args)
    coeff = args.coeff or "Q"
    if not (args.a and args.b and args.c):
        raise UsageError("massey needs --a, --b and --c cochains")
    a, b, c = (KoszulCochain.parse(K, s, coeff) for s in (args.a, args.b, args.c))
    return triple_massey(a, b, c, coeff).to_json()


def cmd_maslov(args) -> dict:
    QS = _need_quadrics(args)
    result = minimal_maslov(QS, args.assume_simply_connected_fiber)
    if result.value is None:
        raise NotMonotone("the quadric system is not monotone", trail=result.trail)
    return result.to_json()


def cmd_report(args) -> dict:
    QS = _need_quadrics(args)
    kw = {"cap": args.cap} if args.cap else {}
    return lagrangian_report(QS, args.assume_simply_connected_fiber, **kw).to_json()


def cmd_fixtures(args) -> dict:
    from .golden import golden_dir, summarize

    names = args.names or [f.name for f in corpus.FIXTURES]
    results = {}
    ok = True
    for name in names:
        if name not in corpus.BY_NAME:
            raise UsageError(f"unknown fixture {name}")
        summary = summarize(name)
        path = golden_dir() / f"{name}.json"
        if args.update:
            path.write_text(json.dumps(summary, indent=2, ensure_ascii=False) + "\n")
            results[name] = "updated"
            continue
        if not path.exists():
            results[name] = "missing golden file"
            ok = False
            continue
        expected = json.loads(path.read_text())
        same = expected == json.loads(json.dumps(summary))
        results[name] = "ok" if same else "DIFFERS"
        ok = ok and same
    out = {"fixtures": results, "all_match": ok}
    if not ok and not args.update:
        raise GoldenMismatch("fixture outputs differ from golden files", **out)
    return out


HANDLERS = {
    "check": cmd_check,
    "gale": cmd_gale,
    "wedge": cmd_wedge,
    "cohomology": cmd_cohomology,
    "real-cohomology": cmd_real,
    "massey": cmd_massey,
    "maslov": cmd_maslov,
    "report": cmd_report,
    "fixtures": cmd_fixtures,
}


# ---------------------------------------------------------------------------
# output


def render_table(obj, indent: int = 0) -> str:
    pad = "  " * indent
    lines = []
    if isinstance(obj, dict):
        for k, v in obj.items():
            if isinstance(v, (dict, list)) and v and not _flat(v):
                lines.append(f"{pad}{k}:")
                lines.append(render_table(v, indent + 1))
            else:
                lines.append(f"{pad}{k}: {_inline(v)}")
    elif isinstance(obj, list):
        for item in obj:
            if isinstance(item, (dict, list)) and not _flat(item):
                lines.append(f"{pad}-")
                lines.append(render_table(item, indent + 1))
            else:
                lines.append(f"{pad}- {_inline(item)}")
    else:
        lines.append(pad + _inline(obj))
    return "\n".join(lines)


def _flat(v) -> bool:
    if isinstance(v, list):
        return all(not isinstance(x, (dict, list)) for x in v)
    return False


def _inline(v) -> str:
    if isinstance(v, list):
        return " ".join(str(x) for x in v)
    if v is None:
        return "-"
    return str(v)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="momentlag", description="Moment-angle cohomology and monotone Lagrangian certificates.")
    ap.add_argument("verb", choices=VERBS)
    ap.add_argument("names", nargs="*", help="fixture names (fixtures verb only)")
    ap.add_argument("--polytope")
    ap.add_argument("--quadrics")
    ap.add_argument("--complex")
    ap.add_argument("--J", help="comma separated multiplicities for wedge")
    ap.add_argument("--coeff", choices=("Z", "Z2", "Q"))
    ap.add_argument("--max-degree", type=int, dest="max_degree")
    ap.add_argument("--cap", type=int, help="basis-size cap for Koszul computations")
    ap.add_argument("--real-cap", type=int, dest="real_cap", help="vertex cap for the cubical complex (memory grows like 3^n)")
    ap.add_argument("--a")
    ap.add_argument("--b")
    ap.add_argument("--c")
    ap.add_argument("--assume-simply-connected-fiber", action="store_true", dest="assume_simply_connected_fiber")
    ap.add_argument("--format", choices=("json", "table"), default="json")
    ap.add_argument("--update", action="store_true", help="rewrite golden files (fixtures verb)")
    return ap


def run(argv: Optional[Sequence[str]] = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if args.names and args.verb != "fixtures":
        parser.print_usage(stderr)
        print(f"momentlag: unexpected arguments: {' '.join(args.names)}", file=stderr)
        return 2
    try:
        result = HANDLERS[args.verb](args)
    except UsageError as exc:
        parser.print_usage(stderr)
        print(f"momentlag: {exc}", file=stderr)
        return 2
    except MomentLagError as exc:
        print(json.dumps(exc.to_dict(), ensure_ascii=False, default=str), file=stderr)
        return 1
    if args.format == "table":
        print(render_table(result), file=stdout)
    else:
        print(json.dumps(result, indent=2, ensure_ascii=False), file=stdout)
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
