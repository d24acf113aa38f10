"""``pie-lifter``: run the library on a corpus and emit canonical JSON reports.

Exit codes: 0 when every verdict holds, 1 when some verdict fails, 2 on input
errors (unreadable or malformed files, unknown names, mismatched arguments).
"""

from __future__ import annotations

import argparse
import os
import sys
from importlib import resources
from pathlib import Path

from . import __version__
from .acceptance import pie_summary, run_all
from .algebras import (
    InvalidAlgebraDiagram,
    NonInvertibleCanonical,
    cell_class,
    enumerate_algebras,
    get_monad,
    lift_limit,
)
from .cones import LAX, OPLAX, NotPieError, check_cone, sigma_s_limit, verify_universal_property
from .dsl import EXTENSIONS, ParseError, Workspace, corpus_files, load_files, roundtrip
from .fincat import CellClass, small_categories
from .pie_construct import compare_and_report
from .report import (
    Flat,
    category_table,
    describe,
    diagnostics,
    emit_report,
    envelope,
    file_digests,
    label,
    write_atomic,
)
from .twocat import pie_analysis, validate_sigma_family, validate_two_category
from .weights import compare_weighted_conical, grothendieck, weighted_limit

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


class InputError(Exception):
    pass


def default_corpus() -> Path:
    env = os.environ.get("PIE_LIFTER_CORPUS")
    if env:
        return Path(env)
    return Path(str(resources.files("pie_lifter") / "corpus"))


class Session:
    """The workspace for one invocation: corpus files plus any file arguments."""

    def __init__(self, corpus: Path | None, extra: list[Path]):
        files = corpus_files(corpus) if corpus is not None else []
        known = {p.resolve() for p in files}
        for p in extra:
            if p.resolve() not in known:
                files.append(p)
                known.add(p.resolve())
        self.files = files
        try:
            self.ws: Workspace = load_files(files)
        except ParseError as exc:
            raise InputError(str(exc)) from exc
        except OSError as exc:
            raise InputError(f"cannot read input: {exc}") from exc

    def digests(self) -> dict:
        return file_digests(self.files)

    def targets(self, arg: str, kind: str) -> list[str]:
        """Declaration names denoted by ``arg``: a name, or every declaration of
        ``kind`` in the file at path ``arg``."""
        p = Path(arg)
        if p.suffix in EXTENSIONS and p.is_file():
            source = next((str(f) for f in self.files if f.resolve() == p.resolve()), None)
            names = [n for n in self.ws.names(kind) if source is not None and self.ws.origin[n] == source]
            if not names:
                raise InputError(f"{arg}: no {kind} declared in this file")
            return names
        if arg not in self.ws.values:
            raise InputError(f"unknown name {arg!r}")
        if self.ws.kinds[arg] != kind:
            raise InputError(f"{arg!r} is a {self.ws.kinds[arg]}, not a {kind}")
        return [arg]

    def target(self, arg: str, kind: str) -> str:
        names = self.targets(arg, kind)
        if len(names) != 1:
            raise InputError(f"{arg}: several {kind} declarations ({', '.join(names)}); name one")
        return names[0]


def _extra_paths(args) -> list[Path]:
    out = [Path(f) for f in getattr(args, "files", []) or []]
    for attr in ("target", "weight", "diagram"):
        v = getattr(args, attr, None)
        if v and Path(v).suffix in EXTENSIONS and Path(v).is_file():
            out.append(Path(v))
    return out


def _vertices(args):
    return small_categories(args.max_objects, args.max_arrows)


# -- commands ----------------------------------------------------------------------------


def cmd_validate(s: Session, args):
    ws = s.ws
    kinds = {}
    for n in ws.names():
        kinds.setdefault(ws.kinds[n], []).append(n)
    try:
        again = roundtrip(ws)
        round_trip = again == ws
    except ParseError:
        round_trip = False
    result = {"declarations": kinds, "counts": {k: len(v) for k, v in kinds.items()}}
    return result, {"parse_print_roundtrip": round_trip}, {}


def cmd_pie_check(s: Session, args):
    result, verdicts = {}, {}
    for n in s.targets(args.target, "twocat"):
        shape = s.ws.get(n)
        result[n] = pie_summary(shape.two, shape.sigma)
        verdicts[f"{n}:pie"] = result[n]["pie"]
    return result, verdicts, {}


def _limit_report(lim):
    flat = Flat(lim.L)
    A = lim.diagram.dom
    return flat, {
        "limit": flat.table(),
        "projections": {label(o): flat.functor_out(lim.projections[o]) for o in A.objects},
        "cells": {label(f): flat.nat_out(lim.cells[f]) for f in A.one_cells},
    }


def cmd_limit(s: Session, args):
    n = s.target(args.target, "diagram")
    F, sigma = s.ws.get(n), s.ws.shape_of(n).sigma
    orientation = OPLAX if args.oplax else LAX
    lim = sigma_s_limit(F, sigma, orientation)
    _, body = _limit_report(lim)
    result = {"diagram": n, "orientation": orientation, "pie": pie_summary(F.dom, sigma), **body}
    problems = check_cone(lim.cone)
    verdicts = {"cone_valid": not problems}
    witnesses = {"cone_valid": diagnostics(problems[:1])} if problems else {}
    failing = [E for E in _vertices(args) if not verify_universal_property(lim, F, sigma, E)]
    verdicts["universal_property"] = not failing
    if failing:
        witnesses["universal_property"] = {"vertex": category_table(failing[0])}
    result["universal_property_vertices"] = len(_vertices(args))
    return result, verdicts, witnesses


def cmd_weighted(s: Session, args):
    w = s.target(args.weight, "weight")
    n = s.target(args.diagram, "diagram")
    W, F = s.ws.get(w), s.ws.get(n)
    if W.dom != F.dom:
        raise InputError(f"weight {w!r} and diagram {n!r} have different domains")
    K = weighted_limit(W, F)
    result = {"weight": w, "diagram": n, "weighted_limit": Flat(K).table(),
              "pie_weight": pie_summary(grothendieck(W).shape, grothendieck(W).sigma)["pie"]}
    verdicts = {}
    for dual in (False, True):
        r = compare_weighted_conical(W, F, dual)
        tag = "Gamma" if dual else "El"
        result[f"conical_{tag}"] = {"objects": len(r.conical.L.objects), "arrows": len(r.conical.L.arrows)}
        verdicts[f"iso_{tag}"] = r.iso
    return result, verdicts, {}


def cmd_groth(s: Session, args):
    w = s.target(args.weight, "weight")
    el = grothendieck(s.ws.get(w), args.dual)
    A = el.shape
    result = {
        "weight": w,
        "construction": "Gamma" if args.dual else "El",
        "objects": [label(o) for o in A.objects],
        "one_cells": [{"id": label(c), "src": label(A.src[c]), "tgt": label(A.tgt[c]),
                       "marked": c in el.sigma} for c in A.one_cells],
        "two_cells": [{"id": label(g), "src": label(A.src2[g]), "tgt": label(A.tgt2[g])} for g in A.two_cells],
        "counts": {"objects": len(A.objects), "one_cells": len(A.one_cells), "two_cells": len(A.two_cells)},
        "pie": pie_summary(A, el.sigma),
    }
    bad = validate_two_category(A)
    bad_sigma = validate_sigma_family(A, el.sigma)
    verdicts = {"two_category_valid": not bad, "sigma_valid": not bad_sigma}
    witnesses = {}
    if bad:
        witnesses["two_category_valid"] = diagnostics(bad[:1])
    if bad_sigma:
        witnesses["sigma_valid"] = diagnostics(bad_sigma[:1])
    return result, verdicts, witnesses


def cmd_pie_build(s: Session, args):
    n = s.target(args.target, "diagram")
    F, sigma = s.ws.get(n), s.ws.shape_of(n).sigma
    orientation = OPLAX if args.oplax else LAX
    try:
        a = compare_and_report(F, sigma, orientation)
    except NotPieError as exc:
        return {"diagram": n, "pie": pie_summary(F.dom, sigma)}, {"pie": False}, {"pie": str(exc)}

    def counts(C):
        return {"objects": len(C.objects), "arrows": len(C.arrows)}

    result = {
        "diagram": n,
        "orientation": orientation,
        "initials": [label(o) for o in a.pie.initial],
        "initials_product": counts(a.initials_product),
        "arrows_product_factors": len(a.arrows_product.factors),
        "inserter": counts(a.inserter),
        "families": [{"kind": f.kind, "index": [label(x) for x in f.index]} for f in a.families],
        "equifier": counts(a.equifier),
        "final": Flat(a.final).table(provenance=False),
    }
    problems = check_cone(a.cone)
    return result, {"cone_valid": not problems, "iso_to_direct": a.iso}, {}


def cmd_compare(s: Session, args):
    n = s.target(args.target, "diagram")
    F, sigma = s.ws.get(n), s.ws.shape_of(n).sigma
    shape = s.ws.decl(n).header["shape"]
    result, verdicts = {"diagram": n, "direct": {}, "pie": {}, "weighted": {}}, {}
    for o in (LAX, OPLAX):
        lim = sigma_s_limit(F, sigma, o)
        result["direct"][o] = {"objects": len(lim.L.objects), "arrows": len(lim.L.arrows)}
        if pie_analysis(F.dom, sigma):
            iso = compare_and_report(F, sigma, o).iso
            result["pie"][o] = iso
            verdicts[f"pie_{o}"] = iso
    for w in s.ws.names("weight"):
        if s.ws.decl(w).header["shape"] != shape:
            continue
        entry = {}
        for dual in (False, True):
            tag = "Gamma" if dual else "El"
            entry[tag] = compare_weighted_conical(s.ws.get(w), F, dual).iso
            verdicts[f"weighted_{w}_{tag}"] = entry[tag]
        result["weighted"][w] = entry
    result["iso"] = all(verdicts.values())
    return result, verdicts, {}


def cmd_lift(s: Session, args):
    n = s.target(args.target, "algdiagram")
    D = s.ws.get(n)
    try:
        T = get_monad(args.monad)
    except KeyError as exc:
        raise InputError(str(exc.args[0])) from exc
    if D.monad != T:
        raise InputError(f"{n!r} is a diagram of {D.monad.name} algebras, not {T.name}")
    omega = CellClass.parse(args.omega)
    sources = source_algebras_for(T, args)
    base = {"algdiagram": n, "monad": T.name, "omega": omega.value}
    try:
        r = lift_limit(T, D, omega, sources, [CellClass.STRICT, CellClass.PSEUDO])
    except NonInvertibleCanonical as exc:
        return base, {"canonical_invertible": False}, {
            "canonical_invertible": {"object": label(exc.obj), "arrow": label(exc.arrow)}}
    except InvalidAlgebraDiagram as exc:
        return base, {"diagram_valid": False}, {"diagram_valid": diagnostics(exc.diagnostics[:1])}
    except NotPieError as exc:
        return base, {"pie": False}, {"pie": str(exc)}
    flat, body = _limit_report(r.limit)
    l = r.algebra.structure
    structure = {
        "objects": {flat.obj.get(o, label(o)): flat.obj[l.ob[o]] for o in l.dom.objects},
        "arrows": {flat.arr.get(a, label(a)): flat.arr[l.ar[a]] for a in l.dom.arrows},
    }
    projections = {}
    for o, m in r.projections.items():
        projections[label(o)] = {
            "functor": flat.functor_out(m.functor),
            "cell": {flat.obj.get(x, label(x)): label(m.cell.comp[x]) for x in m.cell.dom.objects},
            "class": _class_name(m.cell),
        }
    result = {
        **base,
        **body,
        "structure": structure,
        "algebra_projections": projections,
        "strict_projections": [label(o) for o in r.strict_projections],
        "source_algebras": len(sources),
    }
    names = {"detects_strict": "detects_strictness", "detects_pseudo": "detects_pseudoness"}
    verdicts = {names.get(k, k): v for k, v in r.verdicts.items()}
    witnesses = {names.get(k, k): v for k, v in r.witnesses.items()}
    return result, verdicts, witnesses


def source_algebras_for(T, args):
    out = []
    for C in _vertices(args):
        out.extend(enumerate_algebras(T, C))
    return out


def _class_name(cell) -> str:
    return cell_class(cell).value


def cmd_check_all(s: Session, args):
    directory = Path(args.directory)
    if not directory.is_dir():
        raise InputError(f"{directory}: not a directory")
    try:
        results = run_all(directory, echo=lambda line: print(line, file=sys.stderr))
    except (ParseError, OSError, KeyError, ValueError) as exc:
        raise InputError(f"cannot load corpus {directory}: {exc}") from exc
    criteria = []
    verdicts, witnesses = {}, {}
    for r in results:
        failing = [k for k, v in r.verdicts.items() if not v]
        criteria.append({
            "number": r.number,
            "title": r.title,
            "checks": len(r.verdicts),
            "failing": failing,
            "time_limit_seconds": int(r.limit),
            "within_time": r.in_time,
        })
        verdicts[f"criterion_{r.number}"] = r.passed
        if failing:
            witnesses[f"criterion_{r.number}"] = _jsonable(r.witnesses.get(failing[0]))
    s.files = corpus_files(directory) + sorted(p for p in (directory / "golden").glob("*.json"))
    return {"directory": directory.name, "criteria": criteria}, verdicts, witnesses


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, (str, int, bool)) or x is None:
        return x
    try:
        return describe(x)
    except TypeError:
        return repr(x)


COMMANDS = {
    "validate": cmd_validate,
    "pie-check": cmd_pie_check,
    "limit": cmd_limit,
    "weighted": cmd_weighted,
    "groth": cmd_groth,
    "pie-build": cmd_pie_build,
    "compare": cmd_compare,
    "lift": cmd_lift,
    "check-all": cmd_check_all,
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="pie-lifter", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"pie-lifter {__version__}")
    p.add_argument("--corpus", type=Path, default=None,
                   help="corpus directory (default: $PIE_LIFTER_CORPUS or the bundled corpus)")
    p.add_argument("--no-corpus", action="store_true", help="load only the files given on the command line")
    p.add_argument("--out", type=Path, default=None, help="write the report here (atomically) instead of stdout")
    p.add_argument("--max-objects", type=int, default=2, help="test vertices: at most this many objects")
    p.add_argument("--max-arrows", type=int, default=4, help="test vertices: at most this many arrows")
    sub = p.add_subparsers(dest="command", required=True)

    v = sub.add_parser("validate", help="parse and validate the corpus and the given files")
    v.add_argument("files", nargs="*")
    c = sub.add_parser("pie-check", help="PIE analysis of a marked 2-category")
    c.add_argument("target", help="twocat name or file")
    c = sub.add_parser("limit", help="σ-s-limit of a diagram")
    c.add_argument("target", help="diagram name or file")
    c.add_argument("--oplax", action="store_true")
    c = sub.add_parser("weighted", help="weighted limit and its conical presentations")
    c.add_argument("weight")
    c.add_argument("diagram")
    c = sub.add_parser("groth", help="2-category of elements of a weight")
    c.add_argument("weight")
    c.add_argument("--dual", action="store_true", help="the op-lax variant")
    c = sub.add_parser("pie-build", help="assemble the limit from a product, an inserter and an equifier")
    c.add_argument("target", help="diagram name or file")
    c.add_argument("--oplax", action="store_true")
    c = sub.add_parser("compare", help="direct, assembled and weighted constructions side by side")
    c.add_argument("target", help="diagram name or file")
    c = sub.add_parser("lift", help="lift a σ-s-op-limit to algebras")
    c.add_argument("target", help="algdiagram name or file")
    c.add_argument("--monad", required=True)
    c.add_argument("--omega", required=True, choices=["s", "p", "l"])
    c = sub.add_parser("check-all", help="run the acceptance suite on a corpus directory")
    c.add_argument("directory")
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code not in (0, None) else EXIT_OK
    try:
        if args.command == "check-all":
            session = Session.__new__(Session)
            session.files = []
        else:
            corpus = None if args.no_corpus else (args.corpus or default_corpus())
            if corpus is not None and not Path(corpus).is_dir():
                raise InputError(f"{corpus}: corpus directory not found")
            session = Session(corpus, _extra_paths(args))
        result, verdicts, witnesses = COMMANDS[args.command](session, args)
    except InputError as exc:
        print(f"pie-lifter: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    arguments = {k: (str(v) if isinstance(v, Path) else v) for k, v in sorted(vars(args).items())
                 if k not in ("command", "out", "corpus")}
    report = envelope(args.command, arguments, session.digests() if session.files else {},
                      result, verdicts, witnesses)
    text = emit_report(report)
    if args.out is not None:
        write_atomic(args.out, text)
    else:
        sys.stdout.write(text)
    return EXIT_OK if report["ok"] else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
