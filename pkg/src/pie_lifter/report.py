"""Canonical JSON reports.

Reports are JSON with sorted keys, two-space indentation and a trailing newline.
Floats are refused, so the same inputs always produce the same bytes.  Object and
arrow ids of computed categories are renamed ``o0, o1, ...`` / ``a0, a1, ...`` in
declaration order; the original (nested) ids are kept as provenance.
"""

from __future__ import annotations

import hashlib
import json
import os
import tempfile
from pathlib import Path
from typing import Any, Iterable

from . import __version__
from .fincat import Diagnostic, FinCategory, Functor, NatTrans, flatten

TOOL = {"name": "pie-lifter", "version": __version__}


def label(x) -> str:
    """Short textual id for a possibly nested object or arrow id."""
    if isinstance(x, str):
        return x
    if isinstance(x, (tuple, list)):
        return "(" + ",".join(label(y) for y in x) + ")"
    if isinstance(x, Functor):
        return "<" + ",".join(label(x.ob[o]) for o in x.dom.objects) + ">"
    if isinstance(x, NatTrans):
        return "[" + ",".join(label(x.comp[o]) for o in x.src.dom.objects) + "]"
    if isinstance(x, bool) or isinstance(x, int):
        return str(x)
    raise TypeError(f"cannot label {type(x).__name__}")


def describe(x) -> Any:
    """Structured JSON view of an id, for provenance."""
    if isinstance(x, (str, bool, int)) or x is None:
        return x
    if isinstance(x, (tuple, list)):
        return [describe(y) for y in x]
    if isinstance(x, Functor):
        return {"objects": {label(o): describe(x.ob[o]) for o in x.dom.objects},
                "arrows": {label(a): describe(x.ar[a]) for a in x.dom.arrows}}
    if isinstance(x, NatTrans):
        return {"components": {label(o): describe(x.comp[o]) for o in x.src.dom.objects}}
    raise TypeError(f"cannot describe {type(x).__name__}")


class Flat:
    """A category together with its flat renaming."""

    def __init__(self, C: FinCategory):
        self.C = C
        R, self.obj_prov, self.arr_prov = flatten(C)
        self.R = R
        self.obj = {v: k for k, v in self.obj_prov.items()}
        self.arr = {v: k for k, v in self.arr_prov.items()}

    def table(self, provenance: bool = True) -> dict:
        C, R = self.C, self.R
        out = {
            "objects": list(R.objects),
            "arrows": [{"id": a, "src": R.src[a], "tgt": R.tgt[a]} for a in R.arrows],
            "counts": {"objects": len(R.objects), "arrows": len(R.arrows)},
        }
        if provenance:
            out["object_provenance"] = {o: describe(self.obj_prov[o]) for o in R.objects}
            out["arrow_provenance"] = {a: describe(self.arr_prov[a]) for a in R.arrows}
        return out

    def functor_out(self, F: Functor) -> dict:
        """Tables of a functor whose domain is this category."""
        return {
            "objects": {self.obj[o]: label(F.ob[o]) for o in self.C.objects},
            "arrows": {self.arr[a]: label(F.ar[a]) for a in self.C.arrows},
        }

    def functor_in(self, F: Functor) -> dict:
        """Tables of a functor landing in this category."""
        return {
            "objects": {label(o): self.obj[F.ob[o]] for o in F.dom.objects},
            "arrows": {label(a): self.arr[F.ar[a]] for a in F.dom.arrows},
        }

    def nat_out(self, alpha: NatTrans) -> dict:
        return {self.obj[o]: label(alpha.comp[o]) for o in self.C.objects}


def category_table(C: FinCategory) -> dict:
    return {
        "objects": [label(o) for o in C.objects],
        "arrows": [{"id": label(a), "src": label(C.src[a]), "tgt": label(C.tgt[a])} for a in C.arrows],
    }


def diagnostics(ds: Iterable[Diagnostic]) -> list:
    return [{"code": d.code, "message": d.message, "ids": [label(i) for i in d.ids]} for d in ds]


def file_digests(paths: Iterable[str | Path]) -> dict:
    """sha256 of every input file, keyed by base name (relative path on clashes)."""
    paths = [Path(p) for p in paths]
    names = [p.name for p in paths]
    out = {}
    for p in paths:
        key = p.name if names.count(p.name) == 1 else str(p)
        out[key] = hashlib.sha256(p.read_bytes()).hexdigest()
    return out


def envelope(command: str, arguments: dict, inputs: dict, result: dict, verdicts: dict,
             witnesses: dict | None = None) -> dict:
    return {
        "tool": dict(TOOL),
        "command": command,
        "arguments": arguments,
        "inputs": inputs,
        "result": result,
        "verdicts": verdicts,
        "witnesses": witnesses or {},
        "ok": all(verdicts.values()),
    }


def _check(obj, path="$"):
    if isinstance(obj, float):
        raise TypeError(f"floating point value in report at {path}")
    if isinstance(obj, dict):
        for k, v in obj.items():
            if not isinstance(k, str):
                raise TypeError(f"non-string key {k!r} in report at {path}")
            _check(v, f"{path}.{k}")
    elif isinstance(obj, (list, tuple)):
        for i, v in enumerate(obj):
            _check(v, f"{path}[{i}]")


def emit_report(report: dict) -> str:
    _check(report)
    return json.dumps(report, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def write_atomic(path: str | Path, text: str) -> None:
    """Write via a temporary file in the same directory and ``os.replace``."""
    path = Path(path)
    fd, tmp = tempfile.mkstemp(prefix=f".{path.name}.", dir=path.parent or ".")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
