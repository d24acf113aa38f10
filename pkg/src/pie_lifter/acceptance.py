"""The acceptance suite, runnable on any corpus directory.

Each criterion returns a :class:`Criterion` with boolean verdicts, the first
witness of any failure, and the wall time.  ``passed`` also requires the time
bound.  Which corpus entries feed which criterion is decided from the corpus
itself (shape declarations, golden files) rather than hard-coded, except for
the fault-injection cases, which are listed in ``golden/faults.json``.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable

from .algebras import (
    NonInvertibleCanonical,
    cell_class,
    detection_check,
    enumerate_algebras,
    get_monad,
    lift_limit,
)
from .cones import (
    LAX,
    OPLAX,
    Modification,
    check_determination,
    joint_monicity_counterexample,
    check_modification,
    iter_cones,
    modify_cone,
    sigma_s_limit,
    verify_universal_property,
)
from .dsl import Workspace, corpus_files, load_files
from .fincat import CellClass, FinCategory, enumerate_naturals, iter_functors, small_categories
from .pie_construct import build_via_pie, compare_constructions
from .report import describe, label
from .twocat import pie_analysis
from .weights import compare_weighted_conical, grothendieck

ORIENTATIONS = (LAX, OPLAX)


@dataclass
class Criterion:
    number: int
    title: str
    limit: float  # seconds
    verdicts: dict = field(default_factory=dict)
    witnesses: dict = field(default_factory=dict)
    seconds: float = 0.0

    @property
    def in_time(self) -> bool:
        return self.seconds < self.limit

    @property
    def checks_pass(self) -> bool:
        return bool(self.verdicts) and all(self.verdicts.values())

    @property
    def passed(self) -> bool:
        return self.checks_pass and self.in_time

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        failing = [k for k, v in self.verdicts.items() if not v]
        extra = f"; failing: {', '.join(failing[:5])}" if failing else ""
        slow = "" if self.in_time else " (over time)"
        return (f"[{status}] criterion {self.number}: {self.title} "
                f"({len(self.verdicts)} checks, {self.seconds:.2f}s / {self.limit:g}s{slow}){extra}")

    def record(self, key: str, ok: bool, witness=None) -> None:
        self.verdicts[key] = bool(ok)
        if not ok and witness is not None:
            self.witnesses.setdefault(key, witness)


class Corpus:
    """A loaded corpus directory plus its golden files."""

    def __init__(self, directory: str | Path):
        self.directory = Path(directory)
        self.files = corpus_files(self.directory)
        self.ws: Workspace = load_files(self.files)
        self.golden_dir = self.directory / "golden"

    def golden(self, name: str):
        return json.loads((self.golden_dir / name).read_text(encoding="utf-8"))

    def diagrams(self):
        """(name, F, sigma) for every diagram."""
        for n in self.ws.names("diagram"):
            yield n, self.ws.get(n), self.ws.shape_of(n).sigma

    def pie_diagrams(self):
        for n, F, sigma in self.diagrams():
            if pie_analysis(F.dom, sigma):
                yield n, F, sigma

    def vertices(self, max_objects: int = 2, max_arrows: int = 4) -> list[FinCategory]:
        """Every category within the bounds, one per isomorphism class."""
        return small_categories(max_objects, max_arrows)


def _timed(c: Criterion, body: Callable[[Criterion], None]) -> Criterion:
    start = time.perf_counter()
    try:
        body(c)
    except Exception as exc:  # a crash is a failed verdict, not a crashed suite
        c.record("completed", False, f"{type(exc).__name__}: {exc}")
    c.seconds = time.perf_counter() - start
    return c


# -- 1 ---------------------------------------------------------------------------------


def pie_summary(A, sigma) -> dict:
    pie = pie_analysis(A, sigma)
    if not pie:
        return {"pie": False, "component": [label(o) for o in pie.component], "reason": pie.reason}
    return {
        "pie": True,
        "components": [[label(o) for o in comp] for comp in pie.components],
        "initials": [label(o) for o in pie.initial],
        "canonical_arrows": {label(o): label(f) for o, f in pie.canonical_arrow.items()},
    }


def criterion_1(corpus: Corpus) -> Criterion:
    def body(c):
        expected = corpus.golden("pie_shapes.json")
        for shape, exp in expected.items():
            s = corpus.ws.get(shape, "twocat")
            got = pie_summary(s.two, s.sigma)
            c.record(f"{shape}", got == exp, {"expected": exp, "got": got})

    return _timed(Criterion(1, "PIE corpus shapes match golden A0 sets", 1.0), body)


# -- 2 ---------------------------------------------------------------------------------


def criterion_2(corpus: Corpus) -> Criterion:
    def body(c):
        vertices = corpus.vertices()
        for n, F, sigma in corpus.diagrams():
            for o in ORIENTATIONS:
                lim = sigma_s_limit(F, sigma, o)
                for E in vertices:
                    c.record(f"{n}/{o}/{E.name}", verify_universal_property(lim, F, sigma, E))

    return _timed(Criterion(2, "universal property on every corpus diagram and test vertex", 60.0), body)


# -- 3 ---------------------------------------------------------------------------------


def criterion_3(corpus: Corpus) -> Criterion:
    def body(c):
        for n, F, sigma in corpus.pie_diagrams():
            for o in ORIENTATIONS:
                c.record(f"{n}/{o}", compare_constructions(F, sigma, o))
        kinds = set()
        for case in corpus.golden("faults.json"):
            F = corpus.ws.get(case["diagram"], "diagram")
            sigma = corpus.ws.shape_of(case["diagram"]).sigma
            families = build_via_pie(F, sigma, case["orientation"]).families
            idx = [i for i, fam in enumerate(families)
                   if fam.kind == case["kind"] and [label(x) for x in fam.index] == case["index"]]
            key = f"fault {case['diagram']}/{case['orientation']}/{case['kind']}{case['index']}"
            if len(idx) != 1:
                c.record(key, False, "fault family not found")
                continue
            c.record(key, not compare_constructions(F, sigma, case["orientation"], idx))
            kinds.add(case["kind"])
        c.record("faults cover sigma, lc1 and lc2", kinds == {"sigma", "lc1", "lc2"})

    return _timed(Criterion(3, "direct and product/inserter/equifier constructions agree", 60.0), body)


# -- 4 ---------------------------------------------------------------------------------


def criterion_4(corpus: Corpus) -> Criterion:
    def body(c):
        expected = corpus.golden("weights.json")
        pairs = 0
        for w in corpus.ws.names("weight"):
            W = corpus.ws.get(w)
            shape = corpus.ws.decl(w).header["shape"]
            for n in corpus.ws.names("diagram"):
                if corpus.ws.decl(n).header["shape"] != shape:
                    continue
                for dual in (False, True):
                    r = compare_weighted_conical(W, corpus.ws.get(n), dual)
                    c.record(f"{w}/{n}/{'Gamma' if dual else 'El'}", r.iso)
                    pairs += 1
            is_pie = w in expected["pie"]
            for dual in (False, True):
                el = grothendieck(W, dual)
                verdict = bool(pie_analysis(el.shape, el.sigma))
                c.record(f"{w}/{'Gamma' if dual else 'El'} pie", verdict == is_pie)
        c.record("at least 3 weight instances", pairs >= 3)

    return _timed(Criterion(4, "weighted and conical limits agree; weights are PIE", 60.0), body)


# -- 5 and 6 ---------------------------------------------------------------------------


def source_algebras(corpus: Corpus, monad_name: str, max_objects: int = 2, max_arrows: int = 4):
    """Every algebra structure on every small corpus category."""
    T = get_monad(monad_name)
    out = []
    for C in corpus.vertices(max_objects, max_arrows):
        out.extend(enumerate_algebras(T, C))
    return out


def _all_pseudo(D) -> bool:
    return all(CellClass.PSEUDO.contains(m.cell) for m in D.morphisms.values())


def criterion_5(corpus: Corpus) -> Criterion:
    def body(c):
        T = get_monad("pointed")
        sources = source_algebras(corpus, "pointed")
        count = 0
        for n in corpus.ws.names("algdiagram"):
            D = corpus.ws.get(n)
            if D.monad.name != T.name or not _all_pseudo(D):
                continue
            count += 1
            r = lift_limit(T, D, CellClass.PSEUDO, sources, [CellClass.STRICT])
            c.record(f"{n} lifts", r.ok, {k: v for k, v in r.witnesses.items()})
            c.record(f"{n} algebra axioms", r.verdicts["algebra_axioms"])
            c.record(f"{n} initial projections strict",
                     sorted(r.strict_projections) == sorted(r.limit.pie.initial))
            c.record(f"{n} detects strictness", detection_check(r, CellClass.STRICT, sources))
        c.record("some all-pseudo diagrams", count >= 3)

    return _timed(Criterion(5, "lifting, pseudo case", 120.0), body)


def criterion_6(corpus: Corpus) -> Criterion:
    def body(c):
        T = get_monad("pointed")
        sources = source_algebras(corpus, "pointed")
        cases = corpus.golden("lax_lifts.json")
        for n in cases["accept"]:
            D = corpus.ws.get(n, "algdiagram")
            pie = pie_analysis(D.shape, D.sigma)
            canon = set(pie.canonical_arrow.values())
            c.record(f"{n} canonical arrows pseudo",
                     all(CellClass.PSEUDO.contains(D.morphisms[f].cell) for f in canon))
            c.record(f"{n} genuinely lax",
                     any(cell_class(m.cell) == CellClass.LAX for m in D.morphisms.values()))
            r = lift_limit(T, D, CellClass.LAX, sources, [CellClass.STRICT, CellClass.PSEUDO])
            c.record(f"{n} lifts", r.ok, dict(r.witnesses))
            c.record(f"{n} detects strictness", detection_check(r, CellClass.STRICT, sources))
            c.record(f"{n} detects pseudoness", detection_check(r, CellClass.PSEUDO, sources))
        for n in cases["reject"]:
            D = corpus.ws.get(n, "algdiagram")
            try:
                lift_limit(T, D, CellClass.LAX)
            except NonInvertibleCanonical:
                c.record(f"{n} rejected", True)
            else:
                c.record(f"{n} rejected", False, "lifting did not refuse")

    return _timed(Criterion(6, "lifting, lax case", 120.0), body)


# -- 7 ---------------------------------------------------------------------------------


def criterion_7(corpus: Corpus) -> Criterion:
    def body(c):
        vertices = corpus.vertices()
        for n, F, sigma in corpus.pie_diagrams():
            for o in ORIENTATIONS:
                lim = sigma_s_limit(F, sigma, o)
                for E in vertices:
                    bad = check_determination(lim, E)
                    c.record(f"{n}/{o}/{E.name} determination", not bad, [str(d) for d in bad[:1]])
                    for dim in (1, 2):
                        w = joint_monicity_counterexample(lim, E, dim)
                        c.record(f"{n}/{o}/{E.name} joint monicity ({dim}-cells)", w is None,
                                 None if w is None else {"first": describe(w["first"]), "second": describe(w["second"])})

    return _timed(Criterion(7, "determination by initials and joint monicity", 60.0), body)


# -- 8 ---------------------------------------------------------------------------------


def lemma_instances(F, E: FinCategory, orientation: str, limit: int | None = None):
    """(cone, new legs, invertible alphas) over every cone with vertex ``E`` and every
    choice of invertible 2-cells out of its legs."""
    A = F.dom
    count = 0
    for c in iter_cones(E, F, (), False, orientation):
        options = []
        for o, leg in zip(A.objects, c.legs):
            opts = []
            for G in iter_functors(E, F.ob[o]):
                opts.extend(a for a in enumerate_naturals(leg, G) if a.is_invertible())
            options.append(opts)
        for choice in _product(options):
            yield c, tuple(a.tgt for a in choice), choice
            count += 1
            if limit is not None and count >= limit:
                return


def _product(options):
    if not options:
        yield ()
        return
    for x in options[0]:
        for rest in _product(options[1:]):
            yield (x,) + rest


def unique_modified_structure(c, new_legs, alphas) -> bool:
    """Exactly one cone structure on ``new_legs`` makes ``alphas`` a modification,
    and it is the one given by ``modify_cone``."""
    expected, _ = modify_cone(c, new_legs, alphas)
    found = [d for d in iter_cones(c.vertex, c.diagram, (), False, c.orientation, legs=new_legs)
             if not check_modification(Modification(c, d, tuple(alphas)))]
    return found == [expected]


def criterion_8(corpus: Corpus) -> Criterion:
    def body(c):
        cases = corpus.golden("lemma_cases.json")
        total = 0
        for case in cases:
            F = corpus.ws.get(case["diagram"], "diagram")
            E = corpus.ws.get(case["vertex"], "category")
            n = 0
            for cone, legs, alphas in lemma_instances(F, E, case["orientation"]):
                n += 1
                c.record(f"{case['diagram']}/{case['orientation']}/{case['vertex']}#{n}",
                         unique_modified_structure(cone, legs, alphas))
            total += n
        c.record("at least 3 instances", total >= 3)

    return _timed(Criterion(8, "uniqueness of the modified cone structure", 10.0), body)


CRITERIA = (criterion_1, criterion_2, criterion_3, criterion_4,
            criterion_5, criterion_6, criterion_7, criterion_8)


def run_all(directory: str | Path, echo: Callable[[str], None] | None = None) -> list[Criterion]:
    corpus = Corpus(directory)
    out = []
    for crit in CRITERIA:
        r = crit(corpus)
        if echo is not None:
            echo(r.line())
        out.append(r)
    return out
