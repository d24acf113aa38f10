import json

import pytest

from pie_lifter.cones import LAX, OPLAX, NotPieError, check_cone, sigma_s_limit
from pie_lifter.fincat import Functor, iso_check, product
from pie_lifter.pie_construct import build_via_pie, compare_and_report, compare_constructions
from pie_lifter.report import label
from pie_lifter.twocat import pie_analysis

ORIENTATIONS = [LAX, OPLAX]


def pie_diagrams(ws):
    return [n for n in ws.names("diagram") if pie_analysis(ws.get(n).dom, ws.shape_of(n).sigma)]


def test_discrete_shape_gives_product(ws):
    F, sigma = ws.get("prod_iso_par"), ws.shape_of("prod_iso_par").sigma
    asm = build_via_pie(F, sigma)
    # only identity cells: every equation is trivial and the equifier is everything
    assert all(fam.eta0 == fam.eta1 for fam in asm.families)
    assert len(asm.final.objects) == len(asm.inserter.objects)
    P, _ = product([F.ob["P"], F.ob["Q"]])
    legs = asm.cone.legs
    to_p = Functor(asm.final, P, {x: tuple(l.ob[x] for l in legs) for x in asm.final.objects},
                   {a: tuple(l.ar[a] for l in legs) for a in asm.final.arrows})
    assert iso_check(to_p)


@pytest.mark.parametrize("orientation", ORIENTATIONS)
def test_every_pie_diagram_agrees(ws, orientation):
    names = pie_diagrams(ws)
    shapes = {ws.decl(n).header["shape"] for n in names}
    assert {"Prod", "Ins", "Equi", "Inverter", "CotDisc", "CotArrow", "Comma"} <= shapes
    for n in names:
        asm = compare_and_report(ws.get(n), ws.shape_of(n).sigma, orientation)
        assert check_cone(asm.cone) == [], n
        assert asm.iso, n
        lim = sigma_s_limit(ws.get(n), ws.shape_of(n).sigma, orientation)
        assert len(asm.final.objects) == len(lim.L.objects)
        assert len(asm.final.arrows) == len(lim.L.arrows)


def test_not_pie_is_refused(ws):
    with pytest.raises(NotPieError):
        build_via_pie(ws.get("cospan_pt"), ws.shape_of("cospan_pt").sigma)


def test_planted_faults(ws, corpus_dir):
    cases = json.loads((corpus_dir / "golden" / "faults.json").read_text())
    for case in cases:
        F, sigma = ws.get(case["diagram"]), ws.shape_of(case["diagram"]).sigma
        o = case["orientation"]
        assert compare_constructions(F, sigma, o)
        families = build_via_pie(F, sigma, o).families
        (i,) = [i for i, fam in enumerate(families)
                if fam.kind == case["kind"] and [label(x) for x in fam.index] == case["index"]]
        assert not compare_constructions(F, sigma, o, [i]), case


@pytest.mark.parametrize("name", ["chain_z2", "equi_idem", "ins_idem", "comma_iso"])
def test_dropping_an_equation_never_shrinks_the_result(ws, name):
    F, sigma = ws.get(name), ws.shape_of(name).sigma
    for o in ORIENTATIONS:
        base = build_via_pie(F, sigma, o)
        for i in range(len(base.families)):
            faulty = build_via_pie(F, sigma, o, faults=[i])
            assert len(faulty.final.objects) >= len(base.final.objects)
            assert set(base.final.objects) <= set(faulty.final.objects)
