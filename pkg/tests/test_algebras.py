import pytest

from pie_lifter.algebras import (
    Algebra,
    IdentityMonad,
    InvalidAlgebraDiagram,
    NonInvertibleCanonical,
    PointedMonad,
    cell_class,
    check_monad,
    compose_morphisms,
    detection_check,
    enumerate_algebras,
    enumerate_omega_morphisms,
    get_monad,
    identity_morphism,
    lift_limit,
    validate_algebra,
    validate_algebra_diagram,
    validate_omega_morphism,
)
from pie_lifter.cones import OPLAX, sigma_s_limit
from pie_lifter.fincat import (
    CellClass,
    Functor,
    enumerate_functors,
    small_categories,
    terminal,
    vcomp,
    walking_arrow,
    walking_iso,
    whisker_left,
)

POINTED = get_monad("pointed")
IDENTITY = get_monad("identity")
SMALL = small_categories()


def sources(T):
    return [a for C in (terminal(), walking_arrow(), walking_iso()) for a in enumerate_algebras(T, C)]


def test_monad_lookup():
    assert isinstance(POINTED, PointedMonad) and isinstance(IDENTITY, IdentityMonad)
    assert PointedMonad() == POINTED
    with pytest.raises(KeyError):
        get_monad("free-monoid")


def test_monad_laws_on_small_categories():
    functors = [F for C in SMALL[:8] for D in SMALL[:8] for F in enumerate_functors(C, D)][:200]
    for T in (POINTED, IDENTITY):
        assert check_monad(T, SMALL, functors) == []


@pytest.mark.parametrize("C", SMALL, ids=lambda C: C.name)
def test_pointed_algebras_are_basepoints(C):
    # unit law pins the structure to the identity on C; the new point may go anywhere
    algs = enumerate_algebras(POINTED, C)
    pt = PointedMonad.point(C)
    assert sorted(a.structure.ob[pt] for a in algs) == sorted(C.objects)
    for a in algs:
        assert all(a.structure.ob[o] == o for o in C.objects)


def test_pointed_walking_arrow_has_two_algebras():
    assert len(enumerate_algebras(POINTED, walking_arrow())) == 2


@pytest.mark.parametrize("C", SMALL[:10], ids=lambda C: C.name)
def test_identity_algebras_are_plain_categories(C):
    (alg,) = enumerate_algebras(IDENTITY, C)
    assert alg.structure == Functor.identity(C)
    assert validate_algebra(alg) == []


def test_identity_monad_morphism_classes_coincide():
    for A in sources(IDENTITY):
        for B in sources(IDENTITY):
            by_class = [enumerate_omega_morphisms(A, B, c) for c in CellClass]
            assert len({len(x) for x in by_class}) == 1
            assert all(m.cell.is_identity() for m in by_class[-1])


def test_morphism_classes_on_walking_arrow(ws):
    a0 = ws.get("a2_0")
    strict = identity_morphism(a0)
    assert validate_omega_morphism(strict) == [] and cell_class(strict.cell) is CellClass.STRICT
    m = ws.get("m_id_10")
    assert validate_omega_morphism(m) == []
    assert m.cell.comp[PointedMonad.point(m.dom.carrier)] == "u"
    assert cell_class(m.cell) is CellClass.LAX
    assert not CellClass.PSEUDO.contains(m.cell)
    assert cell_class(ws.get("m_ki1").cell) is CellClass.PSEUDO


def test_morphism_composition_is_associative(ws):
    f, g = ws.get("m_ki1"), ws.get("m_swap")
    h = ws.get("m_swap")
    assert compose_morphisms(h, compose_morphisms(g, f)) == compose_morphisms(compose_morphisms(h, g), f)
    assert compose_morphisms(identity_morphism(g.cod), g) == g
    assert validate_omega_morphism(compose_morphisms(g, f)) == []


def test_corpus_algebra_diagrams_valid(ws):
    for n in ws.names("algdiagram"):
        assert validate_algebra_diagram(ws.get(n)) == [], n


def test_lifted_pointed_inserter(ws):
    D = ws.get("pointed_inserter")
    lift = lift_limit(POINTED, D, CellClass.LAX, sources(POINTED), [CellClass.STRICT, CellClass.PSEUDO])
    assert lift.ok, {k: v for k, v in lift.verdicts.items() if not v}
    assert lift.strict_projections == ["A"]
    assert lift.verdicts["detects_strict"] and lift.verdicts["detects_pseudo"]
    L = lift.limit.L
    pt = PointedMonad.point(L)
    base = lift.algebra.structure.ob[pt]
    a_alg = D.algebras["A"]
    a0 = a_alg.structure.ob[PointedMonad.point(a_alg.carrier)]
    assert lift.limit.projections["A"].ob[base] == a0
    f_A = lift.limit.pie.canonical_arrow["B"]
    assert lift.limit.projections["B"].ob[base] == D.morphisms[f_A].functor.ob[a0]


def test_identity_monad_lift(ws):
    lift = lift_limit(IDENTITY, ws.get("plain_ins"), CellClass.LAX, sources(IDENTITY), [CellClass.STRICT])
    assert lift.ok
    assert lift.algebra.structure == Functor.identity(lift.limit.L)
    assert all(p.cell.is_identity() for p in lift.projections.values())


@pytest.mark.parametrize("name", ["lp_prod", "lp_ins", "lp_equi", "lp_inv", "lp_cotd", "lp_cota", "lp_comma"])
def test_pseudo_lift_is_the_lax_lift(ws, name):
    D = ws.get(name)
    lax = lift_limit(POINTED, D, CellClass.LAX)
    pseudo = lift_limit(POINTED, D, CellClass.PSEUDO)
    assert lax.ok and pseudo.ok
    assert lax.algebra.structure == pseudo.algebra.structure
    assert all(lax.projections[o].cell == pseudo.projections[o].cell for o in D.shape.objects)


def test_strict_class_refuses_pseudo_morphisms(ws):
    with pytest.raises(InvalidAlgebraDiagram):
        lift_limit(POINTED, ws.get("lp_ins"), CellClass.STRICT)


def test_non_invertible_canonical_arrow_is_refused(ws):
    with pytest.raises(NonInvertibleCanonical) as info:
        lift_limit(POINTED, ws.get("pointed_inserter_bad"), CellClass.LAX)
    assert info.value.arrow == "f"


def test_detection_on_lifted_inserter(ws):
    lift = lift_limit(POINTED, ws.get("pointed_inserter"), CellClass.LAX)
    Z = sources(POINTED)
    assert detection_check(lift, CellClass.LAX, Z)
    assert detection_check(lift, CellClass.STRICT, Z)
    assert detection_check(lift, CellClass.PSEUDO, Z)


@pytest.mark.parametrize("name", ["inv_iso", "inv_two", "inv_swap"])
def test_inverter_cells_are_mutually_inverse(ws, name):
    F, sigma = ws.get(name), ws.shape_of(name).sigma
    lim = sigma_s_limit(F, sigma, OPLAX)
    th_h, th_k = lim.cells["h"], lim.cells["k"]
    assert vcomp(whisker_left(F.one["k"], th_h), th_k).is_identity()
    assert vcomp(whisker_left(F.one["h"], th_k), th_h).is_identity()
    # the limit is the part of FA where F(al) is invertible
    FA, FB, Fal = F.ob["A"], F.ob["B"], F.two["al"]
    expected = [x for x in FA.objects if FB.is_iso(Fal.comp[x])]
    assert sorted(lim.projections["A"].ob[k] for k in lim.L.objects) == sorted(expected)


def test_algebra_equality_uses_monad(ws):
    a = ws.get("two_plain")
    b = Algebra(POINTED, a.carrier, a.structure)
    assert a != b
