import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from pie_lifter.fincat import (
    CellClass,
    FinCategory,
    Functor,
    NatTrans,
    compose,
    coproduct,
    discrete,
    enumerate_functors,
    enumerate_naturals,
    equifier,
    flatten,
    functor_category,
    inserter,
    iso_check,
    product,
    small_categories,
    terminal,
    validate_category,
    validate_functor,
    validate_nat,
    vcomp,
    walking_arrow,
    walking_iso,
)

SMALL = small_categories()
small = st.sampled_from(SMALL)


def const(C, D, x):
    return Functor.constant(C, D, x)


def test_terminal_and_walking_arrow_valid():
    one, two = terminal(), walking_arrow()
    assert validate_category(one) == []
    assert (len(one.objects), len(one.arrows)) == (1, 1)
    assert validate_category(two) == []
    assert set(two.arrows) == {"id_0", "id_1", "u"}


def test_spurious_composite_is_reported():
    two = walking_arrow()
    bad = FinCategory(two.objects, two._raw_arrows, two.identity, {**two.compose, ("u", "u"): "u"})
    diags = validate_category(bad)
    assert len(diags) == 1
    assert "compose on non-composable pair" in diags[0].message


def test_associativity_violation_found():
    # (a.a).a = b.a = b but a.(a.a) = a.b = a
    objs = ("*",)
    arrows = (("id_*", "*", "*"), ("a", "*", "*"), ("b", "*", "*"))
    table = {("id_*", x): x for x in ("id_*", "a", "b")}
    table.update({(x, "id_*"): x for x in ("id_*", "a", "b")})
    table.update({("a", "a"): "b", ("a", "b"): "a", ("b", "a"): "b", ("b", "b"): "b"})
    C = FinCategory(objs, arrows, {"*": "id_*"}, table)
    assert any(d.code == "associativity" for d in validate_category(C))


def test_empty_product_is_terminal():
    P, projections = product([])
    assert projections == []
    assert len(P.objects) == 1 and len(P.arrows) == 1


def test_product_of_two_arrows_counts():
    two = walking_arrow()
    P, _ = product([two, two])
    assert (len(P.objects), len(P.arrows)) == (4, 9)
    assert validate_category(P) == []


@pytest.mark.parametrize("C", SMALL[:20], ids=lambda C: C.name)
def test_product_with_terminal_is_isomorphic(C):
    P, (_, p) = product([terminal(), C])
    assert iso_check(p)


def test_inserter_examples_against_oracle():
    one, two = terminal(), walking_arrow()
    c0, c1 = const(one, two, "0"), const(one, two, "1")
    I, _, _ = inserter(c0, c1)
    assert (len(I.objects), len(I.arrows)) == (1, 1)
    assert I.objects == ((("*", "u")),)
    I, _, _ = inserter(c1, c0)
    assert I.objects == ()
    ident = Functor.identity(two)
    I, p, _ = inserter(ident, ident)
    assert set(I.objects) == {("0", "id_0"), ("1", "id_1")}
    assert iso_check(p)


@settings(max_examples=40, deadline=None)
@given(small, small, st.data())
def test_inserter_matches_oracle(C, D, data):
    fs = oracles.functors(C, D)
    F = data.draw(st.sampled_from(fs))
    G = data.draw(st.sampled_from(fs))
    I, p, rho = inserter(Functor(C, D, *F), Functor(C, D, *G))
    objs, arrs = oracles.inserter(C, D, F, G)
    assert set(I.objects) == set(objs)
    assert len(I.arrows) == len(arrs)
    assert validate_category(I) == [] and validate_functor(p) == [] and validate_nat(rho) == []


def test_equifier_examples():
    two = walking_arrow()
    k0, k1 = const(two, two, "0"), const(two, two, "1")
    # hom(0, 1) = {u} forces the only natural k0 => k1, so any parallel pair is equal
    (alpha,) = enumerate_naturals(k0, k1)
    assert alpha.comp == {"0": "u", "1": "u"}
    E, incl = equifier(alpha, alpha)
    assert iso_check(incl)


def test_equifier_on_one_of_two_points():
    iso = walking_iso()
    D = discrete(["p", "q"])
    F = const(D, iso, "0")
    alpha = NatTrans(F, F, {"p": "id_0", "q": "id_0"})
    beta = NatTrans(F, F, {"p": "id_0", "q": "id_0"})
    assert len(equifier(alpha, beta)[0].objects) == 2
    Z = next(C for C in SMALL if len(C.objects) == 1 and len(C.arrows) == 2
             and C.compose[(C.arrows[1], C.arrows[1])] == C.identity[C.objects[0]])
    z = Z.objects[0]
    F = const(D, Z, z)
    alpha = NatTrans(F, F, {"p": Z.identity[z], "q": Z.identity[z]})
    beta = NatTrans(F, F, {"p": Z.identity[z], "q": Z.arrows[1]})
    E, _ = equifier(alpha, beta)
    assert E.objects == ("p",)


def test_enumeration_examples():
    one, two = terminal(), walking_arrow()
    assert len(enumerate_functors(one, two)) == 2
    assert len(enumerate_functors(two, one)) == 1
    nats = enumerate_naturals(const(one, two, "0"), const(one, two, "1"))
    assert [n.comp for n in nats] == [{"*": "u"}]


@settings(max_examples=60, deadline=None)
@given(small, small)
def test_functor_enumeration_matches_oracle(C, D):
    mine = {(tuple(sorted(F.ob.items(), key=repr)), tuple(sorted(F.ar.items(), key=repr)))
            for F in enumerate_functors(C, D)}
    ref = {(tuple(sorted(o.items(), key=repr)), tuple(sorted(a.items(), key=repr)))
           for o, a in oracles.functors(C, D)}
    assert mine == ref


@settings(max_examples=40, deadline=None)
@given(small, small, st.data())
def test_natural_enumeration_matches_oracle(C, D, data):
    fs = enumerate_functors(C, D)
    F, G = data.draw(st.sampled_from(fs)), data.draw(st.sampled_from(fs))
    mine = [n.comp for n in enumerate_naturals(F, G)]
    ref = oracles.naturals(C, D, (F.ob, F.ar), (G.ob, G.ar))
    assert sorted(map(repr, mine)) == sorted(map(repr, ref))


def test_iso_check_examples():
    two, one = walking_arrow(), terminal()
    assert iso_check(Functor.identity(two))
    assert not iso_check(enumerate_functors(two, one)[0])
    D = discrete(["p", "q"])
    swap = Functor(D, D, {"p": "q", "q": "p"}, {"id_p": "id_q", "id_q": "id_p"})
    assert iso_check(swap)


@pytest.mark.parametrize("C", SMALL, ids=lambda C: C.name)
def test_small_categories_are_valid(C):
    assert validate_category(C) == []


def test_small_categories_are_pairwise_non_isomorphic():
    for C, D in itertools.combinations(SMALL, 2):
        if (len(C.objects), len(C.arrows)) != (len(D.objects), len(D.arrows)):
            continue
        assert not any(iso_check(F) for F in enumerate_functors(C, D)), (C.name, D.name)


def test_small_category_counts():
    counts = {}
    for C in SMALL:
        key = (len(C.objects), len(C.arrows))
        counts[key] = counts.get(key, 0) + 1
    # one-object categories are monoids: 1, 2, 7 (orders 1-3) and 35 of order 4
    assert counts == {(1, 1): 1, (1, 2): 2, (1, 3): 7, (1, 4): 35, (2, 2): 1, (2, 3): 3, (2, 4): 16}


@settings(max_examples=50, deadline=None)
@given(small, small, small, st.data())
def test_composition_of_functors(C, D, E, data):
    F = data.draw(st.sampled_from(enumerate_functors(C, D)))
    G = data.draw(st.sampled_from(enumerate_functors(D, E)))
    GF = compose(G, F)
    assert validate_functor(GF) == []
    for a in C.arrows:
        assert GF.ar[a] == G.ar[F.ar[a]]


@settings(max_examples=40, deadline=None)
@given(small, small, st.data())
def test_vertical_composition_valid(C, D, data):
    fs = enumerate_functors(C, D)
    F, G, H = (data.draw(st.sampled_from(fs)) for _ in range(3))
    ab = enumerate_naturals(F, G)
    bc = enumerate_naturals(G, H)
    if ab and bc:
        assert validate_nat(vcomp(bc[0], ab[0])) == []


def test_functor_category_counts():
    two, one = walking_arrow(), terminal()
    # [2, 2] has the three monotone maps and 3 non-identity naturals
    FC = functor_category(two, two)
    assert len(FC.objects) == 3
    assert len(FC.arrows) == 6
    assert validate_category(functor_category(one, two)) == []


def test_flatten_provenance_round_trip():
    P, _ = product([walking_arrow(), walking_iso()])
    Q, ob, ar = flatten(P)
    assert validate_category(Q) == []
    assert sorted(map(repr, ob.values())) == sorted(map(repr, P.objects))
    assert Q.objects[0] == "o0"
    back = Functor(Q, P, ob, ar)
    assert validate_functor(back) == [] and iso_check(back)


def test_coproduct_and_cell_classes():
    S = coproduct([walking_arrow(), walking_iso()])
    assert validate_category(S) == []
    iso = walking_iso()
    assert CellClass.PSEUDO.contains_arrow(iso, "i")
    assert not CellClass.PSEUDO.contains_arrow(walking_arrow(), "u")
    assert CellClass.LAX.contains_arrow(walking_arrow(), "u")
    assert CellClass.parse("strict") is CellClass.STRICT
    with pytest.raises(ValueError):
        CellClass.parse("weird")
