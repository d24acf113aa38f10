import pytest

import oracles
from pie_lifter.cones import (
    LAX,
    OPLAX,
    LaxCone,
    check_cone,
    check_determination,
    check_joint_monicity,
    check_modification,
    compatibility_check,
    enumerate_cones,
    factor_cone,
    is_sigma_s_cone,
    iter_cones,
    joint_monicity_counterexample,
    modify_cone,
    sigma_s_limit,
    verify_universal_property,
)
from pie_lifter.fincat import (
    CellClass,
    Functor,
    NatTrans,
    enumerate_functors,
    enumerate_naturals,
    inserter,
    inverse,
    iso_check,
    product,
    terminal,
    validate_category,
    validate_functor,
    walking_arrow,
)
from pie_lifter.twocat import pie_analysis

ORIENTATIONS = [LAX, OPLAX]


def diagram(ws, name):
    return ws.get(name), ws.shape_of(name).sigma


def all_diagrams(ws):
    return ws.names("diagram")


def test_limit_matches_raw_cone_enumeration(ws):
    for name in all_diagrams(ws):
        F, sigma = diagram(ws, name)
        for o in ORIENTATIONS:
            lim = sigma_s_limit(F, sigma, o)
            objs, arrs = oracles.lax_cones_from_point(F, sigma, o)
            assert set(lim.L.objects) == set(objs), (name, o)
            assert set(lim.L.arrows) == set(arrs), (name, o)
            assert validate_category(lim.L) == []


def test_discrete_two_by_two(ws):
    F, sigma = diagram(ws, "prod_22")
    lim = sigma_s_limit(F, sigma)
    assert (len(lim.L.objects), len(lim.L.arrows)) == (4, 9)
    P, _ = product([walking_arrow(), walking_arrow()])
    to_p = Functor(lim.L, P, {k: k[0] for k in lim.L.objects}, {a: a[2] for a in lim.L.arrows})
    assert validate_functor(to_p) == [] and iso_check(to_p)


def test_cotensor_is_product(ws):
    F, sigma = diagram(ws, "cotd_two")
    assert sigma == frozenset(F.dom.id1.values())
    lim = sigma_s_limit(F, sigma)
    P, _ = product([walking_arrow(), walking_arrow()])
    to_p = Functor(lim.L, P, {k: k[0] for k in lim.L.objects}, {a: a[2] for a in lim.L.arrows})
    assert iso_check(to_p)


@pytest.mark.parametrize("name", ["ins_pt", "ins_two", "ins_iso", "ins_idem"])
def test_oplax_limit_of_inserter_shape_is_inserter(ws, name):
    F, sigma = diagram(ws, name)
    A = F.dom
    lim = sigma_s_limit(F, sigma, OPLAX)
    I, _, _ = inserter(F.one["f"], F.one["g"])
    ia, jg = A.index0["A"], A.index1["g"]
    ob = {k: (k[0][ia], k[1][jg]) for k in lim.L.objects}
    ar = {a: (a[2][ia], ob[a[0]], ob[a[1]]) for a in lim.L.arrows}
    comparison = Functor(lim.L, I, ob, ar)
    assert validate_functor(comparison) == [] and iso_check(comparison)


def test_inserter_shape_counts_by_orientation(ws):
    # Fg x_A -> x_B has no candidate when Fg picks 1 and x_B = Ff x_A = 0
    F, sigma = diagram(ws, "ins_pt")
    assert len(sigma_s_limit(F, sigma, OPLAX).L.objects) == 1
    assert len(sigma_s_limit(F, sigma, LAX).L.objects) == 0
    one, two = terminal(), walking_arrow()
    assert len(inserter(Functor.constant(one, two, "0"), Functor.constant(one, two, "1"))[0].objects) == 1


def test_sigma_flag_is_vacuous_on_identities(ws):
    F, _ = diagram(ws, "ins_two")
    ids = frozenset(F.dom.id1.values())
    E = walking_arrow()
    for o in ORIENTATIONS:
        a = enumerate_cones(E, F, ids, True, o)
        b = enumerate_cones(E, F, ids, False, o)
        assert a.objects == b.objects and a.arrows == b.arrows


def test_limit_cone_checks(ws):
    for name in all_diagrams(ws):
        F, sigma = diagram(ws, name)
        for o in ORIENTATIONS:
            c = sigma_s_limit(F, sigma, o).cone
            assert check_cone(c) == [], (name, o)


def test_sigma_cell_must_be_identity(ws):
    # dropping the σ-s condition admits cones with a non-identity theta_f
    F, sigma = diagram(ws, "ins_two")
    E = walking_arrow()
    unmarked = list(iter_cones(E, F, sigma, False, OPLAX))
    marked = set(iter_cones(E, F, sigma, True, OPLAX))
    assert len(unmarked) > len(marked)
    assert any(not is_sigma_s_cone(c, sigma) for c in unmarked)
    assert all(is_sigma_s_cone(c, sigma) for c in marked)
    assert all(is_sigma_s_cone(c, F.dom.id1.values()) for c in unmarked)


def test_corrupted_cell_is_reported(ws):
    # in Z/2 the composite cell is forced by the other two; flipping it breaks LC1
    F, sigma = diagram(ws, "chain_z2")
    for o in ORIENTATIONS:
        c = sigma_s_limit(F, sigma, o).cone
        j = F.dom.index1["gf"]
        good = c.cells[j]
        (bad_cell,) = [n for n in enumerate_naturals(good.src, good.tgt) if n != good]
        bad = LaxCone(F, c.vertex, c.legs, c.cells[:j] + (bad_cell,) + c.cells[j + 1:], o)
        assert [d.code for d in check_cone(bad)], o


def test_modify_cone_round_trip(ws):
    F, sigma = diagram(ws, "cota_iso")
    E = ws.get("Iso")
    changed = 0
    for c in iter_cones(E, F, sigma, True, OPLAX):
        legs, alphas = [], []
        for leg in c.legs:
            pick = None
            for G in enumerate_functors(leg.dom, leg.cod):
                for a in enumerate_naturals(leg, G):
                    if a.is_invertible() and (pick is None or G != leg):
                        pick = (G, a)
            legs.append(pick[0])
            alphas.append(pick[1])
        new, m = modify_cone(c, legs, alphas)
        assert check_cone(new) == [] and check_modification(m) == []
        back, _ = modify_cone(new, list(c.legs), [inverse(a) for a in alphas])
        assert back == c
        same, _ = modify_cone(c, list(c.legs), [NatTrans.identity(l) for l in c.legs])
        assert same == c
        changed += new != c
    assert changed


def test_factor_cone(ws):
    one = terminal()
    for name in all_diagrams(ws):
        F, sigma = diagram(ws, name)
        for o in ORIENTATIONS:
            lim = sigma_s_limit(F, sigma, o)
            assert factor_cone(lim, lim.cone) == Functor.identity(lim.L)
            for c in iter_cones(one, F, sigma, True, o):
                u = factor_cone(lim, c)
                (pt,) = one.objects
                assert u.ob[pt] == (tuple(l.ob[pt] for l in c.legs), tuple(x.comp[pt] for x in c.cells))


def test_universal_property(ws):
    one, two = terminal(), walking_arrow()
    for name in all_diagrams(ws):
        F, sigma = diagram(ws, name)
        for o in ORIENTATIONS:
            lim = sigma_s_limit(F, sigma, o)
            assert verify_universal_property(lim, None, None, one), (name, o)
    F, sigma = diagram(ws, "ins_pt")
    assert verify_universal_property(sigma_s_limit(F, sigma, OPLAX), None, None, two)


def test_universal_property_rejects_corrupted_projection(ws):
    F, sigma = diagram(ws, "ins_two")
    lim = sigma_s_limit(F, sigma, OPLAX)
    B = F.ob["A"]
    x = lim.L.objects[0]
    other = next(b for b in B.objects if b != lim.projections["A"].ob[x])
    lim.projections["A"] = Functor.constant(lim.L, B, other)
    assert not verify_universal_property(lim, None, None, walking_arrow())


def test_compatibility(ws):
    one, two = terminal(), walking_arrow()
    for name in all_diagrams(ws):
        F, sigma = diagram(ws, name)
        if not pie_analysis(F.dom, sigma):
            continue
        for o in ORIENTATIONS:
            lim = sigma_s_limit(F, sigma, o)
            for E in (one, two):
                assert compatibility_check(lim, CellClass.LAX, False, E)
                full = compatibility_check(lim, CellClass.PSEUDO, False, E)
                assert full, (name, o)
                assert compatibility_check(lim, CellClass.PSEUDO, True, E) == full


def test_determination_by_initials(ws):
    two = walking_arrow()
    for name in all_diagrams(ws):
        F, sigma = diagram(ws, name)
        if not pie_analysis(F.dom, sigma):
            continue
        for o in ORIENTATIONS:
            assert check_determination(sigma_s_limit(F, sigma, o), two) == [], (name, o)


def test_joint_monicity_on_2_cells(ws):
    two = walking_arrow()
    for name in all_diagrams(ws):
        F, sigma = diagram(ws, name)
        if not pie_analysis(F.dom, sigma):
            continue
        for o in ORIENTATIONS:
            assert check_joint_monicity(sigma_s_limit(F, sigma, o), two, dimension=2), (name, o)


def test_joint_monicity_on_1_cells_fails_for_non_thin_target(ws):
    # L has two objects over the single object of 1: the cell theta_g ranges over
    # the two endo-arrows of the idempotent monoid
    F, sigma = diagram(ws, "ins_idem")
    lim = sigma_s_limit(F, sigma, OPLAX)
    assert len(lim.L.objects) == 2
    w = joint_monicity_counterexample(lim, terminal(), dimension=1)
    assert w is not None and w["first"] != w["second"]
    # thin targets are separated
    F, sigma = diagram(ws, "ins_two")
    assert check_joint_monicity(sigma_s_limit(F, sigma, OPLAX), walking_arrow(), dimension=1)
