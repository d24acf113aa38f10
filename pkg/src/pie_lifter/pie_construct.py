"""PIE σ-s-limits assembled from one product pair, one inserter and one equifier."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

from .cones import LAX, OPLAX, LaxCone, NotPieError, check_cone, factor_cone, sigma_s_limit
from .fincat import (
    FinCategory,
    Functor,
    NatTrans,
    compose,
    equifier,
    LazyProduct,
    inserter,
    iso_check,
    pair_nats,
    pairing,
    product,
    vcomp,
    whisker_left,
    whisker_right,
)
from .twocat import NotPie, PieStructure, TwoFunctor, pie_analysis


@dataclass
class Family:
    """One pair of parallel 2-cells ``eta0, eta1: psi0 => psi1`` to be equified."""

    kind: str  # "sigma", "lc1" or "lc2"
    index: tuple
    psi0: Functor
    psi1: Functor
    eta0: NatTrans
    eta1: NatTrans


@dataclass
class PieAssembly:
    orientation: str
    pie: PieStructure
    initials_product: FinCategory
    arrows_product: FinCategory
    phi0: Functor
    phi1: Functor
    inserter: FinCategory
    inserter_projection: Functor
    inserter_cell: NatTrans
    families: list[Family]
    equifier: FinCategory
    inclusion: Functor
    cone: LaxCone  # on the final equifier
    comparison: Functor | None = None
    iso: bool = False
    inserter_cone_legs: dict = field(default_factory=dict, repr=False)

    @property
    def final(self) -> FinCategory:
        return self.equifier


def build_via_pie(
    F: TwoFunctor,
    sigma: Iterable,
    orientation: str = LAX,
    pie: PieStructure | None = None,
    faults: Iterable[int] = (),
) -> PieAssembly:
    """Assemble the σ-s-limit of ``F`` as the equifier of a diagram out of an inserter.

    ``faults`` lists indices of equifier families whose second 2-cell is replaced
    by the first one, dropping that equation (used for fault injection).
    """
    A = F.dom
    sigma = frozenset(sigma)
    if pie is None:
        pie = pie_analysis(A, sigma)
    if isinstance(pie, NotPie):
        raise NotPieError(pie)
    initials = list(pie.initial)
    fA = pie.canonical_arrow

    P0, p0 = product([F.ob[a] for a in initials])
    proj0 = dict(zip(initials, p0))
    P1 = LazyProduct([F.ob[A.tgt[f]] for f in A.one_cells])

    # phi0 on f: F(f f_A) pi_{A0};  phi1 on f: F(f_B) pi_{B0}
    moved = [compose(F.one[A.comp1[(f, fA[A.src[f]])]], proj0[pie.base(A.src[f])]) for f in A.one_cells]
    fixed = [compose(F.one[fA[A.tgt[f]]], proj0[pie.base(A.tgt[f])]) for f in A.one_cells]
    phi0 = pairing(P1, moved, P0)
    phi1 = pairing(P1, fixed, P0)
    if orientation == LAX:
        I, p, rho = inserter(phi0, phi1)
    else:
        I, p, rho = inserter(phi1, phi0)

    legs = {a: compose(F.one[fA[a]], compose(proj0[pie.base(a)], p)) for a in A.objects}
    cells = {}
    for j, f in enumerate(A.one_cells):
        # the j-th component of rho; its boundary is literally the expected one
        cells[f] = NatTrans(*_boundary(F, orientation, f, legs), {x: rho.comp[x][j] for x in I.objects})

    families = _families(F, sigma, orientation, legs, cells)
    faults = set(faults)
    for i in faults:
        fam = families[i]
        families[i] = Family(fam.kind, fam.index, fam.psi0, fam.psi1, fam.eta0, fam.eta0)
    Q = LazyProduct([fam.psi0.cod for fam in families])
    eta0 = pair_nats(Q, [fam.eta0 for fam in families], I)
    eta1 = pair_nats(Q, [fam.eta1 for fam in families], I)
    Eq, incl = equifier(eta0, eta1)

    cone = LaxCone(
        F,
        Eq,
        tuple(compose(legs[a], incl) for a in A.objects),
        tuple(whisker_right(cells[f], incl) for f in A.one_cells),
        orientation,
    )
    return PieAssembly(orientation, pie, P0, P1, phi0, phi1, I, p, rho, families, Eq, incl, cone,
                       inserter_cone_legs=legs)


def _boundary(F, orientation, f, legs):
    A = F.dom
    moved = compose(F.one[f], legs[A.src[f]])
    target = legs[A.tgt[f]]
    return (moved, target) if orientation == LAX else (target, moved)


def _families(F, sigma, orientation, legs, cells) -> list[Family]:
    A = F.dom
    out = []
    for f in A.one_cells:
        if f not in sigma:
            continue
        b = A.tgt[f]
        ident = NatTrans.identity(legs[b])
        # legs[b] == F(f) legs[a] by the PIE hypothesis, so both cells are parallel
        out.append(Family("sigma", (f,), legs[b], legs[b], ident, cells[f]))
    for (g, f), h in A.comp1.items():
        c = A.tgt[g]
        moved = compose(F.one[h], legs[A.src[f]])
        pushed = whisker_left(F.one[g], cells[f])
        if orientation == LAX:
            out.append(Family("lc1", (g, f), moved, legs[c], cells[h], vcomp(cells[g], pushed)))
        else:
            out.append(Family("lc1", (g, f), legs[c], moved, cells[h], vcomp(pushed, cells[g])))
    for gamma in A.two_cells:
        f, g = A.src2[gamma], A.tgt2[gamma]
        a, b = A.src[f], A.tgt[f]
        pushed = whisker_right(F.two[gamma], legs[a])
        if orientation == LAX:
            out.append(Family("lc2", (gamma,), compose(F.one[f], legs[a]), legs[b], cells[f], vcomp(cells[g], pushed)))
        else:
            out.append(Family("lc2", (gamma,), legs[b], compose(F.one[g], legs[a]), cells[g], vcomp(pushed, cells[f])))
    return out


def compare_constructions(F: TwoFunctor, sigma: Iterable, orientation: str = LAX, faults: Iterable[int] = ()) -> bool:
    """The assembled limit is isomorphic to the directly computed one via the canonical comparison."""
    return compare_and_report(F, sigma, orientation, faults).iso


def compare_and_report(F: TwoFunctor, sigma: Iterable, orientation: str = LAX, faults: Iterable[int] = ()) -> PieAssembly:
    sigma = frozenset(sigma)
    assembly = build_via_pie(F, sigma, orientation, faults=faults)
    lim = sigma_s_limit(F, sigma, orientation)
    if check_cone(assembly.cone):
        return assembly
    try:
        assembly.comparison = factor_cone(lim, assembly.cone)
    except ValueError:
        return assembly
    assembly.iso = iso_check(assembly.comparison)
    return assembly
