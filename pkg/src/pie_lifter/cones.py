"""Lax and op-lax cones over category-valued 2-functors, and σ-s-limits.

Conventions, for a 1-cell ``f: A -> B`` and a 2-cell ``gamma: f => g``:

* lax:    ``theta_f : Ff.theta_A => theta_B``
          ``theta_gf = theta_g . (Fg theta_f)``,  ``theta_f = theta_g . (Fgamma theta_A)``
* op-lax: ``theta_f : theta_B => Ff.theta_A``
          ``theta_gf = (Fg theta_f) . theta_g``,  ``theta_g = (Fgamma theta_A) . theta_f``

A modification ``alpha: theta -> theta'`` satisfies
``theta'_f . (Ff alpha_A) = alpha_B . theta_f`` (lax) or
``theta'_f . alpha_B = (Ff alpha_A) . theta_f`` (op-lax).

The σ-s-limit ``L`` is computed as the category of σ-s-cones with vertex the
terminal category; its objects are encoded as ``(legs, cells)`` tuples of the
chosen objects and arrows, its arrows as ``(dom, cod, components)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping, Sequence

from ._search import Problem
from .fincat import (
    CellClass,
    Diagnostic,
    FinCategory,
    Functor,
    NatTrans,
    category_from_homs,
    compose,
    functor_category,
    flatten,
    inverse,
    iter_functors,
    enumerate_naturals,
    iso_check,
    terminal,
    validate_functor,
    validate_nat,
    vcomp,
    vcomp_all,
    whisker_left,
    whisker_right,
)
from .twocat import NotPie, PieStructure, TwoFunctor, pie_analysis

LAX = "lax"
OPLAX = "oplax"
ORIENTATIONS = (LAX, OPLAX)


@dataclass(frozen=True, eq=False)
class LaxCone:
    diagram: TwoFunctor
    vertex: FinCategory
    legs: tuple  # functors, aligned with diagram.dom.objects
    cells: tuple  # natural transformations, aligned with diagram.dom.one_cells
    orientation: str = LAX

    def leg(self, A) -> Functor:
        return self.legs[self.diagram.dom.index0[A]]

    def cell(self, f) -> NatTrans:
        return self.cells[self.diagram.dom.index1[f]]

    def _key(self):
        return (self.orientation, self.legs, self.cells)

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, LaxCone):
            return NotImplemented
        if hash(self) != hash(other):
            return False
        return self._key() == other._key() and self.vertex == other.vertex

    def __hash__(self):
        h = self.__dict__.get("_hash")
        if h is None:
            h = hash(self._key())
            object.__setattr__(self, "_hash", h)
        return h

    def __repr__(self):
        return f"LaxCone({self.orientation}, legs={[l.ob for l in self.legs]!r})"


@dataclass(frozen=True)
class Modification:
    dom: LaxCone
    cod: LaxCone
    comps: tuple  # natural transformations, aligned with objects

    def comp(self, A) -> NatTrans:
        return self.comps[self.dom.diagram.dom.index0[A]]

    def __hash__(self):
        h = self.__dict__.get("_hash")
        if h is None:
            h = hash((self.dom, self.cod, self.comps))
            object.__setattr__(self, "_hash", h)
        return h

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, Modification):
            return NotImplemented
        return hash(self) == hash(other) and self.comps == other.comps and self.dom == other.dom and self.cod == other.cod


def cell_boundary(F: TwoFunctor, orientation: str, f, leg_A: Functor, leg_B: Functor) -> tuple[Functor, Functor]:
    moved = compose(F.one[f], leg_A)
    return (moved, leg_B) if orientation == LAX else (leg_B, moved)


def _expected_lc1(F, orientation, f, g, theta_f, theta_g):
    moved = whisker_left(F.one[g], theta_f)
    return vcomp(theta_g, moved) if orientation == LAX else vcomp(moved, theta_g)


def _lc2_sides(F, orientation, gamma, leg_A, theta_f, theta_g):
    """``(lhs, rhs)`` of LC2 for ``gamma: f => g``."""
    pushed = whisker_right(F.two[gamma], leg_A)
    if orientation == LAX:
        return theta_f, vcomp(theta_g, pushed)
    return theta_g, vcomp(pushed, theta_f)


def check_cone(c: LaxCone) -> list[Diagnostic]:
    """Typing plus LC0, LC1, LC2."""
    F, A = c.diagram, c.diagram.dom
    out = []
    for o, leg in zip(A.objects, c.legs):
        if leg.dom != c.vertex or leg.cod != F.ob[o]:
            out.append(Diagnostic("leg", f"leg at {o!r} has the wrong type", (o,)))
    if out:
        return out
    for f, cell in zip(A.one_cells, c.cells):
        if (cell.src, cell.tgt) != cell_boundary(F, c.orientation, f, c.leg(A.src[f]), c.leg(A.tgt[f])):
            out.append(Diagnostic("cell", f"structural cell at {f!r} has the wrong boundary", (f,)))
        elif validate_nat(cell):
            out.append(Diagnostic("cell", f"structural cell at {f!r} is not natural", (f,)))
    if out:
        return out
    for o in A.objects:
        if not c.cell(A.id1[o]).is_identity():
            out.append(Diagnostic("LC0", f"cell at id_{o} is not an identity", (o,)))
    for (g, f), h in A.comp1.items():
        if c.cell(h) != _expected_lc1(F, c.orientation, f, g, c.cell(f), c.cell(g)):
            out.append(Diagnostic("LC1", f"LC1 fails at ({g!r}, {f!r})", (g, f)))
    for gamma in A.two_cells:
        f, g = A.src2[gamma], A.tgt2[gamma]
        lhs, rhs = _lc2_sides(F, c.orientation, gamma, c.leg(A.src[f]), c.cell(f), c.cell(g))
        if lhs != rhs:
            out.append(Diagnostic("LC2", f"LC2 fails at {gamma!r}", (gamma,)))
    return out


def is_sigma_s_cone(c: LaxCone, sigma: Iterable) -> bool:
    return all(c.cell(f).is_identity() for f in sigma)


def check_modification(m: Modification) -> list[Diagnostic]:
    c, d = m.dom, m.cod
    F, A = c.diagram, c.diagram.dom
    out = []
    for o, a in zip(A.objects, m.comps):
        if a.src != c.leg(o) or a.tgt != d.leg(o) or validate_nat(a):
            out.append(Diagnostic("component", f"component at {o!r} is ill-typed", (o,)))
    if out:
        return out
    for f in A.one_cells:
        if not _lcm_holds(F, c.orientation, f, c, d, m.comp(A.src[f]), m.comp(A.tgt[f])):
            out.append(Diagnostic("LCM", f"LCM fails at {f!r}", (f,)))
    return out


def _lcm_holds(F, orientation, f, c, d, alpha_A, alpha_B) -> bool:
    pushed = whisker_left(F.one[f], alpha_A)
    if orientation == LAX:
        return vcomp(d.cell(f), pushed) == vcomp(alpha_B, c.cell(f))
    return vcomp(d.cell(f), alpha_B) == vcomp(pushed, c.cell(f))


# -- enumeration ----------------------------------------------------------------------


def iter_cones(
    E: FinCategory,
    F: TwoFunctor,
    sigma: Iterable = (),
    sigma_s_only: bool = True,
    orientation: str = LAX,
    legs: Sequence[Functor] | None = None,
) -> Iterator[LaxCone]:
    """Every (σ-s-)cone with vertex ``E``; with ``legs`` given, only structures on those legs."""
    A = F.dom
    sigma = set(sigma) if sigma_s_only else set()
    fixed = {o: l for o, l in zip(A.objects, legs)} if legs is not None else None
    functor_cache: dict = {}
    nat_cache: dict = {}

    def functors(X):
        if X not in functor_cache:
            functor_cache[X] = list(iter_functors(E, X))
        return functor_cache[X]

    def naturals(s, t):
        key = (s, t)
        if key not in nat_cache:
            nat_cache[key] = enumerate_naturals(s, t)
        return nat_cache[key]

    free = [f for f in A.one_cells if not A.is_identity1(f) and f not in sigma]
    order = [("leg", o) for o in A.objects] + [("cell", f) for f in free]

    def leg(p, o):
        return p[("leg", o)]

    def cell(p, f):
        if ("cell", f) in p:
            return p[("cell", f)]
        # identities and Σ-arrows carry identity cells on the target leg
        return NatTrans.identity(leg(p, A.tgt[f]))

    def domain(var, p):
        kind, x = var
        if kind == "leg":
            return [fixed[x]] if fixed is not None else functors(F.ob[x])
        s, t = cell_boundary(F, orientation, x, leg(p, A.src[x]), leg(p, A.tgt[x]))
        return naturals(s, t)

    problem = Problem(order, domain)
    for f in A.one_cells:
        if A.is_identity1(f) or f not in sigma:
            continue
        a, b = A.src[f], A.tgt[f]
        problem.require([("leg", a), ("leg", b)],
                        lambda p, f=f, a=a, b=b: compose(F.one[f], leg(p, a)) == leg(p, b))
    for (g, f), h in A.comp1.items():
        if A.is_identity1(g) or A.is_identity1(f):
            continue
        involved = [("leg", A.src[f]), ("leg", A.tgt[f]), ("leg", A.tgt[g]), ("cell", f), ("cell", g), ("cell", h)]
        problem.require(involved, lambda p, f=f, g=g, h=h:
                        cell(p, h) == _expected_lc1(F, orientation, f, g, cell(p, f), cell(p, g)))
    for gamma in A.two_cells:
        if A.is_identity2(gamma):
            continue
        f, g = A.src2[gamma], A.tgt2[gamma]
        involved = [("leg", A.src[f]), ("leg", A.tgt[f]), ("cell", f), ("cell", g)]

        def lc2(p, gamma=gamma, f=f, g=g):
            lhs, rhs = _lc2_sides(F, orientation, gamma, leg(p, A.src[f]), cell(p, f), cell(p, g))
            return lhs == rhs

        problem.require(involved, lc2)
    for sol in problem.solutions():
        yield LaxCone(
            F,
            E,
            tuple(leg(sol, o) for o in A.objects),
            tuple(cell(sol, f) for f in A.one_cells),
            orientation,
        )


def iter_modifications(c: LaxCone, d: LaxCone) -> Iterator[Modification]:
    F, A = c.diagram, c.diagram.dom
    problem = Problem(list(A.objects), lambda o, p: enumerate_naturals(c.leg(o), d.leg(o)))
    for f in A.one_cells:
        if A.is_identity1(f):
            continue
        a, b = A.src[f], A.tgt[f]
        problem.require([a, b], lambda p, f=f, a=a, b=b: _lcm_holds(F, c.orientation, f, c, d, p[a], p[b]))
    for sol in problem.solutions():
        yield Modification(c, d, tuple(sol[o] for o in A.objects))


def identity_modification(c: LaxCone) -> Modification:
    return Modification(c, c, tuple(NatTrans.identity(l) for l in c.legs))


def compose_modifications(n: Modification, m: Modification) -> Modification:
    """``n . m`` (``m`` first)."""
    return Modification(m.dom, n.cod, tuple(vcomp(b, a) for b, a in zip(n.comps, m.comps)))


def enumerate_cones(
    E: FinCategory, F: TwoFunctor, sigma: Iterable = (), sigma_s_only: bool = True, orientation: str = LAX
) -> FinCategory:
    """The category of (σ-s-)cones with vertex ``E`` and their modifications."""
    cones = list(iter_cones(E, F, sigma, sigma_s_only, orientation))
    homs = {}
    for c in cones:
        for d in cones:
            mods = list(iter_modifications(c, d))
            if mods:
                homs[(c, d)] = mods
    identity = {c: identity_modification(c) for c in cones}
    return category_from_homs(cones, homs, identity, compose_modifications)


# -- the Lemma on modified cones -------------------------------------------------------


def modify_cone(c: LaxCone, new_legs: Sequence[Functor], alphas: Sequence[NatTrans]) -> tuple[LaxCone, Modification]:
    """Transport the cone structure along invertible ``alpha_A: theta_A => theta'_A``.

    op-lax: ``theta'_f = (Ff alpha_A) . theta_f . alpha_B^-1``;
    lax:    ``theta'_f = alpha_B . theta_f . (Ff alpha_A^-1)``.
    """
    F, A = c.diagram, c.diagram.dom
    alphas = tuple(alphas)
    new_legs = tuple(new_legs)
    for o, a, l0, l1 in zip(A.objects, alphas, c.legs, new_legs):
        if a.src != l0 or a.tgt != l1:
            raise ValueError(f"alpha at {o!r} does not go from the old leg to the new one")
        if not a.is_invertible():
            raise ValueError(f"alpha at {o!r} is not invertible")
    idx = A.index0
    cells = []
    for f in A.one_cells:
        a_A, a_B = alphas[idx[A.src[f]]], alphas[idx[A.tgt[f]]]
        if c.orientation == OPLAX:
            cells.append(vcomp_all(whisker_left(F.one[f], a_A), c.cell(f), inverse(a_B)))
        else:
            cells.append(vcomp_all(a_B, c.cell(f), whisker_left(F.one[f], inverse(a_A))))
    new = LaxCone(F, c.vertex, new_legs, tuple(cells), c.orientation)
    return new, Modification(c, new, alphas)


# -- σ-s-limits ----------------------------------------------------------------------


@dataclass
class LimitResult:
    L: FinCategory
    projections: dict  # object of the shape -> Functor L -> FA
    cells: dict  # 1-cell -> NatTrans
    diagram: TwoFunctor
    sigma: frozenset
    orientation: str = LAX
    pie: PieStructure | None = None
    cones_from_point: list = field(default_factory=list, repr=False)

    @property
    def cone(self) -> LaxCone:
        A = self.diagram.dom
        return LaxCone(
            self.diagram,
            self.L,
            tuple(self.projections[o] for o in A.objects),
            tuple(self.cells[f] for f in A.one_cells),
            self.orientation,
        )


def _point_key(c: LaxCone, pt):
    return (tuple(l.ob[pt] for l in c.legs), tuple(x.comp[pt] for x in c.cells))


def sigma_s_limit(F: TwoFunctor, sigma: Iterable, orientation: str = LAX) -> LimitResult:
    sigma = frozenset(sigma)
    A = F.dom
    one = terminal()
    (pt,) = one.objects
    cones = list(iter_cones(one, F, sigma, True, orientation))
    keys = [_point_key(c, pt) for c in cones]
    homs = {}
    for c, kc in zip(cones, keys):
        for d, kd in zip(cones, keys):
            arrs = [(kc, kd, tuple(a.comp[pt] for a in m.comps)) for m in iter_modifications(c, d)]
            if arrs:
                homs[(kc, kd)] = arrs
    cats = [F.ob[o] for o in A.objects]
    identity = {k: (k, k, tuple(C.identity[x] for C, x in zip(cats, k[0]))) for k in keys}

    def comp_fn(g, f):
        return (f[0], g[1], tuple(C.compose[(y, x)] for C, y, x in zip(cats, g[2], f[2])))

    L = category_from_homs(keys, homs, identity, comp_fn)
    projections = {}
    for i, o in enumerate(A.objects):
        projections[o] = Functor(L, F.ob[o], {k: k[0][i] for k in keys}, {a: a[2][i] for a in L.arrows})
    cells = {}
    for j, f in enumerate(A.one_cells):
        s, t = cell_boundary(F, orientation, f, projections[A.src[f]], projections[A.tgt[f]])
        cells[f] = NatTrans(s, t, {k: k[1][j] for k in keys})
    pie = pie_analysis(A, sigma)
    return LimitResult(L, projections, cells, F, sigma, orientation, pie if pie else None, cones)


def factor_cone(lim: LimitResult, c: LaxCone) -> Functor:
    """The unique ``E -> L`` whose composite with the limit cone is ``c``."""
    if c.orientation != lim.orientation:
        raise ValueError("cone orientation does not match the limit")
    E = c.vertex
    ob = {e: (tuple(l.ob[e] for l in c.legs), tuple(x.comp[e] for x in c.cells)) for e in E.objects}
    ar = {}
    for w in E.arrows:
        ar[w] = (ob[E.src[w]], ob[E.tgt[w]], tuple(l.ar[w] for l in c.legs))
    objs = set(lim.L.objects)
    arrs = lim.L.src
    for e, k in ob.items():
        if k not in objs:
            raise ValueError(f"value of the cone at {e!r} is not a σ-s-cone")
    for w, a in ar.items():
        if a not in arrs:
            raise ValueError(f"value of the cone at {w!r} is not a modification")
    return Functor(E, lim.L, ob, ar)


def induced_cell(lim: LimitResult, m: Modification) -> NatTrans:
    """The 2-cell between factorizations corresponding to a modification."""
    u, v = factor_cone(lim, m.dom), factor_cone(lim, m.cod)
    comps = {e: (u.ob[e], v.ob[e], tuple(a.comp[e] for a in m.comps)) for e in m.dom.vertex.objects}
    return NatTrans(u, v, comps)


def post_compose(lim: LimitResult, u: Functor) -> LaxCone:
    A = lim.diagram.dom
    return LaxCone(
        lim.diagram,
        u.dom,
        tuple(compose(lim.projections[o], u) for o in A.objects),
        tuple(whisker_right(lim.cells[f], u) for f in A.one_cells),
        lim.orientation,
    )


def verify_universal_property(lim: LimitResult, F: TwoFunctor | None, sigma, E: FinCategory) -> bool:
    """Post-composition ``Hom(E, L) -> Cones(E, F)`` is an isomorphism of categories.

    ``F`` and ``sigma`` default to the ones the limit was computed from.
    """
    F = F if F is not None else lim.diagram
    sigma = lim.sigma if sigma is None else frozenset(sigma)
    hom = functor_category(E, lim.L)
    cones = enumerate_cones(E, F, sigma, True, lim.orientation)
    targets = set(cones.objects)
    ob = {}
    for u in hom.objects:
        c = post_compose(lim, u)
        if c not in targets:
            return False
        ob[u] = c
    ar = {}
    for beta in hom.arrows:
        m = Modification(ob[beta.src], ob[beta.tgt],
                         tuple(whisker_left(lim.projections[o], beta) for o in F.dom.objects))
        if m not in cones.src:
            return False
        ar[beta] = m
    # check on relabelled copies: same verdict, without structural comparisons
    H, h_ob, h_ar = flatten(hom)
    K, k_ob, k_ar = flatten(cones)
    to_h = {v: k for k, v in h_ob.items()}
    to_ha = {v: k for k, v in h_ar.items()}
    to_k = {v: k for k, v in k_ob.items()}
    to_ka = {v: k for k, v in k_ar.items()}
    pi_star = Functor(H, K, {to_h[u]: to_k[c] for u, c in ob.items()},
                      {to_ha[b]: to_ka[m] for b, m in ar.items()})
    return not validate_functor(pi_star) and iso_check(pi_star)


def compatibility_check(lim: LimitResult, omega: CellClass, a0_only: bool, E: FinCategory) -> bool:
    """Modifications with components in ``omega`` (at all objects, or at the chosen
    initial objects) induce 2-cells in ``omega``."""
    A = lim.diagram.dom
    if a0_only:
        if lim.pie is None:
            raise ValueError("A0-compatibility needs a PIE indexing pair")
        watched = list(lim.pie.initial)
    else:
        watched = list(A.objects)
    cones = enumerate_cones(E, lim.diagram, lim.sigma, True, lim.orientation)
    for m in cones.arrows:
        if all(omega.contains(m.comp(o)) for o in watched):
            if not omega.contains(induced_cell(lim, m)):
                return False
    return True


def check_determination(lim: LimitResult, E: FinCategory) -> list[Diagnostic]:
    """Every σ-s-cone and modification with vertex ``E`` is fixed by its values at the initials."""
    if lim.pie is None:
        raise ValueError("determination needs a PIE indexing pair")
    F, A, pie = lim.diagram, lim.diagram.dom, lim.pie
    cones = enumerate_cones(E, F, lim.sigma, True, lim.orientation)
    out = []
    for c in cones.objects:
        for o in A.objects:
            fA = pie.canonical_arrow[o]
            if c.leg(o) != compose(F.one[fA], c.leg(pie.base(o))):
                out.append(Diagnostic("determination", f"leg at {o!r} is not F(f_A) of the initial leg", (o,)))
    for m in cones.arrows:
        for o in A.objects:
            fA = pie.canonical_arrow[o]
            if m.comp(o) != whisker_left(F.one[fA], m.comp(pie.base(o))):
                out.append(Diagnostic("determination", f"component at {o!r} is not F(f_A) of the initial one", (o,)))
    return out


def joint_monicity_counterexample(lim: LimitResult, E: FinCategory, dimension: int | None = None):
    """First pair of distinct functors ``E -> L`` (``dimension`` 1) or 2-cells
    (``dimension`` 2) that the initial projections do not separate; ``None`` if none."""
    if lim.pie is None:
        raise ValueError("joint monicity needs a PIE indexing pair")
    hom = functor_category(E, lim.L)
    pis = [lim.projections[o] for o in lim.pie.initial]
    if dimension in (None, 1):
        seen = {}
        for u in hom.objects:
            key = tuple(compose(p, u) for p in pis)
            other = seen.setdefault(key, u)
            if other != u:
                return {"dimension": 1, "first": other, "second": u}
    if dimension in (None, 2):
        seen = {}
        for beta in hom.arrows:
            # only parallel 2-cells are compared
            key = (beta.src, beta.tgt, tuple(whisker_left(p, beta) for p in pis))
            other = seen.setdefault(key, beta)
            if other != beta:
                return {"dimension": 2, "first": other, "second": beta}
    return None


def check_joint_monicity(lim: LimitResult, E: FinCategory, dimension: int | None = None) -> bool:
    """Functors ``E -> L`` and 2-cells between them are separated by the initial projections."""
    return joint_monicity_counterexample(lim, E, dimension) is None


def pie_or_raise(A, sigma) -> PieStructure:
    pie = pie_analysis(A, sigma)
    if isinstance(pie, NotPie):
        raise NotPieError(pie)
    return pie


class NotPieError(ValueError):
    def __init__(self, witness: NotPie):
        super().__init__(f"indexing pair is not PIE: component {list(witness.component)!r} has no initial object")
        self.witness = witness
