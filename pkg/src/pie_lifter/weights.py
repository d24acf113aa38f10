"""Category-valued weights, weighted 2-limits, and the 2-categories of elements.

Construction rules for ``El_W`` (used with lax σ-s-cones):

* objects ``(A, x)`` with ``x`` an object of ``WA``;
* 1-cells ``(f, x, w): (A, x) -> (B, y)`` with ``f: A -> B`` and ``w: Wf(x) -> y``;
  composite ``(g, y, v) . (f, x, w) = (gf, x, v . Wg(w))``;
* 2-cells ``(gamma, (f, x, w), (g, x, w'))`` for ``gamma: f => g`` with
  ``w = w' . (W gamma)_x``; compositions and whiskerings are those of ``gamma``.

``Gamma_W`` (used with op-lax σ-s-cones) reverses the element arrows:

* 1-cells ``(f, x, w): (A, x) -> (B, y)`` with ``w: y -> Wf(x)``;
  composite ``(g, y, v) . (f, x, w) = (gf, x, Wg(w) . v)``;
* 2-cells as above with ``w' = (W gamma)_x . w``.

In both, the marked family consists of the 1-cells ``(f, x, id)``.
"""

from __future__ import annotations

from dataclasses import dataclass

from ._search import Problem
from .cones import LAX, OPLAX, LaxCone, check_cone, factor_cone, is_sigma_s_cone, sigma_s_limit
from .fincat import (
    FinCategory,
    Functor,
    NatTrans,
    category_from_homs,
    compose,
    enumerate_naturals,
    iso_check,
    iter_functors,
    vcomp,
    whisker_left,
    whisker_right,
)
from .twocat import TwoCategory, TwoFunctor, pie_analysis

Weight = TwoFunctor


@dataclass
class ElCategory:
    shape: TwoCategory
    sigma: frozenset
    weight: TwoFunctor
    dual: bool
    ob: dict  # projection onto the weight's domain
    one: dict
    two: dict

    def reindex(self, F: TwoFunctor) -> TwoFunctor:
        """``F . projection``, a 2-functor on the category of elements."""
        return TwoFunctor(
            self.shape,
            {e: F.ob[A] for e, A in self.ob.items()},
            {c: F.one[f] for c, f in self.one.items()},
            {g: F.two[h] for g, h in self.two.items()},
        )


def grothendieck(W: TwoFunctor, dual: bool = False) -> ElCategory:
    A = W.dom
    objects = [(a, x) for a in A.objects for x in W.ob[a].objects]

    def target(f, x, w):
        WB = W.ob[A.tgt[f]]
        return (A.tgt[f], WB.src[w] if dual else WB.tgt[w])

    ones = []
    for f in A.one_cells:
        Wf = W.one[f]
        WB = W.ob[A.tgt[f]]
        for x in W.ob[A.src[f]].objects:
            fx = Wf.ob[x]
            arrows = [w for w in WB.arrows if (WB.tgt[w] if dual else WB.src[w]) == fx]
            for w in arrows:
                ones.append(((f, x, w), (A.src[f], x), target(f, x, w)))
    src1 = {c: s for c, s, _ in ones}
    tgt1 = {c: t for c, _, t in ones}
    id1 = {(a, x): (A.id1[a], x, W.ob[a].identity[x]) for a, x in objects}

    def comp1(c2, c1):
        g, y, v = c2
        f, x, w = c1
        WC = W.ob[A.tgt[g]]
        moved = W.one[g].ar[w]
        arrow = WC.compose[(moved, v)] if dual else WC.compose[(v, moved)]
        return (A.comp1[(g, f)], x, arrow)

    table1 = {}
    for c1, _, t in ones:
        for c2, s, _ in ones:
            if s == t:
                table1[(c2, c1)] = comp1(c2, c1)

    def admits(gamma, c1, c2):
        (f, x, w), (g, _, w2) = c1, c2
        WB = W.ob[A.tgt[f]]
        gx = W.two[gamma].comp[x]
        if dual:
            return w2 == WB.compose[(gx, w)]
        return w == WB.compose[(w2, gx)]

    twos = []
    parallel: dict = {}
    for c, s, t in ones:
        parallel.setdefault((s, t), []).append(c)
    for (s, t), cs in parallel.items():
        for c1 in cs:
            for c2 in cs:
                for gamma in A.two_cells:
                    if A.src2[gamma] == c1[0] and A.tgt2[gamma] == c2[0] and admits(gamma, c1, c2):
                        twos.append(((gamma, c1, c2), c1, c2))
    names2 = {g for g, _, _ in twos}
    id2 = {c: (A.id2[c[0]], c, c) for c, _, _ in ones}
    vt = {}
    by_src: dict = {}
    for g, s, t in twos:
        by_src.setdefault(s, []).append(g)
    for g, s, t in twos:
        for h in by_src.get(t, ()):
            vt[(h, g)] = (A.vcomp[(h[0], g[0])], s, h[2])
    lw, rw = {}, {}
    for g, s, t in twos:
        for h, hs, ht in ones:
            if hs == tgt1[s]:
                lw[(h, g)] = (A.lwhisker[(h[0], g[0])], table1[(h, s)], table1[(h, t)])
            if ht == src1[s]:
                rw[(g, h)] = (A.rwhisker[(g[0], h[0])], table1[(s, h)], table1[(t, h)])
    for table in (vt, lw, rw):
        for k, v in table.items():
            if v not in names2:
                raise AssertionError(f"category of elements is not closed: {k!r} -> {v!r}")
    shape = TwoCategory(objects, ones, id1, table1, twos, id2, vt, lw, rw,
                        name=f"{'Gamma' if dual else 'El'}_{W.name or 'W'}")
    sigma = frozenset(c for c in src1 if W.ob[A.tgt[c[0]]].is_identity(c[2]))
    return ElCategory(
        shape,
        sigma,
        W,
        dual,
        {e: e[0] for e in objects},
        {c: c[0] for c in src1},
        {g: g[0] for g, _, _ in twos},
    )


def grothendieck_dual(W: TwoFunctor) -> ElCategory:
    return grothendieck(W, dual=True)


def weighted_limit(W: TwoFunctor, F: TwoFunctor) -> FinCategory:
    """Strict 2-natural transformations ``W => F`` and their modifications.

    Objects are tuples of components ``tau_A: WA -> FA`` in object order; arrows are
    ``(tau, tau', (Gamma_A, ...))``.
    """
    if W.dom != F.dom:
        raise ValueError("weight and diagram must share their domain")
    A = W.dom
    problem = Problem(list(A.objects), lambda a, p: list(iter_functors(W.ob[a], F.ob[a])))
    for f in A.one_cells:
        if A.is_identity1(f):
            continue
        a, b = A.src[f], A.tgt[f]
        problem.require([a, b], lambda p, f=f, a=a, b=b: compose(F.one[f], p[a]) == compose(p[b], W.one[f]))
    for g in A.two_cells:
        if A.is_identity2(g):
            continue
        a, b = A.src[A.src2[g]], A.tgt[A.src2[g]]
        problem.require([a, b], lambda p, g=g, a=a, b=b:
                        whisker_right(F.two[g], p[a]) == whisker_left(p[b], W.two[g]))
    objects = [tuple(sol[a] for a in A.objects) for sol in problem.solutions()]
    idx = A.index0

    def modifications(t, u):
        prob = Problem(list(A.objects), lambda a, p: enumerate_naturals(t[idx[a]], u[idx[a]]))
        for f in A.one_cells:
            if A.is_identity1(f):
                continue
            a, b = A.src[f], A.tgt[f]
            prob.require([a, b], lambda p, f=f, a=a, b=b:
                         whisker_left(F.one[f], p[a]) == whisker_right(p[b], W.one[f]))
        return [(t, u, tuple(sol[a] for a in A.objects)) for sol in prob.solutions()]

    homs = {}
    for t in objects:
        for u in objects:
            ms = modifications(t, u)
            if ms:
                homs[(t, u)] = ms
    identity = {t: (t, t, tuple(NatTrans.identity(x) for x in t)) for t in objects}
    return category_from_homs(
        objects, homs, identity, lambda n, m: (m[0], n[1], tuple(vcomp(b, a) for b, a in zip(n[2], m[2])))
    )


@dataclass
class WeightedComparison:
    weighted: FinCategory
    conical: object  # LimitResult
    elements: ElCategory
    comparison: Functor | None
    iso: bool


def canonical_cone(W: TwoFunctor, F: TwoFunctor, K: FinCategory, el: ElCategory) -> LaxCone:
    """The σ-s-cone with vertex ``{W, F}`` evaluating 2-naturals at elements."""
    A = W.dom
    idx = A.index0
    G = el.reindex(F)
    legs = []
    for a, x in el.shape.objects:
        i = idx[a]
        legs.append(Functor(K, F.ob[a], {t: t[i].ob[x] for t in K.objects},
                            {m: m[2][i].comp[x] for m in K.arrows}))
    leg_of = dict(zip(el.shape.objects, legs))
    orientation = OPLAX if el.dual else LAX
    cells = []
    for c in el.shape.one_cells:
        f, x, w = c
        b = A.tgt[f]
        s, t = el.shape.src[c], el.shape.tgt[c]
        moved = compose(F.one[f], leg_of[s])
        src, tgt = (moved, leg_of[t]) if not el.dual else (leg_of[t], moved)
        cells.append(NatTrans(src, tgt, {tau: tau[idx[b]].ar[w] for tau in K.objects}))
    return LaxCone(G, K, tuple(legs), tuple(cells), orientation)


def compare_weighted_conical(W: TwoFunctor, F: TwoFunctor, dual: bool = False) -> WeightedComparison:
    K = weighted_limit(W, F)
    el = grothendieck(W, dual=dual)
    lim = sigma_s_limit(el.reindex(F), el.sigma, OPLAX if dual else LAX)
    cone = canonical_cone(W, F, K, el)
    if check_cone(cone) or not is_sigma_s_cone(cone, el.sigma):
        return WeightedComparison(K, lim, el, None, False)
    try:
        comparison = factor_cone(lim, cone)
    except ValueError:
        return WeightedComparison(K, lim, el, None, False)
    return WeightedComparison(K, lim, el, comparison, iso_check(comparison))


def is_pie_weight(W: TwoFunctor) -> bool:
    el = grothendieck(W)
    return bool(pie_analysis(el.shape, el.sigma))
