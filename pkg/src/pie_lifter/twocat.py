"""Finite strict 2-categories, marked families of 1-cells, and PIE analysis.

A :class:`TwoCategory` is presented by total tables: composition of 1-cells,
vertical composition of 2-cells, and left/right whiskering of a 2-cell by a
1-cell.  Horizontal composition is derived from whiskering.  2-functors land
in finite categories (:mod:`pie_lifter.fincat`).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Hashable, Iterable, Mapping

from .fincat import (
    Diagnostic,
    FinCategory,
    Functor,
    NatTrans,
    compose,
    validate_category,
    validate_functor,
    validate_nat,
    vcomp,
    whisker_left,
    whisker_right,
)

Cell = Hashable


class TwoCategory:
    def __init__(
        self,
        objects: Iterable,
        one_cells: Iterable[tuple[Cell, Hashable, Hashable]],
        id1: Mapping,
        comp1: Mapping,
        two_cells: Iterable[tuple[Cell, Cell, Cell]] = (),
        id2: Mapping | None = None,
        vcomp: Mapping | None = None,
        lwhisker: Mapping | None = None,
        rwhisker: Mapping | None = None,
        name: str | None = None,
    ):
        self.objects = tuple(objects)
        one_cells = tuple(one_cells)
        self.one_cells = tuple(c for c, _, _ in one_cells)
        self.src = {c: s for c, s, _ in one_cells}
        self.tgt = {c: t for c, _, t in one_cells}
        self.id1 = dict(id1)
        self.comp1 = dict(comp1)
        two_cells = tuple(two_cells)
        self.two_cells = tuple(c for c, _, _ in two_cells)
        self.src2 = {c: s for c, s, _ in two_cells}
        self.tgt2 = {c: t for c, _, t in two_cells}
        self.id2 = dict(id2 or {})
        self.vcomp = dict(vcomp or {})
        self.lwhisker = dict(lwhisker or {})
        self.rwhisker = dict(rwhisker or {})
        self._raw = (one_cells, two_cells)
        self.name = name

    @classmethod
    def build(cls, objects, one_cells=(), comp1=(), two_cells=(), vcomp=(), lwhisker=(), rwhisker=(), name=None):
        """Fill in identity cells and every table entry forced by the unit laws.

        Identity 1-cells are ``id_<obj>``, identity 2-cells ``id_<1-cell>``.
        Entries given explicitly are kept as given.
        """
        objects = tuple(objects)
        id1 = {o: f"id_{o}" for o in objects}
        ones = [(id1[o], o, o) for o in objects] + list(one_cells)
        table1 = dict(comp1)
        for c, s, t in ones:
            table1.setdefault((id1[t], c), c)
            table1.setdefault((c, id1[s]), c)
        id2 = {c: f"id_{c}" for c, _, _ in ones}
        twos = [(id2[c], c, c) for c, _, _ in ones] + list(two_cells)
        src2 = {c: s for c, s, _ in twos}
        tgt2 = {c: t for c, _, t in twos}
        src1 = {c: s for c, s, _ in ones}
        tgt1 = {c: t for c, _, t in ones}
        vt = dict(vcomp)
        lw = dict(lwhisker)
        rw = dict(rwhisker)
        for g, s, t in twos:
            vt.setdefault((id2[t], g), g)
            vt.setdefault((g, id2[s]), g)
            A, B = src1[s], tgt1[s]
            lw.setdefault((id1[B], g), g)
            rw.setdefault((g, id1[A]), g)
        for h, s, t in ones:
            for c, cs, ct in ones:
                if ct == s and (h, c) in table1:
                    lw.setdefault((h, id2[c]), id2[table1[(h, c)]])
                if cs == t and (c, h) in table1:
                    rw.setdefault((id2[c], h), id2[table1[(c, h)]])
        return cls(objects, ones, id1, table1, twos, id2, vt, lw, rw, name=name)

    @cached_property
    def _key(self):
        return (self.objects, self._raw, frozenset(self.id1.items()), frozenset(self.comp1.items()),
                frozenset(self.id2.items()), frozenset(self.vcomp.items()),
                frozenset(self.lwhisker.items()), frozenset(self.rwhisker.items()))

    def __hash__(self):
        return hash(self._key)

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, TwoCategory):
            return NotImplemented
        return self._key == other._key

    def __repr__(self):
        label = f" {self.name}" if self.name else ""
        return f"<TwoCategory{label}: {len(self.objects)} objects, {len(self.one_cells)} 1-cells, {len(self.two_cells)} 2-cells>"

    def is_identity1(self, f) -> bool:
        return self.id1.get(self.src[f]) == f

    def is_identity2(self, g) -> bool:
        return self.id2.get(self.src2[g]) == g

    @cached_property
    def index1(self) -> dict:
        return {c: i for i, c in enumerate(self.one_cells)}

    @cached_property
    def index0(self) -> dict:
        return {o: i for i, o in enumerate(self.objects)}

    def underlying(self) -> FinCategory:
        return FinCategory(
            self.objects, [(c, self.src[c], self.tgt[c]) for c in self.one_cells], self.id1, self.comp1, name=self.name
        )

    def hom_category(self, A, B) -> FinCategory:
        cells = [c for c in self.one_cells if self.src[c] == A and self.tgt[c] == B]
        keep = set(cells)
        twos = [(g, self.src2[g], self.tgt2[g]) for g in self.two_cells if self.src2[g] in keep]
        names = {g for g, _, _ in twos}
        table = {k: v for k, v in self.vcomp.items() if k[0] in names}
        return FinCategory(cells, twos, {c: self.id2[c] for c in cells if c in self.id2}, table)

    def composable_pairs(self):
        """``(g, f)`` with ``f: A -> B``, ``g: B -> C``."""
        for f in self.one_cells:
            for g in self.one_cells:
                if self.src[g] == self.tgt[f]:
                    yield g, f

    def hcomp(self, delta, gamma):
        """``delta * gamma`` as ``(delta g) . (h gamma)`` for ``gamma: f => g``, ``delta: h => k``."""
        return self.vcomp[(self.rwhisker[(delta, self.tgt2[gamma])], self.lwhisker[(self.src2[delta], gamma)])]


def validate_two_category(A: TwoCategory) -> list[Diagnostic]:
    out = [Diagnostic(d.code, "1-cells: " + d.message, d.ids) for d in validate_category(A.underlying())]
    if out:
        return out
    for g in A.two_cells:
        s, t = A.src2.get(g), A.tgt2.get(g)
        if s not in A.src or t not in A.src:
            out.append(Diagnostic("dangling-2-cell", f"2-cell {g!r} has an undeclared boundary", (g,)))
        elif (A.src[s], A.tgt[s]) != (A.src[t], A.tgt[t]):
            out.append(Diagnostic("non-parallel", f"2-cell {g!r} goes between non-parallel 1-cells", (g,)))
    if out:
        return out
    for A0 in A.objects:
        for B0 in A.objects:
            for d in validate_category(A.hom_category(A0, B0)):
                out.append(Diagnostic(d.code, f"hom({A0},{B0}): {d.message}", d.ids))
    if out:
        return out

    src1, tgt1 = A.src, A.tgt

    def bound(g):
        return A.src2[g], A.tgt2[g]

    for h in A.one_cells:
        for g in A.two_cells:
            f0, f1 = bound(g)
            if tgt1[f0] == src1[h]:
                r = A.lwhisker.get((h, g))
                if r is None:
                    out.append(Diagnostic("missing-whisker", f"no left whisker {h!r}.{g!r}", (h, g)))
                elif bound(r) != (A.comp1[(h, f0)], A.comp1[(h, f1)]):
                    out.append(Diagnostic("ill-typed-whisker", f"left whisker {h!r}.{g!r} has the wrong boundary", (h, g)))
            if tgt1[h] == src1[f0]:
                r = A.rwhisker.get((g, h))
                if r is None:
                    out.append(Diagnostic("missing-whisker", f"no right whisker {g!r}.{h!r}", (g, h)))
                elif bound(r) != (A.comp1[(f0, h)], A.comp1[(f1, h)]):
                    out.append(Diagnostic("ill-typed-whisker", f"right whisker {g!r}.{h!r} has the wrong boundary", (g, h)))
    for (h, g) in A.lwhisker:
        if h not in src1 or g not in A.src2 or tgt1[A.src2[g]] != src1[h]:
            out.append(Diagnostic("non-composable", f"left whisker on non-composable pair ({h!r}, {g!r})", (h, g)))
    for (g, h) in A.rwhisker:
        if h not in src1 or g not in A.src2 or tgt1[h] != src1[A.src2[g]]:
            out.append(Diagnostic("non-composable", f"right whisker on non-composable pair ({g!r}, {h!r})", (g, h)))
    if out:
        return out

    L, R, V = A.lwhisker, A.rwhisker, A.vcomp
    for h in A.one_cells:
        B = src1[h]
        # identity 2-cells, vertical composites
        for f in A.one_cells:
            if tgt1[f] == B and L[(h, A.id2[f])] != A.id2[A.comp1[(h, f)]]:
                out.append(Diagnostic("whisker-identity", f"{h!r}.id_{f!r} is not an identity", (h, f)))
            if src1[f] == tgt1[h] and R[(A.id2[f], h)] != A.id2[A.comp1[(f, h)]]:
                out.append(Diagnostic("whisker-identity", f"id_{f!r}.{h!r} is not an identity", (f, h)))
        for (d, g), e in V.items():
            if tgt1[A.src2[g]] == B and L[(h, e)] != V[(L[(h, d)], L[(h, g)])]:
                out.append(Diagnostic("whisker-vertical", f"{h!r} does not preserve {d!r}.{g!r}", (h, d, g)))
            if src1[A.src2[g]] == tgt1[h] and R[(e, h)] != V[(R[(d, h)], R[(g, h)])]:
                out.append(Diagnostic("whisker-vertical", f"{h!r} does not preserve {d!r}.{g!r} on the right", (h, d, g)))
    for g in A.two_cells:
        f0 = A.src2[g]
        for h in A.one_cells:
            if src1[h] != tgt1[f0]:
                continue
            for h2 in A.one_cells:
                if src1[h2] == tgt1[h] and L[(A.comp1[(h2, h)], g)] != L[(h2, L[(h, g)])]:
                    out.append(Diagnostic("whisker-composite", f"({h2!r}{h!r}).{g!r} differs from {h2!r}.({h!r}.{g!r})", (h2, h, g)))
            for k in A.one_cells:
                if tgt1[k] == src1[f0] and R[(L[(h, g)], k)] != L[(h, R[(g, k)])]:
                    out.append(Diagnostic("whisker-mixed", f"({h!r}.{g!r}).{k!r} differs from {h!r}.({g!r}.{k!r})", (h, g, k)))
        for k in A.one_cells:
            if tgt1[k] != src1[f0]:
                continue
            for k2 in A.one_cells:
                if tgt1[k2] == src1[k] and R[(g, A.comp1[(k, k2)])] != R[(R[(g, k)], k2)]:
                    out.append(Diagnostic("whisker-composite", f"{g!r}.({k!r}{k2!r}) differs from ({g!r}.{k!r}).{k2!r}", (g, k, k2)))
    for gamma in A.two_cells:
        f, g = A.src2[gamma], A.tgt2[gamma]
        for delta in A.two_cells:
            h, k = A.src2[delta], A.tgt2[delta]
            if src1[h] != tgt1[f]:
                continue
            if A.is_identity2(gamma) or A.is_identity2(delta):
                continue
            left = V[(R[(delta, g)], L[(h, gamma)])]
            right = V[(L[(k, gamma)], R[(delta, f)])]
            if left != right:
                out.append(Diagnostic("interchange", f"interchange fails for {delta!r} * {gamma!r}", (delta, gamma)))
    return out


# -- marked families and PIE analysis -------------------------------------------------


def validate_sigma_family(A: TwoCategory, sigma: Iterable) -> list[Diagnostic]:
    sigma = set(sigma)
    out = []
    for s in sorted(sigma - set(A.one_cells), key=str):
        out.append(Diagnostic("unknown-1-cell", f"{s!r} is not a 1-cell", (s,)))
    for o in A.objects:
        if A.id1[o] not in sigma:
            out.append(Diagnostic("identity-missing", f"identity not in Σ: {A.id1[o]!r}", (A.id1[o],)))
    for g, f in A.composable_pairs():
        if f in sigma and g in sigma and A.comp1[(g, f)] not in sigma:
            out.append(Diagnostic("not-closed", f"composite {g!r}.{f!r} not in Σ", (g, f)))
    return out


def sigma_closure(A: TwoCategory, marked: Iterable) -> frozenset:
    """Smallest family containing ``marked`` and the identities, closed under composition."""
    sigma = set(marked) | set(A.id1.values())
    changed = True
    while changed:
        changed = False
        for g, f in A.composable_pairs():
            if f in sigma and g in sigma and A.comp1[(g, f)] not in sigma:
                sigma.add(A.comp1[(g, f)])
                changed = True
    return frozenset(sigma)


@dataclass(frozen=True)
class PieStructure:
    components: tuple[tuple, ...]
    initial: tuple  # chosen initial object per component
    canonical_arrow: Mapping = field(hash=False)  # object -> the Σ-arrow from its component's initial

    @property
    def initials(self) -> tuple:
        return self.initial

    def base(self, obj):
        """The chosen initial object of the component containing ``obj``."""
        for comp, init in zip(self.components, self.initial):
            if obj in comp:
                return init
        raise KeyError(obj)


@dataclass(frozen=True)
class NotPie:
    component: tuple
    reason: str

    def __bool__(self):
        return False


def _components(A: TwoCategory, sigma) -> list[list]:
    parent = {o: o for o in A.objects}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for s in A.one_cells:
        if s in sigma:
            a, b = find(A.src[s]), find(A.tgt[s])
            if a != b:
                # keep the earlier-declared object as root so output order is stable
                if A.index0[a] < A.index0[b]:
                    parent[b] = a
                else:
                    parent[a] = b
    groups: dict = {}
    for o in A.objects:
        groups.setdefault(find(o), []).append(o)
    return sorted(groups.values(), key=lambda g: A.index0[g[0]])


def pie_analysis(A: TwoCategory, sigma) -> PieStructure | NotPie:
    sigma = set(sigma)
    comps = _components(A, sigma)
    initials = []
    canonical = {}
    for comp in comps:
        chosen = None
        for x in comp:
            arrows = {y: [s for s in A.one_cells if s in sigma and A.src[s] == x and A.tgt[s] == y] for y in comp}
            if all(len(v) == 1 for v in arrows.values()):
                chosen = x
                for y, (s,) in arrows.items():
                    canonical[y] = s
                break
        if chosen is None:
            return NotPie(tuple(comp), "no object of this component has exactly one Σ-arrow to every member")
        initials.append(chosen)
    return PieStructure(tuple(tuple(c) for c in comps), tuple(initials), canonical)


# -- 2-functors into finite categories ------------------------------------------------


class TwoFunctor:
    """A 2-functor from a finite 2-category into finite categories."""

    def __init__(self, dom: TwoCategory, ob: Mapping, one: Mapping, two: Mapping, name: str | None = None):
        self.dom = dom
        self.ob = dict(ob)
        self.one = dict(one)
        self.two = dict(two)
        self.name = name

    def __repr__(self):
        return f"<TwoFunctor {self.name or ''} on {self.dom!r}>"

    def __eq__(self, other):
        if not isinstance(other, TwoFunctor):
            return NotImplemented
        return (self.dom, self.ob, self.one, self.two) == (other.dom, other.ob, other.one, other.two)

    __hash__ = None


def validate_two_functor(F: TwoFunctor) -> list[Diagnostic]:
    A = F.dom
    out = []
    if set(F.ob) != set(A.objects) or set(F.one) != set(A.one_cells) or set(F.two) != set(A.two_cells):
        missing = [x for x in (*A.objects, *A.one_cells, *A.two_cells) if x not in F.ob and x not in F.one and x not in F.two]
        return [Diagnostic("partial-2-functor", f"no image for {missing!r}", tuple(missing))]
    for f in A.one_cells:
        Ff = F.one[f]
        for d in validate_functor(Ff):
            out.append(Diagnostic(d.code, f"F({f}): {d.message}", (f,)))
        if Ff.dom != F.ob[A.src[f]] or Ff.cod != F.ob[A.tgt[f]]:
            out.append(Diagnostic("endpoints", f"F({f}) has the wrong domain or codomain", (f,)))
    if out:
        return out
    for g in A.two_cells:
        Fg = F.two[g]
        if Fg.src != F.one[A.src2[g]] or Fg.tgt != F.one[A.tgt2[g]]:
            out.append(Diagnostic("boundary", f"F({g}) has the wrong boundary", (g,)))
            continue
        for d in validate_nat(Fg):
            out.append(Diagnostic(d.code, f"F({g}): {d.message}", (g,)))
    if out:
        return out
    for o in A.objects:
        if F.one[A.id1[o]] != Functor.identity(F.ob[o]):
            out.append(Diagnostic("identity", f"F(id_{o}) is not the identity", (o,)))
    for (g, f), h in A.comp1.items():
        if compose(F.one[g], F.one[f]) != F.one[h]:
            out.append(Diagnostic("composition", f"F({g}.{f}) != F({g}).F({f})", (g, f)))
    for f, i in A.id2.items():
        if F.two[i] != NatTrans.identity(F.one[f]):
            out.append(Diagnostic("identity-2-cell", f"F(id_{f}) is not an identity", (f,)))
    for (d, g), e in A.vcomp.items():
        if vcomp(F.two[d], F.two[g]) != F.two[e]:
            out.append(Diagnostic("vertical", f"F({d}.{g}) != F({d}).F({g})", (d, g)))
    for (h, g), e in A.lwhisker.items():
        if whisker_left(F.one[h], F.two[g]) != F.two[e]:
            out.append(Diagnostic("whisker", f"F({h}.{g}) != F({h}).F({g})", (h, g)))
    for (g, h), e in A.rwhisker.items():
        if whisker_right(F.two[g], F.one[h]) != F.two[e]:
            out.append(Diagnostic("whisker", f"F({g}.{h}) != F({g}).F({h})", (g, h)))
    return out
