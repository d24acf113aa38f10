"""Brute-force reference implementations used as test oracles.

These read only the raw tables of categories, functors and 2-functors and share
no algorithmic code with the package.
"""

from __future__ import annotations

import itertools


def comp(C, g, f):
    return C.compose[(g, f)]


def functors(C, D):
    """All functors as (object map, arrow map) pairs, by exhaustive search."""
    out = []
    for obs in itertools.product(D.objects, repeat=len(C.objects)):
        om = dict(zip(C.objects, obs))
        choices = [[b for b in D.arrows if D.src[b] == om[C.src[a]] and D.tgt[b] == om[C.tgt[a]]]
                   for a in C.arrows]
        for ars in itertools.product(*choices):
            am = dict(zip(C.arrows, ars))
            if any(am[C.identity[o]] != D.identity[om[o]] for o in C.objects):
                continue
            if all(am[h] == comp(D, am[g], am[f]) for (g, f), h in C.compose.items()):
                out.append((om, am))
    return out


def naturals(C, D, F, G):
    """Natural transformations between (object map, arrow map) pairs."""
    Fo, Fa = F
    Go, Ga = G
    choices = [[b for b in D.arrows if D.src[b] == Fo[c] and D.tgt[b] == Go[c]] for c in C.objects]
    out = []
    for comps in itertools.product(*choices):
        t = dict(zip(C.objects, comps))
        if all(comp(D, Ga[a], t[C.src[a]]) == comp(D, t[C.tgt[a]], Fa[a]) for a in C.arrows):
            out.append(t)
    return out


def pie(A, sigma):
    """Components (as sets), initial objects and canonical arrows, or None if not PIE."""
    sigma = set(sigma) | {A.id1[o] for o in A.objects}
    adj = {o: set() for o in A.objects}
    for s in sigma:
        adj[A.src[s]].add(A.tgt[s])
        adj[A.tgt[s]].add(A.src[s])
    seen, comps = set(), []
    for o in A.objects:
        if o in seen:
            continue
        stack, comp_ = [o], set()
        while stack:
            x = stack.pop()
            if x in comp_:
                continue
            comp_.add(x)
            stack.extend(adj[x])
        seen |= comp_
        comps.append(comp_)
    initials, canonical = [], {}
    for comp_ in comps:
        found = None
        for x in A.objects:
            if x not in comp_:
                continue
            arrows = {y: [s for s in sigma if A.src[s] == x and A.tgt[s] == y] for y in comp_}
            if all(len(v) == 1 for v in arrows.values()):
                found = (x, {y: v[0] for y, v in arrows.items()})
                break
        if found is None:
            return None
        initials.append(found[0])
        canonical.update(found[1])
    return comps, initials, canonical


def lax_cones_from_point(F, sigma, orientation):
    """σ-s-cones with vertex the terminal category and the modifications between
    them.  Returns (objects, arrows): objects are ((x_A...), (theta_f...)), arrows
    are (source, target, (a_A...))."""
    A = F.dom
    sigma = set(sigma)
    lax = orientation == "lax"
    objects = []
    for xs in itertools.product(*[F.ob[o].objects for o in A.objects]):
        x = dict(zip(A.objects, xs))
        choices = []
        for f in A.one_cells:
            B = F.ob[A.tgt[f]]
            moved = F.one[f].ob[x[A.src[f]]]
            s, t = (moved, x[A.tgt[f]]) if lax else (x[A.tgt[f]], moved)
            opts = [b for b in B.arrows if B.src[b] == s and B.tgt[b] == t]
            if f in sigma or f == A.id1[A.src[f]]:
                opts = [b for b in opts if b == B.identity[s] and s == t]
            choices.append(opts)
        for cells in itertools.product(*choices):
            th = dict(zip(A.one_cells, cells))
            ok = True
            for (g, f), h in A.comp1.items():
                C = F.ob[A.tgt[g]]
                pushed = F.one[g].ar[th[f]]
                want = comp(C, th[g], pushed) if lax else comp(C, pushed, th[g])
                if th[h] != want:
                    ok = False
                    break
            if ok:
                for gam in A.two_cells:
                    f, g = A.src2[gam], A.tgt2[gam]
                    B = F.ob[A.tgt[f]]
                    c = F.two[gam].comp[x[A.src[f]]]
                    if lax and th[f] != comp(B, th[g], c):
                        ok = False
                    if not lax and th[g] != comp(B, c, th[f]):
                        ok = False
            if ok:
                objects.append((xs, cells))
    arrows = []
    for s in objects:
        for t in objects:
            xs, cs = dict(zip(A.objects, s[0])), dict(zip(A.one_cells, s[1]))
            ys, ds = dict(zip(A.objects, t[0])), dict(zip(A.one_cells, t[1]))
            choices = [[b for b in F.ob[o].arrows if F.ob[o].src[b] == xs[o] and F.ob[o].tgt[b] == ys[o]]
                       for o in A.objects]
            for comps in itertools.product(*choices):
                a = dict(zip(A.objects, comps))
                good = True
                for f in A.one_cells:
                    B = F.ob[A.tgt[f]]
                    pushed = F.one[f].ar[a[A.src[f]]]
                    if lax:
                        good = comp(B, ds[f], pushed) == comp(B, a[A.tgt[f]], cs[f])
                    else:
                        good = comp(B, ds[f], a[A.tgt[f]]) == comp(B, pushed, cs[f])
                    if not good:
                        break
                if good:
                    arrows.append((s, t, comps))
    return objects, arrows


def inserter(C, D, F, G):
    """Objects (c, phi: Fc -> Gc) and arrows w: c -> c' with Gw . phi = phi' . Fw."""
    Fo, Fa = F
    Go, Ga = G
    objects = [(c, p) for c in C.objects for p in D.arrows if D.src[p] == Fo[c] and D.tgt[p] == Go[c]]
    arrows = [(s, t, w) for s in objects for t in objects for w in C.arrows
              if C.src[w] == s[0] and C.tgt[w] == t[0]
              and comp(D, Ga[w], s[1]) == comp(D, t[1], Fa[w])]
    return objects, arrows
