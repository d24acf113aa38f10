"""Finite categories, functors and natural transformations as explicit tables.

Everything here is exhaustive: hom-sets are listed, composition is a lookup
table, and the three limit primitives (products, inserters, equifiers) are
computed by enumerating objects and arrows.  Ids are arbitrary hashables;
constructions use tuples of constituent ids and :func:`flatten` renames them.
"""

from __future__ import annotations

import enum
import functools
from collections import abc
import itertools
from dataclasses import dataclass
from functools import cached_property
from typing import Hashable, Iterable, Iterator, Mapping, Sequence

from ._search import Problem

Obj = Hashable
Arr = Hashable


@dataclass(frozen=True)
class Diagnostic:
    code: str
    message: str
    ids: tuple = ()

    def __str__(self):
        return f"{self.code}: {self.message}"


def identity_name(obj: Obj) -> Arr:
    if isinstance(obj, str):
        return f"id_{obj}"
    return ("id", obj)


class FinCategory:
    """A finite category with a total composition table.

    ``compose[(g, f)]`` is ``g . f`` (``f`` first).  Equality is structural and
    order sensitive; the hash is cached.
    """

    def __init__(
        self,
        objects: Iterable[Obj],
        arrows: Iterable[tuple[Arr, Obj, Obj]],
        identity: Mapping[Obj, Arr],
        compose: Mapping[tuple[Arr, Arr], Arr],
        name: str | None = None,
    ):
        self.objects = tuple(objects)
        arrows = tuple(arrows)
        self.arrows = tuple(a for a, _, _ in arrows)
        self.src = {a: s for a, s, _ in arrows}
        self.tgt = {a: t for a, _, t in arrows}
        self._raw_arrows = arrows
        self.identity = dict(identity)
        self.compose = dict(compose)
        self.name = name

    @classmethod
    def build(cls, objects, arrows=(), compose=(), name=None) -> "FinCategory":
        """Category with identities named by :func:`identity_name` and unit-law entries filled in."""
        objects = tuple(objects)
        identity = {o: identity_name(o) for o in objects}
        arrows = tuple(arrows)
        full = [(identity[o], o, o) for o in objects] + list(arrows)
        table = dict(compose.items() if isinstance(compose, Mapping) else compose)
        for a, s, t in full:
            table.setdefault((identity[t], a), a)
            table.setdefault((a, identity[s]), a)
        return cls(objects, full, identity, table, name=name)

    # -- structure ---------------------------------------------------------------

    @cached_property
    def _key(self):
        return (
            self.objects,
            self._raw_arrows,
            frozenset(self.identity.items()),
            frozenset(self.compose.items()),
        )

    @cached_property
    def _hash(self):
        return hash(self._key)

    def __hash__(self):
        return self._hash

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, FinCategory):
            return NotImplemented
        return self._hash == other._hash and self._key == other._key

    def __repr__(self):
        label = f" {self.name}" if self.name else ""
        return f"<FinCategory{label}: {len(self.objects)} objects, {len(self.arrows)} arrows>"

    @cached_property
    def homs(self) -> dict[tuple[Obj, Obj], tuple[Arr, ...]]:
        table: dict[tuple[Obj, Obj], list] = {}
        for a in self.arrows:
            table.setdefault((self.src[a], self.tgt[a]), []).append(a)
        return {k: tuple(v) for k, v in table.items()}

    def hom(self, a: Obj, b: Obj) -> tuple[Arr, ...]:
        return self.homs.get((a, b), ())

    @cached_property
    def out_arrows(self) -> dict[Obj, tuple[Arr, ...]]:
        table: dict[Obj, list] = {o: [] for o in self.objects}
        for a in self.arrows:
            table.setdefault(self.src[a], []).append(a)
        return {k: tuple(v) for k, v in table.items()}

    def comp(self, g: Arr, f: Arr) -> Arr:
        return self.compose[(g, f)]

    def id(self, obj: Obj) -> Arr:
        return self.identity[obj]

    def is_identity(self, a: Arr) -> bool:
        return self.identity.get(self.src[a]) == a

    @cached_property
    def _inverses(self) -> dict[Arr, Arr]:
        inv = {}
        for a in self.arrows:
            s, t = self.src[a], self.tgt[a]
            for b in self.hom(t, s):
                if self.compose.get((b, a)) == self.identity[s] and self.compose.get((a, b)) == self.identity[t]:
                    inv[a] = b
                    break
        return inv

    def is_iso(self, a: Arr) -> bool:
        return a in self._inverses

    def inverse(self, a: Arr) -> Arr:
        try:
            return self._inverses[a]
        except KeyError:
            raise ValueError(f"arrow {a!r} is not invertible") from None

    def composable_pairs(self) -> Iterator[tuple[Arr, Arr]]:
        """Pairs ``(g, f)`` with ``tgt f == src g`` in declaration order of ``f`` then ``g``."""
        for f in self.arrows:
            for g in self.out_arrows.get(self.tgt[f], ()):
                yield g, f


# -- standard small categories ------------------------------------------------------


def terminal() -> FinCategory:
    return FinCategory.build(["*"], name="1")


def discrete(objects: Sequence[Obj]) -> FinCategory:
    return FinCategory.build(objects)


def walking_arrow() -> FinCategory:
    return FinCategory.build(["0", "1"], [("u", "0", "1")], name="2")


def walking_iso() -> FinCategory:
    return FinCategory.build(
        ["0", "1"],
        [("i", "0", "1"), ("j", "1", "0")],
        {("j", "i"): "id_0", ("i", "j"): "id_1"},
        name="Iso",
    )


def parallel_pair() -> FinCategory:
    return FinCategory.build(["0", "1"], [("u", "0", "1"), ("v", "0", "1")], name="Par")


def chain(n: int) -> FinCategory:
    """The ordinal ``n`` as a category: objects 0..n-1, one arrow i->j for i<j."""
    objs = [str(i) for i in range(n)]
    arrows = [(f"{i}{j}", objs[i], objs[j]) for i in range(n) for j in range(i + 1, n)]
    table = {}
    for i in range(n):
        for j in range(i + 1, n):
            for k in range(j + 1, n):
                table[(f"{j}{k}", f"{i}{j}")] = f"{i}{k}"
    return FinCategory.build(objs, arrows, table, name=str(n))


def monoid(elements: Sequence[Arr], product: Mapping[tuple[Arr, Arr], Arr], unit: Arr = "e") -> FinCategory:
    """One-object category; ``product[(g, f)]`` is ``g . f`` on non-unit elements."""
    table = dict(product)
    arrows = [(unit, "*", "*")] + [(x, "*", "*") for x in elements]
    for x in [unit, *elements]:
        table[(unit, x)] = x
        table[(x, unit)] = x
    return FinCategory(["*"], arrows, {"*": unit}, table)


# -- validation ---------------------------------------------------------------------


def validate_category(C: FinCategory) -> list[Diagnostic]:
    out: list[Diagnostic] = []
    if len(set(C.objects)) != len(C.objects):
        dup = [o for o in C.objects if C.objects.count(o) > 1]
        out.append(Diagnostic("duplicate-object", f"object ids repeated: {sorted(map(str, set(dup)))}", tuple(dup)))
    if len(set(C.arrows)) != len(C.arrows):
        dup = [a for a in C.arrows if C.arrows.count(a) > 1]
        out.append(Diagnostic("duplicate-arrow", f"arrow ids repeated: {sorted(map(str, set(dup)))}", tuple(dup)))
    objs = set(C.objects)
    for a in C.arrows:
        if C.src[a] not in objs or C.tgt[a] not in objs:
            out.append(Diagnostic("dangling-arrow", f"arrow {a!r} has an undeclared endpoint", (a,)))
    if out:
        return out
    for o in C.objects:
        i = C.identity.get(o)
        if i is None or i not in C.src or C.src[i] != o or C.tgt[i] != o:
            out.append(Diagnostic("missing-identity", f"object {o!r} has no identity endo-arrow", (o,)))
    for (g, f), h in C.compose.items():
        if f not in C.src or g not in C.src:
            out.append(Diagnostic("unknown-arrow", f"compose entry mentions an unknown arrow: {g!r}.{f!r}", (g, f)))
        elif C.tgt[f] != C.src[g]:
            out.append(Diagnostic("non-composable", f"compose on non-composable pair ({g!r}, {f!r})", (g, f)))
        elif h not in C.src or C.src[h] != C.src[f] or C.tgt[h] != C.tgt[g]:
            out.append(Diagnostic("ill-typed-composite", f"composite {g!r}.{f!r} = {h!r} has wrong endpoints", (g, f, h)))
    if out:
        return out
    for g, f in C.composable_pairs():
        if (g, f) not in C.compose:
            out.append(Diagnostic("missing-composite", f"no composite recorded for {g!r}.{f!r}", (g, f)))
    if out:
        return out
    for a in C.arrows:
        if C.compose[(C.identity[C.tgt[a]], a)] != a or C.compose[(a, C.identity[C.src[a]])] != a:
            out.append(Diagnostic("identity-law", f"identity law fails at {a!r}", (a,)))
    for g, f in C.composable_pairs():
        gf = C.compose[(g, f)]
        for h in C.out_arrows.get(C.tgt[g], ()):
            if C.compose[(h, gf)] != C.compose[(C.compose[(h, g)], f)]:
                out.append(Diagnostic("associativity", f"associativity fails at ({h!r}, {g!r}, {f!r})", (h, g, f)))
    return out


# -- functors and natural transformations --------------------------------------------


class Functor:
    __slots__ = ("dom", "cod", "ob", "ar", "_hash")

    def __init__(self, dom: FinCategory, cod: FinCategory, ob: Mapping, ar: Mapping):
        self.dom = dom
        self.cod = cod
        self.ob = dict(ob)
        self.ar = dict(ar)
        self._hash = None

    @classmethod
    def identity(cls, C: FinCategory) -> "Functor":
        return cls(C, C, {o: o for o in C.objects}, {a: a for a in C.arrows})

    @classmethod
    def constant(cls, C: FinCategory, D: FinCategory, obj: Obj) -> "Functor":
        return cls(C, D, {o: obj for o in C.objects}, {a: D.identity[obj] for a in C.arrows})

    def key(self):
        return (tuple(self.ob[o] for o in self.dom.objects), tuple(self.ar[a] for a in self.dom.arrows))

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self.key())
        return self._hash

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, Functor):
            return NotImplemented
        if self._hash is not None and other._hash is not None and self._hash != other._hash:
            return False
        return self.ob == other.ob and self.ar == other.ar and self.dom == other.dom and self.cod == other.cod

    def __repr__(self):
        return f"Functor({self.ob!r})"

    def __matmul__(self, other: "Functor") -> "Functor":
        return compose(self, other)


def compose(G: Functor, F: Functor) -> Functor:
    """``G . F``."""
    if F.cod != G.dom:
        raise ValueError("functors are not composable")
    return Functor(F.dom, G.cod, {o: G.ob[x] for o, x in F.ob.items()}, {a: G.ar[x] for a, x in F.ar.items()})


def validate_functor(F: Functor) -> list[Diagnostic]:
    C, D = F.dom, F.cod
    out = []
    if set(F.ob) != set(C.objects) or set(F.ar) != set(C.arrows):
        return [Diagnostic("partial-functor", "functor is not defined on every object and arrow")]
    dobjs = set(D.objects)
    for o in C.objects:
        if F.ob[o] not in dobjs:
            out.append(Diagnostic("bad-object-image", f"{o!r} maps outside the codomain", (o,)))
    if out:
        return out
    for a in C.arrows:
        b = F.ar[a]
        if b not in D.src or D.src[b] != F.ob[C.src[a]] or D.tgt[b] != F.ob[C.tgt[a]]:
            out.append(Diagnostic("endpoints", f"image of {a!r} has wrong endpoints", (a,)))
    if out:
        return out
    for o in C.objects:
        if F.ar[C.identity[o]] != D.identity[F.ob[o]]:
            out.append(Diagnostic("identity", f"identity of {o!r} not preserved", (o,)))
    for (g, f), h in C.compose.items():
        if D.compose.get((F.ar[g], F.ar[f])) != F.ar[h]:
            out.append(Diagnostic("composition", f"composite {g!r}.{f!r} not preserved", (g, f)))
    return out


class NatTrans:
    """``src => tgt``; ``comp[c]`` is the component at object ``c`` of the common domain."""

    __slots__ = ("src", "tgt", "comp", "_hash")

    def __init__(self, src: Functor, tgt: Functor, comp: Mapping):
        self.src = src
        self.tgt = tgt
        self.comp = dict(comp)
        self._hash = None

    @property
    def dom(self) -> FinCategory:
        return self.src.dom

    @property
    def cod(self) -> FinCategory:
        return self.src.cod

    @classmethod
    def identity(cls, F: Functor) -> "NatTrans":
        return cls(F, F, {o: F.cod.identity[F.ob[o]] for o in F.dom.objects})

    def key(self):
        return tuple(self.comp[o] for o in self.dom.objects)

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.key(), self.src, self.tgt))
        return self._hash

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, NatTrans):
            return NotImplemented
        if self._hash is not None and other._hash is not None and self._hash != other._hash:
            return False
        return self.comp == other.comp and self.src == other.src and self.tgt == other.tgt

    def __repr__(self):
        return f"NatTrans({self.comp!r})"

    def is_identity(self) -> bool:
        return self.src == self.tgt and all(self.cod.is_identity(a) for a in self.comp.values())

    def is_invertible(self) -> bool:
        return all(self.cod.is_iso(a) for a in self.comp.values())


def vcomp(beta: NatTrans, alpha: NatTrans) -> NatTrans:
    """Vertical composite ``beta . alpha`` (alpha first)."""
    if alpha.tgt != beta.src:
        raise ValueError("natural transformations are not vertically composable")
    D = alpha.cod
    return NatTrans(alpha.src, beta.tgt, {o: D.compose[(beta.comp[o], a)] for o, a in alpha.comp.items()})


def vcomp_all(*cells: NatTrans) -> NatTrans:
    """``cells[0] . cells[1] . ...`` (last one applied first)."""
    out = cells[-1]
    for c in reversed(cells[:-1]):
        out = vcomp(c, out)
    return out


def whisker_left(H: Functor, alpha: NatTrans) -> NatTrans:
    """``H alpha``: post-compose every component with ``H``."""
    return NatTrans(compose(H, alpha.src), compose(H, alpha.tgt), {o: H.ar[a] for o, a in alpha.comp.items()})


def whisker_right(alpha: NatTrans, K: Functor) -> NatTrans:
    """``alpha K``: restrict along ``K``."""
    return NatTrans(compose(alpha.src, K), compose(alpha.tgt, K), {o: alpha.comp[K.ob[o]] for o in K.dom.objects})


def hcomp(beta: NatTrans, alpha: NatTrans) -> NatTrans:
    """Horizontal composite ``beta * alpha`` for ``alpha: F => G`` then ``beta: H => K``."""
    return vcomp(whisker_right(beta, alpha.tgt), whisker_left(beta.src, alpha))


def inverse(alpha: NatTrans) -> NatTrans:
    D = alpha.cod
    return NatTrans(alpha.tgt, alpha.src, {o: D.inverse(a) for o, a in alpha.comp.items()})


def validate_nat(alpha: NatTrans) -> list[Diagnostic]:
    F, G = alpha.src, alpha.tgt
    if F.dom != G.dom or F.cod != G.cod:
        return [Diagnostic("not-parallel", "source and target functors are not parallel")]
    C, D = F.dom, F.cod
    out = []
    for o in C.objects:
        a = alpha.comp.get(o)
        if a is None or a not in D.src or D.src[a] != F.ob[o] or D.tgt[a] != G.ob[o]:
            out.append(Diagnostic("component", f"component at {o!r} is missing or ill-typed", (o,)))
    if out:
        return out
    for w in C.arrows:
        s, t = C.src[w], C.tgt[w]
        if D.compose[(G.ar[w], alpha.comp[s])] != D.compose[(alpha.comp[t], F.ar[w])]:
            out.append(Diagnostic("naturality", f"naturality square fails at {w!r}", (w,)))
    return out


class CellClass(enum.Enum):
    """Families of 2-cells of Cat: identities, invertible naturals, all naturals."""

    STRICT = "s"
    PSEUDO = "p"
    LAX = "l"

    @property
    def rank(self) -> int:
        """0 for strict, 1 for pseudo, 2 for lax; classes are nested by rank."""
        return "spl".index(self.value)

    def contains(self, alpha: NatTrans) -> bool:
        if self is CellClass.LAX:
            return True
        if self is CellClass.PSEUDO:
            return alpha.is_invertible()
        return alpha.is_identity()

    def contains_arrow(self, C: FinCategory, a: Arr) -> bool:
        """Membership of a single arrow, read as a 2-cell between functors out of 1."""
        if self is CellClass.LAX:
            return True
        if self is CellClass.PSEUDO:
            return C.is_iso(a)
        return C.is_identity(a)

    @classmethod
    def parse(cls, tag: str) -> "CellClass":
        aliases = {"s": cls.STRICT, "strict": cls.STRICT, "p": cls.PSEUDO, "pseudo": cls.PSEUDO,
                   "l": cls.LAX, "lax": cls.LAX}
        try:
            return aliases[tag.lower()]
        except KeyError:
            raise ValueError(f"unknown cell class {tag!r}") from None


# -- enumeration ----------------------------------------------------------------------


def enumerate_functors(C: FinCategory, D: FinCategory) -> list[Functor]:
    return list(iter_functors(C, D))


def iter_functors(C: FinCategory, D: FinCategory) -> Iterator[Functor]:
    loose = [a for a in C.arrows if not C.is_identity(a)]
    order = [("o", o) for o in C.objects] + [("a", a) for a in loose]

    def value(kind, x, partial):
        if kind == "a" and C.is_identity(x):
            return D.identity[partial[("o", C.src[x])]]
        return partial[(kind, x)]

    def domain(var, partial):
        kind, x = var
        if kind == "o":
            return D.objects
        return D.hom(partial[("o", C.src[x])], partial[("o", C.tgt[x])])

    problem = Problem(order, domain)
    for (g, f), h in C.compose.items():
        if C.is_identity(g) or C.is_identity(f):
            continue
        involved = [("a", g), ("a", f)] + ([] if C.is_identity(h) else [("a", h)])

        def check(p, g=g, f=f, h=h):
            return D.compose[(value("a", g, p), value("a", f, p))] == value("a", h, p)

        problem.require(involved, check)
    for sol in problem.solutions():
        ob = {o: sol[("o", o)] for o in C.objects}
        ar = {a: (D.identity[ob[C.src[a]]] if C.is_identity(a) else sol[("a", a)]) for a in C.arrows}
        yield Functor(C, D, ob, ar)


def enumerate_naturals(F: Functor, G: Functor) -> list[NatTrans]:
    C, D = F.dom, F.cod
    order = list(C.objects)

    def domain(o, partial):
        return D.hom(F.ob[o], G.ob[o])

    problem = Problem(order, domain)
    for w in C.arrows:
        if C.is_identity(w):
            continue
        s, t = C.src[w], C.tgt[w]

        def check(p, w=w, s=s, t=t):
            return D.compose[(G.ar[w], p[s])] == D.compose[(p[t], F.ar[w])]

        problem.require([s, t], check)
    return [NatTrans(F, G, sol) for sol in problem.solutions()]


def category_from_homs(objects, hom_lists, identity, compose_fn, name=None) -> FinCategory:
    """Assemble a category from per-pair hom lists, computing the table with ``compose_fn(g, f)``."""
    arrows = []
    out_of: dict = {o: [] for o in objects}
    for (a, b), arrs in hom_lists.items():
        for x in arrs:
            arrows.append((x, a, b))
    order = {o: i for i, o in enumerate(objects)}
    arrows.sort(key=lambda t: (order[t[1]], order[t[2]]))
    for x, a, b in arrows:
        out_of[a].append((x, b))
    table = {}
    for f, a, b in arrows:
        for g, c in out_of[b]:
            table[(g, f)] = compose_fn(g, f)
    return FinCategory(objects, arrows, identity, table, name=name)


def functor_category(C: FinCategory, D: FinCategory) -> FinCategory:
    """``[C, D]``: functors as objects, natural transformations as arrows."""
    objects = enumerate_functors(C, D)
    homs = {(F, G): enumerate_naturals(F, G) for F in objects for G in objects}
    homs = {k: v for k, v in homs.items() if v}
    identity = {F: NatTrans.identity(F) for F in objects}
    return category_from_homs(objects, homs, identity, vcomp)


def small_categories(max_objects: int = 2, max_arrows: int = 4) -> list[FinCategory]:
    """Every category with at most the given numbers of objects and arrows
    (identities included), one per isomorphism class."""
    return list(_small_categories(max_objects, max_arrows))


@functools.lru_cache(maxsize=None)
def _small_categories(max_objects: int, max_arrows: int) -> tuple:
    out = []
    seen = set()
    for n in range(1, max_objects + 1):
        objs = tuple(str(i) for i in range(n))
        pairs = [(s, t) for s in objs for t in objs]
        spare = max_arrows - n
        for sizes in itertools.product(range(spare + 1), repeat=len(pairs)):
            if sum(sizes) > spare:
                continue
            arrows = []
            for (s, t), k in zip(pairs, sizes):
                arrows.extend((f"a{len(arrows) + i}", s, t) for i in range(k))
            for C in _composition_tables(objs, arrows):
                key = _iso_key(C)
                if key not in seen:
                    seen.add(key)
                    out.append(C)
    for i, C in enumerate(out):
        C.name = f"small{i}"
    return tuple(out)


def _composition_tables(objs, arrows) -> Iterator[FinCategory]:
    ident = {o: identity_name(o) for o in objs}
    src = {a: s for a, s, _ in arrows}
    tgt = {a: t for a, _, t in arrows}
    for o in objs:
        src[ident[o]] = tgt[ident[o]] = o
    hom: dict = {}
    for a in src:
        hom.setdefault((src[a], tgt[a]), []).append(a)
    names = [a for a, _, _ in arrows]
    nonid = set(names)
    composable = [(g, f) for f in names for g in names if src[g] == tgt[f]]
    choices = [hom[(src[f], tgt[g])] for g, f in composable]
    triples = [(h, g, f) for g, f in composable for h in names if src[h] == tgt[g]]
    for pick in itertools.product(*choices):
        table = dict(zip(composable, pick))

        def c(y, x):
            if y not in nonid:
                return x
            if x not in nonid:
                return y
            return table[(y, x)]

        if all(c(c(h, g), f) == c(h, c(g, f)) for h, g, f in triples):
            C = FinCategory.build(objs, arrows, table)
            if not validate_category(C):
                yield C


def _iso_key(C: FinCategory):
    best = None
    nonid = [a for a in C.arrows if not C.is_identity(a)]
    for perm in itertools.permutations(C.objects):
        on = dict(zip(C.objects, perm))
        for order in itertools.permutations(nonid):
            an = {a: f"x{i}" for i, a in enumerate(order)}
            an.update({C.identity[o]: f"id{on[o]}" for o in C.objects})
            key = (
                tuple(sorted((an[a], on[C.src[a]], on[C.tgt[a]]) for a in C.arrows)),
                tuple(sorted((an[g], an[f], an[h]) for (g, f), h in C.compose.items())),
            )
            if best is None or key < best:
                best = key
    return best


def iso_check(F: Functor) -> bool:
    """Bijective on objects and on every hom-set."""
    C, D = F.dom, F.cod
    images = [F.ob[o] for o in C.objects]
    if len(set(images)) != len(images) or set(images) != set(D.objects) or len(D.objects) != len(C.objects):
        return False
    for a in C.objects:
        for b in C.objects:
            src = C.hom(a, b)
            tgt = D.hom(F.ob[a], F.ob[b])
            mapped = {F.ar[x] for x in src}
            if len(mapped) != len(src) or mapped != set(tgt):
                return False
    return True


# -- limit primitives -----------------------------------------------------------------


def product(factors: Sequence[FinCategory]) -> tuple[FinCategory, list[Functor]]:
    factors = list(factors)
    objects = list(itertools.product(*[F.objects for F in factors]))
    arrows = [
        (arr, tuple(F.src[x] for F, x in zip(factors, arr)), tuple(F.tgt[x] for F, x in zip(factors, arr)))
        for arr in itertools.product(*[F.arrows for F in factors])
    ]
    identity = {o: tuple(F.identity[x] for F, x in zip(factors, o)) for o in objects}
    table = {}
    by_src: dict = {}
    for a, s, t in arrows:
        by_src.setdefault(s, []).append(a)
    for f, s, t in arrows:
        for g in by_src.get(t, ()):
            table[(g, f)] = tuple(F.compose[(y, x)] for F, y, x in zip(factors, g, f))
    P = FinCategory(objects, arrows, identity, table)
    projections = [
        Functor(P, F, {o: o[i] for o in objects}, {a: a[i] for a, _, _ in arrows}) for i, F in enumerate(factors)
    ]
    return P, projections


class _Componentwise(abc.Mapping):
    """Read-only table computed factor by factor on demand."""

    def __init__(self, factors, lookup, keys):
        self._factors = factors
        self._lookup = lookup
        self._keys = keys

    def __getitem__(self, key):
        try:
            return self._lookup(key)
        except (KeyError, TypeError, ValueError):
            raise KeyError(key) from None

    def __iter__(self):
        return iter(self._keys())

    def __len__(self):
        return sum(1 for _ in self._keys())


class LazyProduct(FinCategory):
    """Product category whose tables are evaluated componentwise on demand.

    Used where a product only serves as a codomain (hom-sets and composites of
    specific arrows are needed, never the whole table).
    """

    def __init__(self, factors: Sequence[FinCategory], name: str | None = None):
        self.factors = tuple(factors)
        self.name = name
        fs = self.factors

        def comp(key):
            g, f = key
            if len(g) != len(fs) or len(f) != len(fs):
                raise KeyError(key)
            return tuple(F.compose[(y, x)] for F, y, x in zip(fs, g, f))

        def pairs():
            for f in self.arrows:
                for g in self.hom_out(self.tgt[f]):
                    yield (g, f)

        self.compose = _Componentwise(fs, comp, pairs)
        self.identity = _Componentwise(
            fs, lambda o: tuple(F.identity[x] for F, x in zip(fs, o)), lambda: iter(self.objects)
        )
        self.src = _Componentwise(fs, lambda a: tuple(F.src[x] for F, x in zip(fs, a)), lambda: iter(self.arrows))
        self.tgt = _Componentwise(fs, lambda a: tuple(F.tgt[x] for F, x in zip(fs, a)), lambda: iter(self.arrows))

    @cached_property
    def objects(self):
        return tuple(itertools.product(*[F.objects for F in self.factors]))

    @cached_property
    def arrows(self):
        return tuple(itertools.product(*[F.arrows for F in self.factors]))

    @cached_property
    def _raw_arrows(self):
        return tuple((a, self.src[a], self.tgt[a]) for a in self.arrows)

    def hom(self, a, b):
        return tuple(itertools.product(*[F.hom(x, y) for F, x, y in zip(self.factors, a, b)]))

    def hom_out(self, a):
        return tuple(itertools.product(*[F.out_arrows[x] for F, x in zip(self.factors, a)]))

    def is_identity(self, a) -> bool:
        return all(F.is_identity(x) for F, x in zip(self.factors, a))

    def is_iso(self, a) -> bool:
        return all(F.is_iso(x) for F, x in zip(self.factors, a))

    def inverse(self, a):
        return tuple(F.inverse(x) for F, x in zip(self.factors, a))

    @cached_property
    def _key(self):
        return ("product", tuple(F._key for F in self.factors))

    def __eq__(self, other):
        if self is other:
            return True
        if isinstance(other, LazyProduct):
            return self.factors == other.factors
        if isinstance(other, FinCategory):
            return self.materialize() == other
        return NotImplemented

    __hash__ = FinCategory.__hash__

    def materialize(self) -> FinCategory:
        return product(self.factors)[0]

    def projections(self) -> list[Functor]:
        """Projection functors; only sensible for small products."""
        return [
            Functor(self, F, {o: o[i] for o in self.objects}, {a: a[i] for a in self.arrows})
            for i, F in enumerate(self.factors)
        ]


def pairing(P: FinCategory, functors: Sequence[Functor], dom: FinCategory | None = None) -> Functor:
    """The functor into the product ``P`` with the given components."""
    if not functors:
        (pt,) = P.objects
        return Functor.constant(dom, P, pt)
    dom = functors[0].dom
    return Functor(
        dom,
        P,
        {o: tuple(F.ob[o] for F in functors) for o in dom.objects},
        {a: tuple(F.ar[a] for F in functors) for a in dom.arrows},
    )


def pair_nats(P: FinCategory, cells: Sequence[NatTrans], dom: FinCategory | None = None) -> NatTrans:
    src = pairing(P, [c.src for c in cells], dom)
    tgt = pairing(P, [c.tgt for c in cells], dom)
    return NatTrans(src, tgt, {o: tuple(c.comp[o] for c in cells) for o in src.dom.objects})


def inserter(F: Functor, G: Functor) -> tuple[FinCategory, Functor, NatTrans]:
    """Objects ``(c, phi: Fc -> Gc)``; arrows ``w`` with ``Gw . phi = phi' . Fw``."""
    if F.dom != G.dom or F.cod != G.cod:
        raise ValueError("inserter needs parallel functors")
    C, D = F.dom, F.cod
    objects = [(c, phi) for c in C.objects for phi in D.hom(F.ob[c], G.ob[c])]
    homs = {}
    for x in objects:
        for y in objects:
            ws = [
                (w, x, y)
                for w in C.hom(x[0], y[0])
                if D.compose[(G.ar[w], x[1])] == D.compose[(y[1], F.ar[w])]
            ]
            if ws:
                homs[(x, y)] = ws
    identity = {x: (C.identity[x[0]], x, x) for x in objects}
    I = category_from_homs(objects, homs, identity, lambda g, f: (C.compose[(g[0], f[0])], f[1], g[2]))
    p = Functor(I, C, {x: x[0] for x in objects}, {a: a[0] for a in I.arrows})
    rho = NatTrans(compose(F, p), compose(G, p), {x: x[1] for x in objects})
    return I, p, rho


def full_subcategory(C: FinCategory, keep: Iterable[Obj]) -> tuple[FinCategory, Functor]:
    keep = set(keep)
    objects = [o for o in C.objects if o in keep]
    arrows = [(a, C.src[a], C.tgt[a]) for a in C.arrows if C.src[a] in keep and C.tgt[a] in keep]
    names = {a for a, _, _ in arrows}
    table = {k: v for k, v in C.compose.items() if k[0] in names and k[1] in names}
    S = FinCategory(objects, arrows, {o: C.identity[o] for o in objects}, table)
    return S, Functor(S, C, {o: o for o in objects}, {a: a for a in S.arrows})


def equifier(alpha: NatTrans, beta: NatTrans) -> tuple[FinCategory, Functor]:
    """Full subcategory on the objects where the two parallel cells agree."""
    if alpha.src != beta.src or alpha.tgt != beta.tgt:
        raise ValueError("equifier needs parallel natural transformations")
    return full_subcategory(alpha.dom, [c for c in alpha.dom.objects if alpha.comp[c] == beta.comp[c]])


def coproduct(parts: Sequence[FinCategory]) -> FinCategory:
    """Disjoint union with ids tagged by summand index."""
    objects = [(i, o) for i, C in enumerate(parts) for o in C.objects]
    arrows = [((i, a), (i, C.src[a]), (i, C.tgt[a])) for i, C in enumerate(parts) for a in C.arrows]
    identity = {(i, o): (i, C.identity[o]) for i, C in enumerate(parts) for o in C.objects}
    table = {((i, g), (i, f)): (i, h) for i, C in enumerate(parts) for (g, f), h in C.compose.items()}
    return FinCategory(objects, arrows, identity, table)


def flatten(C: FinCategory, obj_prefix: str = "o", arr_prefix: str = "a") -> tuple[FinCategory, dict, dict]:
    """Rename to ``o0, o1, ...`` / ``a0, a1, ...`` in declaration order.

    Returns the renamed category and the two provenance maps (new id -> old id).
    """
    on = {o: f"{obj_prefix}{i}" for i, o in enumerate(C.objects)}
    an = {a: f"{arr_prefix}{i}" for i, a in enumerate(C.arrows)}
    R = FinCategory(
        [on[o] for o in C.objects],
        [(an[a], on[C.src[a]], on[C.tgt[a]]) for a in C.arrows],
        {on[o]: an[i] for o, i in C.identity.items()},
        {(an[g], an[f]): an[h] for (g, f), h in C.compose.items()},
        name=C.name,
    )
    return R, {v: k for k, v in on.items()}, {v: k for k, v in an.items()}
