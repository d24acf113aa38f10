"""Text format for categories, 2-categories, diagrams, weights and algebra diagrams.

A file is a sequence of declarations::

    category Two { objects: 0, 1; arrows: u: 0 -> 1; }
    functor c0: One -> Two { objects: * |-> 0; }
    natural n: c0 => c1 { components: * |-> u; }
    twocat Ins { objects: A, B; arrows: f: A -> B, g: A -> B; sigma: f; }
    diagram ins_pt: Ins -> cat { A |-> One; B |-> Two; f |-> c0; g |-> c1; }
    weight w: Ins -> cat { ... }
    algebra a0: Two monad pointed { objects: * |-> 0; }
    morphism m: a0 -> a0 over k1 { components: * |-> u; }
    algdiagram D: Ins { A |-> a0; B |-> a0; f |-> mf; g |-> m; }

Sections inside ``category``/``twocat`` are ``objects``, ``arrows``, ``compose``,
``twocells``, ``vcompose``, ``whisker`` and ``sigma``.  Identity arrows (``id_x``),
identity 2-cells (``id_f``) and the table entries forced by the unit laws are
implicit; every other composite must be listed.  Σ always contains the
identities.  Functors list non-identity arrows only; structure maps of algebras
and structure cells of morphisms default to identities where that is the only
type-correct choice.

Expressions are ``a.b.c`` (composition, right to left) and ``id(X)``.  A chain
with one natural transformation among functors is a whiskering; a chain of
natural transformations is a vertical composite.

Names share one namespace and may be referenced before their declaration.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable

from .algebras import (
    Algebra,
    AlgebraDiagram,
    MonadInstance,
    OmegaMorphism,
    cell_class,
    compose_morphisms,
    get_monad,
    identity_morphism,
    validate_algebra,
    validate_omega_morphism,
)
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
from .twocat import TwoCategory, TwoFunctor, validate_sigma_family, validate_two_category, validate_two_functor

EXTENSIONS = (".2cat", ".diag", ".wt", ".alg")


class ParseError(Exception):
    """Syntax or resolution error with a 1-based position."""

    def __init__(self, line: int, col: int, message: str, source: str | None = None):
        where = f"{source}:" if source else ""
        super().__init__(f"{where}{line}:{col}: {message}")
        self.line = line
        self.col = col
        self.message = message
        self.source = source


# -- tokens ---------------------------------------------------------------------------

_TOKEN = re.compile(
    r"(?P<ws>[ \t]+)|(?P<nl>\n)|(?P<comment>#[^\n]*)"
    r"|(?P<sym>\|->|->|=>|[:;,{}.=()])|(?P<ident>[\w*']+)"
)


@dataclass(frozen=True)
class Token:
    kind: str  # "ident", "sym" or "eof"
    text: str
    line: int
    col: int


def tokenize(text: str, source: str | None = None) -> list[Token]:
    out = []
    line, col, pos = 1, 1, 0
    while pos < len(text):
        if text[pos] == "\r":
            raise ParseError(line, col, "carriage return found; files must use LF line endings", source)
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ParseError(line, col, f"unexpected character {text[pos]!r}", source)
        kind, value = m.lastgroup, m.group()
        if kind == "nl":
            line, col = line + 1, 1
        else:
            if kind in ("ident", "sym"):
                out.append(Token(kind, value, line, col))
            col += len(value)
        pos = m.end()
    out.append(Token("eof", "", line, col))
    return out


# -- syntax tree ----------------------------------------------------------------------


@dataclass(frozen=True)
class Atom:
    name: str
    call: bool = False  # ``id(name)``

    def __str__(self):
        return f"id({self.name})" if self.call else self.name


@dataclass(frozen=True)
class Expr:
    atoms: tuple

    def __str__(self):
        return ".".join(str(a) for a in self.atoms)


@dataclass(frozen=True)
class Item:
    """One entry of a section; ``fields`` holds its identifiers/expressions in order."""

    fields: tuple
    line: int
    col: int


@dataclass
class Decl:
    kind: str
    name: str
    header: dict  # e.g. {"dom": ..., "cod": ...}
    sections: dict  # section name -> list[Item]; for map-bodied declarations key "" holds the entries
    line: int
    col: int
    source: str | None = None
    positions: dict = field(default_factory=dict, compare=False, repr=False)  # header key -> (line, col)

    def at(self, key: str) -> Item:
        """The header entry ``key`` as a located item, for error messages."""
        line, col = self.positions.get(key, (self.line, self.col))
        return Item((self.header[key],), line, col)


_BLOCK_SECTIONS = {
    "category": ("objects", "arrows", "compose"),
    "twocat": ("objects", "arrows", "compose", "twocells", "vcompose", "whisker", "sigma"),
    "functor": ("objects", "arrows"),
    "natural": ("components",),
    "algebra": ("objects", "arrows"),
    "morphism": ("components",),
}
_ITEM_SHAPES = {
    "objects": "name",
    "sigma": "name",
    "arrows": "typed",
    "twocells": "typed2",
    "compose": "equation",
    "vcompose": "equation",
    "whisker": "equation",
    "components": "map",
}
KINDS = ("category", "functor", "natural", "twocat", "diagram", "weight", "algebra", "morphism", "algdiagram")


class _Parser:
    def __init__(self, tokens: list[Token], source: str | None):
        self.toks = tokens
        self.pos = 0
        self.source = source

    @property
    def tok(self) -> Token:
        return self.toks[self.pos]

    def error(self, message: str, tok: Token | None = None):
        tok = tok or self.tok
        return ParseError(tok.line, tok.col, message, self.source)

    def take(self, kind: str | None = None, text: str | None = None) -> Token:
        tok = self.tok
        if (kind and tok.kind != kind) or (text and tok.text != text):
            want = repr(text) if text else kind
            got = repr(tok.text) if tok.kind != "eof" else "end of input"
            raise self.error(f"expected {want}, found {got}")
        self.pos += 1
        return tok

    def at(self, text: str) -> bool:
        return self.tok.kind == "sym" and self.tok.text == text

    def name(self) -> str:
        return self.take("ident").text

    def expr(self) -> Expr:
        atoms = [self.atom()]
        while self.at("."):
            self.take("sym", ".")
            atoms.append(self.atom())
        return Expr(tuple(atoms))

    def atom(self) -> Atom:
        tok = self.take("ident")
        if tok.text == "id" and self.at("("):
            self.take("sym", "(")
            inner = self.name()
            self.take("sym", ")")
            return Atom(inner, True)
        return Atom(tok.text)

    # declarations

    def parse(self) -> list[Decl]:
        decls = []
        while self.tok.kind != "eof":
            decls.append(self.decl())
        return decls

    def decl(self) -> Decl:
        start = self.tok
        kind = self.take("ident").text
        if kind not in KINDS:
            raise self.error(f"unknown declaration {kind!r}; expected one of {', '.join(KINDS)}", start)
        name = self.name()
        header: dict = {}
        positions: dict = {}
        if kind in ("functor",):
            self.take("sym", ":")
            positions["dom"] = (self.tok.line, self.tok.col)
            header["dom"] = self.name()
            self.take("sym", "->")
            positions["cod"] = (self.tok.line, self.tok.col)
            header["cod"] = self.name()
        elif kind == "natural":
            self.take("sym", ":")
            positions["src"] = (self.tok.line, self.tok.col)
            header["src"] = self.expr()
            self.take("sym", "=>")
            positions["tgt"] = (self.tok.line, self.tok.col)
            header["tgt"] = self.expr()
        elif kind in ("diagram", "weight"):
            self.take("sym", ":")
            positions["shape"] = (self.tok.line, self.tok.col)
            header["shape"] = self.name()
            self.take("sym", "->")
            self.take("ident", "cat")
        elif kind == "algebra":
            self.take("sym", ":")
            positions["carrier"] = (self.tok.line, self.tok.col)
            header["carrier"] = self.name()
            self.take("ident", "monad")
            positions["monad"] = (self.tok.line, self.tok.col)
            header["monad"] = self.name()
        elif kind == "morphism":
            self.take("sym", ":")
            positions["dom"] = (self.tok.line, self.tok.col)
            header["dom"] = self.name()
            self.take("sym", "->")
            positions["cod"] = (self.tok.line, self.tok.col)
            header["cod"] = self.name()
            self.take("ident", "over")
            positions["over"] = (self.tok.line, self.tok.col)
            header["over"] = self.expr()
        elif kind == "algdiagram":
            self.take("sym", ":")
            positions["shape"] = (self.tok.line, self.tok.col)
            header["shape"] = self.name()
        self.take("sym", "{")
        if kind in _BLOCK_SECTIONS:
            sections = self.sections(kind)
        else:
            sections = {"": self.entries()}
        self.take("sym", "}")
        return Decl(kind, name, header, sections, start.line, start.col, self.source, positions)

    def sections(self, kind: str) -> dict:
        allowed = _BLOCK_SECTIONS[kind]
        out: dict = {}
        while not self.at("}"):
            tok = self.take("ident")
            if tok.text not in allowed:
                raise self.error(f"section {tok.text!r} is not allowed in {kind}; expected one of {', '.join(allowed)}", tok)
            if tok.text in out:
                raise self.error(f"section {tok.text!r} given twice", tok)
            self.take("sym", ":")
            items = []
            shape = "map" if kind in ("functor", "algebra", "natural", "morphism") else _ITEM_SHAPES[tok.text]
            if not self.at(";"):
                items.append(self.item(shape))
                while self.at(","):
                    self.take("sym", ",")
                    items.append(self.item(shape))
            self.take("sym", ";")
            out[tok.text] = items
        return out

    def entries(self) -> list[Item]:
        items = []
        while not self.at("}"):
            items.append(self.item("map"))
            self.take("sym", ";")
        return items

    def item(self, shape: str) -> Item:
        tok = self.tok
        if shape == "name":
            fields: tuple = (self.name(),)
        elif shape in ("typed", "typed2"):
            n = self.name()
            self.take("sym", ":")
            s = self.name()
            self.take("sym", "->" if shape == "typed" else "=>")
            fields = (n, s, self.name())
        elif shape == "equation":
            g = self.name()
            self.take("sym", ".")
            f = self.name()
            self.take("sym", "=")
            fields = (g, f, self.name())
        else:
            key = self.name()
            self.take("sym", "|->")
            fields = (key, self.expr())
        return Item(fields, tok.line, tok.col)


def parse_text(text: str, source: str | None = None) -> list[Decl]:
    """Syntax only: the list of declarations in ``text``."""
    return _Parser(tokenize(text, source), source).parse()


# -- printing -------------------------------------------------------------------------


def _fmt_item(shape: str, fields: tuple) -> str:
    if shape == "name":
        return fields[0]
    if shape == "typed":
        return f"{fields[0]}: {fields[1]} -> {fields[2]}"
    if shape == "typed2":
        return f"{fields[0]}: {fields[1]} => {fields[2]}"
    if shape == "equation":
        return f"{fields[0]}.{fields[1]} = {fields[2]}"
    return f"{fields[0]} |-> {fields[1]}"


def print_decl(d: Decl) -> str:
    h = d.header
    head = {
        "category": f"category {d.name}",
        "twocat": f"twocat {d.name}",
        "functor": f"functor {d.name}: {h.get('dom')} -> {h.get('cod')}",
        "natural": f"natural {d.name}: {h.get('src')} => {h.get('tgt')}",
        "diagram": f"diagram {d.name}: {h.get('shape')} -> cat",
        "weight": f"weight {d.name}: {h.get('shape')} -> cat",
        "algebra": f"algebra {d.name}: {h.get('carrier')} monad {h.get('monad')}",
        "morphism": f"morphism {d.name}: {h.get('dom')} -> {h.get('cod')} over {h.get('over')}",
        "algdiagram": f"algdiagram {d.name}: {h.get('shape')}",
    }[d.kind]
    lines = [head + " {"]
    if d.kind in _BLOCK_SECTIONS:
        for sec in _BLOCK_SECTIONS[d.kind]:
            if sec not in d.sections:
                continue
            shape = "map" if d.kind in ("functor", "algebra", "natural", "morphism") else _ITEM_SHAPES[sec]
            body = ", ".join(_fmt_item(shape, it.fields) for it in d.sections[sec])
            lines.append(f"  {sec}: {body};" if body else f"  {sec}: ;")
    else:
        for it in d.sections[""]:
            lines.append(f"  {_fmt_item('map', it.fields)};")
    lines.append("}")
    return "\n".join(lines)


def print_decls(decls: Iterable[Decl]) -> str:
    return "\n\n".join(print_decl(d) for d in decls) + "\n"


# -- resolution -----------------------------------------------------------------------


@dataclass
class SigmaShape:
    """A 2-category together with its marked family."""

    two: TwoCategory
    sigma: frozenset


@dataclass
class Workspace:
    decls: list = field(default_factory=list)
    values: dict = field(default_factory=dict)  # name -> resolved value
    kinds: dict = field(default_factory=dict)  # name -> declaration kind
    origin: dict = field(default_factory=dict)  # name -> source path (or None)

    def get(self, name: str, kind: str | None = None):
        if name not in self.values:
            raise KeyError(f"no declaration named {name!r}")
        if kind is not None and self.kinds[name] != kind:
            raise KeyError(f"{name!r} is a {self.kinds[name]}, not a {kind}")
        return self.values[name]

    def names(self, kind: str | None = None) -> list[str]:
        return [d.name for d in self.decls if kind is None or d.kind == kind]

    def decl(self, name: str) -> Decl:
        for d in self.decls:
            if d.name == name:
                return d
        raise KeyError(f"no declaration named {name!r}")

    def shape_of(self, name: str) -> SigmaShape:
        """The marked indexing 2-category of a diagram, weight or algebra diagram."""
        return self.values[self.decl(name).header["shape"]]

    def declared_in(self, source: str) -> list[str]:
        return [d.name for d in self.decls if d.source == source]

    def fingerprint(self) -> dict:
        """Comparable summary of every resolved value."""
        out = {}
        for name, v in self.values.items():
            out[name] = (self.kinds[name], _fingerprint(v))
        return out

    def __eq__(self, other):
        if not isinstance(other, Workspace):
            return NotImplemented
        return self.fingerprint() == other.fingerprint()

    def to_text(self) -> str:
        return print_decls(self.decls)


def _fingerprint(v):
    if isinstance(v, SigmaShape):
        return (v.two, v.sigma)
    if isinstance(v, TwoFunctor):
        return (v.dom, tuple(sorted(((repr(k), x) for k, x in v.ob.items()), key=lambda t: t[0])),
                tuple(sorted(((repr(k), x) for k, x in v.one.items()), key=lambda t: t[0])),
                tuple(sorted(((repr(k), x) for k, x in v.two.items()), key=lambda t: t[0])))
    if isinstance(v, Algebra):
        return (v.monad.name, v.carrier, v.structure)
    if isinstance(v, OmegaMorphism):
        return (_fingerprint(v.dom), _fingerprint(v.cod), v.functor, v.cell)
    if isinstance(v, AlgebraDiagram):
        A = v.shape
        return (A, v.sigma, tuple(_fingerprint(v.algebras[o]) for o in A.objects),
                tuple(_fingerprint(v.morphisms[f]) for f in A.one_cells),
                tuple(v.two_cells[g] for g in A.two_cells))
    return v


class _Resolver:
    def __init__(self, decls: list[Decl]):
        self.decls = {}
        for d in decls:
            if d.name in self.decls:
                first = self.decls[d.name]
                raise ParseError(d.line, d.col, f"duplicate name {d.name!r} (first declared at line {first.line})", d.source)
            self.decls[d.name] = d
        self.values: dict = {}
        self.active: list[str] = []
        self.monads: dict = {}

    def run(self) -> dict:
        for name in self.decls:
            self.resolve(name)
        return self.values

    def fail(self, where, message: str):
        d = where if isinstance(where, Decl) else None
        line = where.line
        col = where.col
        source = d.source if d else self.current.source
        return ParseError(line, col, message, source)

    @property
    def current(self) -> Decl:
        return self.decls[self.active[-1]]

    def resolve(self, name: str, want: str | tuple | None = None, at=None):
        if name not in self.decls:
            where = at or self.current
            raise self.fail(where, f"undefined name {name!r}")
        d = self.decls[name]
        if want is not None:
            kinds = (want,) if isinstance(want, str) else want
            if d.kind not in kinds:
                raise self.fail(at or self.current, f"{name!r} is a {d.kind}, expected {' or '.join(kinds)}")
        if name in self.values:
            return self.values[name]
        if name in self.active:
            cycle = " -> ".join(self.active[self.active.index(name):] + [name])
            raise self.fail(d, f"circular reference {cycle}")
        self.active.append(name)
        try:
            value = getattr(self, f"_{d.kind}")(d)
        finally:
            self.active.pop()
        self.values[name] = value
        return value

    def monad(self, name: str, at) -> MonadInstance:
        if name not in self.monads:
            try:
                self.monads[name] = get_monad(name)
            except KeyError as e:
                raise self.fail(at, str(e.args[0])) from None
        return self.monads[name]

    def _check(self, d: Decl, diags: list[Diagnostic]):
        if diags:
            raise self.fail(d, f"{d.kind} {d.name!r} is invalid: " + "; ".join(str(x) for x in diags[:4]))

    def _mapping(self, items: list[Item], keys: Iterable, what: str, d: Decl) -> dict:
        keys = list(keys)
        out = {}
        for it in items:
            k = it.fields[0]
            if k not in keys:
                raise self.fail(it, f"{k!r} is not a {what}")
            if k in out:
                raise self.fail(it, f"{k!r} mapped twice")
            out[k] = it
        return out

    # categories

    def _category(self, d: Decl) -> FinCategory:
        objs = [it.fields[0] for it in d.sections.get("objects", [])]
        arrows = [it.fields for it in d.sections.get("arrows", [])]
        self._no_duplicates(d, d.sections.get("objects", []), "object")
        self._no_duplicates(d, d.sections.get("arrows", []), "arrow")
        known = set(objs)
        for it in d.sections.get("arrows", []):
            for o in it.fields[1:]:
                if o not in known:
                    raise self.fail(it, f"arrow {it.fields[0]!r} refers to undeclared object {o!r}")
        C0 = FinCategory.build(objs, arrows, name=d.name)
        names = set(C0.arrows)
        table = {}
        for it in d.sections.get("compose", []):
            g, f, h = it.fields
            for a in (g, f, h):
                if a not in names:
                    raise self.fail(it, f"undeclared arrow {a!r} in compose")
            if (g, f) in table:
                raise self.fail(it, f"composite {g}.{f} given twice")
            if C0.tgt[f] != C0.src[g]:
                raise self.fail(it, f"compose on non-composable pair ({g!r}, {f!r})")
            table[(g, f)] = h
        C = FinCategory.build(objs, arrows, table, name=d.name)
        self._check(d, validate_category(C))
        return C

    def _no_duplicates(self, d, items, what):
        seen = set()
        for it in items:
            if it.fields[0] in seen:
                raise self.fail(it, f"{what} {it.fields[0]!r} declared twice")
            seen.add(it.fields[0])

    def _twocat(self, d: Decl) -> SigmaShape:
        objs = [it.fields[0] for it in d.sections.get("objects", [])]
        self._no_duplicates(d, d.sections.get("objects", []), "object")
        self._no_duplicates(d, d.sections.get("arrows", []), "1-cell")
        self._no_duplicates(d, d.sections.get("twocells", []), "2-cell")
        known = set(objs)
        ones = [it.fields for it in d.sections.get("arrows", [])]
        for it in d.sections.get("arrows", []):
            for o in it.fields[1:]:
                if o not in known:
                    raise self.fail(it, f"1-cell {it.fields[0]!r} refers to undeclared object {o!r}")
        base = TwoCategory.build(objs, ones, name=d.name)
        cells1 = set(base.one_cells)
        twos = [it.fields for it in d.sections.get("twocells", [])]
        for it in d.sections.get("twocells", []):
            for f in it.fields[1:]:
                if f not in cells1:
                    raise self.fail(it, f"2-cell {it.fields[0]!r} refers to undeclared 1-cell {f!r}")
        base = TwoCategory.build(objs, ones, two_cells=twos, name=d.name)
        cells2 = set(base.two_cells)
        comp1, vt, lw, rw = {}, {}, {}, {}
        for it in d.sections.get("compose", []):
            g, f, h = it.fields
            for a in (g, f, h):
                if a not in cells1:
                    raise self.fail(it, f"undeclared 1-cell {a!r} in compose")
            comp1[(g, f)] = h
        for it in d.sections.get("vcompose", []):
            b, a, c = it.fields
            for x in (b, a, c):
                if x not in cells2:
                    raise self.fail(it, f"undeclared 2-cell {x!r} in vcompose")
            vt[(b, a)] = c
        for it in d.sections.get("whisker", []):
            x, y, z = it.fields
            if z not in cells2:
                raise self.fail(it, f"undeclared 2-cell {z!r} in whisker")
            if x in cells1 and y in cells2:
                lw[(x, y)] = z
            elif x in cells2 and y in cells1:
                rw[(x, y)] = z
            else:
                raise self.fail(it, f"whisker {x}.{y} needs one 1-cell and one 2-cell")
        A = TwoCategory.build(objs, ones, comp1, twos, vt, lw, rw, name=d.name)
        self._check(d, validate_two_category(A))
        sigma = set(A.id1.values())
        for it in d.sections.get("sigma", []):
            if it.fields[0] not in cells1:
                raise self.fail(it, f"Σ refers to undeclared 1-cell {it.fields[0]!r}")
            sigma.add(it.fields[0])
        sigma = frozenset(sigma)
        self._check(d, validate_sigma_family(A, sigma))
        return SigmaShape(A, sigma)

    # arrows inside one category

    def arrow_expr(self, C: FinCategory, e: Expr, at) -> str:
        out = None
        for atom in reversed(e.atoms):
            if atom.call:
                if atom.name not in C.identity:
                    raise self.fail(at, f"id({atom.name}): {atom.name!r} is not an object of {C.name or 'the category'}")
                a = C.identity[atom.name]
            else:
                if atom.name not in C.src:
                    raise self.fail(at, f"{atom.name!r} is not an arrow of {C.name or 'the category'}")
                a = atom.name
            if out is None:
                out = a
            else:
                if C.tgt[out] != C.src[a]:
                    raise self.fail(at, f"{e}: {atom.name!r} cannot follow {out!r}")
                out = C.compose[(a, out)]
        return out

    # functors and naturals

    def _functor(self, d: Decl) -> Functor:
        C = self.resolve(d.header["dom"], "category", d.at("dom"))
        D = self.resolve(d.header["cod"], "category", d.at("cod"))
        obs = self._mapping(d.sections.get("objects", []), C.objects, f"object of {C.name}", d)
        ob = {}
        for o in C.objects:
            if o not in obs:
                raise self.fail(d, f"functor {d.name!r} has no image for object {o!r}")
            target = obs[o].fields[1]
            if len(target.atoms) != 1 or target.atoms[0].call or target.atoms[0].name not in D.identity:
                raise self.fail(obs[o], f"{target} is not an object of {D.name}")
            ob[o] = target.atoms[0].name
        ars = self._mapping(d.sections.get("arrows", []), C.arrows, f"arrow of {C.name}", d)
        ar = {}
        for a in C.arrows:
            if a in ars:
                ar[a] = self.arrow_expr(D, ars[a].fields[1], ars[a])
            elif C.is_identity(a):
                ar[a] = D.identity[ob[C.src[a]]]
            else:
                raise self.fail(d, f"functor {d.name!r} has no image for arrow {a!r}")
        F = Functor(C, D, ob, ar)
        self._check(d, validate_functor(F))
        return F

    def functor_expr(self, e: Expr, at) -> Functor:
        out = None
        for atom in reversed(e.atoms):
            if atom.call:
                F = Functor.identity(self.resolve(atom.name, "category", at))
            else:
                F = self.resolve(atom.name, "functor", at)
            if out is None:
                out = F
            elif out.cod != F.dom:
                raise self.fail(at, f"{e}: functors are not composable at {atom.name!r}")
            else:
                out = compose(F, out)
        return out

    def cell_expr(self, e: Expr, at) -> NatTrans:
        items = []
        for atom in e.atoms:
            kind = self.decls[atom.name].kind if atom.name in self.decls else None
            if atom.call:
                if kind == "functor":
                    items.append(NatTrans.identity(self.resolve(atom.name, "functor", at)))
                else:
                    items.append(Functor.identity(self.resolve(atom.name, "category", at)))
            elif kind == "natural":
                items.append(self.resolve(atom.name, "natural", at))
            else:
                items.append(self.resolve(atom.name, ("functor", "natural"), at))
        nats = [i for i, x in enumerate(items) if isinstance(x, NatTrans)]
        if not nats:
            raise self.fail(at, f"{e} is not a natural transformation")
        try:
            if len(nats) == len(items):
                out = items[-1]
                for x in reversed(items[:-1]):
                    out = vcomp(x, out)
                return out
            if len(nats) == 1:
                i = nats[0]
                out = items[i]
                for H in reversed(items[:i]):
                    out = whisker_left(H, out)
                for K in items[i + 1:]:
                    out = whisker_right(out, K)
                return out
        except (ValueError, KeyError) as err:
            raise self.fail(at, f"{e}: {err}") from None
        raise self.fail(at, f"{e} mixes several natural transformations with functors")

    def _natural(self, d: Decl) -> NatTrans:
        F = self.functor_expr(d.header["src"], d.at("src"))
        G = self.functor_expr(d.header["tgt"], d.at("tgt"))
        if F.dom != G.dom or F.cod != G.cod:
            raise self.fail(d, f"natural {d.name!r}: source and target functors are not parallel")
        comps = self._mapping(d.sections.get("components", []), F.dom.objects, "object of the domain", d)
        comp = {}
        for o in F.dom.objects:
            if o in comps:
                comp[o] = self.arrow_expr(F.cod, comps[o].fields[1], comps[o])
            elif F.ob[o] == G.ob[o]:
                comp[o] = F.cod.identity[F.ob[o]]
            else:
                raise self.fail(d, f"natural {d.name!r} has no component at {o!r}")
        alpha = NatTrans(F, G, comp)
        self._check(d, validate_nat(alpha))
        return alpha

    # diagrams and weights

    def _diagram(self, d: Decl) -> TwoFunctor:
        shape = self.resolve(d.header["shape"], "twocat", d.at("shape"))
        A = shape.two
        entries = self._mapping(d.sections[""], (*A.objects, *A.one_cells, *A.two_cells), f"cell of {A.name}", d)
        ob, one, two = {}, {}, {}
        for o in A.objects:
            if o not in entries:
                raise self.fail(d, f"{d.kind} {d.name!r} has no image for object {o!r}")
            e = entries[o].fields[1]
            if len(e.atoms) != 1 or e.atoms[0].call:
                raise self.fail(entries[o], f"object {o!r} must map to a category name")
            ob[o] = self.resolve(e.atoms[0].name, "category", entries[o])
        for f in A.one_cells:
            if f in entries:
                one[f] = self.functor_expr(entries[f].fields[1], entries[f])
            elif A.is_identity1(f):
                one[f] = Functor.identity(ob[A.src[f]])
            else:
                raise self.fail(d, f"{d.kind} {d.name!r} has no image for 1-cell {f!r}")
        for g in A.two_cells:
            if g in entries:
                two[g] = self.cell_expr(entries[g].fields[1], entries[g])
            elif A.is_identity2(g):
                two[g] = NatTrans.identity(one[A.src2[g]])
            else:
                raise self.fail(d, f"{d.kind} {d.name!r} has no image for 2-cell {g!r}")
        F = TwoFunctor(A, ob, one, two, name=d.name)
        self._check(d, validate_two_functor(F))
        return F

    _weight = _diagram

    # algebras

    def _algebra(self, d: Decl) -> Algebra:
        C = self.resolve(d.header["carrier"], "category", d.at("carrier"))
        T = self.monad(d.header["monad"], d.at("monad"))
        TC = T.obj(C)
        obs = self._mapping(d.sections.get("objects", []), TC.objects, f"object of T{C.name}", d)
        ob = {}
        for o in TC.objects:
            if o in obs:
                e = obs[o].fields[1]
                if len(e.atoms) != 1 or e.atoms[0].call or e.atoms[0].name not in C.identity:
                    raise self.fail(obs[o], f"{e} is not an object of {C.name}")
                ob[o] = e.atoms[0].name
            elif o in C.identity:
                ob[o] = o
            else:
                raise self.fail(d, f"algebra {d.name!r} has no image for object {o!r}")
        ars = self._mapping(d.sections.get("arrows", []), TC.arrows, f"arrow of T{C.name}", d)
        ar = {}
        for a in TC.arrows:
            if a in ars:
                ar[a] = self.arrow_expr(C, ars[a].fields[1], ars[a])
            elif TC.is_identity(a):
                ar[a] = C.identity[ob[TC.src[a]]]
            elif a in C.src:
                ar[a] = a
            else:
                raise self.fail(d, f"algebra {d.name!r} has no image for arrow {a!r}")
        a = Functor(TC, C, ob, ar)
        self._check(d, validate_functor(a))
        alg = Algebra(T, C, a, name=d.name)
        self._check(d, validate_algebra(alg))
        return alg

    def _morphism(self, d: Decl) -> OmegaMorphism:
        A = self.resolve(d.header["dom"], "algebra", d.at("dom"))
        B = self.resolve(d.header["cod"], "algebra", d.at("cod"))
        if A.monad != B.monad:
            raise self.fail(d, f"morphism {d.name!r} joins algebras for different monads")
        T = A.monad
        f = self.functor_expr(d.header["over"], d.at("over"))
        if f.dom != A.carrier or f.cod != B.carrier:
            raise self.fail(d, f"morphism {d.name!r}: {d.header['over']} does not go between the carriers")
        src, tgt = compose(B.structure, T.fun(f)), compose(f, A.structure)
        TA = src.dom
        comps = self._mapping(d.sections.get("components", []), TA.objects, f"object of T{A.carrier.name}", d)
        comp = {}
        for o in TA.objects:
            if o in comps:
                comp[o] = self.arrow_expr(B.carrier, comps[o].fields[1], comps[o])
            elif src.ob[o] == tgt.ob[o]:
                comp[o] = B.carrier.identity[src.ob[o]]
            else:
                raise self.fail(d, f"morphism {d.name!r} has no component at {o!r}")
        fbar = NatTrans(src, tgt, comp)
        m = OmegaMorphism(A, B, f, fbar, cell_class(fbar), name=d.name)
        self._check(d, validate_omega_morphism(m))
        return m

    def morphism_expr(self, e: Expr, at) -> OmegaMorphism:
        out = None
        for atom in reversed(e.atoms):
            if atom.call:
                m = identity_morphism(self.resolve(atom.name, "algebra", at))
            else:
                m = self.resolve(atom.name, "morphism", at)
            if out is None:
                out = m
            elif out.cod != m.dom:
                raise self.fail(at, f"{e}: morphisms are not composable at {atom.name!r}")
            else:
                out = compose_morphisms(m, out)
        return out

    def _algdiagram(self, d: Decl) -> AlgebraDiagram:
        shape = self.resolve(d.header["shape"], "twocat", d.at("shape"))
        A = shape.two
        entries = self._mapping(d.sections[""], (*A.objects, *A.one_cells, *A.two_cells), f"cell of {A.name}", d)
        algs, mors, cells = {}, {}, {}
        for o in A.objects:
            if o not in entries:
                raise self.fail(d, f"algdiagram {d.name!r} has no algebra for object {o!r}")
            e = entries[o].fields[1]
            if len(e.atoms) != 1 or e.atoms[0].call:
                raise self.fail(entries[o], f"object {o!r} must map to an algebra name")
            algs[o] = self.resolve(e.atoms[0].name, "algebra", entries[o])
        for f in A.one_cells:
            if f in entries:
                mors[f] = self.morphism_expr(entries[f].fields[1], entries[f])
            elif A.is_identity1(f):
                mors[f] = identity_morphism(algs[A.src[f]])
            else:
                raise self.fail(d, f"algdiagram {d.name!r} has no morphism for 1-cell {f!r}")
        for g in A.two_cells:
            if g in entries:
                cells[g] = self.cell_expr(entries[g].fields[1], entries[g])
            elif A.is_identity2(g):
                cells[g] = NatTrans.identity(mors[A.src2[g]].functor)
            else:
                raise self.fail(d, f"algdiagram {d.name!r} has no 2-cell for {g!r}")
        return AlgebraDiagram(A, shape.sigma, algs, mors, cells, name=d.name)


def build_workspace(decls: list[Decl]) -> Workspace:
    values = _Resolver(decls).run()
    ws = Workspace(list(decls))
    for d in decls:
        ws.values[d.name] = values[d.name]
        ws.kinds[d.name] = d.kind
        ws.origin[d.name] = d.source
    return ws


def parse_workspace(text: str | Iterable[tuple[str, str]], source: str | None = None) -> Workspace:
    """Parse one text, or several ``(source, text)`` pairs, into a resolved workspace."""
    if isinstance(text, str):
        decls = parse_text(text, source)
    else:
        decls = [d for src, t in text for d in parse_text(t, src)]
    return build_workspace(decls)


def corpus_files(directory: str | Path) -> list[Path]:
    directory = Path(directory)
    return sorted(p for p in directory.rglob("*") if p.suffix in EXTENSIONS and p.is_file())


def load_files(paths: Iterable[str | Path]) -> Workspace:
    pairs = []
    for p in paths:
        p = Path(p)
        pairs.append((str(p), p.read_text(encoding="utf-8")))
    return parse_workspace(pairs)


def roundtrip(ws: Workspace) -> Workspace:
    return parse_workspace(ws.to_text())
