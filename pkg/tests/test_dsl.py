import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pie_lifter.dsl import (
    ParseError,
    corpus_files,
    load_files,
    parse_text,
    parse_workspace,
    print_decls,
    roundtrip,
    tokenize,
)
from pie_lifter.fincat import small_categories
from pie_lifter.twocat import pie_analysis


def category_text(C, name="C"):
    arrows = [a for a in C.arrows if not C.is_identity(a)]
    lines = [f"category {name} {{", f"  objects: {', '.join(C.objects)};"]
    if arrows:
        lines.append("  arrows: " + ", ".join(f"{a}: {C.src[a]} -> {C.tgt[a]}" for a in arrows) + ";")
    eqs = [f"{g}.{f} = {h}" for (g, f), h in C.compose.items() if g in arrows and f in arrows]
    if eqs:
        lines.append("  compose: " + ", ".join(eqs) + ";")
    lines.append("}")
    return "\n".join(lines) + "\n"


def error_of(text):
    with pytest.raises(ParseError) as info:
        parse_workspace(text, "t.2cat")
    return info.value


def test_minimal_file():
    ws = parse_workspace("category One { objects: *; }\n")
    assert ws.names() == ["One"]
    C = ws.get("One", "category")
    assert (len(C.objects), len(C.arrows)) == (1, 1)


def test_shipped_inserter_shape_alone(corpus_dir):
    ws = load_files([corpus_dir / "inserter.2cat"])
    shape = ws.get("Ins", "twocat")
    assert pie_analysis(shape.two, shape.sigma).initial == ("A",)


def test_whole_corpus_round_trips(corpus_dir):
    ws = load_files(corpus_files(corpus_dir))
    again = roundtrip(ws)
    assert again == ws
    assert again.to_text() == ws.to_text()


@settings(max_examples=65, deadline=None)
@given(st.sampled_from(small_categories()))
def test_categories_round_trip(C):
    D = parse_workspace(category_text(C)).get("C")
    assert D.objects == C.objects
    assert set(D.arrows) == set(C.arrows)
    assert D.compose == C.compose
    assert parse_text(print_decls(parse_text(category_text(C)))) == parse_text(category_text(C))


def test_non_composable_pair_named():
    e = error_of("category Two { objects: 0, 1;\n  arrows: u: 0 -> 1;\n  compose: u.u = u; }\n")
    assert "('u', 'u')" in e.message and "non-composable" in e.message
    assert (e.line, e.col) == (3, 12)
    assert str(e).startswith("t.2cat:3:12:")


def test_duplicate_name():
    e = error_of("category A { objects: x; }\n\ncategory A { objects: y; }\n")
    assert "duplicate name 'A'" in e.message and (e.line, e.col) == (3, 1)


def test_dangling_reference_position():
    e = error_of("category One { objects: *; }\nfunctor F: One -> Two { objects: * |-> *; }\n")
    assert e.message == "undefined name 'Two'" and (e.line, e.col) == (2, 19)


def test_forward_references_allowed():
    ws = parse_workspace("functor F: One -> One { objects: * |-> *; }\ncategory One { objects: *; }\n")
    assert ws.kinds["F"] == "functor"


def test_wrong_kind_reference():
    e = error_of("category One { objects: *; }\nfunctor F: One -> One { objects: * |-> *; }\nfunctor G: F -> One { objects: * |-> *; }\n")
    assert "is a functor, expected category" in e.message and (e.line, e.col) == (3, 12)


def test_carriage_return_rejected():
    e = error_of("category A { objects: x; }\r\n")
    assert "carriage return" in e.message and (e.line, e.col) == (1, 27)


@pytest.mark.parametrize("text,pos", [
    ("category A {\n  objects: x;\n  arrows: f: x -> ;\n}\n", (3, 19)),
    ("category A { objects: x$; }", (1, 24)),
    ("categroy A { }", (1, 1)),
    ("category A { objects: x; ", (1, 26)),
])
def test_syntax_error_positions(text, pos):
    e = error_of(text)
    assert (e.line, e.col) == pos


def test_undeclared_object_in_arrow():
    e = error_of("category A { objects: x; arrows: f: x -> y; }")
    assert "undeclared object 'y'" in e.message


def test_invalid_functor_reported():
    text = ("category Two { objects: 0, 1; arrows: u: 0 -> 1; }\n"
            "functor F: Two -> Two { objects: 0 |-> 1, 1 |-> 0; arrows: u |-> u; }\n")
    e = error_of(text)
    assert e.line == 2


def test_unknown_monad():
    e = error_of("category One { objects: *; }\nalgebra a: One monad free { }\n")
    assert "unknown monad 'free'" in e.message and (e.line, e.col) == (2, 22)


def test_comments_and_positions():
    toks = tokenize("# note\ncategory A { objects: x; } # trailing\n")
    assert [(t.text, t.line, t.col) for t in toks[:3]] == [("category", 2, 1), ("A", 2, 10), ("{", 2, 12)]
    assert toks[-1].kind == "eof"


def test_sigma_includes_identities(ws):
    shape = ws.get("Ins")
    assert shape.sigma == frozenset({"id_A", "id_B", "f"})
