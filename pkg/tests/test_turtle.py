import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sharedcanvas.errors import BrokenList, TurtleSyntaxError, UnknownPrefix
from sharedcanvas.rdf import (
    Blank,
    Graph,
    IriRef,
    Literal,
    isomorphic,
    parse_turtle,
    read_list,
    serialize_turtle,
)
from sharedcanvas.rdf.graph import RDF_FIRST, RDF_NIL, RDF_REST
from sharedcanvas.rdf.vocab import EXIF, NAMESPACES, OAC, ORE, RDF, RDF_TYPE, SC

EX = "http://example.org/"
PREFIXES = "".join(f"@prefix {p}: <{ns}> .\n" for p, ns in NAMESPACES.items()) + f"@prefix : <{EX}> .\n"

ANNOTATION_LISTING = """
:myAnno a oac:Annotation;
  oac:hasTarget :canvas1;
  oac:hasBody <image1#xywh=10,10,640,480>.
:canvas1 a sc:Canvas;
  exif:height 1024;
  exif:width 768.
"""

SEQUENCE_LISTING = """
:mySequence a ore:Aggregation, rdf:List;
  ore:aggregates :page1, :page2, :page3;
  rdf:first :page1;
  rdf:rest (:page2 :page3 ).
"""


def ex(name):
    return IriRef(EX + name)


def test_annotation_listing_triples():
    g = parse_turtle(PREFIXES + ANNOTATION_LISTING)
    expected = {
        (ex("myAnno"), RDF_TYPE, OAC.Annotation),
        (ex("myAnno"), OAC.hasTarget, ex("canvas1")),
        (ex("myAnno"), OAC.hasBody, IriRef("image1#xywh=10,10,640,480")),
        (ex("canvas1"), RDF_TYPE, SC.Canvas),
        (ex("canvas1"), EXIF.height, Literal(1024)),
        (ex("canvas1"), EXIF.width, Literal(768)),
    }
    assert {tuple(t) for t in g} == expected


def test_annotation_listing_serializes_readably():
    text = serialize_turtle(parse_turtle(PREFIXES + ANNOTATION_LISTING))
    assert "oac:hasTarget :canvas1;" in text
    assert "<image1#xywh=10,10,640,480>" in text
    assert "exif:width 768" in text


def test_sequence_listing_dual_typed():
    g = parse_turtle(PREFIXES + SEQUENCE_LISTING)
    seq = ex("mySequence")
    assert set(g.objects(seq, RDF_TYPE)) == {ORE.Aggregation, RDF.List}
    assert read_list(g, seq) == [ex("page1"), ex("page2"), ex("page3")]
    assert set(g.objects(seq, ORE.aggregates)) == set(read_list(g, seq))


def test_collection_expansion():
    g = parse_turtle(PREFIXES + ":s :p ( :a :b ) .")
    head = g.value(ex("s"), ex("p"))
    assert isinstance(head, Blank)
    assert len(g.blanks()) == 2
    assert read_list(g, head) == [ex("a"), ex("b")]
    second = g.value(head, RDF_REST)
    assert g.value(second, RDF_REST) == RDF_NIL


def test_empty_collection_is_nil():
    g = parse_turtle(PREFIXES + ":s :p () .")
    assert g.value(ex("s"), ex("p")) == RDF_NIL


def test_missing_final_dot():
    with pytest.raises(TurtleSyntaxError) as err:
        parse_turtle(PREFIXES + ":x :y :z")
    assert "end of input" in str(err.value)
    assert err.value.line == PREFIXES.count("\n") + 1


def test_error_positions():
    with pytest.raises(TurtleSyntaxError) as err:
        parse_turtle("@prefix : <http://e/> .\n:a :b :o ;; :c :o2 .\n:a :b :c :d .")
    assert err.value.line == 3
    assert err.value.col == 10


def test_unknown_prefix():
    with pytest.raises(UnknownPrefix):
        parse_turtle("nope:a nope:b nope:c .")


def test_literals_and_escapes():
    g = parse_turtle(PREFIXES + ':s :p "a \\"quoted\\"\\nline", 42, -7 .')
    vals = set(g.objects(ex("s"), ex("p")))
    assert vals == {Literal('a "quoted"\nline'), Literal(42), Literal(-7)}
    text = serialize_turtle(g)
    assert parse_turtle(text) == g


def test_blank_property_list_and_labels():
    g = parse_turtle(PREFIXES + ":s :p [ :q 1 ; :r _:x ] .\n_:x :q 2 .")
    inner = g.value(ex("s"), ex("p"))
    other = g.value(inner, ex("r"))
    assert g.value(other, ex("q")) == Literal(2)


def test_comments_and_trailing_semicolon():
    g = parse_turtle(PREFIXES + "# heading\n:s :p :o ; # note\n  :q 1 ; .\n")
    assert len(g) == 2


def test_empty_graph_one_prefix():
    g = Graph(prefixes={"sc": NAMESPACES["sc"]})
    assert serialize_turtle(g) == f"@prefix sc: <{NAMESPACES['sc']}> .\n"


def test_subject_ordering():
    g = Graph(prefixes={"": EX})
    g.add(Blank("z"), ex("p"), Literal(1))
    g.add(ex("b"), ex("p"), Literal(1))
    g.add(ex("a"), ex("p"), Literal(1))
    body = [ln for ln in serialize_turtle(g).splitlines() if ln and ln[0] != " " and not ln.startswith("@prefix")]
    assert body[0].startswith(":a")
    assert body[1].startswith(":b")
    assert body[-1].startswith("_:") or body[-1].startswith("[")


def test_read_list_errors():
    g = Graph()
    assert read_list(g, RDF_NIL) == []
    g.add(ex("n1"), RDF_FIRST, ex("a"))
    with pytest.raises(BrokenList):
        read_list(g, ex("n1"))
    g.add(ex("n1"), RDF_REST, ex("n2"))
    g.add(ex("n2"), RDF_FIRST, ex("b"))
    g.add(ex("n2"), RDF_REST, ex("n1"))
    with pytest.raises(BrokenList):
        read_list(g, ex("n1"))


def test_fixture_round_trip(manifests, fixture_name):
    from sharedcanvas.rdf import model_to_graph

    g = model_to_graph(manifests[fixture_name])
    text = serialize_turtle(g)
    again = parse_turtle(text)
    assert isomorphic(again, g)
    assert serialize_turtle(again) == text


# random graphs over a small vocabulary, including lists and nested blanks
names = st.sampled_from(["a", "b", "c", "d"])
literals = st.one_of(st.integers(-5, 10**6).map(Literal), st.text(max_size=8).map(Literal))


@st.composite
def graphs(draw):
    g = Graph(prefixes={"": EX})
    blanks = [Blank(f"x{i}") for i in range(draw(st.integers(0, 3)))]
    subjects = [ex(n) for n in "abcd"] + blanks
    for _ in range(draw(st.integers(0, 12))):
        s = draw(st.sampled_from(subjects))
        p = ex(draw(names))
        o = draw(st.one_of(names.map(ex), literals, st.sampled_from(blanks) if blanks else names.map(ex)))
        g.add(s, p, o)
    if draw(st.booleans()):
        items = draw(st.lists(names.map(ex), min_size=1, max_size=4))
        nodes = [Blank(f"l{i}") for i in range(len(items))]
        for i, (node, item) in enumerate(zip(nodes, items)):
            g.add(node, RDF_FIRST, item)
            g.add(node, RDF_REST, nodes[i + 1] if i + 1 < len(nodes) else RDF_NIL)
        g.add(ex("a"), ex("list"), nodes[0])
    return g


@settings(max_examples=200)
@given(graphs())
def test_random_graph_round_trip(g):
    text = serialize_turtle(g)
    back = parse_turtle(text)
    assert isomorphic(back, g)
    assert serialize_turtle(back) == text


def test_isomorphism_ignores_labels_but_not_structure():
    g1 = parse_turtle(PREFIXES + ":s :p [ :q 1 ], [ :q 2 ] .")
    g2 = parse_turtle(PREFIXES + ":s :p _:m, _:n . _:n :q 1 . _:m :q 2 .")
    g3 = parse_turtle(PREFIXES + ":s :p [ :q 1 ], [ :q 1 ; :r 2 ] .")
    assert isomorphic(g1, g2)
    assert not isomorphic(g1, g3)


def test_serialization_independent_of_insertion_order():
    g = parse_turtle(PREFIXES + SEQUENCE_LISTING + ANNOTATION_LISTING)
    triples = list(g)
    random.Random(7).shuffle(triples)
    h = Graph(prefixes=g.prefixes)
    for t in triples:
        h.add(*t)
    assert serialize_turtle(h) == serialize_turtle(g)
