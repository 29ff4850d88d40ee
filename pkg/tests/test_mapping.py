import dataclasses

import pytest

from sharedcanvas.errors import BrokenList, MultipleManifestNodes, NoManifestNode, TypeClash
from sharedcanvas.fragments import Polygon, Rect
from sharedcanvas.model import ManifestBuilder, alternatives
from sharedcanvas.rdf import (
    Blank,
    IriRef,
    Literal,
    graph_to_model,
    isomorphic,
    model_to_graph,
    parse_turtle,
    read_list,
    serialize_turtle,
)
from sharedcanvas.rdf.graph import RDF_FIRST, RDF_NIL, RDF_REST
from sharedcanvas.rdf.vocab import EXIF, OAC, ORE, RDF, RDF_TYPE, SC

BASE = "http://example.org/m/manifest"


def minimal(n_pages=1, annotate=False):
    b = ManifestBuilder(BASE)
    pages = [b.canvas(f"page{i}", "", 768, 1024) for i in range(1, n_pages + 1)]
    if annotate:
        img = b.image("image1", 1000, 800)
        b.paint(pages[0], img, body_selector=Rect(10, 10, 640, 480), id="myAnno")
    b.sequence("seq", "", pages)
    return b.build()


def test_minimal_manifest_triple_count():
    g = model_to_graph(minimal())
    # manifest type; hasSequences list node (first, rest); canvas type, width, height;
    # sequence two types, one aggregates, first, rest
    assert len(g) == 12


def test_dual_typing_three_pages():
    m = minimal(3)
    g = model_to_graph(m)
    seq = IriRef(m.sequences[0].id)
    assert {ORE.Aggregation, RDF.List} <= set(g.objects(seq, RDF_TYPE))
    pages = [IriRef(c.id) for c in m.canvases]
    assert len(g.objects(seq, ORE.aggregates)) == 3
    assert g.value(seq, RDF_FIRST) == pages[0]
    assert read_list(g, seq) == pages


def test_canvas_and_annotation_triples():
    m = minimal(annotate=True)
    g = model_to_graph(m)
    canvas = IriRef(m.canvases[0].id)
    assert g.value(canvas, EXIF.width) == Literal(768)
    assert g.value(canvas, EXIF.height) == Literal(1024)
    anno = IriRef("http://example.org/m/myAnno")
    assert g.value(anno, OAC.hasTarget) == canvas
    assert g.value(anno, OAC.hasBody) == IriRef("http://example.org/m/image1#xywh=10,10,640,480")
    assert "oac:hasTarget :page1" in serialize_turtle(g)


def test_polygon_selector_is_constraint_node():
    b = ManifestBuilder(BASE)
    c = b.canvas("c", "", 100, 100)
    b.paint(c, "x", Polygon(((0, 0), (100, 0), (0, 100))), id="t")
    b.sequence("s", "", [c])
    m = b.build()
    g = model_to_graph(m)
    target = g.value(IriRef("http://example.org/m/t"), OAC.hasTarget)
    assert isinstance(target, Blank)
    assert OAC.Constraint in g.objects(target, RDF_TYPE)
    assert g.value(target, OAC.constrains) == IriRef("http://example.org/m/c")
    assert g.value(target, RDF.value).value.startswith("<polygon")
    assert graph_to_model(g) == m


def test_alternatives_encoding():
    b = ManifestBuilder(BASE)
    c1, spread, left, right, c4 = (b.canvas(n, "", 10, 10) for n in ("c1", "sp", "l", "r", "c4"))
    b.sequence("s", "", [c1, alternatives([spread], [left, right]), c4])
    m = b.build()
    g = model_to_graph(m)
    seq = IriRef(m.sequences[0].id)
    items = read_list(g, seq)
    group = items[1]
    assert SC.AlternativeGroup in g.objects(group, RDF_TYPE)
    paths = [read_list(g, p) for p in read_list(g, g.value(group, SC.hasPath))]
    assert [[x.value.rsplit("/", 1)[1] for x in p] for p in paths] == [["sp"], ["l", "r"]]
    listed = {items[0], items[2]} | {x for p in paths for x in p}
    assert listed == set(g.objects(seq, ORE.aggregates))


def test_fixture_round_trip(manifests, fixture_name):
    m = manifests[fixture_name]
    g = model_to_graph(m)
    text = serialize_turtle(g)
    back = graph_to_model(parse_turtle(text))
    assert back == m
    assert serialize_turtle(model_to_graph(back)) == text


def test_every_sequence_dual_typed(manifests, fixture_name):
    m = manifests[fixture_name]
    g = model_to_graph(m)
    for s in m.sequences:
        node = IriRef(s.id)
        assert {ORE.Aggregation, RDF.List} <= set(g.objects(node, RDF_TYPE))
        assert {o.value for o in g.objects(node, ORE.aggregates)} == s.aggregates


def test_extra_triples_survive():
    g = model_to_graph(minimal())
    extra = (IriRef("http://example.org/m/page1"), IriRef("http://other.example.net/ns#note"),
             Literal("foreign vocabulary"))
    g.add(*extra)
    m = graph_to_model(g)
    g2 = model_to_graph(m)
    assert extra in g2
    assert isomorphic(g, g2)


def test_no_manifest_node():
    g = model_to_graph(minimal())
    g.remove(IriRef(BASE), RDF_TYPE, SC.Manifest)
    with pytest.raises(NoManifestNode):
        graph_to_model(g)


def test_multiple_manifest_nodes():
    g = model_to_graph(minimal())
    g.add(IriRef("http://example.org/m/other"), RDF_TYPE, SC.Manifest)
    with pytest.raises(MultipleManifestNodes):
        graph_to_model(g)


def test_type_clash():
    g = model_to_graph(minimal())
    g.add(IriRef("http://example.org/m/page1"), RDF_TYPE, SC.Zone)
    with pytest.raises(TypeClash):
        graph_to_model(g)


def test_list_cycle_is_broken_list():
    m = minimal(3)
    g = model_to_graph(m)
    seq = IriRef(m.sequences[0].id)
    node = seq
    while g.value(node, RDF_REST) != RDF_NIL:
        node = g.value(node, RDF_REST)
    g.remove(node, RDF_REST, RDF_NIL)
    g.add(node, RDF_REST, seq)
    with pytest.raises(BrokenList):
        graph_to_model(g)


def test_sequence_listing_reads_as_sequence():
    text = (
        "@prefix ore: <http://www.openarchives.org/ore/terms/> .\n"
        "@prefix rdf: <http://www.w3.org/1999/02/22-rdf-syntax-ns#> .\n"
        "@prefix : <http://example.org/> .\n"
        ":mySequence a ore:Aggregation, rdf:List;\n"
        "  ore:aggregates :page1, :page2, :page3;\n"
        "  rdf:first :page1;\n"
        "  rdf:rest (:page2 :page3 ).\n"
    )
    g = parse_turtle(text)
    seq = IriRef("http://example.org/mySequence")
    assert [t.value[-5:] for t in read_list(g, seq)] == ["page1", "page2", "page3"]


def test_round_trip_after_edit():
    m = minimal(2)
    seq = dataclasses.replace(m.sequences[0], label="Edited")
    m2 = dataclasses.replace(m, sequences=(seq,))
    assert graph_to_model(model_to_graph(m2)).sequences[0].label == "Edited"
