"""Single-edit mutations of clean fixtures, one per validator rule."""

from dataclasses import replace

from sharedcanvas.fixtures import bnf, fragments, palimpsest, y112
from sharedcanvas.fragments import Rect
from sharedcanvas.model import RangeTarget, text_resource
from sharedcanvas.rdf import model_to_graph
from sharedcanvas.rdf.graph import RDF_NIL, RDF_REST, IriRef


def _swap(items, old, new):
    return tuple(new if x == old else x for x in items)


def _anno(m, local):
    return next(a for a in m.annotations if a.id.endswith("/" + local))


def v1():
    m = fragments()
    c = next(c for c in m.canvases if c.id.endswith("/orig-b"))
    return replace(m, canvases=_swap(m.canvases, c, replace(c, width=0)))


def v2():
    m = y112()
    a = _anno(m, "spread-note")
    return replace(m, annotations=_swap(m.annotations, a, replace(a, target="http://example.org/y112/nowhere")))


def v3():
    m = y112()
    a = _anno(m, "gutter-note")
    return replace(m, annotations=_swap(m.annotations, a, replace(a, target_selector=Rect(300, 500, 200, 200))))


def v4():
    m = bnf()
    s = m.sequences[-1]
    dropped = s.canvas_order()[0]
    return replace(m, sequences=_swap(m.sequences, s, replace(s, aggregates=s.aggregates - {dropped})))


def v5():
    """Point one 113 Content target at a canvas bound in 114."""
    m = bnf()
    r = m.ranges[0]
    other = m.sequences[1].canvas_order()[1]
    targets = (RangeTarget(other),) + r.targets[1:]
    return replace(m, ranges=_swap(m.ranges, r, replace(r, targets=targets)))


def v6():
    m = y112()
    ch = m.choices[0]
    stray = text_resource("http://example.org/y112/text/stray.txt", "stray")
    return replace(m, choices=_swap(m.choices, ch, replace(ch, options=ch.options + (stray,), option_metadata=())))


def v7():
    m = palimpsest()
    lst = m.annotation_lists[0]
    entries = tuple(e for e in lst.entries if not e.endswith("/margin"))
    return replace(m, annotation_lists=_swap(m.annotation_lists, lst, replace(lst, entries=entries)))


def v8():
    m = palimpsest()
    a = _anno(m, "undertext-on-f57r")
    return replace(m, annotations=_swap(m.annotations, a, replace(a, rotation=45)))


def v9():
    m = bnf()
    a = _anno(m, "img-f5r")
    return replace(m, annotations=tuple(x for x in m.annotations if x != a))


def v10():
    """Close the first sequence's rdf:rest chain back onto its head."""
    m = y112()
    g = model_to_graph(m)
    head = IriRef(m.sequences[0].id)
    node = head
    while True:
        nxt = g.value(node, RDF_REST)
        if nxt == RDF_NIL:
            break
        node = nxt
    g.remove(node, RDF_REST, RDF_NIL)
    g.add(node, RDF_REST, head)
    return g


MUTATIONS = {f"V{k}": fn for k, fn in enumerate((v1, v2, v3, v4, v5, v6, v7, v8, v9, v10), 1)}
