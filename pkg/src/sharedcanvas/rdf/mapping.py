"""Bidirectional mapping between :class:`~sharedcanvas.model.Manifest` and RDF.

The mapping table lives in docs/rdf-mapping.md. In short: every sequence
node is typed both ``ore:Aggregation`` and ``rdf:List`` and is itself the
head of its item chain; alternative paths are ``sc:AlternativeGroup`` blank
nodes; rectangular selectors ride on ``#xywh=`` fragment IRIs and other
selectors on ``oac:Constraint`` blank nodes holding an SVG element.
"""

from __future__ import annotations

from ..errors import BrokenList, MalformedGraph, MultipleManifestNodes, NoManifestNode, TypeClash
from ..fragments import Rect, parse_svg_constraint, parse_xywh, svg_constraint
from ..model import (
    Alternatives,
    AnnoType,
    Annotation,
    AnnotationList,
    Canvas,
    Choice,
    ChoiceKind,
    ContentResource,
    ListKind,
    Manifest,
    Range,
    RangeTarget,
    ResourceKind,
    Sequence,
    Single,
    Zone,
)
from .graph import Blank, Graph, IriRef, Literal, Triple, read_list, term_key, triple_key
from .vocab import (
    ANNOTATION_CLASSES,
    CHOICE_CLASSES,
    CNT,
    DC,
    EXCLUSIVE_CLASSES,
    EXIF,
    LIST_CLASSES,
    NAMESPACES,
    OAC,
    ORE,
    RDF,
    RDF_FIRST,
    RDF_NIL,
    RDF_REST,
    RDF_TYPE,
    RESOURCE_CLASSES,
    SC,
)

_ANNO_TYPES = {v: AnnoType(k) for k, v in ANNOTATION_CLASSES.items()}
_LIST_KINDS = {v: ListKind(k) for k, v in LIST_CLASSES.items()}
_CHOICE_KINDS = {v: ChoiceKind(k) for k, v in CHOICE_CLASSES.items()}
_RESOURCE_KINDS = {v: ResourceKind(k) for k, v in RESOURCE_CLASSES.items()}


def base_namespace(manifest_id: str) -> str:
    return manifest_id.rsplit("/", 1)[0] + "/"


# --- model -> graph ------------------------------------------------------------

class _Emitter:
    def __init__(self, prefixes):
        self.g = Graph(prefixes=prefixes)
        self.n = 0

    def blank(self) -> Blank:
        b = Blank(f"n{self.n}")
        self.n += 1
        return b

    def add(self, s, p, o):
        if isinstance(o, str):
            o = Literal(o)
        elif isinstance(o, int) and not isinstance(o, bool):
            o = Literal(o)
        self.g.add(s, p, o)

    def rdf_list(self, items):
        if not items:
            return RDF_NIL
        nodes = [self.blank() for _ in items]
        for k, (node, item) in enumerate(zip(nodes, items)):
            self.add(node, RDF_FIRST, item)
            self.add(node, RDF_REST, nodes[k + 1] if k + 1 < len(nodes) else RDF_NIL)
        return nodes[0]

    def selected(self, ref: str, selector):
        """Term for ``ref`` restricted by ``selector``."""
        if selector is None:
            return IriRef(ref)
        if isinstance(selector, Rect) and "#" not in ref:
            return IriRef(f"{ref}#xywh={selector.x},{selector.y},{selector.w},{selector.h}")
        b = self.blank()
        self.add(b, RDF_TYPE, OAC.Constraint)
        self.add(b, OAC.constrains, IriRef(ref))
        self.add(b, RDF.value, svg_constraint(selector))
        return b

    def title(self, node, label):
        if label:
            self.add(node, DC.title, label)

    def dims(self, node, width, height):
        if width is not None:
            self.add(node, EXIF.width, width)
        if height is not None:
            self.add(node, EXIF.height, height)


def model_to_graph(manifest: Manifest) -> Graph:
    """Encode a manifest as an RDF graph (deterministic blank labels)."""
    prefixes = dict(NAMESPACES)
    prefixes[""] = base_namespace(manifest.id)
    e = _Emitter(prefixes)
    M = IriRef(manifest.id)
    e.add(M, RDF_TYPE, SC.Manifest)
    e.title(M, manifest.label)
    e.add(M, SC.hasSequences, e.rdf_list([IriRef(s.id) for s in manifest.sequences]))
    if manifest.ranges:
        e.add(M, SC.hasRanges, e.rdf_list([IriRef(r.id) for r in manifest.ranges]))
    if manifest.annotation_lists:
        e.add(M, SC.hasAnnotationLists, e.rdf_list([IriRef(x.id) for x in manifest.annotation_lists]))
    if manifest.annotations:
        e.add(M, SC.hasAnnotations, e.rdf_list([IriRef(a.id) for a in manifest.annotations]))
    for key, value in manifest.metadata:
        b = e.blank()
        e.add(M, SC.metadata, b)
        e.add(b, SC.key, key)
        e.add(b, SC.value, value)

    for c in manifest.canvases:
        node = IriRef(c.id)
        e.add(node, RDF_TYPE, SC.Canvas)
        e.title(node, c.label)
        e.dims(node, c.width, c.height)

    for z in manifest.zones:
        node = IriRef(z.id)
        e.add(node, RDF_TYPE, SC.Zone)
        e.dims(node, z.width, z.height)

    for r in manifest.resources:
        node = IriRef(r.id)
        e.add(node, RDF_TYPE, RESOURCE_CLASSES[r.kind.value])
        e.add(node, DC.format, r.media_type)
        e.dims(node, r.width, r.height)
        if r.chars is not None:
            e.add(node, CNT.chars, r.chars)

    for ch in manifest.choices:
        node = IriRef(ch.id)
        e.add(node, RDF_TYPE, OAC.Choice)
        e.add(node, RDF_TYPE, CHOICE_CLASSES[ch.kind.value])
        e.add(node, SC.hasOptions, e.rdf_list([IriRef(o.id) for o in ch.options]))
        for opt, pairs in zip(ch.options, ch.option_metadata):
            for key, value in pairs:
                b = e.blank()
                e.add(node, SC.optionMetadata, b)
                e.add(b, SC.option, IriRef(opt.id))
                e.add(b, SC.key, key)
                e.add(b, SC.value, value)

    for a in manifest.annotations:
        node = IriRef(a.id)
        e.add(node, RDF_TYPE, OAC.Annotation)
        e.add(node, RDF_TYPE, ANNOTATION_CLASSES[a.anno_type.value])
        if a.body is not None:
            e.add(node, OAC.hasBody, e.selected(a.body, a.body_selector))
        elif a.chars is not None:
            b = e.blank()
            e.add(node, OAC.hasBody, b)
            e.add(b, RDF_TYPE, CNT.ContentAsText)
            e.add(b, CNT.chars, a.chars)
        e.add(node, OAC.hasTarget, e.selected(a.target, a.target_selector))
        if a.rotation:
            e.add(node, SC.rotation, a.rotation)
        if a.author is not None:
            e.add(node, DC.creator, a.author)
        if a.certainty is not None:
            e.add(node, SC.certainty, a.certainty)

    for s in manifest.sequences:
        node = IriRef(s.id)
        e.add(node, RDF_TYPE, ORE.Aggregation)
        e.add(node, RDF_TYPE, RDF.List)
        e.title(node, s.label)
        for c in s.aggregates:
            e.add(node, ORE.aggregates, IriRef(c))
        terms = [_item_term(e, item) for item in s.items]
        if terms:
            e.add(node, RDF_FIRST, terms[0])
            e.add(node, RDF_REST, e.rdf_list(terms[1:]))

    for r in manifest.ranges:
        node = IriRef(r.id)
        e.add(node, RDF_TYPE, SC.Range)
        e.title(node, r.label)
        e.add(node, SC.withinSequence, IriRef(r.sequence))
        e.add(node, SC.hasTargets, e.rdf_list([e.selected(t.canvas, t.selector) for t in r.targets]))

    for lst in manifest.annotation_lists:
        node = IriRef(lst.id)
        e.add(node, RDF_TYPE, SC.AnnotationList)
        e.add(node, RDF_TYPE, LIST_CLASSES[lst.kind.value])
        e.add(node, SC.hasEntries, e.rdf_list([IriRef(x) for x in lst.entries]))

    for t in manifest.extra_triples:
        e.g.add(*t)
    return e.g


def _item_term(e: _Emitter, item):
    if isinstance(item, Single):
        return IriRef(item.canvas)
    g = e.blank()
    e.add(g, RDF_TYPE, SC.AlternativeGroup)
    e.add(g, SC.hasPath, e.rdf_list([e.rdf_list([IriRef(c) for c in p]) for p in item.paths]))
    return g


# --- graph -> model ------------------------------------------------------------

class _Decoder:
    def __init__(self, graph: Graph):
        self.g = graph
        self.used = set()

    def take(self, s, p) -> list:
        objs = self.g.objects(s, p)
        for o in objs:
            self.used.add(Triple(s, p, o))
        return objs

    def one(self, s, p, default=None, required=False):
        objs = self.take(s, p)
        if len(objs) > 1:
            raise MalformedGraph(f"{_show(s)} has {len(objs)} values for {p.value}")
        if not objs:
            if required:
                raise MalformedGraph(f"{_show(s)} lacks {p.value}")
            return default
        return objs[0]

    def types(self, s) -> set:
        return set(self.g.objects(s, RDF_TYPE))

    def mark_type(self, s, cls):
        self.used.add(Triple(s, RDF_TYPE, cls))

    def int_value(self, s, p, required=True):
        o = self.one(s, p, required=required)
        if o is None:
            return None
        if not isinstance(o, Literal) or not o.is_int:
            raise MalformedGraph(f"{_show(s)} {p.value} must be an integer literal")
        return o.value

    def str_value(self, s, p, default=None):
        o = self.one(s, p)
        if o is None:
            return default
        if not isinstance(o, Literal) or o.is_int:
            raise MalformedGraph(f"{_show(s)} {p.value} must be a string literal")
        return o.value

    def iri_value(self, term, what) -> str:
        if not isinstance(term, IriRef):
            raise MalformedGraph(f"{what} must be an IRI, got {_show(term)}")
        return term.value

    def rdf_list(self, head) -> list:
        items = read_list(self.g, head)
        node = head
        while node != RDF_NIL:
            first = self.g.value(node, RDF_FIRST)
            rest = self.g.value(node, RDF_REST)
            self.used.add(Triple(node, RDF_FIRST, first))
            self.used.add(Triple(node, RDF_REST, rest))
            node = rest
        return items

    def subjects_of_type(self, cls) -> list:
        return sorted(self.g.subjects(RDF_TYPE, cls), key=term_key)

    def selected(self, term):
        """(ref, selector) from a possibly fragment-bearing IRI or constraint node."""
        if isinstance(term, IriRef):
            value = term.value
            if "#" in value:
                base, frag = value.split("#", 1)
                if frag.startswith("xywh="):
                    return base, parse_xywh(frag)
            return value, None
        if isinstance(term, Blank) and OAC.Constraint in self.types(term):
            self.mark_type(term, OAC.Constraint)
            ref = self.iri_value(self.one(term, OAC.constrains, required=True), "constrained resource")
            svg = self.str_value(term, RDF.value)
            if svg is None:
                raise MalformedGraph(f"constraint {_show(term)} has no SVG value")
            return ref, parse_svg_constraint(svg)
        raise MalformedGraph(f"cannot interpret {_show(term)} as a (selected) resource")


def _show(t) -> str:
    return str(t)


def check_types(graph: Graph) -> list:
    """Subjects carrying more than one mutually exclusive class."""
    clashes = []
    exclusive = set(EXCLUSIVE_CLASSES)
    for s in graph.subject_terms():
        found = sorted((t for t in graph.objects(s, RDF_TYPE) if t in exclusive), key=term_key)
        if len(found) > 1:
            clashes.append((s, found))
    return clashes


def manifest_nodes(graph: Graph) -> list:
    return graph.subjects(RDF_TYPE, SC.Manifest)


def graph_to_model(graph: Graph) -> Manifest:
    """Decode a graph into a Manifest.

    No builder checks run here, so structurally questionable content is
    kept for the validator. Triples the mapping does not consume are kept
    on ``Manifest.extra_triples`` and re-emitted by :func:`model_to_graph`.
    """
    nodes = manifest_nodes(graph)
    if not nodes:
        raise NoManifestNode("graph has no sc:Manifest node")
    if len(nodes) > 1:
        raise MultipleManifestNodes(
            "graph has several sc:Manifest nodes: " + ", ".join(_show(n) for n in nodes))
    clashes = check_types(graph)
    if clashes:
        s, found = clashes[0]
        raise TypeClash(f"{_show(s)} is typed " + " and ".join(_show(t) for t in found))

    d = _Decoder(graph)
    M = nodes[0]
    if not isinstance(M, IriRef):
        raise MalformedGraph("the manifest node must be an IRI")
    d.mark_type(M, SC.Manifest)

    canvases = []
    for node in d.subjects_of_type(SC.Canvas):
        d.mark_type(node, SC.Canvas)
        canvases.append(Canvas(node.value, d.str_value(node, DC.title, ""),
                               d.int_value(node, EXIF.width), d.int_value(node, EXIF.height)))

    zones = []
    for node in d.subjects_of_type(SC.Zone):
        d.mark_type(node, SC.Zone)
        zones.append(Zone(node.value, d.int_value(node, EXIF.width), d.int_value(node, EXIF.height)))

    resources = {}
    for cls, kind in _RESOURCE_KINDS.items():
        for node in d.subjects_of_type(cls):
            d.mark_type(node, cls)
            resources[node.value] = ContentResource(
                node.value, kind, d.str_value(node, DC.format, ""),
                d.int_value(node, EXIF.width, required=False),
                d.int_value(node, EXIF.height, required=False),
                d.str_value(node, CNT.chars))

    choices = []
    for node in d.subjects_of_type(OAC.Choice):
        d.mark_type(node, OAC.Choice)
        kinds = [t for t in d.types(node) if t in _CHOICE_KINDS]
        if len(kinds) != 1:
            raise MalformedGraph(f"choice {_show(node)} needs exactly one of sc:ImageChoice/sc:TextChoice")
        d.mark_type(node, kinds[0])
        option_ids = [d.iri_value(t, "choice option") for t in d.rdf_list(d.one(node, SC.hasOptions, RDF_NIL))]
        missing = [o for o in option_ids if o not in resources]
        if missing:
            raise MalformedGraph(f"choice {_show(node)} option {missing[0]} is not a described resource")
        meta = {o: {} for o in option_ids}
        for b in d.take(node, SC.optionMetadata):
            opt = d.iri_value(d.one(b, SC.option, required=True), "option")
            meta.setdefault(opt, {})[d.str_value(b, SC.key)] = d.str_value(b, SC.value)
        pairs = tuple(tuple(sorted(meta[o].items())) for o in option_ids)
        if not any(pairs):
            pairs = ()
        choices.append(Choice(node.value, _CHOICE_KINDS[kinds[0]],
                              tuple(resources[o] for o in option_ids), pairs))

    listed = _listed(d, M, SC.hasAnnotations)
    others = [n for n in d.subjects_of_type(OAC.Annotation) if n not in listed]
    annotations = [_annotation(d, node) for node in listed + others]

    seq_nodes = [IriRef(d.iri_value(t, "sequence")) for t in _listed(d, M, SC.hasSequences)]
    sequences = [_sequence(d, node) for node in seq_nodes]

    range_nodes = _listed(d, M, SC.hasRanges)
    range_nodes += [n for n in d.subjects_of_type(SC.Range) if n not in range_nodes]
    ranges = []
    for node in range_nodes:
        d.mark_type(node, SC.Range)
        seq = d.iri_value(d.one(node, SC.withinSequence, required=True), "range sequence")
        targets = tuple(RangeTarget(*d.selected(t))
                        for t in d.rdf_list(d.one(node, SC.hasTargets, RDF_NIL)))
        ranges.append(Range(node.value, d.str_value(node, DC.title, ""), seq, targets))

    list_nodes = _listed(d, M, SC.hasAnnotationLists)
    list_nodes += [n for n in d.subjects_of_type(SC.AnnotationList) if n not in list_nodes]
    lists = []
    for node in list_nodes:
        d.mark_type(node, SC.AnnotationList)
        kinds = [t for t in d.types(node) if t in _LIST_KINDS]
        if len(kinds) != 1:
            raise MalformedGraph(f"annotation list {_show(node)} needs exactly one list kind")
        d.mark_type(node, kinds[0])
        entries = tuple(d.iri_value(t, "list entry")
                        for t in d.rdf_list(d.one(node, SC.hasEntries, RDF_NIL)))
        lists.append(AnnotationList(node.value, _LIST_KINDS[kinds[0]], entries))

    metadata = []
    for b in d.take(M, SC.metadata):
        metadata.append((d.str_value(b, SC.key), d.str_value(b, SC.value)))

    label = d.str_value(M, DC.title, "")
    extras = _relabel_extras([t for t in graph.triples if t not in d.used])

    return Manifest(
        id=M.value,
        label=label,
        sequences=tuple(sequences),
        ranges=tuple(ranges),
        annotation_lists=tuple(lists),
        zones=tuple(zones),
        annotations=tuple(annotations),
        metadata=tuple(sorted(metadata)),
        canvases=tuple(canvases),
        resources=tuple(sorted(resources.values(), key=lambda r: r.id)),
        choices=tuple(choices),
        extra_triples=extras,
    )


def _listed(d: _Decoder, M, pred) -> list:
    head = d.one(M, pred)
    if head is None:
        return []
    return d.rdf_list(head)


def _annotation(d: _Decoder, node) -> Annotation:
    if not isinstance(node, IriRef):
        raise MalformedGraph(f"annotation {_show(node)} must be an IRI")
    d.mark_type(node, OAC.Annotation)
    subtypes = [t for t in d.types(node) if t in _ANNO_TYPES]
    if len(subtypes) > 1:
        raise MalformedGraph(f"annotation {_show(node)} has several annotation subtypes")
    if subtypes:
        d.mark_type(node, subtypes[0])
        anno_type = _ANNO_TYPES[subtypes[0]]
    else:
        # annotations from foreign sources without a layout subtype are commentary
        anno_type = AnnoType.COMMENT
    body = chars = body_selector = None
    body_term = d.one(node, OAC.hasBody)
    if isinstance(body_term, Blank) and CNT.ContentAsText in d.types(body_term):
        d.mark_type(body_term, CNT.ContentAsText)
        chars = d.str_value(body_term, CNT.chars, "")
    elif body_term is not None:
        body, body_selector = d.selected(body_term)
    target, target_selector = d.selected(d.one(node, OAC.hasTarget, required=True))
    rot = d.one(node, SC.rotation)
    rotation = 0
    if rot is not None:
        if not isinstance(rot, Literal) or not rot.is_int:
            raise MalformedGraph(f"{_show(node)} rotation must be an integer")
        rotation = rot.value
    return Annotation(node.value, anno_type, target, body=body, chars=chars,
                      body_selector=body_selector, target_selector=target_selector,
                      rotation=rotation, author=d.str_value(node, DC.creator),
                      certainty=d.str_value(node, SC.certainty))


def _sequence(d: _Decoder, node) -> Sequence:
    types = d.types(node)
    for cls in (ORE.Aggregation, RDF.List):
        if cls in types:
            d.mark_type(node, cls)
    items = []
    for term in d.rdf_list(node):
        if isinstance(term, IriRef):
            items.append(Single(term.value))
        elif isinstance(term, Blank) and SC.AlternativeGroup in d.types(term):
            d.mark_type(term, SC.AlternativeGroup)
            head = d.one(term, SC.hasPath, required=True)
            paths = tuple(tuple(d.iri_value(c, "path canvas") for c in d.rdf_list(p))
                          for p in d.rdf_list(head))
            items.append(Alternatives(paths))
        else:
            raise MalformedGraph(f"sequence {_show(node)} has an unsupported item {_show(term)}")
    aggregates = frozenset(d.iri_value(t, "aggregated canvas") for t in d.take(node, ORE.aggregates))
    return Sequence(node.value, d.str_value(node, DC.title, ""), tuple(items), aggregates)


def _relabel_extras(triples) -> tuple:
    def key(t):
        return tuple(("_", "") if isinstance(x, Blank) else term_key(x) for x in t)

    ordered = sorted(triples, key=lambda t: (key(t), triple_key(t)))
    labels = {}
    for t in ordered:
        for x in (t.subject, t.object):
            if isinstance(x, Blank) and x not in labels:
                labels[x] = Blank(f"x{len(labels)}")

    def fix(x):
        return labels.get(x, x) if isinstance(x, Blank) else x

    return tuple(Triple(fix(s), p, fix(o)) for s, p, o in ordered)


__all__ = ["model_to_graph", "graph_to_model", "check_types", "manifest_nodes", "base_namespace", "BrokenList"]
