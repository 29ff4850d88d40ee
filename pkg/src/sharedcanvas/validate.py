"""Structural checks over a Manifest or a parsed Graph.

Problems are reported as :class:`Diagnostic` values, never raised. Rules:

====  ========  ==========================================================
V1    Error     canvas and zone dimensions are positive
V2    Error     references resolve, or point to another authority
V3    Error     selectors lie within what they select from
V4    Error     sequence aggregates equal the canvases it reaches
V5    Error     range targets belong to the range's sequence, in order
V6    Error     choices are non-empty and of one kind
V7    Warning   text on a canvas is covered by a TextOrder list
V8    Error     zone placements use quarter turns and fit their target
V9    Warning   canvas has at least one image
V10   Error     every rdf:List is well-formed, nil-terminated, acyclic
====  ========  ==========================================================

Graph input adds TypeClash, NoManifestNode and MultipleManifestNodes.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass
from enum import Enum

from .fragments import bounding_box, within
from .model import (
    ROTATIONS,
    AnnoType,
    Canvas,
    ContentResource,
    ListKind,
    Manifest,
    Zone,
    range_order_violations,
)
from .rdf.graph import RDF_FIRST, RDF_NIL, RDF_REST, Blank, Graph, IriRef
from .rdf.mapping import check_types, manifest_nodes


class Severity(str, Enum):
    ERROR = "Error"
    WARNING = "Warning"


RULES = {
    "V1": Severity.ERROR,
    "V2": Severity.ERROR,
    "V3": Severity.ERROR,
    "V4": Severity.ERROR,
    "V5": Severity.ERROR,
    "V6": Severity.ERROR,
    "V7": Severity.WARNING,
    "V8": Severity.ERROR,
    "V9": Severity.WARNING,
    "V10": Severity.ERROR,
    "TypeClash": Severity.ERROR,
    "NoManifestNode": Severity.ERROR,
    "MultipleManifestNodes": Severity.ERROR,
}


def _rule_key(rule: str):
    if rule.startswith("V") and rule[1:].isdigit():
        return (0, int(rule[1:]), "")
    return (1, 0, rule)


@dataclass(frozen=True)
class Diagnostic:
    rule: str
    severity: Severity
    subject: str
    message: str

    def __post_init__(self):
        if self.rule not in RULES:
            raise ValueError(f"unknown rule {self.rule!r}")
        if RULES[self.rule] is not Severity(self.severity):
            raise ValueError(f"rule {self.rule} is always {RULES[self.rule].value}")
        object.__setattr__(self, "severity", Severity(self.severity))

    @property
    def is_error(self) -> bool:
        return self.severity is Severity.ERROR

    def sort_key(self):
        return (_rule_key(self.rule), self.subject, self.message)

    def line(self) -> str:
        return f"{self.rule} {self.severity.value} {self.subject} {self.message}"

    def to_dict(self) -> dict:
        d = asdict(self)
        d["severity"] = self.severity.value
        return d


def _diag(rule, subject, message) -> Diagnostic:
    if isinstance(subject, IriRef):
        subject = subject.value
    return Diagnostic(rule, RULES[rule], str(subject), message)


def _finish(diags) -> list:
    return sorted(set(diags), key=Diagnostic.sort_key)


def format_diagnostics(diags, fmt="text") -> str:
    if fmt == "json":
        return json.dumps([d.to_dict() for d in diags], indent=2, sort_keys=True) + "\n"
    return "".join(d.line() + "\n" for d in diags)


def has_errors(diags) -> bool:
    return any(d.is_error for d in diags)


# --- manifest rules ------------------------------------------------------------

def _bounds(obj):
    """(width, height) to check a selector against, or None to skip."""
    if isinstance(obj, (Canvas, Zone)):
        if obj.width > 0 and obj.height > 0:
            return obj.width, obj.height
        return None  # V1 reports it
    if isinstance(obj, ContentResource) and obj.has_dims:
        return obj.width, obj.height
    return None


def _box(sel) -> str:
    b = bounding_box(sel)
    return f"{b.x},{b.y},{b.w},{b.h}"


def _zones_on(m: Manifest, canvas_id: str) -> set:
    """Canvas id plus every zone placed on it, directly or through other zones."""
    reached = {canvas_id}
    frontier = [canvas_id]
    while frontier:
        target = frontier.pop()
        for a in m.annotations:
            if a.anno_type is AnnoType.PLACE_ZONE and a.target == target and a.body not in reached:
                if isinstance(m.get(a.body), Zone):
                    reached.add(a.body)
                    frontier.append(a.body)
    return reached


def _v1(m):
    for obj in m.canvases + m.zones:
        kind = "canvas" if isinstance(obj, Canvas) else "zone"
        for name in ("width", "height"):
            v = getattr(obj, name)
            if not isinstance(v, int) or isinstance(v, bool) or v <= 0:
                yield _diag("V1", obj.id, f"{kind} {name} must be a positive integer, got {v!r}")


def _v2(m):
    def resolves(ref):
        return ref in m.index or m.is_external(ref)

    for a in m.annotations:
        if not resolves(a.target):
            yield _diag("V2", a.id, f"target {a.target} does not resolve")
        if a.body is not None and not resolves(a.body):
            yield _diag("V2", a.id, f"body {a.body} does not resolve")
        if a.anno_type is AnnoType.PLACE_ZONE and a.body in m.index and not isinstance(m.get(a.body), Zone):
            yield _diag("V2", a.id, f"zone placement body {a.body} is not a zone")
    for s in m.sequences:
        for c in s.canvas_order():
            if not isinstance(m.get(c), Canvas):
                yield _diag("V2", s.id, f"sequence member {c} is not a known canvas")
    seq_ids = {s.id for s in m.sequences}
    for r in m.ranges:
        if r.sequence not in seq_ids:
            yield _diag("V2", r.id, f"sequence {r.sequence} is not in the manifest")
    annos = {a.id for a in m.annotations}
    for lst in m.annotation_lists:
        for e in lst.entries:
            if e not in annos:
                yield _diag("V2", lst.id, f"entry {e} is not a known annotation")


def _v3(m):
    for a in m.annotations:
        if a.anno_type is AnnoType.PLACE_ZONE:
            continue  # V8
        for role, ref, sel in (("target", a.target, a.target_selector), ("body", a.body, a.body_selector)):
            if sel is None or ref is None:
                continue
            dims = _bounds(m.get(ref))
            if dims is not None and not within(sel, *dims):
                yield _diag("V3", a.id, f"{role} selector {_box(sel)} exceeds {ref} ({dims[0]}x{dims[1]})")
    for r in m.ranges:
        for t in r.targets:
            if t.selector is None:
                continue
            dims = _bounds(m.get(t.canvas))
            if dims is not None and not within(t.selector, *dims):
                yield _diag("V3", r.id, f"target selector {_box(t.selector)} exceeds {t.canvas} ({dims[0]}x{dims[1]})")


def _v4(m):
    for s in m.sequences:
        reached = set(s.canvas_order())
        for c in sorted(reached - s.aggregates):
            yield _diag("V4", s.id, f"{c} is in the order but not aggregated")
        for c in sorted(s.aggregates - reached):
            yield _diag("V4", s.id, f"{c} is aggregated but not in the order")


def _v5(m):
    seqs = {s.id: s for s in m.sequences}
    for r in m.ranges:
        seq = seqs.get(r.sequence)
        if seq is None:
            continue  # V2
        outside = [t.canvas for t in r.targets if t.canvas not in seq.aggregates]
        if outside:
            yield _diag("V5", r.id, f"targets not in {seq.id}: {' '.join(outside)}")
            continue
        bad = range_order_violations(seq, r.targets)
        if bad:
            i, j = bad[0]
            yield _diag("V5", r.id, f"{r.targets[j].canvas} precedes {r.targets[i].canvas} in {seq.id}")


def _v6(m):
    for ch in m.choices:
        if not ch.options:
            yield _diag("V6", ch.id, "choice has no options")
            continue
        want = ch.kind.resource_kind
        odd = [o.id for o in ch.options if o.kind is not want]
        if odd:
            yield _diag("V6", ch.id, f"{ch.kind.value} has non-{want.value} options: {' '.join(odd)}")


def _v7(m):
    orders = [set(lst.entries) for lst in m.annotation_lists if lst.kind is ListKind.TEXT_ORDER]
    for c in m.canvases:
        frames = _zones_on(m, c.id)
        texts = {a.id for a in m.annotations
                 if a.anno_type is AnnoType.PAINT_TEXT and a.target in frames}
        if texts and not any(texts <= o for o in orders):
            yield _diag("V7", c.id, f"{len(texts)} text annotation(s) without a covering TextOrder")


def _v8(m):
    for a in m.annotations:
        if a.anno_type is not AnnoType.PLACE_ZONE:
            continue
        if a.rotation not in ROTATIONS:
            yield _diag("V8", a.id, f"rotation {a.rotation!r} is not a quarter turn")
        if a.target_selector is not None:
            dims = _bounds(m.get(a.target))
            if dims is not None and not within(a.target_selector, *dims):
                yield _diag("V8", a.id,
                            f"placement {_box(a.target_selector)} exceeds {a.target} ({dims[0]}x{dims[1]})")


def _v9(m):
    for c in m.canvases:
        frames = _zones_on(m, c.id)
        if not any(a.anno_type is AnnoType.PAINT_IMAGE and a.target in frames for a in m.annotations):
            yield _diag("V9", c.id, "canvas has no image")


_MANIFEST_RULES = (_v1, _v2, _v3, _v4, _v5, _v6, _v7, _v8, _v9)


def validate_manifest(manifest: Manifest) -> list:
    """Sorted diagnostics for rules V1 to V9; empty when everything passes."""
    diags = []
    for rule in _MANIFEST_RULES:
        diags.extend(rule(manifest))
    return _finish(diags)


# --- graph rules ---------------------------------------------------------------

def _list_diagnostics(graph: Graph):
    nodes = sorted({t.subject for t in graph.triples if t.predicate in (RDF_FIRST, RDF_REST)},
                   key=str)
    rest_targets = {t.object for t in graph.triples if t.predicate == RDF_REST}
    visited = set()
    for head in nodes:
        if head in rest_targets:
            continue
        node, seen = head, set()
        while True:
            if node == RDF_NIL:
                break
            if not isinstance(node, (IriRef, Blank)):
                yield _diag("V10", head, f"list ends at {node} instead of rdf:nil")
                break
            if node in seen:
                yield _diag("V10", head, f"list has a cycle at {node}")
                break
            seen.add(node)
            visited.add(node)
            firsts = graph.objects(node, RDF_FIRST)
            rests = graph.objects(node, RDF_REST)
            if len(firsts) != 1 or len(rests) != 1:
                yield _diag("V10", head,
                            f"list node {node} has {len(firsts)} rdf:first and {len(rests)} rdf:rest")
                break
            node = rests[0]
    # whatever is left has no head: closed rest cycles
    left = [n for n in nodes if n not in visited]
    while left:
        start = left[0]
        ring, node = [], start
        while node not in ring and node in set(left):
            ring.append(node)
            node = graph.value(node, RDF_REST)
        yield _diag("V10", start, f"list nodes form a cycle with no head ({len(ring)} nodes)")
        left = [n for n in left if n not in ring]


def validate_graph(graph: Graph) -> list:
    """Type clashes, manifest node count and rdf:List shape, before decoding."""
    diags = []
    for subject, classes in check_types(graph):
        diags.append(_diag("TypeClash", subject, "typed " + " and ".join(str(c) for c in classes)))
    nodes = manifest_nodes(graph)
    if not nodes:
        diags.append(_diag("NoManifestNode", "-", "graph has no sc:Manifest node"))
    elif len(nodes) > 1:
        for n in nodes:
            diags.append(_diag("MultipleManifestNodes", n, f"one of {len(nodes)} sc:Manifest nodes"))
    diags.extend(_list_diagnostics(graph))
    return _finish(diags)


def validate_turtle_graph(graph: Graph) -> list:
    """Graph checks, then (if they pass) decode and run the manifest rules."""
    from .rdf.mapping import graph_to_model

    diags = validate_graph(graph)
    if has_errors(diags):
        return diags
    return _finish(diags + validate_manifest(graph_to_model(graph)))
