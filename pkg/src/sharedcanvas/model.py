"""In-memory object model for canvas-based manuscript descriptions.

Entities are frozen dataclasses that refer to each other by IRI. The
builder functions (``new_canvas``, ``paint``, ``build_sequence`` ...)
enforce the structural invariants; the dataclasses themselves do not, so
that a model decoded from a foreign graph can still be handed to the
validator.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from typing import Iterable, Mapping, Sequence as Seq, Union
from urllib.parse import urlsplit

from .errors import (
    DanglingReference,
    DuplicateCanvasInSequence,
    DuplicateEntry,
    DuplicateId,
    EmptyChoice,
    EmptySequence,
    InvalidIri,
    InvalidRotation,
    KindMismatch,
    NonPositiveDimension,
    NoSequences,
    RangeOrderError,
    RangeTargetNotInSequence,
    SelectorOutOfBounds,
)
from .fragments import Polygon, Rect, Selector, bounding_box, within

DEFAULT_BASE = "http://example.org/"
ROTATIONS = (0, 90, 180, 270)

_SCHEME = re.compile(r"[A-Za-z][A-Za-z0-9+.-]*:")
_FORBIDDEN = re.compile(r"[\s<>\"{}|\\^`]")


def iri(value) -> str:
    """Validate an IRI string; ``":local"`` is shorthand for ``DEFAULT_BASE + "local"``."""
    if not isinstance(value, str) or not value:
        raise InvalidIri(f"IRI must be a non-empty string, got {value!r}")
    if value.startswith(":"):
        value = DEFAULT_BASE + value[1:]
    if not _SCHEME.match(value):
        raise InvalidIri(f"IRI lacks a scheme: {value!r}")
    if value.count("#") > 1:
        raise InvalidIri(f"IRI has more than one '#': {value!r}")
    if _FORBIDDEN.search(value):
        raise InvalidIri(f"IRI contains a forbidden character: {value!r}")
    return value


def authority(value: str):
    parts = urlsplit(value)
    return parts.scheme.lower(), parts.netloc.lower()


class ResourceKind(str, Enum):
    IMAGE = "Image"
    TEXT = "Text"


class ChoiceKind(str, Enum):
    IMAGE = "ImageChoice"
    TEXT = "TextChoice"

    @property
    def resource_kind(self) -> ResourceKind:
        return ResourceKind.IMAGE if self is ChoiceKind.IMAGE else ResourceKind.TEXT


class AnnoType(str, Enum):
    PAINT_IMAGE = "PaintImage"
    PAINT_TEXT = "PaintText"
    PLACE_ZONE = "PlaceZone"
    COMMENT = "Comment"
    DESCRIBE = "Describe"


class ListKind(str, Enum):
    TEXT_ORDER = "TextOrder"
    IMAGE_LIST = "ImageList"
    COMMENT_LIST = "CommentList"


LIST_ENTRY_TYPES = {
    ListKind.TEXT_ORDER: {AnnoType.PAINT_TEXT},
    ListKind.IMAGE_LIST: {AnnoType.PAINT_IMAGE},
    ListKind.COMMENT_LIST: {AnnoType.COMMENT, AnnoType.DESCRIBE},
}


@dataclass(frozen=True)
class Canvas:
    id: str
    label: str
    width: int
    height: int


@dataclass(frozen=True)
class Zone:
    id: str
    width: int
    height: int


@dataclass(frozen=True)
class ContentResource:
    id: str
    kind: ResourceKind
    media_type: str
    width: int | None = None
    height: int | None = None
    chars: str | None = None

    @property
    def has_dims(self) -> bool:
        return self.width is not None and self.height is not None


@dataclass(frozen=True)
class Choice:
    id: str
    kind: ChoiceKind
    options: tuple
    # one sorted tuple of (key, value) pairs per option, aligned with ``options``
    option_metadata: tuple = ()

    def metadata_for(self, index: int) -> dict:
        if index < len(self.option_metadata):
            return dict(self.option_metadata[index])
        return {}


@dataclass(frozen=True)
class Annotation:
    id: str
    anno_type: AnnoType
    target: str
    body: str | None = None
    chars: str | None = None
    body_selector: Selector | None = None
    target_selector: Selector | None = None
    rotation: int = 0
    author: str | None = None
    certainty: str | None = None


@dataclass(frozen=True)
class Single:
    canvas: str


@dataclass(frozen=True)
class Alternatives:
    paths: tuple

    def __post_init__(self):
        object.__setattr__(self, "paths", tuple(tuple(p) for p in self.paths))


SequenceItem = Union[Single, Alternatives]


def item_canvases(item: SequenceItem) -> list:
    if isinstance(item, Single):
        return [item.canvas]
    return [c for path in item.paths for c in path]


@dataclass(frozen=True)
class Sequence:
    id: str
    label: str
    items: tuple
    aggregates: frozenset

    def canvas_order(self) -> list:
        """Every reachable canvas once, in traversal order (all paths, declared order)."""
        seen = []
        for item in self.items:
            for c in item_canvases(item):
                if c not in seen:
                    seen.append(c)
        return seen

    @property
    def has_alternatives(self) -> bool:
        return any(isinstance(i, Alternatives) for i in self.items)


@dataclass(frozen=True)
class RangeTarget:
    canvas: str
    selector: Selector | None = None


@dataclass(frozen=True)
class Range:
    id: str
    label: str
    sequence: str
    targets: tuple


@dataclass(frozen=True)
class AnnotationList:
    id: str
    kind: ListKind
    entries: tuple


@dataclass(frozen=True)
class Manifest:
    id: str
    label: str
    sequences: tuple
    ranges: tuple = ()
    annotation_lists: tuple = ()
    zones: tuple = ()
    annotations: tuple = ()
    metadata: tuple = ()
    canvases: tuple = ()
    resources: tuple = ()
    choices: tuple = ()
    # foreign triples carried through graph round trips untouched
    extra_triples: tuple = field(default=(), repr=False)

    @property
    def all_annotations(self) -> tuple:
        return self.annotations

    @property
    def default_sequence(self) -> Sequence:
        return self.sequences[0]

    @property
    def meta(self) -> dict:
        return dict(self.metadata)

    @cached_property
    def index(self) -> dict:
        idx = {}
        groups = (self.canvases, self.zones, self.resources, self.choices,
                  self.annotations, self.sequences, self.ranges, self.annotation_lists)
        for group in groups:
            for obj in group:
                idx.setdefault(obj.id, obj)
        for ch in self.choices:
            for opt in ch.options:
                idx.setdefault(opt.id, opt)
        return idx

    def get(self, ref: str):
        return self.index.get(ref)

    def canvas(self, ref: str) -> Canvas:
        obj = self.index.get(ref)
        if not isinstance(obj, Canvas):
            raise KeyError(ref)
        return obj

    def sequence(self, ref: str) -> Sequence:
        obj = self.index.get(ref)
        if not isinstance(obj, Sequence):
            raise KeyError(ref)
        return obj

    def is_external(self, ref: str) -> bool:
        return ref not in self.index and authority(ref) != authority(self.id)

    @cached_property
    def external(self) -> frozenset:
        refs = set()
        for a in self.annotations:
            refs.add(a.target)
            if a.body is not None:
                refs.add(a.body)
        return frozenset(r for r in refs if self.is_external(r))

    def annotations_on(self, target: str) -> list:
        return [a for a in self.annotations if a.target == target]


# --- builders ---------------------------------------------------------------

def _positive(w, h, what):
    for name, v in (("width", w), ("height", h)):
        if not isinstance(v, int) or isinstance(v, bool) or v <= 0:
            raise NonPositiveDimension(f"{what} {name} must be a positive integer, got {v!r}")


def new_canvas(id, label: str, width: int, height: int) -> Canvas:
    _positive(width, height, "canvas")
    return Canvas(iri(id), label, width, height)


def canvas_from_aspect(id, label: str, ratio) -> Canvas:
    """Canvas for a source that only gives width/height ratio: width 1000, height round(1000/ratio)."""
    if ratio <= 0:
        raise NonPositiveDimension(f"aspect ratio must be positive, got {ratio!r}")
    from fractions import Fraction

    h = Fraction(1000) / Fraction(ratio)
    return new_canvas(id, label, 1000, int(h + Fraction(1, 2)))


def new_zone(id, width: int, height: int) -> Zone:
    _positive(width, height, "zone")
    return Zone(iri(id), width, height)


def image_resource(id, width=None, height=None, media_type="image/jpeg") -> ContentResource:
    if (width is None) != (height is None):
        raise NonPositiveDimension("image width and height must be given together")
    if width is not None:
        _positive(width, height, "image")
    return ContentResource(iri(id), ResourceKind.IMAGE, media_type, width, height)


def text_resource(id, chars=None, media_type="text/plain") -> ContentResource:
    return ContentResource(iri(id), ResourceKind.TEXT, media_type, chars=chars)


def _sorted_pairs(mapping) -> tuple:
    return tuple(sorted((str(k), str(v)) for k, v in dict(mapping or {}).items()))


def make_choice(id, kind: ChoiceKind, options: Seq[ContentResource], metadata=None) -> Choice:
    """Group equivalent resources; option order is the default preference.

    ``metadata`` maps option id to a dict of properties, or is a list
    aligned with ``options``.
    """
    kind = ChoiceKind(kind)
    options = tuple(options)
    if not options:
        raise EmptyChoice(f"choice {id} has no options")
    for opt in options:
        if opt.kind is not kind.resource_kind:
            raise KindMismatch(f"{opt.id} is {opt.kind.value}, choice is {kind.value}")
    if metadata is None:
        meta = tuple(() for _ in options)
    elif isinstance(metadata, Mapping):
        meta = tuple(_sorted_pairs(metadata.get(o.id)) for o in options)
    else:
        metadata = list(metadata)
        if len(metadata) != len(options):
            raise ValueError("metadata list must align with options")
        meta = tuple(_sorted_pairs(m) for m in metadata)
    if not any(meta):
        meta = ()
    return Choice(iri(id), kind, options, meta)


def _dims(obj):
    if isinstance(obj, (Canvas, Zone)):
        return obj.width, obj.height
    if isinstance(obj, ContentResource) and obj.has_dims:
        return obj.width, obj.height
    return None


def _check_bounds(selector, obj, role):
    if selector is None:
        return
    dims = _dims(obj)
    if dims is not None and not within(selector, *dims):
        box = bounding_box(selector)
        raise SelectorOutOfBounds(
            f"{role} selector {box.x},{box.y},{box.w},{box.h} exceeds {obj.id} ({dims[0]}x{dims[1]})")


def _ref(obj) -> str:
    return iri(obj) if isinstance(obj, str) else obj.id


def paint(id, target: Canvas | Zone, body, target_selector=None, body_selector=None,
          *, expect: AnnoType | None = None, author=None, certainty=None) -> Annotation:
    """Paint an image or text onto a canvas or zone.

    ``body`` is a ContentResource, a Choice, or a plain string (inline
    transcription). The annotation type follows from the body's kind.
    """
    if not isinstance(target, (Canvas, Zone)):
        raise KindMismatch(f"paint target must be a Canvas or Zone, got {type(target).__name__}")
    chars = None
    if isinstance(body, str):
        anno_type, chars, body_ref = AnnoType.PAINT_TEXT, body, None
        if body_selector is not None:
            raise KindMismatch("inline text cannot carry a body selector")
    elif isinstance(body, ContentResource):
        anno_type = AnnoType.PAINT_IMAGE if body.kind is ResourceKind.IMAGE else AnnoType.PAINT_TEXT
        body_ref = body.id
    elif isinstance(body, Choice):
        for opt in body.options:
            if opt.kind is not body.kind.resource_kind:
                raise KindMismatch(f"choice {body.id} mixes kinds")
        anno_type = AnnoType.PAINT_IMAGE if body.kind is ChoiceKind.IMAGE else AnnoType.PAINT_TEXT
        body_ref = body.id
    else:
        raise KindMismatch(f"cannot paint a {type(body).__name__}")
    if expect is not None and AnnoType(expect) is not anno_type:
        raise KindMismatch(f"expected {AnnoType(expect).value}, body gives {anno_type.value}")
    _check_bounds(target_selector, target, "target")
    if isinstance(body, ContentResource):
        _check_bounds(body_selector, body, "body")
    return Annotation(iri(id), anno_type, target.id, body=body_ref, chars=chars,
                      body_selector=body_selector, target_selector=target_selector,
                      author=author, certainty=certainty)


def place_zone(id, zone: Zone, target: Canvas | Zone, target_selector: Selector,
               rotation: int = 0) -> Annotation:
    if not isinstance(zone, Zone):
        raise KindMismatch(f"place_zone body must be a Zone, got {type(zone).__name__}")
    if not isinstance(target, (Canvas, Zone)):
        raise KindMismatch("zones are placed on canvases (or other zones)")
    if rotation not in ROTATIONS:
        raise InvalidRotation(f"rotation must be one of {ROTATIONS}, got {rotation!r}")
    if target_selector is None:
        target_selector = Rect(0, 0, target.width, target.height)
    _check_bounds(target_selector, target, "target")
    return Annotation(iri(id), AnnoType.PLACE_ZONE, target.id, body=zone.id,
                      target_selector=target_selector, rotation=rotation)


def comment(id, target, body=None, target_selector=None, body_selector=None, *,
            body_ref=None, describe=False, author=None, certainty=None) -> Annotation:
    """Scholarly comment (or, with ``describe=True``, a description of content).

    ``target`` may be any model object or an IRI string. ``body`` is inline
    text or a ContentResource; an external body document is given as
    ``body_ref``.
    """
    anno_type = AnnoType.DESCRIBE if describe else AnnoType.COMMENT
    chars = None
    if body_ref is not None:
        body_ref = iri(body_ref)
    if isinstance(body, ContentResource):
        body_ref = body.id
        _check_bounds(body_selector, body, "body")
    elif body is not None:
        chars = str(body)
    if not isinstance(target, str):
        _check_bounds(target_selector, target, "target")
    return Annotation(iri(id), anno_type, _ref(target), body=body_ref, chars=chars,
                      body_selector=body_selector, target_selector=target_selector,
                      author=author, certainty=certainty)


def alternatives(*paths) -> Alternatives:
    return Alternatives(tuple(tuple(_ref(c) for c in p) for p in paths))


def _normalize_item(item) -> SequenceItem:
    if isinstance(item, Single):
        return Single(iri(item.canvas))
    if isinstance(item, Alternatives):
        return Alternatives(tuple(tuple(iri(c) for c in p) for p in item.paths))
    return Single(_ref(item))


def build_sequence(id, label: str, items: Iterable) -> Sequence:
    items = tuple(_normalize_item(i) for i in items)
    if not items:
        raise EmptySequence(f"sequence {id} has no items")
    seen = set()
    for item in items:
        if isinstance(item, Alternatives):
            if len(item.paths) < 2:
                raise EmptySequence("an alternatives item needs at least two paths")
            if any(not p for p in item.paths):
                raise EmptySequence("alternative paths must be non-empty")
        for c in item_canvases(item):
            if c in seen:
                raise DuplicateCanvasInSequence(f"{c} appears twice in sequence {id}")
            seen.add(c)
    return Sequence(iri(id), label, items, frozenset(seen))


def canvas_positions(seq: Sequence) -> dict:
    """canvas -> (item index, path index, position within path)."""
    pos = {}
    for i, item in enumerate(seq.items):
        if isinstance(item, Single):
            pos[item.canvas] = (i, 0, 0)
        else:
            for p, path in enumerate(item.paths):
                for k, c in enumerate(path):
                    pos[c] = (i, p, k)
    return pos


def range_order_violations(seq: Sequence, targets) -> list:
    """Pairs of target indices that appear reversed in some linearization."""
    pos = canvas_positions(seq)
    bad = []
    keys = [pos.get(t.canvas) for t in targets]
    for i in range(len(keys)):
        for j in range(i + 1, len(keys)):
            a, b = keys[i], keys[j]
            if a is None or b is None:
                continue
            if a[0] > b[0] or (a[0] == b[0] and a[1] == b[1] and a[2] > b[2]):
                bad.append((i, j))
    return bad


def build_range(id, label: str, sequence: Sequence, targets: Iterable) -> Range:
    norm = []
    for t in targets:
        if isinstance(t, RangeTarget):
            norm.append(RangeTarget(iri(t.canvas), t.selector))
            continue
        if isinstance(t, tuple):
            canvas, selector = t
        else:
            canvas, selector = t, None
        if isinstance(canvas, Canvas):
            _check_bounds(selector, canvas, "range target")
        norm.append(RangeTarget(_ref(canvas), selector))
    for t in norm:
        if t.canvas not in sequence.aggregates:
            raise RangeTargetNotInSequence(f"{t.canvas} is not in sequence {sequence.id}")
    bad = range_order_violations(sequence, norm)
    if bad:
        i, j = bad[0]
        raise RangeOrderError(f"range {id}: {norm[j].canvas} precedes {norm[i].canvas} in {sequence.id}")
    return Range(iri(id), label, sequence.id, tuple(norm))


def annotation_list(id, kind: ListKind, entries: Iterable) -> AnnotationList:
    kind = ListKind(kind)
    refs = []
    for e in entries:
        if isinstance(e, Annotation) and e.anno_type not in LIST_ENTRY_TYPES[kind]:
            raise KindMismatch(f"{e.id} ({e.anno_type.value}) cannot be listed in a {kind.value}")
        refs.append(_ref(e))
    if len(set(refs)) != len(refs):
        raise DuplicateEntry(f"annotation list {id} repeats an entry")
    return AnnotationList(iri(id), kind, tuple(refs))


def build_manifest(id, label: str, sequences, ranges=(), annotation_lists=(), zones=(),
                   annotations=(), metadata=None, *, canvases=(), resources=(), choices=()) -> Manifest:
    """Assemble and cross-check a manifest.

    Registries (canvases, zones, resources, choices) are stored sorted by
    id; sequences, ranges, lists and annotations keep the given order.
    References that do not resolve are accepted only when their authority
    differs from the manifest's (they are then flagged external).
    """
    id = iri(id)
    sequences = tuple(sequences)
    if not sequences:
        raise NoSequences(f"manifest {id} has no sequences")
    choices = tuple(sorted(choices, key=lambda c: c.id))
    res = {r.id: r for r in resources}
    for ch in choices:
        for opt in ch.options:
            res.setdefault(opt.id, opt)
    m = Manifest(
        id=id,
        label=label,
        sequences=sequences,
        ranges=tuple(ranges),
        annotation_lists=tuple(annotation_lists),
        zones=tuple(sorted(zones, key=lambda z: z.id)),
        annotations=tuple(annotations),
        metadata=_sorted_pairs(metadata),
        canvases=tuple(sorted(canvases, key=lambda c: c.id)),
        resources=tuple(sorted(res.values(), key=lambda r: r.id)),
        choices=choices,
    )
    _cross_check(m)
    return m


def _cross_check(m: Manifest):
    seen = {}
    groups = (m.canvases, m.zones, m.resources, m.choices, m.annotations,
              m.sequences, m.ranges, m.annotation_lists)
    for group in groups:
        for obj in group:
            if obj.id in seen and seen[obj.id] != obj:
                raise DuplicateId(f"id {obj.id} is used by two different objects")
            seen[obj.id] = obj
    canvas_ids = {c.id for c in m.canvases}
    for s in m.sequences:
        for c in s.aggregates:
            if c not in canvas_ids:
                raise DanglingReference(f"sequence {s.id} aggregates unknown canvas {c}")
    seq_ids = {s.id for s in m.sequences}
    for r in m.ranges:
        if r.sequence not in seq_ids:
            raise DanglingReference(f"range {r.id} refers to unknown sequence {r.sequence}")
    for a in m.annotations:
        for ref in (a.target, a.body):
            if ref is not None and ref not in m.index and not m.is_external(ref):
                raise DanglingReference(f"annotation {a.id} refers to unknown {ref}")
        if a.anno_type is AnnoType.PLACE_ZONE and not isinstance(m.get(a.body), Zone):
            raise KindMismatch(f"zone annotation {a.id} has a non-zone body")
    annos = {a.id: a for a in m.annotations}
    for lst in m.annotation_lists:
        for e in lst.entries:
            if e not in annos:
                raise DanglingReference(f"list {lst.id} refers to unknown annotation {e}")
            if annos[e].anno_type not in LIST_ENTRY_TYPES[lst.kind]:
                raise KindMismatch(f"{e} cannot be listed in a {lst.kind.value}")


class ManifestBuilder:
    """Stateful convenience wrapper: registers everything it creates.

    Annotation ids are minted under the manifest's base when not given.
    """

    def __init__(self, id, label: str = ""):
        self.id = iri(id)
        self.label = label
        self.base = self.id.rsplit("/", 1)[0] + "/"
        self.canvases, self.zones, self.resources, self.choices = {}, {}, {}, {}
        self.annotations, self.sequences, self.ranges, self.lists = [], [], [], []
        self.metadata = {}
        self._counter = 0

    def mint(self, stem: str) -> str:
        self._counter += 1
        return f"{self.base}{stem}-{self._counter}"

    def _id(self, value, stem):
        if value is None:
            return self.mint(stem)
        if isinstance(value, str) and not _SCHEME.match(value) and not value.startswith(":"):
            return self.base + value
        return iri(value)

    def canvas(self, id, label, width, height) -> Canvas:
        c = new_canvas(self._id(id, "canvas"), label, width, height)
        self.canvases[c.id] = c
        return c

    def zone(self, id, width, height) -> Zone:
        z = new_zone(self._id(id, "zone"), width, height)
        self.zones[z.id] = z
        return z

    def image(self, id, width=None, height=None, media_type="image/jpeg") -> ContentResource:
        r = image_resource(self._id(id, "image"), width, height, media_type)
        self.resources[r.id] = r
        return r

    def text(self, id, chars=None, media_type="text/plain") -> ContentResource:
        r = text_resource(self._id(id, "text"), chars, media_type)
        self.resources[r.id] = r
        return r

    def choice(self, id, kind, options, metadata=None) -> Choice:
        ch = make_choice(self._id(id, "choice"), kind, options, metadata)
        self.choices[ch.id] = ch
        return ch

    def _add(self, anno: Annotation) -> Annotation:
        self.annotations.append(anno)
        return anno

    def paint(self, target, body, target_selector=None, body_selector=None, *, id=None, **kw):
        return self._add(paint(self._id(id, "anno"), target, body, target_selector, body_selector, **kw))

    def place_zone(self, zone, target, target_selector=None, rotation=0, *, id=None):
        return self._add(place_zone(self._id(id, "anno"), zone, target, target_selector, rotation))

    def comment(self, target, body=None, target_selector=None, body_selector=None, *, id=None, **kw):
        return self._add(comment(self._id(id, "anno"), target, body, target_selector, body_selector, **kw))

    def describe(self, target, body=None, target_selector=None, *, id=None, **kw):
        return self.comment(target, body, target_selector, id=id, describe=True, **kw)

    def sequence(self, id, label, items) -> Sequence:
        s = build_sequence(self._id(id, "sequence"), label, items)
        self.sequences.append(s)
        return s

    def range(self, id, label, sequence, targets) -> Range:
        r = build_range(self._id(id, "range"), label, sequence, targets)
        self.ranges.append(r)
        return r

    def annotation_list(self, id, kind, entries) -> AnnotationList:
        lst = annotation_list(self._id(id, "list"), kind, entries)
        self.lists.append(lst)
        return lst

    def build(self, metadata=None) -> Manifest:
        meta = dict(self.metadata)
        meta.update(metadata or {})
        return build_manifest(
            self.id, self.label, self.sequences, self.ranges, self.lists,
            self.zones.values(), self.annotations, meta,
            canvases=self.canvases.values(), resources=self.resources.values(),
            choices=self.choices.values())
