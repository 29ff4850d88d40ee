"""Flatten a manifest into per-canvas render plans.

Zone placements become exact rational :class:`Transform` objects,
choices are resolved by a :class:`ChoicePolicy`, and sequences with
alternative paths are linearized by a :class:`PathPolicy`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum, IntEnum
from fractions import Fraction
from math import floor

from .errors import TransformOverflow, ZoneChainTooDeep
from .fragments import Polygon, Rect, bounding_box, format_svg_points, format_xywh
from .model import (
    Alternatives,
    AnnoType,
    Canvas,
    Choice,
    ContentResource,
    ListKind,
    Manifest,
    Sequence,
    Single,
    Zone,
)

MAX_ZONE_DEPTH = 8


# --- transforms ----------------------------------------------------------------

def _rotate(rotation, x, y):
    """Quarter turn clockwise in y-down coordinates."""
    if rotation == 0:
        return x, y
    if rotation == 90:
        return -y, x
    if rotation == 180:
        return -x, -y
    if rotation == 270:
        return y, -x
    raise ValueError(f"rotation must be a quarter turn, got {rotation!r}")


@dataclass(frozen=True)
class Transform:
    """``p -> rotate(scale(p)) + translate``, all exact.

    Scales are positive rationals; translations are rationals (integers for
    a single placement, but composition can make them fractional).
    """

    scale_x: Fraction = Fraction(1)
    scale_y: Fraction = Fraction(1)
    translate_x: Fraction = Fraction(0)
    translate_y: Fraction = Fraction(0)
    rotation: int = 0

    def __post_init__(self):
        for name in ("scale_x", "scale_y", "translate_x", "translate_y"):
            object.__setattr__(self, name, Fraction(getattr(self, name)))
        if self.scale_x <= 0 or self.scale_y <= 0:
            raise ValueError("scales must be positive")
        if self.rotation not in (0, 90, 180, 270):
            raise ValueError(f"rotation must be a quarter turn, got {self.rotation!r}")

    @classmethod
    def identity(cls) -> "Transform":
        return cls()

    @classmethod
    def translate(cls, tx, ty) -> "Transform":
        return cls(translate_x=tx, translate_y=ty)

    @classmethod
    def scale(cls, sx, sy) -> "Transform":
        return cls(scale_x=sx, scale_y=sy)

    @classmethod
    def rotate(cls, rotation) -> "Transform":
        return cls(rotation=rotation)

    def __call__(self, p):
        return map_point(self, p)


def map_point(t: Transform, p) -> tuple:
    """Scale, rotate a quarter turn, translate. Returns exact Fractions."""
    x = t.scale_x * p[0]
    y = t.scale_y * p[1]
    x, y = _rotate(t.rotation, x, y)
    return x + t.translate_x, y + t.translate_y


def compose(outer: Transform, inner: Transform) -> Transform:
    """Transform equal to applying ``inner`` first, then ``outer``."""
    # outer's scale acts on inner's rotated frame; a quarter turn swaps axes
    if inner.rotation in (90, 270):
        osx, osy = outer.scale_y, outer.scale_x
    else:
        osx, osy = outer.scale_x, outer.scale_y
    tx, ty = map_point(outer, (inner.translate_x, inner.translate_y))
    return Transform(osx * inner.scale_x, osy * inner.scale_y, tx, ty,
                     (outer.rotation + inner.rotation) % 360)


def round_half_up(q) -> int:
    return floor(Fraction(q) + Fraction(1, 2))


def placement_transform(width, height, dest: Rect, rotation: int) -> Transform:
    """Map a ``width`` x ``height`` space onto ``dest``, turned ``rotation`` degrees clockwise.

    For quarter and three-quarter turns the space's width runs along the
    destination's height.
    """
    if rotation in (90, 270):
        sx, sy = Fraction(dest.h, width), Fraction(dest.w, height)
    else:
        sx, sy = Fraction(dest.w, width), Fraction(dest.h, height)
    ox, oy = {0: (0, 0), 90: (dest.w, 0), 180: (dest.w, dest.h), 270: (0, dest.h)}[rotation]
    return Transform(sx, sy, dest.x + ox, dest.y + oy, rotation)


def map_selector_exact(t: Transform, selector) -> tuple:
    """Exact image of a selector's vertices (corners for a Rect)."""
    pts = selector.corners() if isinstance(selector, Rect) else selector.vertices
    return tuple(map_point(t, p) for p in pts)


def map_selector(t: Transform, selector):
    """Image of a selector with coordinates rounded half-up.

    Rects stay Rects under quarter turns; polygons keep their vertex order.
    """
    pts = [(round_half_up(x), round_half_up(y)) for x, y in map_selector_exact(t, selector)]
    if isinstance(selector, Rect):
        xs = [x for x, _ in pts]
        ys = [y for _, y in pts]
        if min(xs) < 0 or min(ys) < 0:
            raise TransformOverflow(f"mapped region has negative coordinates: {pts}")
        return Rect(min(xs), min(ys), max(xs) - min(xs), max(ys) - min(ys))
    if any(x < 0 or y < 0 for x, y in pts):
        raise TransformOverflow(f"mapped region has negative coordinates: {pts}")
    return Polygon(tuple(pts))


# --- sequences -----------------------------------------------------------------

class PathPolicy(str, Enum):
    FIRST_PATH = "first"
    PREFER_SINGLE_PAGE = "single"
    PREFER_COMBINED = "combined"


def choose_path(item: Alternatives, policy: PathPolicy) -> int:
    policy = PathPolicy(policy)
    if policy is PathPolicy.FIRST_PATH:
        return 0
    lengths = [len(p) for p in item.paths]
    target = min(lengths) if policy is PathPolicy.PREFER_COMBINED else max(lengths)
    return lengths.index(target)


def linearize_sequence(sequence: Sequence, policy: PathPolicy = PathPolicy.FIRST_PATH,
                       overrides=None) -> list:
    """One ordered canvas list through ``sequence``.

    ``overrides`` maps an item index to the path index to take there,
    bypassing the policy for that item.
    """
    overrides = overrides or {}
    out = []
    for i, item in enumerate(sequence.items):
        if isinstance(item, Single):
            out.append(item.canvas)
        else:
            k = overrides.get(i, choose_path(item, policy))
            out.extend(item.paths[k])
    return out


# --- choices -------------------------------------------------------------------

@dataclass(frozen=True)
class ChoicePolicy:
    viewport: tuple | None = None
    prefer: tuple = ()

    def __post_init__(self):
        prefer = self.prefer.items() if isinstance(self.prefer, dict) else self.prefer
        object.__setattr__(self, "prefer", tuple((str(k), str(v)) for k, v in prefer))


def select_from_choice(choice: Choice, policy: ChoicePolicy | None = None) -> ContentResource:
    """Pick one option.

    Options matching every ``prefer`` pair are candidates (all options if
    none match). With a viewport, the smallest candidate covering it in both
    axes wins, else the largest; otherwise the first candidate.
    """
    options = list(choice.options)
    if policy is None:
        return options[0]
    indexed = list(enumerate(options))
    if policy.prefer:
        matching = [(i, o) for i, o in indexed
                    if all(choice.metadata_for(i).get(k) == v for k, v in policy.prefer)]
        if matching:
            indexed = matching
    if policy.viewport is None:
        return indexed[0][1]
    vw, vh = policy.viewport
    sized = [(i, o) for i, o in indexed if o.has_dims]
    if not sized:
        return indexed[0][1]
    covering = [(i, o) for i, o in sized if o.width >= vw and o.height >= vh]
    if covering:
        return min(covering, key=lambda io: (io[1].width * io[1].height, io[0]))[1]
    return max(sized, key=lambda io: (io[1].width * io[1].height, -io[0]))[1]


# --- plans ---------------------------------------------------------------------

class Layer(IntEnum):
    IMAGE = 0
    TEXT = 1
    COMMENTARY = 2


_LAYERS = {
    AnnoType.PAINT_IMAGE: Layer.IMAGE,
    AnnoType.PAINT_TEXT: Layer.TEXT,
    AnnoType.COMMENT: Layer.COMMENTARY,
    AnnoType.DESCRIBE: Layer.COMMENTARY,
}


@dataclass(frozen=True)
class Placement:
    source: str | None
    source_region: object
    dest_region: object
    rotation: int
    layer: Layer
    via_zones: tuple
    origin_annotation: str
    chars: str | None = None
    source_size: tuple | None = None
    transform: Transform = field(default_factory=Transform, compare=False)

    def line(self) -> str:
        return "\t".join([
            self.layer.name.capitalize(),
            self.source or "-",
            _region_text(self.source_region),
            _region_text(self.dest_region),
            str(self.rotation),
            ">".join(self.via_zones) or "-",
            self.origin_annotation,
        ])


def _region_text(region) -> str:
    if region is None:
        return "-"
    if isinstance(region, Rect):
        return format_xywh(region)
    return "polygon=" + format_svg_points(region)


@dataclass(frozen=True)
class RenderPlan:
    canvas: Canvas
    placements: tuple
    reading_order: tuple
    warnings: tuple = ()

    def lines(self) -> list:
        out = [f"canvas\t{self.canvas.id}\t{self.canvas.width}x{self.canvas.height}"]
        out += [p.line() for p in self.placements]
        out.append("reading-order\t" + (" ".join(self.reading_order) or "-"))
        out += [f"warning\t{w}" for w in self.warnings]
        return out

    def text(self) -> str:
        return "\n".join(self.lines()) + "\n"


@dataclass(frozen=True)
class _Frame:
    target: str
    transform: Transform
    chain: tuple
    width: int
    height: int


def zone_frames(manifest: Manifest, canvas: Canvas) -> list:
    """The canvas plus every zone placed on it (directly or via other zones).

    Each frame carries the transform from its own coordinates into canvas
    coordinates.
    """
    frames = [_Frame(canvas.id, Transform(), (), canvas.width, canvas.height)]
    placements = [a for a in manifest.annotations if a.anno_type is AnnoType.PLACE_ZONE]
    k = 0
    while k < len(frames):
        frame = frames[k]
        k += 1
        for a in placements:
            if a.target != frame.target:
                continue
            zone = manifest.get(a.body)
            if not isinstance(zone, Zone):
                continue
            chain = frame.chain + (zone.id,)
            if len(chain) > MAX_ZONE_DEPTH:
                raise ZoneChainTooDeep(f"zone chain deeper than {MAX_ZONE_DEPTH}: {' > '.join(chain)}")
            dest = bounding_box(a.target_selector) if a.target_selector is not None \
                else Rect(0, 0, frame.width, frame.height)
            t = compose(frame.transform, placement_transform(zone.width, zone.height, dest, a.rotation))
            frames.append(_Frame(zone.id, t, chain, zone.width, zone.height))
    return frames


def _full(width, height):
    return Rect(0, 0, width, height)


def flatten_canvas(manifest: Manifest, canvas, policy: ChoicePolicy | None = None) -> RenderPlan:
    """Paint-ordered placements of everything that lands on ``canvas``."""
    if isinstance(canvas, str):
        canvas = manifest.canvas(canvas)
    order = {a.id: i for i, a in enumerate(manifest.annotations)}
    frames = zone_frames(manifest, canvas)
    entries = []
    painted = {}  # resource or annotation id -> placement that shows it

    for f_index, frame in enumerate(frames):
        for a in manifest.annotations:
            if a.target != frame.target or a.anno_type is AnnoType.PLACE_ZONE:
                continue
            source, chars = a.body, a.chars
            selected = None
            body = manifest.get(a.body) if a.body is not None else None
            if isinstance(body, Choice):
                selected = select_from_choice(body, policy)
                source = selected.id
            elif isinstance(body, ContentResource):
                selected = body
            if selected is not None and selected.chars is not None and chars is None:
                chars = selected.chars
            region = a.target_selector or _full(frame.width, frame.height)
            p = Placement(
                source=source,
                source_region=a.body_selector,
                dest_region=map_selector(frame.transform, region),
                rotation=frame.transform.rotation,
                layer=_LAYERS[a.anno_type],
                via_zones=frame.chain,
                origin_annotation=a.id,
                chars=chars,
                source_size=(selected.width, selected.height) if selected is not None and selected.has_dims else None,
                transform=frame.transform,
            )
            entries.append(((p.layer, order[a.id], f_index), p))
            painted.setdefault(a.id, p)
            if selected is not None:
                painted.setdefault(selected.id, p)

    # commentary attached to a specific resource or annotation shows only with it
    for a in manifest.annotations:
        if a.anno_type not in (AnnoType.COMMENT, AnnoType.DESCRIBE):
            continue
        host = painted.get(a.target)
        if host is None or any(p.origin_annotation == a.id for _, p in entries):
            continue
        p = Placement(
            source=a.body, source_region=a.body_selector, dest_region=host.dest_region,
            rotation=host.rotation, layer=Layer.COMMENTARY, via_zones=host.via_zones,
            origin_annotation=a.id, chars=a.chars, transform=host.transform)
        entries.append(((p.layer, order[a.id], len(frames)), p))

    entries.sort(key=lambda e: e[0])
    placements = tuple(p for _, p in entries)
    for p in placements:
        box = bounding_box(p.dest_region)
        if box.right > canvas.width or box.bottom > canvas.height:
            raise TransformOverflow(
                f"{p.origin_annotation} maps to {_region_text(p.dest_region)} outside "
                f"{canvas.id} ({canvas.width}x{canvas.height})")
    ro, warnings = _reading_order(manifest, canvas, placements)
    return RenderPlan(canvas, placements, tuple(ro), tuple(warnings))


def _text_annotations_on(manifest: Manifest, canvas: Canvas, placements=None) -> list:
    if placements is None:
        placements = flatten_canvas(manifest, canvas).placements
    seen = []
    for p in placements:
        if p.layer is Layer.TEXT and p.origin_annotation not in seen:
            seen.append(p.origin_annotation)
    order = {a.id: i for i, a in enumerate(manifest.annotations)}
    return sorted(seen, key=order.__getitem__)


def _reading_order(manifest: Manifest, canvas: Canvas, placements):
    texts = _text_annotations_on(manifest, canvas, placements)
    if not texts:
        return [], []
    wanted = set(texts)
    for lst in manifest.annotation_lists:
        if lst.kind is ListKind.TEXT_ORDER and wanted <= set(lst.entries):
            return [e for e in lst.entries if e in wanted], []
    return texts, [f"V7 no TextOrder list covers the text on {canvas.id}; using declaration order"]


def reading_order(manifest: Manifest, canvas) -> list:
    """Text annotation ids on ``canvas`` in reading order.

    The first TextOrder list containing all of the canvas's text is
    authoritative; otherwise declaration order is used.
    """
    return list(flatten_canvas(manifest, canvas).reading_order)


def text_annotations_on(manifest: Manifest, canvas) -> list:
    if isinstance(canvas, str):
        canvas = manifest.canvas(canvas)
    return _text_annotations_on(manifest, canvas)


def image_annotations_on(manifest: Manifest, canvas) -> list:
    if isinstance(canvas, str):
        canvas = manifest.canvas(canvas)
    frames = {f.target for f in zone_frames(manifest, canvas)}
    return [a.id for a in manifest.annotations
            if a.anno_type is AnnoType.PAINT_IMAGE and a.target in frames]
