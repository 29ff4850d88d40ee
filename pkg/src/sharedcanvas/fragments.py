"""Region selectors: Media Fragment ``xywh`` rectangles and SVG polygons.

All geometry is integer-exact. Containment is boundary-inclusive.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from .errors import (
    DegeneratePolygon,
    MalformedFragment,
    MalformedPoints,
    UnsupportedUnit,
    ZeroExtent,
)

__all__ = [
    "Rect",
    "Polygon",
    "Selector",
    "FragmentIri",
    "parse_xywh",
    "format_xywh",
    "split_fragment_iri",
    "join_fragment_iri",
    "parse_svg_polygon",
    "format_svg_points",
    "svg_constraint",
    "parse_svg_constraint",
    "bounding_box",
    "contains_point",
    "within",
]


@dataclass(frozen=True)
class Rect:
    x: int
    y: int
    w: int
    h: int

    def __post_init__(self):
        for name in ("x", "y", "w", "h"):
            v = getattr(self, name)
            if not isinstance(v, int) or isinstance(v, bool):
                raise MalformedFragment(f"{name} must be an integer, got {v!r}")
        if self.x < 0 or self.y < 0:
            raise MalformedFragment(f"negative origin in {self!r}")
        if self.w <= 0 or self.h <= 0:
            raise ZeroExtent(f"rectangle needs positive extent, got w={self.w} h={self.h}")

    @property
    def right(self) -> int:
        return self.x + self.w

    @property
    def bottom(self) -> int:
        return self.y + self.h

    def corners(self):
        return ((self.x, self.y), (self.right, self.y),
                (self.right, self.bottom), (self.x, self.bottom))


@dataclass(frozen=True)
class Polygon:
    """Implicitly closed polygon; vertices kept in declaration order."""

    vertices: tuple

    def __post_init__(self):
        verts = tuple((x, y) for x, y in self.vertices)
        if not all(isinstance(c, int) and not isinstance(c, bool) for pt in verts for c in pt):
            raise MalformedPoints(f"polygon vertices must be integers: {verts!r}")
        object.__setattr__(self, "vertices", verts)
        if any(x < 0 or y < 0 for x, y in verts):
            raise MalformedPoints(f"negative coordinate in {verts!r}")
        if len(verts) < 3:
            raise DegeneratePolygon(f"polygon needs at least 3 vertices, got {len(verts)}")
        if self.twice_area() == 0:
            raise DegeneratePolygon("polygon has zero area")

    def twice_area(self) -> int:
        """Absolute doubled shoelace area (an integer)."""
        v = self.vertices
        s = 0
        for i in range(len(v)):
            x0, y0 = v[i]
            x1, y1 = v[(i + 1) % len(v)]
            s += x0 * y1 - x1 * y0
        return abs(s)

    @property
    def area(self) -> Fraction:
        return Fraction(self.twice_area(), 2)


Selector = Union[Rect, Polygon]


@dataclass(frozen=True)
class FragmentIri:
    base: str
    region: Rect | None = None

    def __str__(self):
        return join_fragment_iri(self.base, self.region)


_XYWH = re.compile(r"xywh=(?:(?P<unit>[A-Za-z]+):)?(?P<body>.*)\Z", re.S)


def parse_xywh(fragment: str) -> Rect:
    """Parse ``xywh=x,y,w,h`` (a leading ``#`` is tolerated)."""
    if fragment.startswith("#"):
        fragment = fragment[1:]
    m = _XYWH.match(fragment)
    if m is None:
        raise MalformedFragment(f"not an xywh fragment: {fragment!r}")
    if m.group("unit") is not None:
        raise UnsupportedUnit(f"unit prefix {m.group('unit')!r} is not supported")
    parts = m.group("body").split(",")
    if len(parts) != 4:
        raise MalformedFragment(f"xywh needs 4 values, got {len(parts)}: {fragment!r}")
    if not all(re.fullmatch(r"[0-9]+", p) for p in parts):
        raise MalformedFragment(f"xywh values must be non-negative integers: {fragment!r}")
    x, y, w, h = (int(p) for p in parts)
    if w == 0 or h == 0:
        raise ZeroExtent(f"zero extent in {fragment!r}")
    return Rect(x, y, w, h)


def format_xywh(rect: Rect) -> str:
    return f"xywh={rect.x},{rect.y},{rect.w},{rect.h}"


def split_fragment_iri(iri: str) -> FragmentIri:
    if iri.startswith("<") and iri.endswith(">"):
        iri = iri[1:-1]
    if iri.count("#") > 1:
        raise MalformedFragment(f"more than one '#' in {iri!r}")
    if "#" not in iri:
        return FragmentIri(iri, None)
    base, frag = iri.split("#", 1)
    return FragmentIri(base, parse_xywh(frag))


def join_fragment_iri(base: str, region: Rect | None) -> str:
    if region is None:
        return base
    return f"{base}#{format_xywh(region)}"


_NUM = r"[+-]?[0-9]+"
_COMMA_WSP = r"(?:\s+,?\s*|,\s*)"
_POINTS = re.compile(rf"\s*{_NUM}(?:{_COMMA_WSP}{_NUM})*\s*\Z")


def parse_svg_polygon(points_attr: str) -> Polygon:
    """Parse an SVG ``points`` attribute into a :class:`Polygon`.

    Coordinates are separated by whitespace and/or a single comma, so
    ``"0,0 10,0 10,10"`` and ``"0 0, 10 0, 10 10"`` are equivalent.
    """
    if not _POINTS.match(points_attr):
        raise MalformedPoints(f"malformed points list: {points_attr!r}")
    nums = [int(t) for t in re.findall(_NUM, points_attr)]
    if len(nums) % 2:
        raise MalformedPoints(f"odd number of coordinates in {points_attr!r}")
    pts = tuple(zip(nums[0::2], nums[1::2]))
    return Polygon(pts)


def format_svg_points(poly: Polygon) -> str:
    return " ".join(f"{x},{y}" for x, y in poly.vertices)


def svg_constraint(selector: Selector) -> str:
    """Standalone SVG element string carried by an RDF constraint node."""
    if isinstance(selector, Polygon):
        return f'<polygon points="{format_svg_points(selector)}"/>'
    r = selector
    return f'<rect x="{r.x}" y="{r.y}" width="{r.w}" height="{r.h}"/>'


_ELEMENT = re.compile(r"\s*<\s*(polygon|rect)\b(?P<attrs>[^>]*?)/?>\s*(?:</\s*\1\s*>)?\s*\Z", re.S)
_ATTR = re.compile(r"""([A-Za-z_:][\w:.-]*)\s*=\s*(?:"([^"]*)"|'([^']*)')""")


def parse_svg_constraint(text: str) -> Selector:
    m = _ELEMENT.match(text)
    if m is None:
        raise MalformedPoints(f"unsupported SVG constraint: {text!r}")
    attrs = {k: a if a or not b else b for k, a, b in _ATTR.findall(m.group("attrs"))}
    if m.group(1) == "polygon":
        if "points" not in attrs:
            raise MalformedPoints("polygon element without points attribute")
        return parse_svg_polygon(attrs["points"])
    try:
        return Rect(*(int(attrs[k]) for k in ("x", "y", "width", "height")))
    except (KeyError, ValueError) as exc:
        raise MalformedPoints(f"bad rect constraint: {text!r}") from exc


def bounding_box(selector: Selector) -> Rect:
    if isinstance(selector, Rect):
        return selector
    xs = [x for x, _ in selector.vertices]
    ys = [y for _, y in selector.vertices]
    return Rect(min(xs), min(ys), max(xs) - min(xs), max(ys) - min(ys))


def within(selector: Selector, width, height) -> bool:
    """True iff the selector's bounding box lies inside a ``width`` x ``height`` space."""
    box = bounding_box(selector)
    return box.right <= width and box.bottom <= height


def _on_segment(p, a, b) -> bool:
    (px, py), (ax, ay), (bx, by) = p, a, b
    cross = (bx - ax) * (py - ay) - (by - ay) * (px - ax)
    if cross != 0:
        return False
    return min(ax, bx) <= px <= max(ax, bx) and min(ay, by) <= py <= max(ay, by)


def contains_point(selector: Selector, p) -> bool:
    """Boundary-inclusive point test; even-odd rule for polygons.

    Works for ints and ``fractions.Fraction`` coordinates alike.
    """
    px, py = p
    if isinstance(selector, Rect):
        return selector.x <= px <= selector.right and selector.y <= py <= selector.bottom
    v = selector.vertices
    n = len(v)
    inside = False
    for i in range(n):
        a, b = v[i], v[(i + 1) % n]
        if _on_segment((px, py), a, b):
            return True
        (ax, ay), (bx, by) = a, b
        if (ay > py) != (by > py):
            # x coordinate of the edge at height py, compared without division
            lhs = (px - ax) * (by - ay)
            rhs = (bx - ax) * (py - ay)
            if (by - ay) > 0:
                crosses = lhs < rhs
            else:
                crosses = lhs > rhs
            if crosses:
                inside = not inside
    return inside
