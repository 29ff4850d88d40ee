"""Static SVG composites and HTML pages built from render plans.

Output layout::

    index.html
    canvas/<n>.html
    svg/<n>.svg

where ``n`` numbers canvases by first appearance across the manifest's
sequences. Image sources are referenced by IRI and never fetched.
"""

from __future__ import annotations

import html
import os
import xml.etree.ElementTree as ET
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import MissingPlan
from .fragments import Polygon, bounding_box, format_svg_points
from .model import Alternatives, Manifest
from .resolve import ChoicePolicy, Layer, PathPolicy, RenderPlan, flatten_canvas, linearize_sequence

SVG_NS = "http://www.w3.org/2000/svg"
XLINK_NS = "http://www.w3.org/1999/xlink"

# baseline sits this far down a text line's height; glyph size is the rest
_ASCENT = Fraction(4, 5)


@dataclass(frozen=True)
class RenderOptions:
    scale: Fraction = Fraction(1)
    include_layers: frozenset = field(default_factory=lambda: frozenset(Layer))
    path_policy: PathPolicy = PathPolicy.FIRST_PATH

    def __post_init__(self):
        object.__setattr__(self, "scale", Fraction(self.scale))
        object.__setattr__(self, "include_layers", frozenset(Layer(x) for x in self.include_layers))
        object.__setattr__(self, "path_policy", PathPolicy(self.path_policy))
        if self.scale <= 0:
            raise ValueError("scale must be positive")
        if not self.include_layers:
            raise ValueError("include_layers must not be empty")


def _num(q) -> str:
    q = Fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{float(q):.4f}".rstrip("0").rstrip(".")


def _frame(p):
    """Unrotated size of the placement and the transform that lays it on its region."""
    box = bounding_box(p.dest_region)
    if p.rotation in (90, 270):
        uw, uh = box.h, box.w
    else:
        uw, uh = box.w, box.h
    pre = {0: (0, 0), 90: (0, -uh), 180: (-uw, -uh), 270: (-uw, 0)}[p.rotation]
    if p.rotation == 0:
        transform = None
    else:
        transform = f"rotate({p.rotation} {box.x} {box.y}) translate({pre[0]} {pre[1]})"
    return box, uw, uh, transform


def _image(parent, p, box, uw, uh):
    attrs = {"preserveAspectRatio": "none"}
    if p.source_region is None:
        el = ET.SubElement(parent, "image", {
            "x": str(box.x), "y": str(box.y), "width": str(uw), "height": str(uh),
            **attrs, "xlink:href": p.source or ""})
        return el
    src = bounding_box(p.source_region)
    full_w, full_h = p.source_size or (src.right, src.bottom)
    crop = ET.SubElement(parent, "svg", {
        "x": str(box.x), "y": str(box.y), "width": str(uw), "height": str(uh),
        "viewBox": f"{src.x} {src.y} {src.w} {src.h}", **attrs})
    return ET.SubElement(crop, "image", {
        "x": "0", "y": "0", "width": str(full_w), "height": str(full_h),
        **attrs, "xlink:href": p.source or ""})


def _text(parent, p, box, uw, uh):
    el = ET.SubElement(parent, "text", {
        "x": str(box.x),
        "y": _num(box.y + uh * _ASCENT),
        "font-size": _num(uh * _ASCENT),
        "textLength": str(uw),
        "lengthAdjust": "spacingAndGlyphs",
    })
    if p.source:
        el.set("data-source", p.source)
    el.text = p.chars or ""
    return el


def _marker(parent, p, box):
    if isinstance(p.dest_region, Polygon):
        el = ET.SubElement(parent, "polygon", {"class": "marker", "points": format_svg_points(p.dest_region)})
    else:
        el = ET.SubElement(parent, "rect", {
            "class": "marker", "x": str(box.x), "y": str(box.y),
            "width": str(box.w), "height": str(box.h)})
    title = ET.SubElement(el, "title")
    title.text = p.chars or p.source or p.origin_annotation
    return el


def render_canvas_svg(plan: RenderPlan, opts: RenderOptions | None = None) -> str:
    """One SVG document for ``plan``, one ``<g class="placement">`` per placement in paint order."""
    opts = opts or RenderOptions()
    c = plan.canvas
    root = ET.Element("svg", {
        "xmlns": SVG_NS,
        "xmlns:xlink": XLINK_NS,
        "version": "1.1",
        "width": _num(c.width * opts.scale),
        "height": _num(c.height * opts.scale),
        "viewBox": f"0 0 {c.width} {c.height}",
    })
    ET.SubElement(root, "title").text = c.label or c.id
    placements = [p for p in plan.placements if p.layer in opts.include_layers]
    clipped = [i for i, p in enumerate(placements)
               if isinstance(p.dest_region, Polygon) and p.layer is not Layer.COMMENTARY]
    if clipped:
        defs = ET.SubElement(root, "defs")
        for i in clipped:
            clip = ET.SubElement(defs, "clipPath", {"id": f"clip-{i}"})
            ET.SubElement(clip, "polygon", {"points": format_svg_points(placements[i].dest_region)})
    for i, p in enumerate(placements):
        g = ET.SubElement(root, "g", {
            "class": f"placement {p.layer.name.lower()}",
            "data-annotation": p.origin_annotation,
        })
        if p.via_zones:
            g.set("data-zones", " ".join(p.via_zones))
        if i in clipped:
            g.set("clip-path", f"url(#clip-{i})")
        box, uw, uh, transform = _frame(p)
        if p.layer is Layer.COMMENTARY:
            _marker(g, p, box)
            continue
        inner = g
        if transform:
            inner = ET.SubElement(g, "g", {"transform": transform})
        if p.layer is Layer.IMAGE:
            _image(inner, p, box, uw, uh)
        else:
            _text(inner, p, box, uw, uh)
    # plain tag names with the namespaces declared by hand keep the output prefix-free
    text = ET.tostring(root, encoding="unicode")
    return '<?xml version="1.0" encoding="UTF-8"?>\n' + text + "\n"


# --- HTML ----------------------------------------------------------------------

def canvas_numbers(manifest: Manifest) -> dict:
    """canvas id -> page number, by first appearance over all sequences."""
    order = []
    for s in manifest.sequences:
        for c in s.canvas_order():
            if c not in order:
                order.append(c)
    return {c: n for n, c in enumerate(order, 1)}


def _home_linearization(seq, canvas, policy):
    """Linearization of ``seq`` that takes whichever path holds ``canvas``."""
    overrides = {}
    for i, item in enumerate(seq.items):
        if isinstance(item, Alternatives):
            for k, path in enumerate(item.paths):
                if canvas in path:
                    overrides[i] = k
    return linearize_sequence(seq, policy, overrides)


def _page(title: str, body: list) -> str:
    return "\n".join([
        "<!DOCTYPE html>",
        "<html>",
        "<head>",
        '<meta charset="utf-8">',
        f"<title>{html.escape(title)}</title>",
        "</head>",
        "<body>",
        *body,
        "</body>",
        "</html>",
        "",
    ])


def _label(manifest, cid) -> str:
    c = manifest.get(cid)
    return (getattr(c, "label", "") or cid)


def render_manifest_html(manifest: Manifest, plans: dict, opts: RenderOptions | None = None) -> dict:
    """Every output file as ``{relative path: text}``.

    ``plans`` maps canvas id to RenderPlan and must cover the default
    sequence's linearization under ``opts.path_policy``.
    """
    opts = opts or RenderOptions()
    numbers = canvas_numbers(manifest)
    default = linearize_sequence(manifest.default_sequence, opts.path_policy)
    for cid in default:
        if cid not in plans:
            raise MissingPlan(f"no render plan for {cid}")

    def href(cid, prefix):
        return f"{prefix}{numbers[cid]}.html"

    def link(cid, prefix, text=None):
        if cid not in plans:
            return html.escape(text or _label(manifest, cid))
        return f'<a href="{href(cid, prefix)}">{html.escape(text or _label(manifest, cid))}</a>'

    files = {}
    title = manifest.label or manifest.id

    body = [f"<h1>{html.escape(title)}</h1>"]
    if manifest.metadata:
        body.append("<dl>")
        for k, v in manifest.metadata:
            body.append(f"<dt>{html.escape(k)}</dt><dd>{html.escape(v)}</dd>")
        body.append("</dl>")
    for seq in manifest.sequences:
        body.append(f"<h2>{html.escape(seq.label or seq.id)}</h2>")
        body.append("<ol>")
        for cid in linearize_sequence(seq, opts.path_policy):
            body.append(f"<li>{link(cid, 'canvas/')}</li>")
        body.append("</ol>")
        for item in seq.items:
            if isinstance(item, Alternatives):
                body.append('<p class="alternatives">Alternative paths:</p>')
                body.append("<ul>")
                for path in item.paths:
                    body.append("<li>" + " / ".join(link(c, "canvas/") for c in path) + "</li>")
                body.append("</ul>")
    if manifest.ranges:
        body.append("<h2>Contents</h2>")
        body.append("<ul>")
        for r in manifest.ranges:
            first = r.targets[0].canvas if r.targets else None
            text = r.label or r.id
            if first is not None:
                body.append(f"<li>{link(first, 'canvas/', text)}</li>")
            else:
                body.append(f"<li>{html.escape(text)}</li>")
        body.append("</ul>")
    files["index.html"] = _page(title, body)

    for cid, plan in plans.items():
        if cid not in numbers:
            continue
        n = numbers[cid]
        files[f"svg/{n}.svg"] = render_canvas_svg(plan, opts)
        label = _label(manifest, cid)
        body = [
            f"<h1>{html.escape(label)}</h1>",
            '<p><a href="../index.html">Index</a></p>',
            f'<p><img src="../svg/{n}.svg" alt="{html.escape(label, quote=True)}"></p>',
        ]
        for seq in manifest.sequences:
            if cid not in seq.aggregates:
                continue
            order = _home_linearization(seq, cid, opts.path_policy)
            k = order.index(cid)
            prev_link = link(order[k - 1], "", "previous") if k > 0 else "previous"
            next_link = link(order[k + 1], "", "next") if k + 1 < len(order) else "next"
            body.append(f'<p class="nav">{html.escape(seq.label or seq.id)}: {prev_link} | {next_link}</p>')
            for item in seq.items:
                if not isinstance(item, Alternatives):
                    continue
                mine = [path for path in item.paths if cid in path]
                if not mine:
                    continue
                others = [path for path in item.paths if cid not in path and path[0] in plans]
                for path in others:
                    text = " / ".join(_label(manifest, c) for c in path)
                    body.append(f'<p class="alternative">Alternative path: {link(path[0], "", text)}</p>')
        texts = [p for p in plan.placements if p.layer is Layer.TEXT]
        if plan.reading_order:
            by_id = {p.origin_annotation: p for p in texts}
            body.append("<h2>Text</h2>")
            body.append("<ol>")
            for aid in plan.reading_order:
                p = by_id.get(aid)
                body.append(f"<li>{html.escape((p.chars if p else None) or aid)}</li>")
            body.append("</ol>")
        notes = [p for p in plan.placements if p.layer is Layer.COMMENTARY]
        if notes:
            body.append("<h2>Commentary</h2>")
            body.append("<ul>")
            for p in notes:
                body.append(f"<li>{html.escape(p.chars or p.source or p.origin_annotation)}</li>")
            body.append("</ul>")
        files[f"canvas/{n}.html"] = _page(label, body)
    return dict(sorted(files.items()))


def plans_for(manifest: Manifest, policy: ChoicePolicy | None = None) -> dict:
    """A plan for every canvas reached by any sequence."""
    plans = {}
    for cid in canvas_numbers(manifest):
        if manifest.get(cid) is not None:
            plans[cid] = flatten_canvas(manifest, cid, policy)
    return plans


def render_manifest(manifest: Manifest, out_dir, opts: RenderOptions | None = None,
                    policy: ChoicePolicy | None = None) -> list:
    """Write the site under ``out_dir``; returns the relative paths written."""
    files = render_manifest_html(manifest, plans_for(manifest, policy), opts)
    for rel, text in files.items():
        path = os.path.join(out_dir, *rel.split("/"))
        os.makedirs(os.path.dirname(path), exist_ok=True)
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    return list(files)
