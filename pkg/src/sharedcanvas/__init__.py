"""Annotated-canvas manifests for digitized manuscripts.

Pages are abstract canvases; images, transcriptions, zones and comments
are annotations painted onto them. Manifests serialize to RDF Turtle,
validate structurally, and flatten into per-canvas render plans.
"""

from .description import ingest, to_description
from .fixtures import FIXTURES, fixture
from .fragments import Polygon, Rect, format_xywh, parse_svg_polygon, parse_xywh
from .model import (
    Alternatives,
    AnnoType,
    Canvas,
    ChoiceKind,
    ListKind,
    Manifest,
    ManifestBuilder,
    Zone,
)
from .rdf import graph_to_model, model_to_graph, parse_turtle, serialize_turtle
from .render import RenderOptions, render_canvas_svg, render_manifest, render_manifest_html
from .resolve import (
    ChoicePolicy,
    PathPolicy,
    Transform,
    compose,
    flatten_canvas,
    linearize_sequence,
    map_point,
    reading_order,
    select_from_choice,
)
from .validate import Diagnostic, validate_graph, validate_manifest

__version__ = "0.1.0"

__all__ = [
    "Alternatives", "AnnoType", "Canvas", "ChoiceKind", "ChoicePolicy", "Diagnostic",
    "FIXTURES", "ListKind", "Manifest", "ManifestBuilder", "PathPolicy", "Polygon", "Rect",
    "RenderOptions", "Transform", "Zone", "compose", "fixture", "flatten_canvas",
    "format_xywh", "graph_to_model", "ingest", "linearize_sequence", "map_point",
    "model_to_graph", "parse_svg_polygon", "parse_turtle", "parse_xywh", "reading_order",
    "render_canvas_svg", "render_manifest", "render_manifest_html", "select_from_choice",
    "serialize_turtle", "to_description", "validate_graph", "validate_manifest",
]
