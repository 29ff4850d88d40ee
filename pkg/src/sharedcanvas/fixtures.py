"""The five reference manuscripts, built programmatically.

Geometry is invented (the sources describe structure, not sizes) but fixed
here, and tests derive every coordinate from these objects rather than
hard-coding them. Each fixture validates with no errors; ``parker`` keeps
two imageless canvases on purpose.
"""

from __future__ import annotations

import json
import os

from .fragments import Polygon, Rect
from .model import ChoiceKind, ListKind, ManifestBuilder, alternatives

BASE = "http://example.org/"


def _poly(*pts) -> Polygon:
    return Polygon(tuple(pts))


def fragments():
    """Two fragments bound on one page, and a disputed second placement."""
    b = ManifestBuilder(BASE + "fragments/manifest", "Collected fragments")
    page = b.canvas("p31", "p. 31", 1000, 1400)
    lost = b.canvas("orig-b", "Reconstructed leaf (fragment B)", 1000, 1400)
    img_a = b.image("img/frag-a.jpg", 1200, 900)
    img_b = b.image("img/frag-b.jpg", 900, 1200)

    b.paint(page, img_a,
            target_selector=_poly((100, 80), (900, 80), (880, 600), (120, 640)),
            body_selector=_poly((150, 100), (1100, 100), (1080, 760), (170, 800)),
            id="anno/frag-a", author="Cataloguer", certainty="high")
    b.paint(page, img_b,
            target_selector=_poly((200, 760), (800, 740), (820, 1300), (180, 1320)),
            body_selector=_poly((100, 120), (800, 100), (820, 1100), (80, 1120)),
            id="anno/frag-b", author="Cataloguer", certainty="high")
    b.describe(page, "Area between the fragments: no surviving parchment.",
               target_selector=Rect(100, 640, 800, 100), id="anno/gap")
    # the same fragment placed where another scholar believes it belongs
    b.paint(lost, img_b,
            target_selector=_poly((100, 100), (700, 90), (710, 650), (90, 660)),
            body_selector=_poly((100, 120), (800, 100), (820, 1100), (80, 1120)),
            id="anno/frag-b-alt", author="Second reader", certainty="low")

    b.sequence("sequence/bound", "As bound", [page, lost])
    return b.build({"shelfmark": "Cod. Sang. 1394"})


def y112():
    """A spread that is both one image and two pages."""
    b = ManifestBuilder(BASE + "y112/manifest", "Y 112")
    f3r = b.canvas("f3r", "f. 3r", 800, 1200)
    spread = b.canvas("f3v-f4r", "ff. 3v-4r", 1600, 1200)
    f3v = b.canvas("f3v", "f. 3v", 800, 1200)
    f4r = b.canvas("f4r", "f. 4r", 800, 1200)
    f4v = b.canvas("f4v", "f. 4v", 800, 1200)

    left = b.zone("zone/left", 400, 600)
    right = b.zone("zone/right", 400, 600)
    b.place_zone(left, spread, Rect(0, 0, 800, 1200), id="anno/left-on-spread")
    b.place_zone(right, spread, Rect(800, 0, 800, 1200), id="anno/right-on-spread")
    b.place_zone(left, f3v, Rect(0, 0, 800, 1200), id="anno/left-on-f3v")
    b.place_zone(right, f4r, Rect(0, 0, 800, 1200), id="anno/right-on-f4r")

    hi = b.image("img/spread-hi.jpg", 3200, 2400)
    lo = b.image("img/spread-lo.jpg", 800, 600)
    shots = b.choice("img/spread", ChoiceKind.IMAGE, [hi, lo],
                     [{"resolution": "high"}, {"resolution": "low"}])
    b.paint(f3r, b.image("img/f3r.jpg", 1600, 2400), id="anno/img-f3r")
    b.paint(spread, shots, id="anno/img-spread")
    b.paint(f3v, hi, body_selector=Rect(0, 0, 1600, 2400), id="anno/img-f3v")
    b.paint(f4r, hi, body_selector=Rect(1600, 0, 1600, 2400), id="anno/img-f4r")
    b.paint(f4v, b.image("img/f4v.jpg", 1600, 2400), id="anno/img-f4v")

    lines = [
        b.paint(left, "Diuae Virginis Mariae", Rect(40, 40, 320, 40), id="anno/l1"),
        b.paint(left, "Sintlacisauugia", Rect(40, 100, 320, 40), id="anno/l2"),
        b.paint(right, "Tabula prima", Rect(40, 40, 320, 40), id="anno/r1"),
        b.paint(right, "Tabula secunda", Rect(40, 100, 320, 40), id="anno/r2"),
    ]
    b.annotation_list("list/text-order", ListKind.TEXT_ORDER, lines)

    b.comment(left, "The title runs across the gutter.", Rect(40, 160, 200, 50), id="anno/gutter-note")
    b.comment(spread, "Picture crosses both pages.", Rect(700, 400, 200, 300), id="anno/spread-note")
    b.comment(lo, "Low-resolution capture; colours unreliable.", id="anno/lo-note")

    b.sequence("sequence/normal", "Reading order",
               [f3r, alternatives([spread], [f3v, f4r]), f4v])
    return b.build({"shelfmark": "Y 112"})


def parker():
    """A current binding and the original one with a lost leaf."""
    b = ManifestBuilder(BASE + "parker/manifest", "CCCC MS 286")
    pages = {}
    for name in ("1", "2", "2a", "2b", "3", "4"):
        pages[name] = b.canvas(f"canvas/{name}", f"Canvas {name}", 900, 1300)

    texts = []
    for name in ("1", "2", "3", "4"):
        c = pages[name]
        b.paint(c, b.image(f"img/{name}.jpg", 1800, 2600), id=f"anno/img-{name}")
        texts.append(b.paint(c, b.text(f"text/{name}.txt", f"Transcription of page {name}"),
                             Rect(100, 100, 700, 1000), id=f"anno/text-{name}"))
    b.annotation_list("list/text-order", ListKind.TEXT_ORDER, texts)

    b.describe(pages["2a"], "Recto of the removed leaf; its text is not known.", id="anno/describe-2a")
    b.describe(pages["2b"], "Verso of the removed leaf: an illustrated frontispiece to Matthew.",
               id="anno/describe-2b")
    b.comment(pages["2b"], body_ref="http://scholar.example.net/notes/ccc286-frontispiece",
              id="anno/frontispiece-note")

    current = [pages[n] for n in ("1", "2", "3", "4")]
    original = [pages[n] for n in ("1", "2", "2a", "2b", "3", "4")]
    b.sequence("sequence/current", "286 Curr", current)
    b.sequence("sequence/original", "286 Orig", original)
    return b.build({"shelfmark": "CCCC MS 286"})


BNF_VOLUMES = ("113", "114", "115", "116")
BNF_CONTENT_PER_VOLUME = 3


def bnf():
    """Four rebound volumes with fly-leaves, and the original single volume."""
    b = ManifestBuilder(BASE + "bnf/manifest", "Lancelot du Lac")
    folio = 0
    content_all = []
    volumes = []
    for vol in BNF_VOLUMES:
        front = b.canvas(f"ff{vol}/fly-front", f"f.fr. {vol} front fly-leaf", 700, 1000)
        back = b.canvas(f"ff{vol}/fly-back", f"f.fr. {vol} back fly-leaf", 700, 1000)
        content = []
        for _ in range(BNF_CONTENT_PER_VOLUME):
            folio += 1
            content.append(b.canvas(f"f{folio}r", f"f. {folio}r", 700, 1000))
        for c in [front, *content, back]:
            stem = c.id[len(b.base):].replace("/", "-")
            b.paint(c, b.image(f"img/{stem}.jpg", 1400, 2000), id=f"anno/img-{stem}")
        volumes.append((vol, front, content, back))
        content_all += content

    for vol, front, content, back in volumes:
        seq = b.sequence(f"sequence/ff{vol}", f"f.fr. {vol}", [front, *content, back])
        b.range(f"range/ff{vol}-content", "Content", seq, content)
    b.sequence("sequence/lac", "L. du Lac", content_all)
    return b.build({"shelfmarks": "Fonds Francais 113-116"})


def palimpsest():
    """Perpendicular undertext, alternative readings and marginalia."""
    b = ManifestBuilder(BASE + "palimpsest/manifest", "Palimpsest leaf")
    recto = b.canvas("f57r", "f. 57r", 1000, 1400)
    verso = b.canvas("f57v", "f. 57v", 1000, 1400)

    natural = b.image("img/f57r-natural.jpg", 2000, 2800)
    uv = b.image("img/f57r-uv.jpg", 1000, 1400)
    lighting = b.choice("img/f57r", ChoiceKind.IMAGE, [natural, uv],
                        [{"lighting": "natural"}, {"lighting": "ultraviolet"}])
    b.paint(recto, lighting, id="anno/img-f57r")
    b.paint(verso, b.image("img/f57v.jpg", 2000, 2800), id="anno/img-f57v")

    # the erased text runs across the page, perpendicular to the later one
    under = b.zone("zone/undertext", 1400, 1000)
    b.place_zone(under, recto, Rect(0, 0, 1000, 1400), rotation=90, id="anno/undertext-on-f57r")
    reading_a = b.text("text/under-a.txt", "... the ratio of the sphere to the cylinder ...")
    reading_b = b.text("text/under-b.txt", "... the ratio of the sphere and the cylinder ...")
    readings = b.choice("text/under", ChoiceKind.TEXT, [reading_a, reading_b],
                        [{"author": "Heiberg"}, {"author": "Netz"}])
    under_line = b.paint(under, readings, Rect(100, 450, 1200, 80), id="anno/under")

    l1 = b.paint(recto, "First line of the prayer", Rect(120, 200, 760, 60), id="anno/l1")
    l2 = b.paint(recto, "Second line of the prayer", Rect(120, 320, 760, 60), id="anno/l2")
    l3 = b.paint(recto, "Third line of the prayer", Rect(120, 440, 760, 60), id="anno/l3")
    inter = b.paint(recto, "inserted between the lines", Rect(300, 270, 400, 40), id="anno/interlinear")
    margin = b.paint(recto, "nota bene", Rect(890, 200, 100, 300), id="anno/margin")
    b.annotation_list("list/reading", ListKind.TEXT_ORDER, [l1, inter, l2, l3, margin, under_line])

    b.comment(reading_b, "This reading follows the multispectral images.", id="anno/reading-b-note")
    b.comment(recto, "Undertext visible under ultraviolet light.", id="anno/uv-note")

    b.sequence("sequence/leaf", "Leaf", [recto, verso])
    return b.build({"collection": "Palimpsest fixture"})


FIXTURES = {
    "fragments": fragments,
    "y112": y112,
    "parker": parker,
    "bnf": bnf,
    "palimpsest": palimpsest,
}


def fixture(name: str):
    try:
        return FIXTURES[name]()
    except KeyError:
        raise KeyError(f"unknown fixture {name!r}; choose from {', '.join(FIXTURES)}") from None


def all_fixtures() -> dict:
    return {name: fn() for name, fn in FIXTURES.items()}


def write_fixtures(out_dir) -> list:
    """Write ``<name>.ttl`` and ``<name>.json`` for every fixture."""
    from .description import dump_description
    from .rdf import model_to_graph, serialize_turtle

    os.makedirs(out_dir, exist_ok=True)
    written = []
    for name, fn in FIXTURES.items():
        m = fn()
        for ext, text in (("ttl", serialize_turtle(model_to_graph(m))), ("json", dump_description(m))):
            path = os.path.join(out_dir, f"{name}.{ext}")
            with open(path, "w", encoding="utf-8", newline="\n") as fh:
                fh.write(text)
            written.append(path)
    return written


def shipped_description(name: str) -> dict:
    """The description document shipped with the package for fixture ``name``."""
    from importlib import resources

    text = resources.files(__package__).joinpath(f"data/fixtures/{name}.json").read_text("utf-8")
    return json.loads(text)
