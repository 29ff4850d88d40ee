"""Neutral JSON manuscript descriptions: ingest into a Manifest and export back.

The format is documented in docs/description-format.md and checked
against ``data/description.schema.json``. Ids without a scheme are
relative to the manuscript id's directory.
"""

from __future__ import annotations

import json
from functools import lru_cache
from importlib import resources as _pkg_resources

import jsonschema

from .errors import SchemaError, SharedCanvasError
from .fragments import Polygon, Rect, format_svg_points, format_xywh, parse_svg_polygon, parse_xywh
from .model import (
    _SCHEME,
    Alternatives,
    AnnoType,
    Canvas,
    Choice,
    ContentResource,
    ManifestBuilder,
    RangeTarget,
    ResourceKind,
    Zone,
    alternatives,
    authority,
    comment,
    image_resource,
    make_choice,
    paint,
    place_zone,
    text_resource,
)

_DEFAULT_FORMAT = {ResourceKind.IMAGE: "image/jpeg", ResourceKind.TEXT: "text/plain"}


@lru_cache(maxsize=1)
def schema() -> dict:
    text = _pkg_resources.files(__package__).joinpath("data/description.schema.json").read_text("utf-8")
    return json.loads(text)


def _json_path(parts) -> str:
    out = "$"
    for p in parts:
        out += f"[{p}]" if isinstance(p, int) else f".{p}"
    return out


def check_schema(doc) -> None:
    """Raise SchemaError for the first schema violation (by document path)."""
    validator = jsonschema.Draft202012Validator(schema())
    errors = sorted(validator.iter_errors(doc), key=lambda e: (list(map(str, e.absolute_path)), e.message))
    if errors:
        e = errors[0]
        raise SchemaError(_json_path(e.absolute_path), e.message)


def _selector(obj, xywh="xywh", polygon="polygon"):
    if xywh in obj:
        return parse_xywh("xywh=" + obj[xywh])
    if polygon in obj:
        return parse_svg_polygon(obj[polygon])
    return None


class _Ingest:
    def __init__(self, doc):
        ms = doc["manuscript"]
        self.b = ManifestBuilder(ms["id"], ms.get("label", ""))
        self.doc = doc
        self.objects = {}

    def ref(self, value) -> str:
        return self.b._id(value, "x")

    def lookup(self, value, path, kinds, what):
        obj = self.objects.get(self.ref(value))
        if not isinstance(obj, kinds):
            raise SchemaError(path, f"{what} {value!r} is not defined")
        return obj

    def attempt(self, path, fn, *args, **kw):
        try:
            return fn(*args, **kw)
        except SchemaError:
            raise
        except (SharedCanvasError, ValueError) as e:
            raise SchemaError(path, f"{type(e).__name__}: {e}") from e

    def resource(self, r, path):
        kind = ResourceKind(r["kind"])
        fmt = r.get("format", _DEFAULT_FORMAT[kind])
        rid = self.ref(r["id"])
        if kind is ResourceKind.IMAGE:
            if "chars" in r:
                raise SchemaError(path + ".chars", "image resources carry no chars")
            res = self.attempt(path, image_resource, rid, r.get("width"), r.get("height"), fmt)
        else:
            if "width" in r:
                raise SchemaError(path + ".width", "text resources carry no dimensions")
            res = self.attempt(path, text_resource, rid, r.get("chars"), fmt)
        return res

    def register(self, obj, path):
        if obj.id in self.objects:
            raise SchemaError(path, f"id {obj.id} is defined twice")
        self.objects[obj.id] = obj

    def run(self):
        b, doc = self.b, self.doc
        for i, c in enumerate(doc.get("canvases", [])):
            path = f"$.canvases[{i}]"
            obj = self.attempt(path, b.canvas, c["id"], c.get("label", ""), c["width"], c["height"])
            self.register(obj, path)
        for i, z in enumerate(doc.get("zones", [])):
            path = f"$.zones[{i}]"
            self.register(self.attempt(path, b.zone, z["id"], z["width"], z["height"]), path)
        for i, r in enumerate(doc.get("resources", [])):
            path = f"$.resources[{i}]"
            res = self.resource(r, path)
            b.resources[res.id] = res
            self.register(res, path)
        for i, ch in enumerate(doc.get("choices", [])):
            path = f"$.choices[{i}]"
            opts = []
            for k, r in enumerate(ch["options"]):
                opt = self.resource(r, f"{path}.options[{k}]")
                self.register(opt, f"{path}.options[{k}]")
                opts.append(opt)
            obj = self.attempt(path, b.choice, ch["id"], ch["kind"], opts, ch.get("metadata"))
            self.register(obj, path)

        annos = []  # (id, path, annotation)
        for i, z in enumerate(doc.get("zones", [])):
            zone = self.objects[self.ref(z["id"])]
            for k, pl in enumerate(z.get("placements", [])):
                path = f"$.zones[{i}].placements[{k}]"
                target = self.lookup(pl["target"], path + ".target", (Canvas, Zone), "canvas or zone")
                sel = self.attempt(path, _selector, pl)
                a = self.attempt(path, place_zone, self.ref(pl["id"]), zone, target, sel, pl.get("rotation", 0))
                annos.append((a.id, path, a))
        for i, im in enumerate(doc.get("images", [])):
            path = f"$.images[{i}]"
            annos.append(self.painting(im, path, AnnoType.PAINT_IMAGE))
        for i, t in enumerate(doc.get("texts", [])):
            path = f"$.texts[{i}]"
            annos.append(self.painting(t, path, AnnoType.PAINT_TEXT))
        for i, c in enumerate(doc.get("comments", [])):
            annos.append(self.commentary(c, f"$.comments[{i}]"))

        by_id = {}
        for aid, path, a in annos:
            if aid in by_id or aid in self.objects:
                raise SchemaError(path, f"id {aid} is defined twice")
            by_id[aid] = a
        if "annotation_order" in doc:
            order = [self.ref(x) for x in doc["annotation_order"]]
            if sorted(order) != sorted(by_id):
                raise SchemaError("$.annotation_order", "must list every annotation id exactly once")
            b.annotations = [by_id[x] for x in order]
        else:
            b.annotations = [a for _, _, a in annos]
        self.objects.update(by_id)

        seqs = {}
        for i, s in enumerate(doc["sequences"]):
            path = f"$.sequences[{i}]"
            items = []
            for k, item in enumerate(s["items"]):
                ipath = f"{path}.items[{k}]"
                if isinstance(item, str):
                    items.append(self.lookup(item, ipath, Canvas, "canvas"))
                else:
                    paths = []
                    for p_i, p in enumerate(item["alternatives"]):
                        paths.append([self.lookup(c, f"{ipath}.alternatives[{p_i}][{c_i}]", Canvas, "canvas")
                                      for c_i, c in enumerate(p)])
                    items.append(alternatives(*paths))
            seq = self.attempt(path, b.sequence, s["id"], s.get("label", ""), items)
            seqs[seq.id] = seq
        for i, r in enumerate(doc.get("ranges", [])):
            path = f"$.ranges[{i}]"
            seq = seqs.get(self.ref(r["sequence"]))
            if seq is None:
                raise SchemaError(path + ".sequence", f"sequence {r['sequence']!r} is not defined")
            targets = []
            for k, t in enumerate(r["targets"]):
                tpath = f"{path}.targets[{k}]"
                if isinstance(t, str):
                    targets.append(self.lookup(t, tpath, Canvas, "canvas"))
                else:
                    canvas = self.lookup(t["canvas"], tpath + ".canvas", Canvas, "canvas")
                    targets.append((canvas, self.attempt(tpath, _selector, t)))
            self.attempt(path, b.range, r["id"], r.get("label", ""), seq, targets)
        for i, lst in enumerate(doc.get("annotation_lists", [])):
            path = f"$.annotation_lists[{i}]"
            entries = []
            for k, e in enumerate(lst["entries"]):
                ref = self.ref(e)
                if ref not in by_id:
                    raise SchemaError(f"{path}.entries[{k}]", f"annotation {e!r} is not defined")
                entries.append(by_id[ref])
            self.attempt(path, b.annotation_list, lst["id"], lst["kind"], entries)
        return self.attempt("$", b.build, doc["manuscript"].get("metadata"))

    def painting(self, a, path, expect):
        target = self.lookup(a["target"], path + ".target", (Canvas, Zone), "canvas or zone")
        if "body" in a and "chars" in a:
            raise SchemaError(path, "give either body or chars, not both")
        if "body" in a:
            body = self.lookup(a["body"], path + ".body", (ContentResource, Choice), "resource or choice")
        else:
            body = a["chars"]
        sel = self.attempt(path, _selector, a)
        body_sel = self.attempt(path, _selector, a, "body_xywh", "body_polygon")
        anno = self.attempt(path, paint, self.ref(a["id"]), target, body, sel, body_sel,
                            expect=expect, author=a.get("author"), certainty=a.get("certainty"))
        return anno.id, path, anno

    def commentary(self, c, path):
        target_ref = self.ref(c["target"])
        target = self.objects.get(target_ref)
        if target is None:
            # annotations are registered after this pass; accept their ids as strings
            known = {self.ref(x["id"]) for key in ("images", "texts", "comments")
                     for x in self.doc.get(key, [])}
            known |= {self.ref(p["id"]) for z in self.doc.get("zones", []) for p in z.get("placements", [])}
            if target_ref not in known and authority(target_ref) == authority(self.b.id):
                raise SchemaError(path + ".target", f"target {c['target']!r} is not defined")
            target = target_ref
        if "body" in c and "chars" in c:
            raise SchemaError(path, "give either body or chars, not both")
        body, body_ref = c.get("chars"), None
        if "body" in c:
            obj = self.objects.get(self.ref(c["body"]))
            if isinstance(obj, ContentResource):
                body = obj
            else:
                body_ref = self.ref(c["body"])
        sel = self.attempt(path, _selector, c)
        body_sel = self.attempt(path, _selector, c, "body_xywh", "body_polygon")
        anno = self.attempt(path, comment, self.ref(c["id"]), target, body, sel, body_sel,
                            body_ref=body_ref, describe=c.get("describe", False),
                            author=c.get("author"), certainty=c.get("certainty"))
        return anno.id, path, anno


def ingest(doc) -> "Manifest":
    """Build a Manifest from a description document (already parsed JSON)."""
    check_schema(doc)
    return _Ingest(doc).run()


def load_description(path) -> "Manifest":
    with open(path, encoding="utf-8") as fh:
        return ingest(json.load(fh))


# --- export --------------------------------------------------------------------

def _put_selector(out, sel, xywh="xywh", polygon="polygon"):
    if isinstance(sel, Rect):
        out[xywh] = format_xywh(sel).split("=", 1)[1]
    elif isinstance(sel, Polygon):
        out[polygon] = format_svg_points(sel)


def to_description(m) -> dict:
    """Description document that ingests back to a manifest equal to ``m``.

    Foreign triples carried on ``m.extra_triples`` have no place in the
    format and are dropped.
    """
    base = ManifestBuilder(m.id).base

    def rel(value):
        if value.startswith(base):
            rest = value[len(base):]
            if rest and not _SCHEME.match(rest) and not rest.startswith(":"):
                return rest
        return value

    def resource(r):
        out = {"id": rel(r.id), "kind": r.kind.value}
        if r.media_type != _DEFAULT_FORMAT[r.kind]:
            out["format"] = r.media_type
        if r.has_dims:
            out["width"], out["height"] = r.width, r.height
        if r.chars is not None:
            out["chars"] = r.chars
        return out

    ms = {"id": m.id}
    if m.label:
        ms["label"] = m.label
    if m.metadata:
        ms["metadata"] = dict(m.metadata)
    doc = {"manuscript": ms}
    doc["canvases"] = [{"id": rel(c.id), "label": c.label, "width": c.width, "height": c.height}
                       for c in m.canvases]

    default_order = []
    zones = []
    for z in m.zones:
        entry = {"id": rel(z.id), "width": z.width, "height": z.height}
        placements = []
        for a in m.annotations:
            if a.anno_type is AnnoType.PLACE_ZONE and a.body == z.id:
                pl = {"id": rel(a.id), "target": rel(a.target)}
                _put_selector(pl, a.target_selector)
                if a.rotation:
                    pl["rotation"] = a.rotation
                placements.append(pl)
                default_order.append(a.id)
        if placements:
            entry["placements"] = placements
        zones.append(entry)
    if zones:
        doc["zones"] = zones

    options = {o.id for ch in m.choices for o in ch.options}
    res = [resource(r) for r in m.resources if r.id not in options]
    if res:
        doc["resources"] = res
    if m.choices:
        doc["choices"] = []
        for ch in m.choices:
            entry = {"id": rel(ch.id), "kind": ch.kind.value, "options": [resource(o) for o in ch.options]}
            if ch.option_metadata:
                entry["metadata"] = [dict(p) for p in ch.option_metadata]
            doc["choices"].append(entry)

    def annotation(a):
        out = {"id": rel(a.id), "target": rel(a.target)}
        _put_selector(out, a.target_selector)
        if a.body is not None:
            out["body"] = rel(a.body)
        _put_selector(out, a.body_selector, "body_xywh", "body_polygon")
        if a.chars is not None:
            out["chars"] = a.chars
        if a.anno_type is AnnoType.DESCRIBE:
            out["describe"] = True
        if a.author is not None:
            out["author"] = a.author
        if a.certainty is not None:
            out["certainty"] = a.certainty
        return out

    groups = (("images", (AnnoType.PAINT_IMAGE,)), ("texts", (AnnoType.PAINT_TEXT,)),
              ("comments", (AnnoType.COMMENT, AnnoType.DESCRIBE)))
    for key, types in groups:
        entries = [a for a in m.annotations if a.anno_type in types]
        if entries:
            doc[key] = [annotation(a) for a in entries]
            default_order += [a.id for a in entries]

    doc["sequences"] = []
    for s in m.sequences:
        items = []
        for item in s.items:
            if isinstance(item, Alternatives):
                items.append({"alternatives": [[rel(c) for c in p] for p in item.paths]})
            else:
                items.append(rel(item.canvas))
        entry = {"id": rel(s.id)}
        if s.label:
            entry["label"] = s.label
        entry["items"] = items
        doc["sequences"].append(entry)
    if m.ranges:
        doc["ranges"] = []
        for r in m.ranges:
            targets = []
            for t in r.targets:
                if t.selector is None:
                    targets.append(rel(t.canvas))
                else:
                    tt = {"canvas": rel(t.canvas)}
                    _put_selector(tt, t.selector)
                    targets.append(tt)
            entry = {"id": rel(r.id)}
            if r.label:
                entry["label"] = r.label
            entry.update(sequence=rel(r.sequence), targets=targets)
            doc["ranges"].append(entry)
    if m.annotation_lists:
        doc["annotation_lists"] = [{"id": rel(lst.id), "kind": lst.kind.value,
                                    "entries": [rel(e) for e in lst.entries]}
                                   for lst in m.annotation_lists]
    actual = [a.id for a in m.annotations]
    if actual != default_order:
        doc["annotation_order"] = [rel(x) for x in actual]
    return doc


def dump_description(m) -> str:
    return json.dumps(to_description(m), indent=2, ensure_ascii=False) + "\n"


__all__ = ["check_schema", "dump_description", "ingest", "load_description", "schema",
           "to_description", "RangeTarget"]
