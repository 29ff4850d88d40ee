import copy
import json

import pytest

from sharedcanvas.description import check_schema, dump_description, ingest, schema, to_description
from sharedcanvas.errors import SchemaError
from sharedcanvas.fixtures import FIXTURES, parker, shipped_description
from sharedcanvas.fragments import Rect
from sharedcanvas.model import AnnoType
from sharedcanvas.validate import validate_manifest

MINIMAL = {
    "manuscript": {"id": "http://example.org/min/manifest", "label": "Minimal"},
    "canvases": [{"id": "p1", "label": "p. 1", "width": 768, "height": 1024}],
    "resources": [{"id": "img/p1.jpg", "kind": "Image", "width": 1536, "height": 2048}],
    "images": [{"id": "anno/img", "target": "p1", "body": "img/p1.jpg"}],
    "sequences": [{"id": "seq", "label": "Only", "items": ["p1"]}],
}


def test_minimal_document():
    m = ingest(MINIMAL)
    assert [c.id for c in m.canvases] == ["http://example.org/min/p1"]
    (a,) = m.annotations
    assert a.anno_type is AnnoType.PAINT_IMAGE
    assert validate_manifest(m) == []


def test_selector_strings():
    doc = copy.deepcopy(MINIMAL)
    doc["texts"] = [{"id": "anno/t", "target": "p1", "xywh": "10,10,640,480", "chars": "line"}]
    m = ingest(doc)
    t = next(a for a in m.annotations if a.anno_type is AnnoType.PAINT_TEXT)
    assert t.target_selector == Rect(10, 10, 640, 480)


def test_parker_description_matches_fixture():
    assert ingest(shipped_description("parker")) == parker()


@pytest.mark.parametrize("name", list(FIXTURES))
def test_shipped_descriptions(name):
    m = FIXTURES[name]()
    assert ingest(shipped_description(name)) == m
    assert ingest(to_description(m)) == m
    assert json.loads(dump_description(m)) == shipped_description(name)


def test_undefined_canvas_path():
    doc = copy.deepcopy(MINIMAL)
    doc["images"].append({"id": "anno/img2", "target": "p9", "body": "img/p1.jpg"})
    with pytest.raises(SchemaError) as err:
        ingest(doc)
    assert err.value.path == "$.images[1].target"


def test_builder_errors_carry_path():
    doc = copy.deepcopy(MINIMAL)
    doc["texts"] = [{"id": "anno/t", "target": "p1", "xywh": "0,900,768,200", "chars": "x"}]
    with pytest.raises(SchemaError) as err:
        ingest(doc)
    assert err.value.path.startswith("$.texts[0]")
    assert "SelectorOutOfBounds" in str(err.value)


@pytest.mark.parametrize("mutate,path", [
    (lambda d: d.pop("canvases"), "$"),
    (lambda d: d["canvases"][0].update(width="wide"), "$.canvases[0].width"),
    (lambda d: d["canvases"][0].update(width=0), "$.canvases[0].width"),
    (lambda d: d["sequences"][0].update(items=[]), "$.sequences[0].items"),
    (lambda d: d.update(extra=1), "$"),
])
def test_schema_violations(mutate, path):
    doc = copy.deepcopy(MINIMAL)
    mutate(doc)
    with pytest.raises(SchemaError) as err:
        check_schema(doc)
    assert err.value.path == path


def test_schema_is_draft_2020_12():
    assert schema()["$schema"].endswith("2020-12/schema")


def test_alternatives_and_ranges():
    doc = copy.deepcopy(MINIMAL)
    doc["canvases"] += [{"id": f"p{i}", "label": "", "width": 768, "height": 1024} for i in (2, 3)]
    doc["sequences"] = [{"id": "seq", "label": "", "items": ["p1", {"alternatives": [["p2"], ["p3"]]}]}]
    doc["ranges"] = [{"id": "r", "label": "Part", "sequence": "seq",
                      "targets": ["p1", {"canvas": "p2", "xywh": "0,0,10,10"}]}]
    m = ingest(doc)
    assert len(m.sequences[0].aggregates) == 3
    assert m.ranges[0].targets[1].selector == Rect(0, 0, 10, 10)
