import json
from dataclasses import replace

import pytest
from mutations import MUTATIONS

from sharedcanvas.fixtures import bnf, parker
from sharedcanvas.rdf import Graph, IriRef, model_to_graph
from sharedcanvas.rdf.vocab import RDF_TYPE, SC
from sharedcanvas.validate import (
    RULES,
    Diagnostic,
    Severity,
    format_diagnostics,
    has_errors,
    validate_graph,
    validate_manifest,
    validate_turtle_graph,
)


def run(mutated):
    if isinstance(mutated, Graph):
        return validate_graph(mutated)
    return validate_manifest(mutated)


@pytest.mark.parametrize("rule", sorted(MUTATIONS, key=lambda r: int(r[1:])))
def test_mutation_yields_one_diagnostic(rule):
    diags = run(MUTATIONS[rule]())
    assert [d.rule for d in diags] == [rule]
    assert diags[0].severity is RULES[rule]


def test_fixtures_have_no_errors(manifests, fixture_name):
    diags = validate_manifest(manifests[fixture_name])
    assert not has_errors(diags)
    assert validate_graph(model_to_graph(manifests[fixture_name])) == []


def test_clean_fixtures_are_silent(manifests):
    for name in ("fragments", "y112", "bnf", "palimpsest"):
        assert validate_manifest(manifests[name]) == [], name


def test_parker_missing_leaves_warn_only():
    m = parker()
    diags = validate_manifest(m)
    assert [d.rule for d in diags] == ["V9", "V9"]
    assert all(d.severity is Severity.WARNING for d in diags)
    orig = next(s for s in m.sequences if "Orig" in s.label)
    curr = next(s for s in m.sequences if s is not orig)
    assert {d.subject for d in diags} == orig.aggregates - curr.aggregates


def test_bnf_range_moved_to_other_volume():
    diags = validate_manifest(MUTATIONS["V5"]())
    assert len(diags) == 1
    assert diags[0].line().startswith("V5 Error http://example.org/bnf/range/")


def test_type_clash_and_manifest_count():
    g = model_to_graph(bnf())
    canvas = IriRef(bnf().canvases[0].id)
    g.add(canvas, RDF_TYPE, SC.Zone)
    g.add(IriRef("http://example.org/bnf/second"), RDF_TYPE, SC.Manifest)
    rules = [d.rule for d in validate_graph(g)]
    assert rules == ["MultipleManifestNodes", "MultipleManifestNodes", "TypeClash"]


def test_no_manifest_node_reported():
    diags = validate_graph(Graph())
    assert [d.rule for d in diags] == ["NoManifestNode"]


def test_turtle_graph_runs_both_stages():
    g = model_to_graph(parker())
    assert [d.rule for d in validate_turtle_graph(g)] == ["V9", "V9"]
    assert [d.rule for d in validate_turtle_graph(MUTATIONS["V10"]())] == ["V10"]


def test_sorted_and_deterministic():
    m = bnf()
    broken = replace(m, canvases=tuple(replace(c, width=0) for c in m.canvases[:3]))
    first = validate_manifest(broken)
    assert first == validate_manifest(broken)
    assert first == sorted(first, key=Diagnostic.sort_key)
    assert format_diagnostics(first) == format_diagnostics(validate_manifest(broken))


def test_rule_severity_pairing_is_fixed():
    with pytest.raises(ValueError):
        Diagnostic("V9", Severity.ERROR, "x", "y")
    with pytest.raises(ValueError):
        Diagnostic("V11", Severity.ERROR, "x", "y")


def test_formats():
    d = Diagnostic("V1", Severity.ERROR, "http://e/c", "width is 0")
    assert format_diagnostics([d]) == "V1 Error http://e/c width is 0\n"
    parsed = json.loads(format_diagnostics([d], "json"))
    assert parsed == [{"rule": "V1", "severity": "Error", "subject": "http://e/c", "message": "width is 0"}]


def test_clean_manifest_implies_clean_graph(manifests):
    for name, m in manifests.items():
        if not has_errors(validate_manifest(m)):
            assert validate_graph(model_to_graph(m)) == [], name


def test_validation_never_mutates():
    m = MUTATIONS["V3"]()
    before = model_to_graph(m)
    validate_manifest(m)
    assert model_to_graph(m) == before
