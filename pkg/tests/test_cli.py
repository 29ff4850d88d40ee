import json
import subprocess
import sys

import pytest
from mutations import MUTATIONS

from sharedcanvas.cli import main
from sharedcanvas.fixtures import FIXTURES
from sharedcanvas.rdf import model_to_graph, serialize_turtle


@pytest.fixture(scope="module")
def fixture_dir(tmp_path_factory):
    out = tmp_path_factory.mktemp("fixtures")
    assert main(["fixtures", "-o", str(out)]) == 0
    return out


def test_fixtures_written(fixture_dir):
    names = sorted(p.name for p in fixture_dir.iterdir())
    assert names == sorted([f"{n}.ttl" for n in FIXTURES] + [f"{n}.json" for n in FIXTURES])


@pytest.mark.parametrize("name", list(FIXTURES))
def test_validate_each_fixture(fixture_dir, name, capsys):
    assert main(["validate", str(fixture_dir / f"{name}.ttl")]) == 0
    err = capsys.readouterr().err
    if name == "parker":
        assert [ln.split()[:2] for ln in err.splitlines()] == [["V9", "Warning"]] * 2
    else:
        assert err == ""


def test_strict_promotes_warnings(fixture_dir):
    assert main(["validate", "--strict", str(fixture_dir / "parker.ttl")]) == 1


def test_validate_json(fixture_dir, capsys):
    assert main(["validate", "--format", "json", str(fixture_dir / "parker.ttl")]) == 0
    report = json.loads(capsys.readouterr().out)
    assert {d["rule"] for d in report} == {"V9"}


@pytest.mark.parametrize("name", list(FIXTURES))
def test_roundtrip_each_fixture(fixture_dir, name):
    assert main(["roundtrip", str(fixture_dir / f"{name}.ttl")]) == 0


def test_build_matches_fixture(fixture_dir, tmp_path):
    out = tmp_path / "parker.ttl"
    assert main(["build", str(fixture_dir / "parker.json"), "-o", str(out)]) == 0
    assert out.read_text() == (fixture_dir / "parker.ttl").read_text()


def test_v5_mutation_fails_validation(tmp_path, capsys):
    path = tmp_path / "bnf-v5.ttl"
    path.write_text(serialize_turtle(model_to_graph(MUTATIONS["V5"]())))
    assert main(["validate", str(path)]) == 1
    lines = capsys.readouterr().err.splitlines()
    assert len(lines) == 1 and lines[0].startswith("V5 Error ")


def test_v10_mutation_fails_validation(tmp_path, capsys):
    path = tmp_path / "y112-v10.ttl"
    path.write_text(serialize_turtle(MUTATIONS["V10"]()))
    assert main(["validate", str(path)]) == 1
    assert capsys.readouterr().err.startswith("V10 Error")


def test_resolve_prints_plan(fixture_dir, capsys):
    args = ["resolve", str(fixture_dir / "y112.ttl"), "--canvas", "http://example.org/y112/f3v-f4r"]
    assert main(args + ["--viewport", "640x480"]) == 0
    lo = capsys.readouterr().out
    assert main(args + ["--policy", "resolution=high"]) == 0
    hi = capsys.readouterr().out
    assert lo.splitlines()[0] == "canvas\thttp://example.org/y112/f3v-f4r\t1600x1200"
    assert "spread-lo.jpg" in lo and "lo-note" in lo
    assert "spread-hi.jpg" in hi and "lo-note" not in hi
    assert main(args + ["--viewport", "640x480"]) == 0
    assert capsys.readouterr().out == lo


def test_resolve_unknown_canvas(fixture_dir):
    assert main(["resolve", str(fixture_dir / "y112.ttl"), "--canvas", "http://example.org/none"]) == 1


def test_render(fixture_dir, tmp_path):
    out = tmp_path / "site"
    assert main(["render", str(fixture_dir / "y112.ttl"), "-o", str(out), "--path-policy", "single",
                 "--scale", "0.5", "--layers", "image,text"]) == 0
    assert (out / "index.html").exists()
    assert len(list((out / "svg").iterdir())) == 5


@pytest.mark.parametrize("argv", [
    [],
    ["frobnicate"],
    ["render", "x.ttl"],
    ["render", "x.ttl", "-o", "d", "--scale", "-1"],
    ["render", "x.ttl", "-o", "d", "--layers", "sound"],
])
def test_usage_errors(argv):
    assert main(argv) == 2


def test_bad_viewport(fixture_dir):
    argv = ["resolve", str(fixture_dir / "y112.ttl"), "--canvas", "http://example.org/y112/f3r",
            "--viewport", "big"]
    assert main(argv) == 2


def test_io_error(tmp_path):
    assert main(["validate", str(tmp_path / "missing.ttl")]) == 3


def test_syntax_error_is_invalid(tmp_path, capsys):
    bad = tmp_path / "bad.ttl"
    bad.write_text("@prefix : <http://e/> .\n:x :y :z")
    assert main(["validate", str(bad)]) == 1
    assert "end of input" in capsys.readouterr().err


def test_module_entry_point(fixture_dir):
    proc = subprocess.run([sys.executable, "-m", "sharedcanvas", "validate", str(fixture_dir / "bnf.ttl")],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert proc.stderr == ""
