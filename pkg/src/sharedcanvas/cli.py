"""Command-line entry point.

Exit codes: 0 success, 1 invalid input or validation errors, 2 usage
errors, 3 I/O errors. Diagnostics go to standard error.
"""

from __future__ import annotations

import argparse
import difflib
import json
import sys
from fractions import Fraction

from .description import load_description
from .errors import SharedCanvasError
from .fixtures import write_fixtures
from .rdf import graph_to_model, model_to_graph, parse_turtle, serialize_turtle
from .render import RenderOptions, render_manifest
from .resolve import ChoicePolicy, Layer, PathPolicy, flatten_canvas
from .validate import format_diagnostics, has_errors, validate_graph, validate_manifest

EXIT_OK, EXIT_INVALID, EXIT_USAGE, EXIT_IO = 0, 1, 2, 3


class _UsageError(Exception):
    pass


def _read(path) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _write(path, text):
    if path in (None, "-"):
        sys.stdout.write(text)
        return
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def _load_manifest(path):
    return graph_to_model(parse_turtle(_read(path)))


def _viewport(value):
    if value is None:
        return None
    try:
        w, h = value.lower().split("x")
        w, h = int(w), int(h)
    except ValueError:
        raise _UsageError(f"--viewport expects WxH, got {value!r}") from None
    if w <= 0 or h <= 0:
        raise _UsageError("--viewport dimensions must be positive")
    return w, h


def _choice_policy(args):
    prefer = []
    for item in args.policy or ():
        key, sep, value = item.partition("=")
        if not sep or not key:
            raise _UsageError(f"--policy expects key=value, got {item!r}")
        prefer.append((key, value))
    viewport = _viewport(args.viewport)
    if not prefer and viewport is None:
        return None
    return ChoicePolicy(viewport=viewport, prefer=tuple(prefer))


def cmd_build(args):
    m = load_description(args.description)
    _write(args.output, serialize_turtle(model_to_graph(m)))
    return EXIT_OK


def cmd_validate(args):
    graph = parse_turtle(_read(args.input))
    diags = validate_graph(graph)
    if not has_errors(diags):
        diags = sorted(set(diags) | set(validate_manifest(graph_to_model(graph))),
                       key=lambda d: d.sort_key())
    if args.format == "json":
        sys.stdout.write(format_diagnostics(diags, "json"))
    else:
        sys.stderr.write(format_diagnostics(diags))
    if has_errors(diags) or (args.strict and diags):
        return EXIT_INVALID
    return EXIT_OK


def cmd_resolve(args):
    m = _load_manifest(args.input)
    policy = _choice_policy(args)
    try:
        m.canvas(args.canvas)
    except KeyError:
        sys.stderr.write(f"error: no canvas {args.canvas} in manifest\n")
        return EXIT_INVALID
    plan = flatten_canvas(m, args.canvas, policy)
    sys.stdout.write(plan.text())
    return EXIT_OK


def cmd_render(args):
    m = _load_manifest(args.input)
    layers = [Layer[name.upper()] for name in args.layers.split(",")] if args.layers else list(Layer)
    opts = RenderOptions(scale=Fraction(args.scale), include_layers=layers, path_policy=args.path_policy)
    written = render_manifest(m, args.output, opts, _choice_policy(args))
    sys.stderr.write(f"wrote {len(written)} files to {args.output}\n")
    return EXIT_OK


def _normalize(text: str) -> str:
    return serialize_turtle(model_to_graph(graph_to_model(parse_turtle(text))))


def cmd_roundtrip(args):
    first = _normalize(_read(args.input))
    second = _normalize(first)
    if first == second:
        if args.output:
            _write(args.output, first)
        return EXIT_OK
    diff = difflib.unified_diff(first.splitlines(True), second.splitlines(True), "pass-1", "pass-2")
    sys.stderr.writelines(diff)
    return EXIT_INVALID


def cmd_fixtures(args):
    for path in write_fixtures(args.output):
        sys.stderr.write(f"wrote {path}\n")
    return EXIT_OK


def _layers_arg(value):
    names = [v.strip() for v in value.split(",") if v.strip()]
    for n in names:
        if n.upper() not in Layer.__members__:
            raise argparse.ArgumentTypeError(f"unknown layer {n!r}")
    if not names:
        raise argparse.ArgumentTypeError("at least one layer is required")
    return ",".join(names)


def _scale_arg(value):
    try:
        q = Fraction(value)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a number: {value!r}") from None
    if q <= 0:
        raise argparse.ArgumentTypeError("scale must be positive")
    return value


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="sharedcanvas", description="Manuscript manifests as annotated canvases.")
    sub = p.add_subparsers(dest="command", required=True, metavar="COMMAND")

    s = sub.add_parser("build", help="JSON description -> Turtle manifest")
    s.add_argument("description")
    s.add_argument("-o", "--output", help="output .ttl (default: stdout)")
    s.set_defaults(func=cmd_build)

    s = sub.add_parser("validate", help="check a Turtle manifest")
    s.add_argument("input")
    s.add_argument("--strict", action="store_true", help="warnings also fail")
    s.add_argument("--format", choices=("text", "json"), default="text")
    s.set_defaults(func=cmd_validate)

    def choice_flags(s):
        s.add_argument("--policy", action="append", metavar="KEY=VALUE",
                       help="preferred choice metadata (repeatable)")
        s.add_argument("--viewport", metavar="WxH", help="display size used to pick among images")

    s = sub.add_parser("resolve", help="print one canvas's render plan")
    s.add_argument("input")
    s.add_argument("--canvas", required=True, metavar="IRI")
    choice_flags(s)
    s.set_defaults(func=cmd_resolve)

    s = sub.add_parser("render", help="write SVG and HTML pages")
    s.add_argument("input")
    s.add_argument("-o", "--output", required=True, metavar="DIR")
    s.add_argument("--path-policy", choices=[x.value for x in PathPolicy], default=PathPolicy.FIRST_PATH.value)
    s.add_argument("--scale", type=_scale_arg, default="1")
    s.add_argument("--layers", type=_layers_arg, help="comma-separated subset of image,text,commentary")
    choice_flags(s)
    s.set_defaults(func=cmd_render)

    s = sub.add_parser("roundtrip", help="check that normalization is stable")
    s.add_argument("input")
    s.add_argument("-o", "--output", help="also write the normalized Turtle here")
    s.set_defaults(func=cmd_roundtrip)

    s = sub.add_parser("fixtures", help="write the reference fixtures as .ttl and .json")
    s.add_argument("-o", "--output", required=True, metavar="DIR")
    s.set_defaults(func=cmd_fixtures)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code == 0 else EXIT_USAGE
    try:
        return args.func(args)
    except _UsageError as e:
        sys.stderr.write(f"usage error: {e}\n")
        return EXIT_USAGE
    except OSError as e:
        sys.stderr.write(f"I/O error: {e}\n")
        return EXIT_IO
    except (SharedCanvasError, json.JSONDecodeError) as e:
        sys.stderr.write(f"error: {type(e).__name__}: {e}\n")
        return EXIT_INVALID


run = main


if __name__ == "__main__":
    sys.exit(main())
