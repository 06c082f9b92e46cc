"""Command-line interface: convert, conformance, and inspect.

Exit codes: 0 clean, 1 parse/input error, 2 bad flags (argparse), 3 lossy
conversion (the report lists partial/ignored/error statements). Output for
a given invocation and input is byte-identical across runs.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from collections import Counter

from .conformance import run_conformance
from .exporters import to_cypher, to_graphml, to_json
from .model import classify, quote_depth
from .parser import ParseError, parse_turtle_star
from .transform import (
    Approach,
    DatatypePolicy,
    ListPolicy,
    NamedGraphPolicy,
    RdfTypePolicy,
    TransformConfig,
    transform,
)


def _read_input(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, "r", encoding="utf-8") as fh:
        return fh.read()


def _write_output(path: str, data: bytes) -> None:
    if path == "-":
        sys.stdout.buffer.write(data)
        sys.stdout.buffer.flush()
    else:
        with open(path, "wb") as fh:
            fh.write(data)


def _use_color() -> bool:
    if os.environ.get("RDFSTAR2PG_NO_COLOR"):
        return False
    return sys.stdout.isatty()


def _paint(text: str, code: str) -> str:
    return f"\x1b[{code}m{text}\x1b[0m" if _use_color() else text


def cmd_convert(args) -> int:
    try:
        source = _read_input(args.input)
    except OSError as exc:
        print(f"error: cannot read {args.input}: {exc}", file=sys.stderr)
        return 1
    try:
        dataset = parse_turtle_star(source)
    except ParseError as exc:
        print(f"parse error at line {exc.line}, column {exc.column}: {exc.message}",
              file=sys.stderr)
        return 1

    config = TransformConfig(
        approach=Approach(args.approach),
        datatype_policy=DatatypePolicy(args.datatype_policy),
        rdf_type_policy=RdfTypePolicy(args.rdf_type_policy) if args.rdf_type_policy else None,
        named_graph_policy=NamedGraphPolicy(args.named_graph_policy),
        list_policy=ListPolicy(args.list_policy),
    )
    graph, report = transform(dataset, config)

    if args.format == "json":
        payload = to_json(graph)
    elif args.format == "graphml":
        payload = to_graphml(graph)
    else:
        payload = to_cypher(graph).encode("utf-8")
    _write_output(args.output, payload)

    if args.report:
        report_bytes = (json.dumps(report.to_dict(), indent=2, ensure_ascii=False) + "\n").encode(
            "utf-8"
        )
        _write_output(args.report, report_bytes)

    return 3 if report.lossy else 0


def cmd_conformance(args) -> int:
    approaches = None
    if args.approaches:
        try:
            approaches = [
                Approach(name.strip()) for name in args.approaches.split(",") if name.strip()
            ]
        except ValueError:
            valid = ", ".join(a.value for a in Approach)
            print(
                f"rdfstar2pg conformance: error: --approaches must be a comma-separated "
                f"subset of {valid}, got {args.approaches!r}",
                file=sys.stderr,
            )
            return 2
    report = run_conformance(approaches=approaches)
    table = report.to_table()
    if _use_color():
        table = table.replace(" pass", _paint(" pass", "32")).replace("FAIL", _paint("FAIL", "31"))
    print(table)
    if args.json:
        _write_output(
            args.json,
            (json.dumps(report.to_dict(), indent=2, ensure_ascii=False) + "\n").encode("utf-8"),
        )
    return 0 if report.passed else 1


def cmd_inspect(args) -> int:
    try:
        source = _read_input(args.input)
    except OSError as exc:
        print(f"error: cannot read {args.input}: {exc}", file=sys.stderr)
        return 1
    try:
        dataset = parse_turtle_star(source)
    except ParseError as exc:
        print(f"parse error at line {exc.line}, column {exc.column}: {exc.message}",
              file=sys.stderr)
        return 1

    statements = [st for _, st in dataset.statements()]
    kinds = Counter(classify(st).value for st in statements)
    depth = max((quote_depth(st) for st in statements), default=0)
    named = [name.value for name, _ in dataset.graphs() if name is not None]

    print(f"statements: {len(statements)}")
    breakdown = ", ".join(f"{kind}={kinds[kind]}" for kind in sorted(kinds))
    print(f"kinds: {breakdown or 'none'}")
    print(f"max quote depth: {depth}")
    print(f"named graphs: {', '.join(named) if named else 'none'}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rdfstar2pg",
        description="Transform RDF-star (Turtle-star) documents into property graphs.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    convert = sub.add_parser("convert", help="parse, transform, and export a document")
    convert.add_argument("input", help="input file, or - for standard input")
    convert.add_argument(
        "--approach", choices=["rpt", "pgt", "hybrid"], default="hybrid",
        help="transformation approach (default: hybrid)",
    )
    convert.add_argument(
        "--datatype-policy", choices=["edge", "property"], default="property",
        help="hybrid only: what plain datatype statements become (default: property)",
    )
    convert.add_argument(
        "--rdf-type-policy", choices=["edge", "label"], default=None,
        help="rdf:type handling (default: label for pgt, edge otherwise)",
    )
    convert.add_argument(
        "--named-graph-policy", choices=["merge", "partition", "edge-property"],
        default="edge-property",
        help="named graph handling (default: edge-property)",
    )
    convert.add_argument(
        "--list-policy", choices=["expand", "collapse"], default="expand",
        help="collection handling (default: expand)",
    )
    convert.add_argument(
        "--format", choices=["json", "graphml", "cypher"], default="json",
        help="output format (default: json)",
    )
    convert.add_argument("--output", default="-", help="output file, or - for standard output")
    convert.add_argument("--report", default=None, help="write the conversion report JSON here")
    convert.set_defaults(func=cmd_convert)

    conf = sub.add_parser("conformance", help="run the built-in corpus checks")
    conf.add_argument(
        "--approaches", default=None,
        help="comma-separated subset of rpt,pgt,hybrid (default: all three)",
    )
    conf.add_argument("--json", default=None, help="also write the report as JSON to this path")
    conf.set_defaults(func=cmd_conformance)

    inspect = sub.add_parser("inspect", help="summarize a document without transforming it")
    inspect.add_argument("input", help="input file, or - for standard input")
    inspect.set_defaults(func=cmd_inspect)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
