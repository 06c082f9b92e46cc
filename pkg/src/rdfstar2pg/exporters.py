"""Property graph serialization: JSON, GraphML, and openCypher CREATE scripts.

All three exporters consume PropertyGraph.canonical_form(), so their output
depends only on graph content, never on construction order. JSON and GraphML
return UTF-8 bytes; Cypher returns text. Every format is written line by
line with LF endings to keep output byte-reproducible.
"""

from __future__ import annotations

import json
import re
from datetime import date
from decimal import Decimal
from xml.sax.saxutils import escape, quoteattr

from .pgraph import Edge, Node, PropertyGraph, check_value, decode_value

LIST_SEPARATOR = "\x1f"  # US unit separator; joins list elements in GraphML


class UnrepresentableValue(Exception):
    """Raised when a value cannot survive the target format's encoding."""


class UnsanitizableIdentifier(Exception):
    """Raised when a label or key has no legal Cypher identifier form."""


# ---------------------------------------------------------------------------
# JSON
# ---------------------------------------------------------------------------


def to_json(graph: PropertyGraph) -> bytes:
    text = json.dumps(graph.canonical_form(), indent=2, ensure_ascii=False)
    return (text + "\n").encode("utf-8")


def from_json(data) -> PropertyGraph:
    if isinstance(data, (bytes, bytearray)):
        data = data.decode("utf-8")
    try:
        form = json.loads(data)
        nodes = form["nodes"]
        edges = form["edges"]
    except (json.JSONDecodeError, TypeError, KeyError) as exc:
        raise ValueError(f"not a property graph JSON document: {exc}") from exc

    graph = PropertyGraph()
    for record in nodes:
        props = {k: decode_value(v) for k, v in record["properties"].items()}
        for value in props.values():
            check_value(value)
        node = Node(record["id"], set(record["labels"]), props)
        if not node.labels:
            raise ValueError(f"node {node.id} has no labels")
        graph.nodes[node.id] = node
    for record in edges:
        props = {k: decode_value(v) for k, v in record["properties"].items()}
        for value in props.values():
            check_value(value)
        edge = Edge(
            record["id"], record["source"], record["target"], set(record["labels"]), props
        )
        if edge.source not in graph.nodes or edge.target not in graph.nodes:
            raise ValueError(f"edge {edge.id} references a missing node")
        if not edge.labels:
            raise ValueError(f"edge {edge.id} has no labels")
        graph.edges[edge.id] = edge
    return graph


# ---------------------------------------------------------------------------
# GraphML
# ---------------------------------------------------------------------------


def _text_form(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, date):
        return value.isoformat()
    return str(value)


def _graphml_type(values) -> str:
    kinds = set()
    for value in values:
        items = value if isinstance(value, list) else [value]
        for item in items:
            kinds.add(bool if isinstance(item, bool) else type(item))
    if len(kinds) != 1:
        return "string"
    kind = kinds.pop()
    if kind is bool:
        return "boolean"
    if kind is int:
        return "long"
    if kind is Decimal:
        return "double"
    return "string"


def _graphml_value(value) -> str:
    if isinstance(value, list):
        parts = [_text_form(item) for item in value]
        for part in parts:
            if LIST_SEPARATOR in part:
                raise UnrepresentableValue(
                    f"list element {part!r} contains the 0x1f separator"
                )
        return LIST_SEPARATOR.join(parts)
    return _text_form(value)


def to_graphml(graph: PropertyGraph) -> bytes:
    form = graph.canonical_form()
    elements = {"node": form["nodes"], "edge": form["edges"]}

    # One <key> per (domain, property key); "labels" is always declared.
    key_values: dict = {}
    for domain, records in elements.items():
        for record in records:
            for key, encoded in record["properties"].items():
                key_values.setdefault((domain, key), []).append(decode_value(encoded))

    declarations = [("node", "labels"), ("edge", "labels")]
    declarations.extend(sorted(key_values))
    key_ids = {pair: f"d{i}" for i, pair in enumerate(declarations)}

    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        '<graphml xmlns="http://graphml.graphdrawing.org/xmlns">',
    ]
    for pair in declarations:
        domain, key = pair
        values = key_values.get(pair, [])
        attr_type = "string" if key == "labels" else _graphml_type(values)
        extra = ' list="true"' if any(isinstance(v, list) for v in values) else ""
        lines.append(
            f'  <key id="{key_ids[pair]}" for="{domain}" '
            f"attr.name={quoteattr(key)} attr.type=\"{attr_type}\"{extra}/>"
        )
    lines.append('  <graph id="G" edgedefault="directed">')

    def data_lines(domain: str, record: dict, indent: str) -> list:
        out = [
            f"{indent}<data key=\"{key_ids[(domain, 'labels')]}\">"
            + escape(";".join(record["labels"]))
            + "</data>"
        ]
        for key in record["properties"]:
            value = decode_value(record["properties"][key])
            out.append(
                f'{indent}<data key="{key_ids[(domain, key)]}">'
                + escape(_graphml_value(value))
                + "</data>"
            )
        return out

    for record in form["nodes"]:
        lines.append(f"    <node id={quoteattr(record['id'])}>")
        lines.extend(data_lines("node", record, "      "))
        lines.append("    </node>")
    for record in form["edges"]:
        lines.append(
            f"    <edge id={quoteattr(record['id'])} "
            f"source={quoteattr(record['source'])} target={quoteattr(record['target'])}>"
        )
        lines.extend(data_lines("edge", record, "      "))
        lines.append("    </edge>")
    lines.append("  </graph>")
    lines.append("</graphml>")
    return ("\n".join(lines) + "\n").encode("utf-8")


# ---------------------------------------------------------------------------
# Cypher
# ---------------------------------------------------------------------------

_IDENTIFIER = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")


def _sanitize(name: str) -> str:
    candidate = re.sub(r"[^A-Za-z0-9_]", "_", name)
    if candidate and candidate[0].isdigit():
        candidate = "_" + candidate
    if not _IDENTIFIER.match(candidate):
        raise UnsanitizableIdentifier(f"no legal identifier for {name!r}")
    return candidate


def _sanitize_all(names, what: str) -> dict:
    mapping = {}
    for name in names:
        mapping[name] = _sanitize(name)
    seen: dict = {}
    for name, clean in mapping.items():
        if clean in seen:
            raise UnsanitizableIdentifier(
                f"{what} {name!r} and {seen[clean]!r} both sanitize to {clean!r}"
            )
        seen[clean] = name
    return mapping


def _cypher_scalar(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (int, Decimal)):
        return str(value)
    if isinstance(value, date):
        return _cypher_string(value.isoformat())
    return _cypher_string(value)


def _cypher_string(text: str) -> str:
    out = text.replace("\\", "\\\\").replace('"', '\\"')
    out = out.replace("\n", "\\n").replace("\r", "\\r").replace("\t", "\\t")
    return f'"{out}"'


def _cypher_value(value) -> str:
    if isinstance(value, list):
        return "[" + ", ".join(_cypher_scalar(item) for item in value) + "]"
    return _cypher_scalar(value)


def _label_chain(labels) -> str:
    mapping = _sanitize_all(labels, "label")
    ordered = sorted(labels, key=lambda s: (s.casefold(), s))
    return "".join(":" + mapping[label] for label in ordered)


def _prop_block(record: dict) -> str:
    props = {key: decode_value(value) for key, value in record["properties"].items()}
    props["id"] = record["id"]
    mapping = _sanitize_all(props, "property key")
    parts = [f"{mapping[key]}: {_cypher_value(props[key])}" for key in sorted(props)]
    return "{" + ", ".join(parts) + "}"


def to_cypher(graph: PropertyGraph) -> str:
    form = graph.canonical_form()
    if not form["nodes"]:
        return ""
    lines = []
    variables = {}
    for i, record in enumerate(form["nodes"]):
        var = f"n{i}"
        variables[record["id"]] = var
        lines.append(f"CREATE ({var}{_label_chain(record['labels'])} {_prop_block(record)})")
    for record in form["edges"]:
        source = variables[record["source"]]
        target = variables[record["target"]]
        lines.append(
            f"CREATE ({source})-[{_label_chain(record['labels'])} "
            f"{_prop_block(record)}]->({target})"
        )
    return "\n".join(lines) + "\n"
