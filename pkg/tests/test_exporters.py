import datetime
import json
import xml.etree.ElementTree as ET
from decimal import Decimal

import pytest

from rdfstar2pg.exporters import (
    LIST_SEPARATOR,
    UnrepresentableValue,
    UnsanitizableIdentifier,
    from_json,
    to_cypher,
    to_graphml,
    to_json,
)
from rdfstar2pg.parser import parse_turtle_star
from rdfstar2pg.pgraph import PropertyGraph, iri_key
from rdfstar2pg.transform import hybrid, pgt, rpt

EX = "@prefix ex: <http://example.org/> .\n"


def sample_graph():
    g = PropertyGraph()
    a = g.upsert_node(iri_key("http://x/a"), {"Resource"}, {"iri": "http://x/a"})
    b = g.upsert_node(iri_key("http://x/b"), {"Resource"}, {"iri": "http://x/b"})
    g.upsert_edge(
        "stmt:x",
        a,
        b,
        {"likes"},
        {
            "certainty": Decimal("0.5"),
            "count": 3,
            "flag": True,
            "when": datetime.date(2020, 5, 17),
            "tags": ["x", "y"],
        },
    )
    return g


def corpus_graphs():
    from rdfstar2pg.conformance import builtin_corpus

    for case in builtin_corpus():
        ds = parse_turtle_star(case.source)
        for fn in (rpt, pgt, hybrid):
            graph, _ = fn(ds)
            yield case.id, fn.__name__, graph


class TestJson:
    def test_bytes_utf8_trailing_newline(self):
        blob = to_json(sample_graph())
        assert isinstance(blob, bytes)
        assert blob.endswith(b"\n")
        json.loads(blob)  # valid JSON

    def test_round_trip_preserves_canonical_form(self):
        g = sample_graph()
        g2 = from_json(to_json(g))
        assert g2.canonical_form() == g.canonical_form()

    def test_round_trip_value_types(self):
        g2 = from_json(to_json(sample_graph()))
        edge = next(iter(g2.edges.values()))
        assert edge.properties["certainty"] == Decimal("0.5")
        assert edge.properties["count"] == 3
        assert edge.properties["flag"] is True
        assert edge.properties["when"] == datetime.date(2020, 5, 17)
        assert edge.properties["tags"] == ["x", "y"]

    def test_corpus_round_trips(self):
        for case_id, approach, graph in corpus_graphs():
            restored = from_json(to_json(graph))
            assert restored.canonical_form() == graph.canonical_form(), (case_id, approach)

    def test_same_graph_same_bytes(self):
        assert to_json(sample_graph()) == to_json(sample_graph())

    def test_from_json_rejects_non_graph_documents(self):
        with pytest.raises(ValueError):
            from_json(b'{"foo": 1}')
        with pytest.raises(ValueError):
            from_json(b"[1, 2]")

    def test_from_json_rejects_dangling_edge(self):
        doc = {
            "nodes": [{"id": "n:a", "labels": ["X"], "properties": {}}],
            "edges": [
                {
                    "id": "e:1",
                    "source": "n:a",
                    "target": "n:missing",
                    "labels": ["l"],
                    "properties": {},
                }
            ],
        }
        with pytest.raises(ValueError):
            from_json(json.dumps(doc).encode())

    def test_from_json_rejects_unlabelled_node(self):
        doc = {"nodes": [{"id": "n:a", "labels": [], "properties": {}}], "edges": []}
        with pytest.raises(ValueError):
            from_json(json.dumps(doc).encode())

    def test_from_json_rejects_bad_bytes(self):
        with pytest.raises(ValueError):
            from_json(b"not json")


def scalar_graph():
    g = PropertyGraph()
    a = g.upsert_node(iri_key("http://x/a"), {"Resource"}, {"iri": "http://x/a"})
    b = g.upsert_node(iri_key("http://x/b"), {"Resource"}, {"iri": "http://x/b"})
    g.upsert_edge(
        "stmt:x",
        a,
        b,
        {"likes"},
        {"certainty": Decimal("0.5"), "count": 3, "flag": True, "when": datetime.date(2020, 5, 17)},
    )
    return g


class TestGraphml:
    def test_well_formed_xml_for_scalar_graphs(self):
        root = ET.fromstring(to_graphml(scalar_graph()))
        assert root.tag.endswith("graphml")

    def test_list_separator_is_a_raw_control_character(self):
        # list values embed U+001F verbatim; consumers split on it, and strict
        # XML 1.0 parsers will reject documents that contain lists
        blob = to_graphml(sample_graph())
        assert LIST_SEPARATOR.encode() in blob
        with pytest.raises(ET.ParseError):
            ET.fromstring(blob)

    def test_key_declarations(self):
        text = to_graphml(sample_graph()).decode()
        assert '<key id="d0" for="node" attr.name="labels" attr.type="string"/>' in text
        assert '<key id="d1" for="edge" attr.name="labels" attr.type="string"/>' in text
        # typed keys
        assert 'attr.name="certainty" attr.type="double"' in text
        assert 'attr.name="count" attr.type="long"' in text
        assert 'attr.name="flag" attr.type="boolean"' in text

    def test_list_values_joined_and_marked(self):
        source = EX + 'ex:dp ex:subject "Info_Page" .\nex:dp ex:subject "aau_page" .'
        graph, _ = hybrid(parse_turtle_star(source))
        text = to_graphml(graph).decode()
        assert 'attr.name="subject" attr.type="string" list="true"' in text
        assert f"Info_Page{LIST_SEPARATOR}aau_page" in text

    def test_list_round_trip_by_splitting(self):
        source = EX + 'ex:dp ex:subject "Info_Page" .\nex:dp ex:subject "aau_page" .'
        graph, _ = hybrid(parse_turtle_star(source))
        text = to_graphml(graph).decode()
        joined = next(
            line.split(">", 1)[1].rsplit("<", 1)[0]
            for line in text.splitlines()
            if LIST_SEPARATOR in line
        )
        assert joined.split(LIST_SEPARATOR) == ["Info_Page", "aau_page"]

    def test_separator_inside_element_rejected(self):
        g = PropertyGraph()
        g.upsert_node("a", {"X"}, {"bad": [f"has{LIST_SEPARATOR}sep", "ok"]})
        with pytest.raises(UnrepresentableValue):
            to_graphml(g)

    def test_scalar_with_separator_is_fine(self):
        # only list elements are ambiguous; scalars never get split
        g = PropertyGraph()
        g.upsert_node("a", {"X"}, {"odd": f"has{LIST_SEPARATOR}sep"})
        to_graphml(g)

    def test_xml_escaping(self):
        g = PropertyGraph()
        g.upsert_node("a", {"X"}, {"text": '<tag> & "quoted"'})
        root = ET.fromstring(to_graphml(g))
        ns = {"g": "http://graphml.graphdrawing.org/xmlns"}
        data = [d.text for d in root.findall(".//g:node/g:data", ns)]
        assert '<tag> & "quoted"' in data

    def test_labels_semicolon_joined(self):
        g = PropertyGraph()
        g.upsert_node("a", {"Zeta", "Alpha"})
        text = to_graphml(g).decode()
        assert ">Alpha;Zeta<" in text

    def test_deterministic(self):
        assert to_graphml(sample_graph()) == to_graphml(sample_graph())

    def test_mixed_type_key_degrades_to_string(self):
        g = PropertyGraph()
        g.upsert_node("a", {"X"}, {"v": 1})
        g.upsert_node("b", {"X"}, {"v": "s"})
        text = to_graphml(g).decode()
        assert 'attr.name="v" attr.type="string"' in text

    def test_edges_reference_node_ids(self):
        source = EX + "ex:alice ex:meets ex:bob ."
        graph, _ = hybrid(parse_turtle_star(source))
        root = ET.fromstring(to_graphml(graph))
        ns = {"g": "http://graphml.graphdrawing.org/xmlns"}
        node_ids = {n.get("id") for n in root.findall(".//g:node", ns)}
        for edge in root.findall(".//g:edge", ns):
            assert edge.get("source") in node_ids
            assert edge.get("target") in node_ids


class TestCypher:
    def test_simple_statement_script(self):
        graph, _ = hybrid(parse_turtle_star(EX + "ex:alice ex:meets ex:bob ."))
        script = to_cypher(graph)
        assert script.splitlines() == [
            'CREATE (n0:Resource {id: "n:iri:http%3A//example.org/alice", iri: "http://example.org/alice"})',
            'CREATE (n1:Resource {id: "n:iri:http%3A//example.org/bob", iri: "http://example.org/bob"})',
            'CREATE (n0)-[:meets {id: "e:0fe09a35486a791f"}]->(n1)',
        ]

    def test_multi_label_relationships_sorted_case_insensitively(self):
        graph, _ = rpt(parse_turtle_star(EX + 'ex:s ex:p "a" .'))
        script = to_cypher(graph)
        assert "-[:DatatypeProperty:p {" in script

    def test_string_escaping(self):
        g = PropertyGraph()
        g.upsert_node("a", {"X"}, {"text": 'say "hi"\n\tdone\\'})
        script = to_cypher(g)
        assert '\\"hi\\"' in script and "\\n" in script and "\\t" in script and "\\\\" in script

    def test_value_rendering(self):
        g = PropertyGraph()
        g.upsert_node(
            "a",
            {"X"},
            {
                "d": Decimal("0.5"),
                "i": 7,
                "b": True,
                "w": datetime.date(2020, 5, 17),
                "l": ["x", "y"],
            },
        )
        script = to_cypher(g)
        assert "d: 0.5" in script
        assert "i: 7" in script
        assert "b: true" in script
        assert 'w: "2020-05-17"' in script
        assert 'l: ["x", "y"]' in script

    def test_digit_prefix_label_sanitized(self):
        g = PropertyGraph()
        g.upsert_node("a", {"22-rdf-syntax-nstype"})
        script = to_cypher(g)
        assert ":_22_rdf_syntax_nstype" in script

    def test_sanitize_collision_rejected(self):
        g = PropertyGraph()
        g.upsert_node("a", {"X"}, {"a-b": 1, "a_b": 2})
        with pytest.raises(UnsanitizableIdentifier):
            to_cypher(g)

    def test_dashes_become_underscores(self):
        g = PropertyGraph()
        g.upsert_node("a", {"--"}, {})
        assert ":__" in to_cypher(g)

    def test_unsanitizable_empty_identifier(self):
        g = PropertyGraph()
        g.upsert_node("a", {""}, {})
        with pytest.raises(UnsanitizableIdentifier):
            to_cypher(g)

    def test_empty_graph_is_empty_script(self):
        assert to_cypher(PropertyGraph()) == ""

    def test_deterministic(self):
        g1 = to_cypher(sample_graph())
        g2 = to_cypher(sample_graph())
        assert g1 == g2

    def test_every_corpus_graph_exports(self):
        for case_id, approach, graph in corpus_graphs():
            script = to_cypher(graph)
            assert script.count("CREATE") == len(graph.nodes) + len(graph.edges), (
                case_id,
                approach,
            )
