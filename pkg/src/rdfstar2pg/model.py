"""RDF and RDF-star terms, statements, and datasets.

Statements follow the usual shape: the subject is an IRI, a blank node, or a
quoted triple; the predicate is always an IRI; the object may additionally be
a literal. Quoted triples may nest arbitrarily, so a statement can embed
other statements.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterator, Optional, Union

RDF_NS = "http://www.w3.org/1999/02/22-rdf-syntax-ns#"
XSD_NS = "http://www.w3.org/2001/XMLSchema#"

RDF_TYPE = RDF_NS + "type"
RDF_FIRST = RDF_NS + "first"
RDF_REST = RDF_NS + "rest"
RDF_NIL = RDF_NS + "nil"
RDF_LANG_STRING = RDF_NS + "langString"

XSD_STRING = XSD_NS + "string"
XSD_INTEGER = XSD_NS + "integer"
XSD_DECIMAL = XSD_NS + "decimal"
XSD_DOUBLE = XSD_NS + "double"
XSD_BOOLEAN = XSD_NS + "boolean"
XSD_DATE = XSD_NS + "date"


@dataclass(frozen=True)
class Iri:
    """An absolute IRI. Equality is exact string equality."""

    value: str

    def __repr__(self) -> str:
        return f"Iri({self.value!r})"


@dataclass(frozen=True)
class BlankNode:
    """A blank node under its canonical document-scoped label (b0, b1, ...).

    The label as it appeared in the source is kept for provenance but is
    excluded from equality and hashing.
    """

    label: str
    original: Optional[str] = field(default=None, compare=False, repr=False)

    def __repr__(self) -> str:
        return f"BlankNode(_:{self.label})"


@dataclass(frozen=True)
class Literal:
    """A literal: lexical form, datatype IRI, optional language tag.

    The datatype defaults to xsd:string, or rdf:langString when a language
    tag is given. A language tag is only legal with rdf:langString, and
    rdf:langString requires one.
    """

    lexical: str
    datatype: Iri = Iri(XSD_STRING)
    lang: Optional[str] = None

    def __post_init__(self) -> None:
        if self.lang is not None and self.datatype.value == XSD_STRING:
            object.__setattr__(self, "datatype", Iri(RDF_LANG_STRING))
        if self.lang is not None and self.datatype.value != RDF_LANG_STRING:
            raise ValueError("language tag requires rdf:langString datatype")
        if self.lang is None and self.datatype.value == RDF_LANG_STRING:
            raise ValueError("rdf:langString literal requires a language tag")

    def __repr__(self) -> str:
        if self.lang is not None:
            return f"Literal({self.lexical!r}@{self.lang})"
        return f"Literal({self.lexical!r}^^{self.datatype.value})"


@dataclass(frozen=True)
class QuotedTriple:
    """A statement used as a term (quoted, not asserted)."""

    statement: "Statement"

    def __repr__(self) -> str:
        return f"QuotedTriple({self.statement!r})"


Term = Union[Iri, BlankNode, Literal, QuotedTriple]
SubjectTerm = Union[Iri, BlankNode, QuotedTriple]


@dataclass(frozen=True)
class Statement:
    """One (subject, predicate, object) statement, possibly with quoted terms."""

    subject: SubjectTerm
    predicate: Iri
    object: Term

    def __post_init__(self) -> None:
        if isinstance(self.subject, Literal):
            raise ValueError("statement subject cannot be a literal")
        if not isinstance(self.subject, (Iri, BlankNode, QuotedTriple)):
            raise TypeError(f"bad subject term: {self.subject!r}")
        if not isinstance(self.predicate, Iri):
            raise TypeError("statement predicate must be an IRI")
        if not isinstance(self.object, (Iri, BlankNode, Literal, QuotedTriple)):
            raise TypeError(f"bad object term: {self.object!r}")

    def __repr__(self) -> str:
        return f"Statement({serialize_statement(self)})"


class StatementKind(enum.Enum):
    OBJECT_PROPERTY = "ObjectProperty"
    DATATYPE_PROPERTY = "DatatypeProperty"
    STAR_SUBJECT = "StarSubject"
    STAR_OBJECT = "StarObject"
    STAR_BOTH = "StarBoth"


def classify(statement: Statement) -> StatementKind:
    """Classify a statement; total over every constructible statement."""
    s_quoted = isinstance(statement.subject, QuotedTriple)
    o_quoted = isinstance(statement.object, QuotedTriple)
    if s_quoted and o_quoted:
        return StatementKind.STAR_BOTH
    if s_quoted:
        return StatementKind.STAR_SUBJECT
    if o_quoted:
        return StatementKind.STAR_OBJECT
    if isinstance(statement.object, Literal):
        return StatementKind.DATATYPE_PROPERTY
    return StatementKind.OBJECT_PROPERTY


def is_star(statement: Statement) -> bool:
    return classify(statement) in (
        StatementKind.STAR_SUBJECT,
        StatementKind.STAR_OBJECT,
        StatementKind.STAR_BOTH,
    )


def local_name(iri: Union[Iri, str]) -> str:
    """Substring after the last '#', else after the last '/', else the IRI."""
    value = iri.value if isinstance(iri, Iri) else iri
    if "#" in value:
        tail = value.rsplit("#", 1)[1]
        if tail:
            return tail
    if "/" in value:
        tail = value.rsplit("/", 1)[1]
        if tail:
            return tail
    return value


def quote_depth(item: Union[Term, Statement]) -> int:
    """Nesting depth: 0 for scalar terms, 1 + max child depth for quoting."""
    if isinstance(item, Statement):
        return max(quote_depth(item.subject), quote_depth(item.object))
    if isinstance(item, QuotedTriple):
        inner = item.statement
        return 1 + max(quote_depth(inner.subject), quote_depth(inner.object))
    return 0


# ---------------------------------------------------------------------------
# Canonical serialization (used for ordering, identity keys, round-trips)
# ---------------------------------------------------------------------------

_ESCAPES = {"\\": "\\\\", '"': '\\"', "\n": "\\n", "\r": "\\r", "\t": "\\t"}


def escape_string(text: str) -> str:
    out = []
    for ch in text:
        if ch in _ESCAPES:
            out.append(_ESCAPES[ch])
        elif ord(ch) < 0x20:
            out.append("\\u%04X" % ord(ch))
        else:
            out.append(ch)
    return "".join(out)


def serialize_term(term: Term) -> str:
    if isinstance(term, Iri):
        return f"<{term.value}>"
    if isinstance(term, BlankNode):
        return f"_:{term.label}"
    if isinstance(term, Literal):
        body = f'"{escape_string(term.lexical)}"'
        if term.lang is not None:
            return f"{body}@{term.lang}"
        if term.datatype.value == XSD_STRING:
            return body
        return f"{body}^^<{term.datatype.value}>"
    if isinstance(term, QuotedTriple):
        return f"<< {serialize_statement(term.statement)} >>"
    raise TypeError(f"not a term: {term!r}")


def serialize_statement(statement: Statement) -> str:
    return " ".join(
        (
            serialize_term(statement.subject),
            serialize_term(statement.predicate),
            serialize_term(statement.object),
        )
    )


def statement_sort_key(statement: Statement) -> str:
    return serialize_statement(statement)


# ---------------------------------------------------------------------------
# Dataset
# ---------------------------------------------------------------------------


def _dedup(statements) -> tuple:
    seen = set()
    out = []
    for st in statements:
        if st not in seen:
            seen.add(st)
            out.append(st)
    return tuple(out)


class Dataset:
    """A default graph plus named graphs; each graph is a set of statements.

    Statements keep a deterministic iteration order (first appearance), but
    equality and cardinality follow set semantics.
    """

    def __init__(self, default=(), named=None):
        self.default: tuple = _dedup(default)
        self.named: dict = {}
        for name, statements in (named or {}).items():
            if not isinstance(name, Iri):
                raise TypeError("graph name must be an IRI")
            self.named[name] = _dedup(statements)

    def graphs(self) -> Iterator[tuple]:
        """Yield (name, statements) pairs; None names the default graph."""
        yield None, self.default
        for name in sorted(self.named, key=lambda iri: iri.value):
            yield name, self.named[name]

    def statements(self) -> Iterator[tuple]:
        """Yield (graph name or None, statement) for every statement."""
        for name, statements in self.graphs():
            for st in statements:
                yield name, st

    def __len__(self) -> int:
        return len(self.default) + sum(len(v) for v in self.named.values())

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Dataset):
            return NotImplemented
        if set(self.default) != set(other.default):
            return False
        if set(self.named) != set(other.named):
            return False
        return all(set(self.named[k]) == set(other.named[k]) for k in self.named)

    def __repr__(self) -> str:
        return f"Dataset({len(self.default)} default, {len(self.named)} named graphs)"


# ---------------------------------------------------------------------------
# Statement units (conversion accounting)
# ---------------------------------------------------------------------------


def embedded_star_statements(statement: Statement) -> list:
    """Embedded statements that are themselves star statements, recursively."""
    found = []

    def walk(term: Term) -> None:
        if isinstance(term, QuotedTriple):
            inner = term.statement
            if is_star(inner):
                found.append(inner)
            walk(inner.subject)
            walk(inner.object)

    walk(statement.subject)
    walk(statement.object)
    return found


def is_chain_statement(statement: Statement) -> bool:
    """Collection-expansion chain statements fold into their head statement."""
    return statement.predicate.value in (RDF_FIRST, RDF_REST)


def statement_units(dataset: Dataset) -> list:
    """(graph, statement) accounting units for conversion reports.

    Every non-chain top-level statement is a unit, and so is every embedded
    statement that is itself a star statement (nesting depth >= 2 introduces
    additional triples that the transformation must handle).
    """
    units = []
    for name, st in dataset.statements():
        if is_chain_statement(st):
            continue
        units.append((name, st))
        for nested in embedded_star_statements(st):
            units.append((name, nested))
    return units


# ---------------------------------------------------------------------------
# Isomorphism (equality modulo a blank-node bijection)
# ---------------------------------------------------------------------------


def _bnode_labels(statements) -> set:
    labels = set()

    def walk(term: Term) -> None:
        if isinstance(term, BlankNode):
            labels.add(term.label)
        elif isinstance(term, QuotedTriple):
            walk(term.statement.subject)
            walk(term.statement.object)

    for st in statements:
        walk(st.subject)
        walk(st.object)
    return labels


def _rename(statement: Statement, mapping: dict) -> Statement:
    def conv(term: Term) -> Term:
        if isinstance(term, BlankNode):
            return BlankNode(mapping.get(term.label, term.label))
        if isinstance(term, QuotedTriple):
            return QuotedTriple(
                Statement(
                    conv(term.statement.subject),
                    term.statement.predicate,
                    conv(term.statement.object),
                )
            )
        return term

    return Statement(conv(statement.subject), statement.predicate, conv(statement.object))


def _graphs_isomorphic(left, right) -> bool:
    left, right = set(left), set(right)
    if len(left) != len(right):
        return False
    a_labels = sorted(_bnode_labels(left))
    b_labels = sorted(_bnode_labels(right))
    if len(a_labels) != len(b_labels):
        return False
    if not a_labels:
        return left == right

    # Backtracking search over label bijections; fine for the small graphs
    # this library deals in (documents rarely hold more than a few bnodes).
    def extend(mapping: dict, remaining: list) -> bool:
        if not remaining:
            return {_rename(st, mapping) for st in left} == right
        label = remaining[0]
        used = set(mapping.values())
        for candidate in b_labels:
            if candidate in used:
                continue
            mapping[label] = candidate
            if extend(mapping, remaining[1:]):
                return True
            del mapping[label]
        return False

    return extend({}, a_labels)


def isomorphic(a: Dataset, b: Dataset) -> bool:
    """True when the datasets are equal up to blank-node relabeling.

    Blank-node labels are document-scoped, so the bijection is searched per
    dataset (one mapping shared across the default and named graphs).
    """
    if set(a.named) != set(b.named):
        return False

    a_all = list(a.default) + [st for sts in a.named.values() for st in sts]
    b_all = list(b.default) + [st for sts in b.named.values() for st in sts]
    a_labels = sorted(_bnode_labels(a_all))
    b_labels = sorted(_bnode_labels(b_all))
    if len(a_labels) != len(b_labels):
        return False

    pairs = [(a.default, b.default)]
    pairs += [(a.named[name], b.named[name]) for name in a.named]
    if any(len(set(l)) != len(set(r)) for l, r in pairs):
        return False

    def check(mapping: dict) -> bool:
        for l, r in pairs:
            if {_rename(st, mapping) for st in l} != set(r):
                return False
        return True

    def extend(mapping: dict, remaining: list) -> bool:
        if not remaining:
            return check(mapping)
        label = remaining[0]
        used = set(mapping.values())
        for candidate in b_labels:
            if candidate in used:
                continue
            mapping[label] = candidate
            if extend(mapping, remaining[1:]):
                return True
            del mapping[label]
        return False

    if not a_labels:
        return check({})
    return extend({}, a_labels)
