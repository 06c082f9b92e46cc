"""Recursive-descent parser for Turtle-star documents.

Supported surface: @prefix directives, prefixed names, absolute IRIs, string
literals with ^^datatype or @lang, integer/decimal shorthand, predicate lists
(;), object lists (,), the `a` keyword, labeled and anonymous blank nodes,
collections (expanded to rdf:first/rdf:rest/rdf:nil chains), quoted triples
<< s p o >> at any nesting depth, and named-graph blocks `<name> { ... }`.

Everything else fails loudly with a positioned ParseError; nothing is ever
guessed at. In particular @base/relative IRIs, annotation syntax {| ... |},
non-empty blank-node property lists, long strings, and numeric double
shorthand are out of scope.

Blank nodes are relabeled b0, b1, ... in order of first appearance; the
source label survives on BlankNode.original. Each graph is dedupliated with
set semantics. File extension makes no difference to parsing.
"""

from __future__ import annotations

import enum
import re
from typing import Optional

from .model import (
    RDF_FIRST,
    RDF_LANG_STRING,
    RDF_NIL,
    RDF_REST,
    RDF_TYPE,
    XSD_DECIMAL,
    XSD_INTEGER,
    XSD_STRING,
    BlankNode,
    Dataset,
    Iri,
    Literal,
    QuotedTriple,
    Statement,
    serialize_statement,
)


class ErrorKind(enum.Enum):
    LEXICAL = "Lexical"
    SYNTAX = "Syntax"
    UNDEFINED_PREFIX = "UndefinedPrefix"
    RELATIVE_IRI = "RelativeIri"
    UNSUPPORTED = "UnsupportedConstruct"


class ParseError(Exception):
    def __init__(self, message: str, line: int, column: int, kind: ErrorKind):
        super().__init__(f"line {line}, column {column}: {message}")
        self.message = message
        self.line = line
        self.column = column
        self.kind = kind


_ABSOLUTE_IRI = re.compile(r"^[A-Za-z][A-Za-z0-9+.\-]*:")

# Token kinds
IRIREF = "IRIREF"
PNAME = "PNAME"
BLANK = "BLANK"
STRING = "STRING"
INTEGER = "INTEGER"
DECIMAL = "DECIMAL"
LANGTAG = "LANGTAG"
PREFIX_KW = "PREFIX_KW"
A_KW = "A_KW"
EOF = "EOF"
# punctuation tokens use their surface text as kind: . ; , ( ) [ ] { } << >> ^^


class Token:
    __slots__ = ("kind", "value", "line", "column", "extra")

    def __init__(self, kind, value, line, column, extra=None):
        self.kind = kind
        self.value = value
        self.line = line
        self.column = column
        self.extra = extra

    def __repr__(self):
        return f"Token({self.kind}, {self.value!r})"


_PN_PREFIX = re.compile(r"[A-Za-z][A-Za-z0-9_\-]*")
_PN_LOCAL = re.compile(r"[A-Za-z0-9_][A-Za-z0-9_\-]*")
_BARE = re.compile(r"[A-Za-z][A-Za-z0-9_\-]*")
_NUMBER = re.compile(r"[+-]?(?:\d+\.\d+|\.\d+|\d+)")
_LANG = re.compile(r"[a-zA-Z]+(?:-[a-zA-Z0-9]+)*")


class _Lexer:
    def __init__(self, text: str):
        self.text = text.lstrip("﻿")
        self.pos = 0
        self.line = 1
        self.col = 1

    def error(self, message: str, kind: ErrorKind = ErrorKind.LEXICAL):
        raise ParseError(message, self.line, self.col, kind)

    def _advance(self, count: int) -> str:
        chunk = self.text[self.pos : self.pos + count]
        for ch in chunk:
            if ch == "\n":
                self.line += 1
                self.col = 1
            else:
                self.col += 1
        self.pos += count
        return chunk

    def _skip_ws_and_comments(self) -> None:
        while self.pos < len(self.text):
            ch = self.text[self.pos]
            if ch in " \t\r\n":
                self._advance(1)
            elif ch == "#":
                while self.pos < len(self.text) and self.text[self.pos] != "\n":
                    self._advance(1)
            else:
                return

    def tokens(self):
        out = []
        while True:
            tok = self.next_token()
            out.append(tok)
            if tok.kind == EOF:
                return out

    def next_token(self) -> Token:
        self._skip_ws_and_comments()
        if self.pos >= len(self.text):
            return Token(EOF, "", self.line, self.col)
        line, col = self.line, self.col
        text, pos = self.text, self.pos
        ch = text[pos]

        if text.startswith("<<", pos):
            self._advance(2)
            return Token("<<", "<<", line, col)
        if text.startswith(">>", pos):
            self._advance(2)
            return Token(">>", ">>", line, col)
        if ch == "<":
            return self._iriref(line, col)
        if ch == ">":
            self.error("stray '>'")
        if text.startswith("{|", pos):
            self.error("annotation syntax {| ... |} is not supported", ErrorKind.UNSUPPORTED)
        if ch == "." and text[pos + 1 : pos + 2].isdigit():
            return self._number(line, col)
        if ch in ".;,()[]{}":
            self._advance(1)
            return Token(ch, ch, line, col)
        if text.startswith("^^", pos):
            self._advance(2)
            return Token("^^", "^^", line, col)
        if ch == "^":
            self.error("stray '^' (datatype marker is '^^')")
        if ch == '"':
            return self._string(line, col)
        if ch == "@":
            return self._at(line, col)
        if ch == "_":
            return self._blank(line, col)
        if ch.isdigit() or (ch in "+-." and self._looks_numeric()):
            return self._number(line, col)
        if ch == ":" or _PN_PREFIX.match(ch):
            return self._name(line, col)
        self.error(f"unexpected character {ch!r}")

    def _looks_numeric(self) -> bool:
        return _NUMBER.match(self.text, self.pos) is not None

    def _iriref(self, line, col) -> Token:
        end = self.text.find(">", self.pos + 1)
        if end < 0:
            self.error("unterminated IRI reference")
        raw = self.text[self.pos + 1 : end]
        if any(c in raw for c in ' "<{}|^`') or any(ord(c) < 0x21 for c in raw):
            self.error("illegal character inside IRI reference")
        self._advance(end - self.pos + 1)
        return Token(IRIREF, raw, line, col)

    def _string(self, line, col) -> Token:
        text = self.text
        if text.startswith('"""', self.pos):
            self.error("long string literals are not supported", ErrorKind.UNSUPPORTED)
        self._advance(1)
        out = []
        while True:
            if self.pos >= len(text):
                raise ParseError("unterminated string literal", line, col, ErrorKind.LEXICAL)
            ch = text[self.pos]
            if ch == '"':
                self._advance(1)
                return Token(STRING, "".join(out), line, col)
            if ch == "\n":
                self.error("newline inside string literal")
            if ch == "\\":
                esc = text[self.pos + 1 : self.pos + 2]
                if esc == "u":
                    hexs = text[self.pos + 2 : self.pos + 6]
                    if len(hexs) != 4 or any(c not in "0123456789abcdefABCDEF" for c in hexs):
                        self.error("bad \\u escape (need 4 hex digits)")
                    out.append(chr(int(hexs, 16)))
                    self._advance(6)
                elif esc in ('"', "\\", "n", "t", "r"):
                    out.append({'"': '"', "\\": "\\", "n": "\n", "t": "\t", "r": "\r"}[esc])
                    self._advance(2)
                else:
                    self.error(f"unsupported escape sequence \\{esc}")
            else:
                out.append(ch)
                self._advance(1)

    def _at(self, line, col) -> Token:
        text = self.text
        if text.startswith("@prefix", self.pos):
            self._advance(len("@prefix"))
            return Token(PREFIX_KW, "@prefix", line, col)
        if text.startswith("@base", self.pos):
            self.error("@base / relative IRIs are not supported", ErrorKind.UNSUPPORTED)
        m = _LANG.match(text, self.pos + 1)
        if not m:
            self.error("bad language tag or directive")
        self._advance(1 + len(m.group(0)))
        return Token(LANGTAG, m.group(0), line, col)

    def _blank(self, line, col) -> Token:
        text = self.text
        if not text.startswith("_:", self.pos):
            self.error("bad blank node (expected '_:')")
        m = _PN_LOCAL.match(text, self.pos + 2)
        if not m:
            self.error("blank node label missing")
        self._advance(2 + len(m.group(0)))
        return Token(BLANK, m.group(0), line, col)

    def _number(self, line, col) -> Token:
        m = _NUMBER.match(self.text, self.pos)
        if not m:
            self.error("malformed number")
        lexeme = m.group(0)
        after = self.text[self.pos + len(lexeme) : self.pos + len(lexeme) + 1]
        if after in ("e", "E"):
            self.error("double shorthand (exponent) is not supported", ErrorKind.UNSUPPORTED)
        self._advance(len(lexeme))
        kind = DECIMAL if "." in lexeme else INTEGER
        return Token(kind, lexeme, line, col)

    def _name(self, line, col) -> Token:
        text = self.text
        m = _BARE.match(text, self.pos)
        word = m.group(0) if m else ""
        after = text[self.pos + len(word) : self.pos + len(word) + 1]
        if after != ":":
            # bare keyword, not a prefixed name
            if word == "a":
                self._advance(1)
                return Token(A_KW, "a", line, col)
            if word in ("true", "false"):
                self.error("boolean shorthand is not supported", ErrorKind.UNSUPPORTED)
            if word in ("PREFIX", "BASE"):
                self.error(f"SPARQL-style {word} is not supported (use @prefix)", ErrorKind.UNSUPPORTED)
            if word in ("GRAPH",):
                self.error("GRAPH keyword is not supported (use `<name> { ... }`)", ErrorKind.UNSUPPORTED)
            self.error(f"unexpected word {word!r}", ErrorKind.SYNTAX)
        self._advance(len(word) + 1)
        m2 = _PN_LOCAL.match(text, self.pos)
        local = ""
        if m2:
            local = m2.group(0)
            self._advance(len(local))
        return Token(PNAME, word, line, col, extra=local)


class _Parser:
    def __init__(self, text: str):
        self.toks = _Lexer(text).tokens()
        self.i = 0
        self.prefixes: dict = {}
        self.bnode_map: dict = {}
        self.bnode_counter = 0
        self.pending: list = []  # collection-chain statements of the statement in flight
        self.default: list = []
        self.named: dict = {}

    # --- token helpers ---

    def peek(self, ahead: int = 0) -> Token:
        j = min(self.i + ahead, len(self.toks) - 1)
        return self.toks[j]

    def next(self) -> Token:
        tok = self.toks[self.i]
        if tok.kind != EOF:
            self.i += 1
        return tok

    def expect(self, kind: str, what: str) -> Token:
        tok = self.next()
        if tok.kind != kind:
            self.error(f"expected {what}, got {tok.value!r}", tok)
        return tok

    def error(self, message: str, tok: Token, kind: ErrorKind = ErrorKind.SYNTAX):
        raise ParseError(message, tok.line, tok.column, kind)

    # --- blank node bookkeeping ---

    def _labeled_bnode(self, original: str) -> BlankNode:
        if original not in self.bnode_map:
            self.bnode_map[original] = f"b{self.bnode_counter}"
            self.bnode_counter += 1
        return BlankNode(self.bnode_map[original], original=original)

    def _fresh_bnode(self) -> BlankNode:
        label = f"b{self.bnode_counter}"
        self.bnode_counter += 1
        return BlankNode(label)

    # --- grammar ---

    def parse(self) -> Dataset:
        while True:
            tok = self.peek()
            if tok.kind == EOF:
                break
            if tok.kind == PREFIX_KW:
                self._prefix_directive()
                continue
            # graph block vs ordinary triples: a single IRI term followed by '{'
            if tok.kind in (IRIREF, PNAME) and self._starts_graph_block():
                self._graph_block()
                continue
            statements = self._triples(in_block=False)
            self.expect(".", "'.' after statement")
            self.default.extend(statements)
        return Dataset(self.default, self.named)

    def _starts_graph_block(self) -> bool:
        return self.peek(1).kind == "{"

    def _prefix_directive(self) -> None:
        self.next()  # @prefix
        tok = self.next()
        if tok.kind != PNAME or tok.extra:
            self.error("expected prefix name ending in ':'", tok)
        iri_tok = self.expect(IRIREF, "namespace IRI")
        self._check_absolute(iri_tok)
        self.expect(".", "'.' after @prefix directive")
        self.prefixes[tok.value] = iri_tok.value

    def _check_absolute(self, tok: Token) -> None:
        if not _ABSOLUTE_IRI.match(tok.value):
            self.error(f"relative IRI <{tok.value}> (no @base support)", tok, ErrorKind.RELATIVE_IRI)

    def _graph_block(self) -> None:
        name = self._term(position="graph name")
        if not isinstance(name, Iri):
            self.error("graph name must be an IRI", self.peek())
        self.expect("{", "'{'")
        statements = self.named.setdefault(name, [])
        while True:
            tok = self.peek()
            if tok.kind == "}":
                self.next()
                break
            if tok.kind == EOF:
                self.error("unterminated graph block", tok)
            statements.extend(self._triples(in_block=True))
            sep = self.peek()
            if sep.kind == ".":
                self.next()
            elif sep.kind != "}":
                self.error(f"expected '.' or '}}', got {sep.value!r}", sep)

    def _triples(self, in_block: bool) -> list:
        self.pending = []
        first_tok = self.peek()
        subject = self._term(position="subject")
        if isinstance(subject, Literal):
            self.error("literal cannot be the subject of a statement", first_tok)
        statements = []
        self._predicate_object_list(subject, statements)
        return statements + self.pending

    def _predicate_object_list(self, subject, statements: list) -> None:
        while True:
            predicate = self._verb()
            while True:
                obj = self._term(position="object")
                statements.append(Statement(subject, predicate, obj))
                if self.peek().kind == ",":
                    self.next()
                    continue
                break
            if self.peek().kind == ";":
                # swallow repeats; a dangling ';' before the terminator is legal
                while self.peek().kind == ";":
                    self.next()
                if self.peek().kind in (".", "}"):
                    return
                continue
            return

    def _verb(self) -> Iri:
        tok = self.peek()
        if tok.kind == A_KW:
            self.next()
            return Iri(RDF_TYPE)
        term = self._term(position="predicate")
        if not isinstance(term, Iri):
            self.error("predicate must be an IRI", tok)
        return term

    def _term(self, position: str):
        tok = self.next()
        if tok.kind == IRIREF:
            self._check_absolute(tok)
            return Iri(tok.value)
        if tok.kind == PNAME:
            if tok.value not in self.prefixes:
                self.error(f"undefined prefix '{tok.value}:'", tok, ErrorKind.UNDEFINED_PREFIX)
            return Iri(self.prefixes[tok.value] + (tok.extra or ""))
        if tok.kind == BLANK:
            return self._labeled_bnode(tok.value)
        if tok.kind == "[":
            close = self.next()
            if close.kind != "]":
                self.error(
                    "blank node property lists [ ... ] are not supported (only anonymous [])",
                    close,
                    ErrorKind.UNSUPPORTED,
                )
            return self._fresh_bnode()
        if tok.kind == STRING:
            return self._literal_tail(tok)
        if tok.kind == INTEGER:
            return Literal(tok.value, Iri(XSD_INTEGER))
        if tok.kind == DECIMAL:
            return Literal(tok.value, Iri(XSD_DECIMAL))
        if tok.kind == "<<":
            return self._quoted(tok)
        if tok.kind == "(":
            return self._collection(tok, position)
        self.error(f"expected {position}, got {tok.value!r}", tok)

    def _literal_tail(self, tok: Token) -> Literal:
        nxt = self.peek()
        if nxt.kind == LANGTAG:
            self.next()
            return Literal(tok.value, Iri(RDF_LANG_STRING), lang=nxt.value)
        if nxt.kind == "^^":
            self.next()
            dt_tok = self.next()
            if dt_tok.kind == IRIREF:
                self._check_absolute(dt_tok)
                dt = dt_tok.value
            elif dt_tok.kind == PNAME:
                if dt_tok.value not in self.prefixes:
                    self.error(
                        f"undefined prefix '{dt_tok.value}:'", dt_tok, ErrorKind.UNDEFINED_PREFIX
                    )
                dt = self.prefixes[dt_tok.value] + (dt_tok.extra or "")
            else:
                self.error("expected datatype IRI after '^^'", dt_tok)
            if dt == RDF_LANG_STRING:
                self.error("rdf:langString requires a language tag, not '^^'", dt_tok)
            return Literal(tok.value, Iri(dt))
        return Literal(tok.value, Iri(XSD_STRING))

    def _quoted(self, open_tok: Token) -> QuotedTriple:
        subject = self._term(position="quoted subject")
        if isinstance(subject, Literal):
            self.error("literal cannot be the subject of a quoted triple", open_tok)
        predicate = self._verb()
        obj = self._term(position="quoted object")
        self.expect(">>", "'>>'")
        return QuotedTriple(Statement(subject, predicate, obj))

    def _collection(self, open_tok: Token, position: str):
        if position.startswith("quoted"):
            self.error(
                "collections inside quoted triples are not supported",
                open_tok,
                ErrorKind.UNSUPPORTED,
            )
        elements = []
        while True:
            tok = self.peek()
            if tok.kind == ")":
                self.next()
                break
            if tok.kind == EOF:
                self.error("unterminated collection", tok)
            elements.append(self._term(position="collection element"))
        if not elements:
            return Iri(RDF_NIL)
        cells = [self._fresh_bnode() for _ in elements]
        first, rest = Iri(RDF_FIRST), Iri(RDF_REST)
        for idx, element in enumerate(elements):
            self.pending.append(Statement(cells[idx], first, element))
            tail = cells[idx + 1] if idx + 1 < len(cells) else Iri(RDF_NIL)
            self.pending.append(Statement(cells[idx], rest, tail))
        return cells[0]


def parse_turtle_star(text: str) -> Dataset:
    """Parse a Turtle-star document (TriG-style graph blocks allowed)."""
    return _Parser(text).parse()


def parse_file(path: str) -> Dataset:
    with open(path, "r", encoding="utf-8") as handle:
        return parse_turtle_star(handle.read())


def to_turtle_star(dataset: Dataset) -> str:
    """Serialize a dataset so parse_turtle_star(to_turtle_star(d)) ~ d.

    Emits full IRIs and explicit datatypes; round-trips are equal up to
    blank-node relabeling (the parser re-canonicalizes labels).
    """
    lines = []
    for st in dataset.default:
        lines.append(serialize_statement(st) + " .")
    for name in sorted(dataset.named, key=lambda iri: iri.value):
        lines.append(f"<{name.value}> {{")
        for st in dataset.named[name]:
            lines.append("    " + serialize_statement(st) + " .")
        lines.append("}")
    return "\n".join(lines) + ("\n" if lines else "")
