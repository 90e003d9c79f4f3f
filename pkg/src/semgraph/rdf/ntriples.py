"""N-Triples parsing and canonical serialization.

The supported grammar is W3C RDF 1.1 N-Triples minus relative IRIs.
Serialization is canonical: one statement per line, lines sorted
lexicographically, so equal sets always produce byte-identical output.
"""

from __future__ import annotations

import re
from typing import Optional, Tuple

from ..errors import ParseError
from .terms import Blank, Iri, Literal, Term, Triple, TripleSet

_LANGTAG_RE = re.compile(r"[a-zA-Z]+(-[a-zA-Z0-9]+)*")
_BLANK_RE = re.compile(r"[A-Za-z0-9_]+")

_ESCAPES = {"\\": "\\", '"': '"', "n": "\n", "t": "\t", "r": "\r"}
_UNESCAPES = {"\\": "\\\\", '"': '\\"', "\n": "\\n", "\t": "\\t", "\r": "\\r"}


class _LineCursor:
    """Character cursor over one line, reporting 1-based positions."""

    def __init__(self, text: str, line_no: int):
        self.text = text
        self.pos = 0
        self.line_no = line_no

    def error(self, message: str) -> ParseError:
        return ParseError(message, self.line_no, self.pos + 1)

    def peek(self) -> str:
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def advance(self) -> str:
        ch = self.peek()
        self.pos += 1
        return ch

    def skip_ws(self):
        while self.peek() in (" ", "\t"):
            self.pos += 1

    def expect(self, ch: str):
        if self.peek() != ch:
            raise self.error(f"expected {ch!r}")
        self.pos += 1

    def at_end(self) -> bool:
        return self.pos >= len(self.text)


def _decode_escape(cur: _LineCursor) -> str:
    # cursor sits just past the backslash
    ch = cur.advance()
    if ch in _ESCAPES:
        return _ESCAPES[ch]
    if ch == "u" or ch == "U":
        width = 4 if ch == "u" else 8
        hexpart = cur.text[cur.pos:cur.pos + width]
        if len(hexpart) != width or not all(c in "0123456789abcdefABCDEF" for c in hexpart):
            raise cur.error(f"bad \\{ch} escape")
        cur.pos += width
        code = int(hexpart, 16)
        if code > 0x10FFFF:
            raise cur.error("codepoint out of range")
        return chr(code)
    raise cur.error(f"unknown escape \\{ch}")


def _parse_iri(cur: _LineCursor) -> Iri:
    cur.expect("<")
    out = []
    while True:
        if cur.at_end():
            raise cur.error("unterminated IRI")
        ch = cur.advance()
        if ch == ">":
            break
        if ch == "\\":
            ch = _decode_escape(cur)
        if ch in '<>"{}|^`' or ch <= " ":
            raise cur.error(f"forbidden character in IRI: {ch!r}")
        out.append(ch)
    value = "".join(out)
    if not value:
        raise cur.error("empty IRI")
    return Iri(value)


def _parse_blank(cur: _LineCursor) -> Blank:
    cur.expect("_")
    cur.expect(":")
    m = _BLANK_RE.match(cur.text, cur.pos)
    if not m:
        raise cur.error("invalid blank node label")
    cur.pos = m.end()
    return Blank(m.group())


def _parse_literal(cur: _LineCursor) -> Literal:
    cur.expect('"')
    out = []
    while True:
        if cur.at_end():
            raise cur.error("unterminated string literal")
        ch = cur.advance()
        if ch == '"':
            break
        if ch == "\\":
            ch = _decode_escape(cur)
        out.append(ch)
    lexical = "".join(out)
    if cur.peek() == "^":
        cur.expect("^")
        cur.expect("^")
        dt = _parse_iri(cur)
        return Literal(lexical, datatype=dt.value)
    if cur.peek() == "@":
        cur.advance()
        m = _LANGTAG_RE.match(cur.text, cur.pos)
        if not m:
            raise cur.error("invalid language tag")
        cur.pos = m.end()
        # language tags are case-insensitive; lower-cased on parse
        return Literal(lexical, lang=m.group().lower())
    return Literal(lexical)


def _parse_subject(cur: _LineCursor) -> Term:
    if cur.peek() == "<":
        return _parse_iri(cur)
    if cur.peek() == "_":
        return _parse_blank(cur)
    raise cur.error("expected IRI or blank node as subject")


def _parse_object(cur: _LineCursor) -> Term:
    if cur.peek() == "<":
        return _parse_iri(cur)
    if cur.peek() == "_":
        return _parse_blank(cur)
    if cur.peek() == '"':
        return _parse_literal(cur)
    raise cur.error("expected IRI, blank node, or literal as object")


def parse_ntriples(text: str) -> TripleSet:
    """Parse an N-Triples document into a set of triples.

    Comment lines (#) and blank lines are skipped.  Raises ParseError with
    the line and column of the first malformed statement.
    """
    result: TripleSet = set()
    for line_no, raw in enumerate(text.split("\n"), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        cur = _LineCursor(raw, line_no)
        cur.skip_ws()
        s = _parse_subject(cur)
        cur.skip_ws()
        p = _parse_iri(cur)
        cur.skip_ws()
        o = _parse_object(cur)
        cur.skip_ws()
        cur.expect(".")
        cur.skip_ws()
        if not cur.at_end() and cur.peek() != "#":
            raise cur.error("trailing content after statement")
        result.add(Triple(s, p, o))
    return result


def _escape_lexical(s: str) -> str:
    out = []
    for ch in s:
        if ch in _UNESCAPES:
            out.append(_UNESCAPES[ch])
        elif ch < " ":
            out.append("\\u%04X" % ord(ch))
        else:
            out.append(ch)
    return "".join(out)


def serialize_term(t: Term) -> str:
    if isinstance(t, Iri):
        return f"<{t.value}>"
    if isinstance(t, Blank):
        return f"_:{t.label}"
    body = f'"{_escape_lexical(t.lexical)}"'
    if t.datatype is not None:
        return f"{body}^^<{t.datatype}>"
    if t.lang is not None:
        return f"{body}@{t.lang}"
    return body


def serialize_statement(t: Triple) -> str:
    return f"{serialize_term(t.s)} {serialize_term(t.p)} {serialize_term(t.o)} ."


def serialize_ntriples(ts: TripleSet) -> str:
    """Canonical N-Triples: sorted statements, one per line, trailing newline.

    Empty sets serialize to the empty string.
    """
    if not ts:
        return ""
    return "\n".join(sorted(serialize_statement(t) for t in ts)) + "\n"
