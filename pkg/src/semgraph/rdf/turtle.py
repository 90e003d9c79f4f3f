"""Turtle-subset parser.

Supported: @prefix declarations, prefixed names, the `a` keyword, `;`
predicate lists, `,` object lists, labeled blank nodes, and string /
integer / decimal / boolean literal shorthand.  Not supported (by
design): collections, anonymous blank nodes `[...]`, multiline strings,
relative IRIs, @base.
"""

from __future__ import annotations

import re
from typing import Dict, List, Optional, Tuple

from ..errors import ParseError, UnknownPrefix
from .terms import (RDF_TYPE, XSD_BOOLEAN, XSD_DECIMAL, XSD_INTEGER,
                    Blank, Iri, Literal, Term, Triple, TripleSet)

_DECIMAL_RE = re.compile(r"[+-]?[0-9]*\.[0-9]+")
_INTEGER_RE = re.compile(r"[+-]?[0-9]+")
_PNAME_RE = re.compile(r"([A-Za-z][A-Za-z0-9_\-]*)?:([A-Za-z0-9_][A-Za-z0-9_\-.]*)?")
_BLANK_RE = re.compile(r"_:([A-Za-z0-9_]+)")
_LANGTAG_RE = re.compile(r"@([a-zA-Z]+(?:-[a-zA-Z0-9]+)*)")


class _Tok:
    __slots__ = ("kind", "value", "line", "col")

    def __init__(self, kind: str, value, line: int, col: int):
        self.kind = kind
        self.value = value
        self.line = line
        self.col = col


def _tokenize(text: str) -> List[_Tok]:
    toks: List[_Tok] = []
    line, col = 1, 1
    i, n = 0, len(text)

    def err(msg: str) -> ParseError:
        return ParseError(msg, line, col)

    while i < n:
        ch = text[i]
        if ch == "\n":
            line += 1
            col = 1
            i += 1
            continue
        if ch in " \t\r":
            i += 1
            col += 1
            continue
        if ch == "#":
            while i < n and text[i] != "\n":
                i += 1
            continue
        start_line, start_col = line, col
        if ch == "<":
            j = text.find(">", i + 1)
            if j < 0 or "\n" in text[i:j]:
                raise err("unterminated IRI")
            raw = text[i + 1:j]
            try:
                iri = Iri(_decode_string(raw, start_line, start_col))
            except ValueError as e:
                raise ParseError(str(e), start_line, start_col)
            toks.append(_Tok("iri", iri.value, start_line, start_col))
            col += j + 1 - i
            i = j + 1
            continue
        if ch == '"':
            j = i + 1
            while j < n:
                if text[j] == "\\":
                    j += 2
                    continue
                if text[j] == '"' or text[j] == "\n":
                    break
                j += 1
            if j >= n or text[j] != '"':
                raise err("unterminated string literal")
            toks.append(_Tok("string", _decode_string(text[i + 1:j], start_line, start_col),
                             start_line, start_col))
            col += j + 1 - i
            i = j + 1
            continue
        if ch == "@":
            if text.startswith("@prefix", i):
                toks.append(_Tok("@prefix", None, start_line, start_col))
                i += 7
                col += 7
                continue
            m = _LANGTAG_RE.match(text, i)
            if m:
                toks.append(_Tok("langtag", m.group(1).lower(), start_line, start_col))
                col += m.end() - i
                i = m.end()
                continue
            raise err("bad @-token")
        if ch == "^" and text.startswith("^^", i):
            toks.append(_Tok("^^", None, start_line, start_col))
            i += 2
            col += 2
            continue
        if ch in ".;,":
            # '.' may also start a decimal; numbers are matched below first
            toks.append(_Tok(ch, None, start_line, start_col))
            i += 1
            col += 1
            continue
        m = _BLANK_RE.match(text, i)
        if m:
            toks.append(_Tok("blank", m.group(1), start_line, start_col))
            col += m.end() - i
            i = m.end()
            continue
        m = _DECIMAL_RE.match(text, i)
        if m:
            toks.append(_Tok("decimal", m.group(), start_line, start_col))
            col += m.end() - i
            i = m.end()
            continue
        m = _INTEGER_RE.match(text, i)
        if m and not _PNAME_RE.match(text, i):
            toks.append(_Tok("integer", m.group(), start_line, start_col))
            col += m.end() - i
            i = m.end()
            continue
        if text.startswith("true", i) and not _is_name_char(text, i + 4):
            toks.append(_Tok("boolean", "true", start_line, start_col))
            i += 4
            col += 4
            continue
        if text.startswith("false", i) and not _is_name_char(text, i + 5):
            toks.append(_Tok("boolean", "false", start_line, start_col))
            i += 5
            col += 5
            continue
        if ch == "a" and not _is_name_char(text, i + 1) and text[i + 1:i + 2] != ":":
            toks.append(_Tok("a", None, start_line, start_col))
            i += 1
            col += 1
            continue
        m = _PNAME_RE.match(text, i)
        if m and ":" in m.group():
            local = m.group(2) or ""
            if local.endswith("."):
                # trailing dot belongs to the statement terminator
                local = local[:-1]
                end = m.end() - 1
            else:
                end = m.end()
            toks.append(_Tok("pname", (m.group(1) or "", local), start_line, start_col))
            col += end - i
            i = end
            continue
        raise err(f"unexpected character {ch!r}")
    toks.append(_Tok("eof", None, line, col))
    return toks


def _is_name_char(text: str, i: int) -> bool:
    return i < len(text) and (text[i].isalnum() or text[i] in "_-")


def _decode_string(raw: str, line: int, col: int) -> str:
    out = []
    i, n = 0, len(raw)
    escapes = {"\\": "\\", '"': '"', "n": "\n", "t": "\t", "r": "\r"}
    while i < n:
        ch = raw[i]
        if ch != "\\":
            out.append(ch)
            i += 1
            continue
        i += 1
        if i >= n:
            raise ParseError("dangling backslash", line, col)
        esc = raw[i]
        if esc in escapes:
            out.append(escapes[esc])
            i += 1
        elif esc in "uU":
            width = 4 if esc == "u" else 8
            hexpart = raw[i + 1:i + 1 + width]
            if len(hexpart) != width:
                raise ParseError(f"bad \\{esc} escape", line, col)
            out.append(chr(int(hexpart, 16)))
            i += 1 + width
        else:
            raise ParseError(f"unknown escape \\{esc}", line, col)
    return "".join(out)


class _Parser:
    def __init__(self, toks: List[_Tok]):
        self.toks = toks
        self.i = 0
        self.prefixes: Dict[str, str] = {}

    def peek(self) -> _Tok:
        return self.toks[self.i]

    def next(self) -> _Tok:
        t = self.toks[self.i]
        if t.kind != "eof":
            self.i += 1
        return t

    def expect(self, kind: str) -> _Tok:
        t = self.peek()
        if t.kind != kind:
            raise ParseError(f"expected {kind!r}, found {t.kind!r}", t.line, t.col)
        return self.next()

    def expand(self, tok: _Tok) -> Iri:
        prefix, local = tok.value
        if prefix not in self.prefixes:
            raise UnknownPrefix(f"undeclared prefix {prefix!r}", tok.line, tok.col)
        return Iri(self.prefixes[prefix] + local)

    def parse(self) -> TripleSet:
        result: TripleSet = set()
        while self.peek().kind != "eof":
            if self.peek().kind == "@prefix":
                self.next()
                prefix = ""
                t = self.peek()
                if t.kind == "pname" and t.value[1] == "":
                    prefix = t.value[0]
                    self.next()
                else:
                    raise ParseError("expected prefix declaration name", t.line, t.col)
                iri = self.expect("iri")
                self.prefixes[prefix] = iri.value
                self.expect(".")
            else:
                self.triples(result)
        return result

    def term(self, position: str) -> Term:
        t = self.peek()
        if t.kind == "iri":
            self.next()
            return Iri(t.value)
        if t.kind == "pname":
            self.next()
            return self.expand(t)
        if t.kind == "blank":
            self.next()
            return Blank(t.value)
        if position == "object":
            if t.kind == "string":
                self.next()
                if self.peek().kind == "^^":
                    self.next()
                    dt = self.peek()
                    if dt.kind == "iri":
                        self.next()
                        return Literal(t.value, datatype=dt.value)
                    if dt.kind == "pname":
                        self.next()
                        return Literal(t.value, datatype=self.expand(dt).value)
                    raise ParseError("expected datatype IRI", dt.line, dt.col)
                if self.peek().kind == "langtag":
                    lang = self.next()
                    return Literal(t.value, lang=lang.value)
                return Literal(t.value)
            if t.kind == "integer":
                self.next()
                return Literal(t.value, datatype=XSD_INTEGER)
            if t.kind == "decimal":
                self.next()
                return Literal(t.value, datatype=XSD_DECIMAL)
            if t.kind == "boolean":
                self.next()
                return Literal(t.value, datatype=XSD_BOOLEAN)
        raise ParseError(f"expected {position} term, found {t.kind!r}", t.line, t.col)

    def verb(self) -> Iri:
        t = self.peek()
        if t.kind == "a":
            self.next()
            return Iri(RDF_TYPE)
        v = self.term("predicate")
        if not isinstance(v, Iri):
            raise ParseError("predicate must be an IRI", t.line, t.col)
        return v

    def triples(self, out: TripleSet):
        s = self.term("subject")
        while True:
            p = self.verb()
            while True:
                o = self.term("object")
                out.add(Triple(s, p, o))
                if self.peek().kind == ",":
                    self.next()
                    continue
                break
            if self.peek().kind == ";":
                self.next()
                if self.peek().kind == ".":  # tolerate trailing ';'
                    break
                continue
            break
        self.expect(".")


def parse_turtle_subset(text: str) -> TripleSet:
    """Parse the Turtle subset; equivalent documents yield the same set as
    parse_ntriples on their expanded form."""
    return _Parser(_tokenize(text)).parse()
