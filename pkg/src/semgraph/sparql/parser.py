"""Parser for the SPARQL subset.

Grammar: PREFIX*, (SELECT [DISTINCT] projection | CONSTRUCT { template })
WHERE { patterns and FILTERs }, then optional ORDER BY, LIMIT, OFFSET.
Prefixed names are expanded to full IRIs during parsing.
"""

from __future__ import annotations

import re
from typing import List, Optional, Tuple, Union

from ..errors import ParseError, UnboundProjection, UnknownPrefix
from ..rdf.terms import (RDF_TYPE, XSD_BOOLEAN, XSD_DECIMAL, XSD_INTEGER,
                         Blank, Iri, Literal, Term)
from .ast import (And, Comparison, FilterExpr, Not, Or, QueryAst,
                  TriplePattern, Variable, filter_variables)

_KEYWORDS = {"prefix", "select", "distinct", "construct", "where", "filter",
             "order", "by", "asc", "desc", "limit", "offset", "a"}
_IRIREF_RE = re.compile(r'<[^<>"{}|^`\\\x00-\x20]*>')
_VAR_RE = re.compile(r"\?([A-Za-z_][A-Za-z0-9_]*)")
_PNAME_RE = re.compile(r"([A-Za-z][A-Za-z0-9_\-]*)?:([A-Za-z0-9_][A-Za-z0-9_\-.]*)?")
_BLANK_RE = re.compile(r"_:([A-Za-z0-9_]+)")
_WORD_RE = re.compile(r"[A-Za-z][A-Za-z0-9_]*")
_DECIMAL_RE = re.compile(r"[+-]?[0-9]*\.[0-9]+")
_INTEGER_RE = re.compile(r"[+-]?[0-9]+")
_LANGTAG_RE = re.compile(r"@([a-zA-Z]+(?:-[a-zA-Z0-9]+)*)")
_STRING_RE = re.compile(r'"((?:[^"\\\n]|\\.)*)"')


class _Tok:
    __slots__ = ("kind", "value", "line", "col")

    def __init__(self, kind, value, line, col):
        self.kind = kind
        self.value = value
        self.line = line
        self.col = col

    def __repr__(self):
        return f"<{self.kind} {self.value!r}>"


def _decode_string(raw: str, line: int, col: int) -> str:
    escapes = {"\\": "\\", '"': '"', "n": "\n", "t": "\t", "r": "\r", "'": "'"}
    out, i = [], 0
    while i < len(raw):
        ch = raw[i]
        if ch != "\\":
            out.append(ch)
            i += 1
            continue
        esc = raw[i + 1] if i + 1 < len(raw) else ""
        if esc in escapes:
            out.append(escapes[esc])
            i += 2
        elif esc in "uU":
            width = 4 if esc == "u" else 8
            hexpart = raw[i + 2:i + 2 + width]
            if len(hexpart) != width:
                raise ParseError(f"bad \\{esc} escape", line, col)
            out.append(chr(int(hexpart, 16)))
            i += 2 + width
        else:
            raise ParseError(f"unknown escape \\{esc}", line, col)
    return "".join(out)


def _tokenize(text: str) -> List[_Tok]:
    toks: List[_Tok] = []
    line, col, i, n = 1, 1, 0, len(text)
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
        L, C = line, col

        def emit(kind, value, length):
            nonlocal i, col
            toks.append(_Tok(kind, value, L, C))
            i += length
            col += length

        m = _IRIREF_RE.match(text, i)
        if m:
            emit("iri", m.group()[1:-1], m.end() - i)
            continue
        m = _VAR_RE.match(text, i)
        if m:
            emit("var", m.group(1), m.end() - i)
            continue
        m = _STRING_RE.match(text, i)
        if m:
            emit("string", _decode_string(m.group(1), L, C), m.end() - i)
            continue
        m = _LANGTAG_RE.match(text, i)
        if m:
            emit("langtag", m.group(1).lower(), m.end() - i)
            continue
        m = _BLANK_RE.match(text, i)
        if m:
            emit("blank", m.group(1), m.end() - i)
            continue
        if text.startswith("^^", i):
            emit("^^", None, 2)
            continue
        for op in ("!=", "<=", ">=", "&&", "||"):
            if text.startswith(op, i):
                emit("op", op, 2)
                break
        else:
            if ch in "=<>!":
                emit("op", ch, 1)
                continue
            if ch in "{}().,;*":
                emit(ch, None, 1)
                continue
            m = _DECIMAL_RE.match(text, i)
            if m:
                emit("decimal", m.group(), m.end() - i)
                continue
            m = _INTEGER_RE.match(text, i)
            if m:
                emit("integer", m.group(), m.end() - i)
                continue
            m = _PNAME_RE.match(text, i)
            if m and ":" in m.group():
                local = m.group(2) or ""
                end = m.end()
                if local.endswith("."):
                    local = local[:-1]
                    end -= 1
                emit("pname", (m.group(1) or "", local), end - i)
                continue
            m = _WORD_RE.match(text, i)
            if m:
                word = m.group()
                low = word.lower()
                if low in ("true", "false"):
                    emit("boolean", low, len(word))
                elif low in _KEYWORDS:
                    emit("kw", low, len(word))
                else:
                    raise ParseError(f"unexpected word {word!r}", L, C)
                continue
            raise ParseError(f"unexpected character {ch!r}", L, C)
    toks.append(_Tok("eof", None, line, col))
    return toks


class _Parser:
    def __init__(self, toks: List[_Tok]):
        self.toks = toks
        self.i = 0
        self.prefixes = {}

    def peek(self) -> _Tok:
        return self.toks[self.i]

    def next(self) -> _Tok:
        t = self.toks[self.i]
        if t.kind != "eof":
            self.i += 1
        return t

    def expect(self, kind: str, value=None) -> _Tok:
        t = self.peek()
        if t.kind != kind or (value is not None and t.value != value):
            want = value if value is not None else kind
            raise ParseError(f"expected {want!r}, found {t.kind!r}", t.line, t.col)
        return self.next()

    def at_kw(self, word: str) -> bool:
        t = self.peek()
        return t.kind == "kw" and t.value == word

    def expand(self, tok: _Tok) -> Iri:
        prefix, local = tok.value
        if prefix not in self.prefixes:
            raise UnknownPrefix(f"undeclared prefix {prefix!r}", tok.line, tok.col)
        return Iri(self.prefixes[prefix] + local)

    # --- query ---

    def query(self) -> QueryAst:
        while self.at_kw("prefix"):
            self.next()
            t = self.peek()
            if t.kind != "pname" or t.value[1] != "":
                raise ParseError("expected prefix name", t.line, t.col)
            self.next()
            iri = self.expect("iri")
            self.prefixes[t.value[0]] = iri.value
        if self.at_kw("select"):
            q = self.select_query()
        elif self.at_kw("construct"):
            q = self.construct_query()
        else:
            t = self.peek()
            raise ParseError("expected SELECT or CONSTRUCT", t.line, t.col)
        q.prefixes = dict(self.prefixes)
        self.modifiers(q)
        t = self.peek()
        if t.kind != "eof":
            raise ParseError(f"trailing content {t.kind!r}", t.line, t.col)
        self.validate(q)
        return q

    def select_query(self) -> QueryAst:
        self.next()
        q = QueryAst(form="select")
        if self.at_kw("distinct"):
            self.next()
            q.distinct = True
        if self.peek().kind == "*":
            self.next()
            q.projection = None
        else:
            names = []
            while self.peek().kind == "var":
                names.append(self.next().value)
            if not names:
                t = self.peek()
                raise ParseError("expected projection variables or *", t.line, t.col)
            q.projection = names
        self.where_clause(q)
        return q

    def construct_query(self) -> QueryAst:
        self.next()
        q = QueryAst(form="construct")
        self.expect("{")
        q.template = self.pattern_block(allow_filters=False, filters_out=None)
        self.where_clause(q)
        return q

    def where_clause(self, q: QueryAst):
        if not self.at_kw("where"):
            t = self.peek()
            raise ParseError("expected WHERE", t.line, t.col)
        self.next()
        self.expect("{")
        q.where = self.pattern_block(allow_filters=True, filters_out=q.filters)

    def pattern_block(self, allow_filters: bool, filters_out) -> List[TriplePattern]:
        patterns: List[TriplePattern] = []
        while self.peek().kind != "}":
            if allow_filters and self.at_kw("filter"):
                self.next()
                self.expect("(")
                filters_out.append(self.or_expr())
                self.expect(")")
            else:
                s = self.pattern_term("subject")
                p = self.pattern_term("predicate")
                o = self.pattern_term("object")
                patterns.append(TriplePattern(s, p, o))
            if self.peek().kind == ".":
                self.next()
        self.expect("}")
        return patterns

    def pattern_term(self, position: str):
        t = self.peek()
        if t.kind == "var":
            self.next()
            return Variable(t.value)
        if t.kind == "iri":
            self.next()
            return Iri(t.value)
        if t.kind == "pname":
            self.next()
            return self.expand(t)
        if t.kind == "kw" and t.value == "a":
            self.next()
            return Iri(RDF_TYPE)
        if t.kind == "blank":
            self.next()
            return Blank(t.value)
        if position == "object":
            lit = self.maybe_literal()
            if lit is not None:
                return lit
        raise ParseError(f"expected {position} term, found {t.kind!r}", t.line, t.col)

    def maybe_literal(self) -> Optional[Literal]:
        t = self.peek()
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
                return Literal(t.value, lang=self.next().value)
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
        return None

    # --- filter expressions ---

    def or_expr(self) -> FilterExpr:
        left = self.and_expr()
        while self.peek().kind == "op" and self.peek().value == "||":
            self.next()
            left = Or(left, self.and_expr())
        return left

    def and_expr(self) -> FilterExpr:
        left = self.unary_expr()
        while self.peek().kind == "op" and self.peek().value == "&&":
            self.next()
            left = And(left, self.unary_expr())
        return left

    def unary_expr(self) -> FilterExpr:
        t = self.peek()
        if t.kind == "op" and t.value == "!":
            self.next()
            return Not(self.unary_expr())
        if t.kind == "(":
            self.next()
            inner = self.or_expr()
            self.expect(")")
            return inner
        return self.comparison()

    def comparison(self) -> Comparison:
        left = self.operand()
        t = self.peek()
        if t.kind != "op" or t.value not in ("=", "!=", "<", "<=", ">", ">="):
            raise ParseError("expected comparison operator", t.line, t.col)
        op = self.next().value
        right = self.operand()
        return Comparison(op, left, right)

    def operand(self) -> Union[Variable, Term]:
        t = self.peek()
        if t.kind == "var":
            self.next()
            return Variable(t.value)
        if t.kind == "iri":
            self.next()
            return Iri(t.value)
        if t.kind == "pname":
            self.next()
            return self.expand(t)
        lit = self.maybe_literal()
        if lit is not None:
            return lit
        raise ParseError(f"expected filter operand, found {t.kind!r}", t.line, t.col)

    # --- solution modifiers ---

    def modifiers(self, q: QueryAst):
        if self.at_kw("order"):
            self.next()
            if not self.at_kw("by"):
                t = self.peek()
                raise ParseError("expected BY after ORDER", t.line, t.col)
            self.next()
            if self.at_kw("asc") or self.at_kw("desc"):
                q.order_desc = self.next().value == "desc"
                self.expect("(")
                q.order_by = self.expect("var").value
                self.expect(")")
            else:
                q.order_by = self.expect("var").value
        if self.at_kw("limit"):
            self.next()
            q.limit = int(self.expect("integer").value)
        if self.at_kw("offset"):
            self.next()
            q.offset = int(self.expect("integer").value)

    # --- validation ---

    def validate(self, q: QueryAst):
        bound = set()
        for pat in q.where:
            bound.update(pat.variables())
        if q.form == "select" and q.projection is not None:
            for v in q.projection:
                if v not in bound:
                    raise UnboundProjection(f"projected variable ?{v} not in WHERE")
        if q.order_by is not None and q.order_by not in bound:
            raise UnboundProjection(f"ordered variable ?{q.order_by} not in WHERE")
        for f in q.filters:
            for v in filter_variables(f):
                if v not in bound:
                    raise UnboundProjection(f"filter variable ?{v} not in WHERE")
        if q.form == "construct":
            for pat in q.template:
                for term in (pat.s, pat.p, pat.o):
                    if isinstance(term, Blank):
                        raise ParseError("blank node in CONSTRUCT template", 0, 0)


def parse_query(text: str) -> QueryAst:
    return _Parser(_tokenize(text)).query()
