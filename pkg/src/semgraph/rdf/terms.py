"""RDF term universe: IRIs, literals, blank nodes, triples."""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Optional, Set, Union

_BLANK_LABEL_RE = re.compile(r"^[A-Za-z0-9_]+$")
_IRI_FORBIDDEN = set('<>"') | {" "} | {chr(c) for c in range(0x21)}

XSD = "http://www.w3.org/2001/XMLSchema#"
RDF_NS = "http://www.w3.org/1999/02/22-rdf-syntax-ns#"
RDFS_NS = "http://www.w3.org/2000/01/rdf-schema#"

RDF_TYPE = RDF_NS + "type"
RDFS_LABEL = RDFS_NS + "label"
RDFS_SUBCLASSOF = RDFS_NS + "subClassOf"

XSD_INTEGER = XSD + "integer"
XSD_DECIMAL = XSD + "decimal"
XSD_DOUBLE = XSD + "double"
XSD_BOOLEAN = XSD + "boolean"


@dataclass(frozen=True)
class Iri:
    value: str

    def __post_init__(self):
        if not self.value:
            raise ValueError("empty IRI")
        bad = _IRI_FORBIDDEN.intersection(self.value)
        if bad:
            raise ValueError(f"forbidden character in IRI: {bad!r}")


@dataclass(frozen=True)
class Literal:
    lexical: str
    datatype: Optional[str] = None
    lang: Optional[str] = None

    def __post_init__(self):
        if self.datatype is not None and self.lang is not None:
            raise ValueError("literal cannot carry both datatype and language tag")


@dataclass(frozen=True)
class Blank:
    label: str

    def __post_init__(self):
        if not _BLANK_LABEL_RE.match(self.label):
            raise ValueError(f"invalid blank node label: {self.label!r}")


Term = Union[Iri, Literal, Blank]


@dataclass(frozen=True)
class Triple:
    s: Term
    p: Term
    o: Term

    def __post_init__(self):
        if isinstance(self.s, Literal):
            raise ValueError("literal subject")
        if not isinstance(self.p, Iri):
            raise ValueError("predicate must be an IRI")


TripleSet = Set[Triple]


def term_sort_key(t: Term):
    """Total order over terms: Blank < Iri < Literal, then by lexical content."""
    if isinstance(t, Blank):
        return (0, t.label, "", "")
    if isinstance(t, Iri):
        return (1, t.value, "", "")
    return (2, t.lexical, t.datatype or "", t.lang or "")


def triple_sort_key(t: Triple):
    return (term_sort_key(t.s), term_sort_key(t.p), term_sort_key(t.o))


def numeric_value(t: Term) -> Optional[float]:
    """Numeric interpretation of a literal with a numeric xsd datatype, else None."""
    if isinstance(t, Literal) and t.datatype in (XSD_INTEGER, XSD_DECIMAL, XSD_DOUBLE):
        try:
            return float(t.lexical)
        except ValueError:
            return None
    return None
