from .ntriples import parse_ntriples, serialize_ntriples
from .terms import Blank, Iri, Literal, Term, Triple, TripleSet
from .turtle import parse_turtle_subset

__all__ = ["Blank", "Iri", "Literal", "Term", "Triple", "TripleSet",
           "parse_ntriples", "serialize_ntriples", "parse_turtle_subset"]
