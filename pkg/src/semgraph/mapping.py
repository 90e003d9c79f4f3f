"""Bidirectional mapping between RDF triple sets and semantic graphs.

The "shared subset" of the two data models is defined by the rule table in
import_triples/export_graph: rdf:type drives concept classes, rdfs:label
drives names, rdfs:subClassOf drives the class hierarchy, literal-object
triples become attributes, IRI-object triples become relations.  Accessions
and source tags live outside the subset and are never exported.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Optional, Tuple

from .errors import BlankNodePresent
from .graph import THING_CLASS, AttributeValue, SemanticGraph
from .rdf.ntriples import serialize_statement
from .rdf.terms import (RDF_TYPE, RDFS_LABEL, RDFS_SUBCLASSOF,
                        Blank, Iri, Literal, Triple, TripleSet)


@dataclass
class ImportReport:
    triples_seen: int = 0
    concepts_created: int = 0
    concepts_merged: int = 0
    relations_created: int = 0
    attributes_added: int = 0
    classes_registered: int = 0
    skipped: List[Tuple[Triple, str]] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "triples_seen": self.triples_seen,
            "concepts_created": self.concepts_created,
            "concepts_merged": self.concepts_merged,
            "relations_created": self.relations_created,
            "attributes_added": self.attributes_added,
            "classes_registered": self.classes_registered,
            "skipped": [[serialize_statement(t), reason] for t, reason in self.skipped],
        }


def skolemize(ts: TripleSet, scope: str) -> TripleSet:
    """Replace every blank node with a deterministic IRI scoped by the data
    source, so merge-by-IRI applies uniformly."""
    if not scope:
        raise ValueError("skolem scope must be non-empty")

    def conv(t):
        if isinstance(t, Blank):
            return Iri(f"urn:skolem:{scope}:{t.label}")
        return t

    return {Triple(conv(t.s), conv(t.p), conv(t.o)) for t in ts}


def _looks_like_iri(s: str) -> bool:
    if ":" not in s:
        return False
    try:
        Iri(s)
    except ValueError:
        return False
    return True


def import_triples(graph: SemanticGraph, ts: TripleSet, source: str) -> ImportReport:
    """Apply the mapping rules to each triple in canonical order.

    Re-importing the same set is a no-op on graph structure.
    """
    for t in ts:
        for term in (t.s, t.p, t.o):
            if isinstance(term, Blank):
                raise BlankNodePresent(
                    f"blank node in {serialize_statement(t)}; skolemize first")

    report = ImportReport()

    def ensure_concept(iri: str) -> int:
        existing = iri in graph.iri_index
        cid = graph.create_concept(iri, THING_CLASS, source)
        if existing:
            report.concepts_merged += 1
        else:
            report.concepts_created += 1
        return cid

    for t in sorted(ts, key=serialize_statement):
        report.triples_seen += 1
        s, p, o = t.s, t.p, t.o
        assert isinstance(s, Iri)
        if p.value == RDF_TYPE and isinstance(o, Iri):
            cid = ensure_concept(s.value)
            concept = graph.concepts[cid]
            if o.value not in graph.classes:
                graph.register_class(o.value)
                report.classes_registered += 1
            if concept.class_id == THING_CLASS:
                concept.class_id = o.value
            elif concept.class_id != o.value:
                # extra types demoted to attributes (smallest class IRI wins)
                attr = AttributeValue(RDF_TYPE, o.value)
                if attr not in concept.attributes:
                    concept.attributes.add(attr)
                    report.attributes_added += 1
            continue
        if p.value == RDFS_SUBCLASSOF and isinstance(o, Iri):
            for ciri in (s.value, o.value):
                if ciri not in graph.classes:
                    graph.register_class(ciri)
                    report.classes_registered += 1
            if not graph.set_class_parent(s.value, o.value):
                report.skipped.append((t, "subclass edge would close a cycle"))
            continue
        if p.value == RDFS_LABEL and isinstance(o, Literal) \
                and o.datatype is None and o.lang is None:
            cid = ensure_concept(s.value)
            concept = graph.concepts[cid]
            if concept.name is None:
                concept.name = o.lexical
            elif concept.name != o.lexical:
                attr = AttributeValue(RDFS_LABEL, o.lexical)
                if attr not in concept.attributes:
                    concept.attributes.add(attr)
                    report.attributes_added += 1
            continue
        if isinstance(o, Literal):
            cid = ensure_concept(s.value)
            concept = graph.concepts[cid]
            attr = AttributeValue(p.value, o.lexical, o.datatype, o.lang)
            if attr not in concept.attributes:
                concept.attributes.add(attr)
                report.attributes_added += 1
            continue
        # IRI object: relation
        from_id = ensure_concept(s.value)
        to_id = ensure_concept(o.value)
        if p.value not in graph.rtypes:
            graph.register_rtype(p.value)
        before = len(graph.relations)
        graph.add_relation(from_id, to_id, p.value, source)
        if len(graph.relations) > before:
            report.relations_created += 1
    return report


def _subject_iri(concept) -> Iri:
    if concept.iri is not None:
        return Iri(concept.iri)
    return Iri(f"urn:concept:{concept.id}")


def export_graph_with_report(graph: SemanticGraph) -> Tuple[TripleSet, dict]:
    """Inverse mapping rules; returns the triples plus counts of entities
    outside the shared subset that were not exported."""
    out: TripleSet = set()
    not_exported = {"accessions": 0, "source_tags": 0,
                    "non_iri_attributes": 0, "non_iri_relations": 0,
                    "non_iri_classes": 0}
    for concept in graph.concepts.values():
        subj = _subject_iri(concept)
        if concept.class_id != THING_CLASS:
            if _looks_like_iri(concept.class_id):
                out.add(Triple(subj, Iri(RDF_TYPE), Iri(concept.class_id)))
            else:
                not_exported["non_iri_classes"] += 1
        if concept.name is not None:
            out.add(Triple(subj, Iri(RDFS_LABEL), Literal(concept.name)))
        for attr in concept.attributes:
            if not _looks_like_iri(attr.name):
                not_exported["non_iri_attributes"] += 1
                continue
            if attr.name == RDF_TYPE and attr.datatype is None \
                    and attr.lang is None and _looks_like_iri(attr.lexical):
                # demoted extra rdf:type entries go back out as IRIs
                out.add(Triple(subj, Iri(RDF_TYPE), Iri(attr.lexical)))
            else:
                out.add(Triple(subj, Iri(attr.name),
                               Literal(attr.lexical, attr.datatype, attr.lang)))
        not_exported["accessions"] += len(concept.accessions)
        not_exported["source_tags"] += len(concept.sources)
    for rel in graph.relations.values():
        if not _looks_like_iri(rel.rtype):
            not_exported["non_iri_relations"] += 1
            continue
        out.add(Triple(_subject_iri(graph.concepts[rel.from_id]),
                       Iri(rel.rtype),
                       _subject_iri(graph.concepts[rel.to_id])))
    for cc in graph.classes.values():
        if cc.parent is not None and _looks_like_iri(cc.id) \
                and _looks_like_iri(cc.parent):
            out.add(Triple(Iri(cc.id), Iri(RDFS_SUBCLASSOF), Iri(cc.parent)))
    return out, not_exported


def export_graph(graph: SemanticGraph) -> TripleSet:
    return export_graph_with_report(graph)[0]
