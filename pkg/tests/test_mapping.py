import random

import pytest
from hypothesis import given, settings, strategies as st

from semgraph.errors import BlankNodePresent
from semgraph.graph import Accession, AttributeValue, SemanticGraph
from semgraph.mapping import (export_graph, export_graph_with_report,
                              import_triples, skolemize)
from semgraph.rdf.terms import (RDF_TYPE, RDFS_LABEL, RDFS_SUBCLASSOF,
                                Blank, Iri, Literal, Triple, XSD_INTEGER)

EX = "http://ex/"
TYPE, LABEL, SUB = Iri(RDF_TYPE), Iri(RDFS_LABEL), Iri(RDFS_SUBCLASSOF)


def iri(name):
    return Iri(EX + name)


# --- randomized shared-subset generators ---

def random_shared_tripleset(rng: random.Random, max_triples: int = 40):
    """Triple sets inside the shared subset: IRI subjects, no blanks, no
    rdf:type with literal object, at most one subClassOf parent per class,
    acyclic hierarchy."""
    subjects = [iri(f"n{i}") for i in range(8)]
    classes = [iri(f"C{i}") for i in range(5)]
    preds = [iri(f"p{i}") for i in range(4)]
    ts = set()
    sub_children = set()
    for _ in range(rng.randint(0, max_triples)):
        roll = rng.random()
        s = rng.choice(subjects)
        if roll < 0.2:
            ts.add(Triple(s, TYPE, rng.choice(classes)))
        elif roll < 0.3:
            # child index strictly above parent index: acyclic by construction
            i = rng.randint(1, len(classes) - 1)
            j = rng.randrange(i)
            if classes[i].value not in sub_children:
                sub_children.add(classes[i].value)
                ts.add(Triple(classes[i], SUB, classes[j]))
        elif roll < 0.45:
            ts.add(Triple(s, LABEL, Literal(f"label{rng.randrange(4)}")))
        elif roll < 0.7:
            lit = Literal(str(rng.randint(0, 9)), datatype=XSD_INTEGER) \
                if rng.random() < 0.5 else Literal(f"v{rng.randrange(5)}")
            ts.add(Triple(s, rng.choice(preds), lit))
        else:
            ts.add(Triple(s, rng.choice(preds), rng.choice(subjects)))
    return ts


def random_shared_graph(rng: random.Random, max_nodes: int = 12) -> SemanticGraph:
    """Graphs whose every class id, rtype id, and attribute name is an IRI
    and every concept has an IRI and a non-Thing class."""
    g = SemanticGraph()
    classes = [EX + f"C{i}" for i in range(4)]
    for i, c in enumerate(classes):
        g.register_class(c, parent=classes[rng.randrange(i)] if i and rng.random() < 0.5 else None)
    ids = []
    for i in range(rng.randint(1, max_nodes)):
        cid = g.create_concept(EX + f"n{i}", rng.choice(classes), "gen")
        ids.append(cid)
        if rng.random() < 0.6:
            g.concepts[cid].name = f"name{rng.randrange(5)}"
        for _ in range(rng.randint(0, 3)):
            g.concepts[cid].attributes.add(AttributeValue(
                EX + f"attr{rng.randrange(3)}", f"v{rng.randrange(6)}",
                XSD_INTEGER if rng.random() < 0.3 else None))
        if rng.random() < 0.3:
            g.concepts[cid].accessions.add(Accession("DB", f"X{rng.randrange(4)}"))
    for _ in range(rng.randint(0, 2 * len(ids))):
        g.add_relation(rng.choice(ids), rng.choice(ids),
                       EX + f"r{rng.randrange(3)}", "gen")
    return g


def canonical_form(g: SemanticGraph):
    """IRI-keyed view used for isomorphism checks (ids abstracted away)."""
    concepts = {
        c.iri: (c.class_id, c.name, frozenset(c.attributes))
        for c in g.concepts.values()
    }
    relations = {
        (g.concepts[r.from_id].iri, r.rtype, g.concepts[r.to_id].iri)
        for r in g.relations.values()
    }
    hierarchy = {(c.id, c.parent) for c in g.classes.values()
                 if c.parent is not None}
    return concepts, relations, hierarchy


class TestSkolemize:
    def test_identity_without_blanks(self):
        ts = {Triple(iri("a"), iri("p"), iri("b"))}
        assert skolemize(ts, "s") == ts

    def test_blank_replaced_everywhere(self):
        ts = {Triple(Blank("b1"), iri("p"), Blank("b1")),
              Triple(Blank("b1"), iri("p"), iri("x"))}
        out = skolemize(ts, "s")
        sk = Iri("urn:skolem:s:b1")
        assert out == {Triple(sk, iri("p"), sk), Triple(sk, iri("p"), iri("x"))}

    def test_deterministic(self):
        ts = {Triple(Blank("b"), iri("p"), Literal("x"))}
        assert skolemize(ts, "s") == skolemize(ts, "s")

    def test_scope_disjointness(self):
        ts = {Triple(Blank("b"), iri("p"), Literal("x"))}
        a = {t.s for t in skolemize(ts, "s1")}
        b = {t.s for t in skolemize(ts, "s2")}
        assert a.isdisjoint(b)


class TestImportTriples:
    def test_type_rule(self):
        g = SemanticGraph()
        report = import_triples(g, {Triple(iri("a"), TYPE, iri("Protein"))}, "s")
        assert len(g.concepts) == 1 and len(g.relations) == 0
        assert g.concepts[1].class_id == EX + "Protein"
        assert report.concepts_created == 1

    def test_relation_rule(self):
        g = SemanticGraph()
        import_triples(g, {Triple(iri("a"), iri("interacts"), iri("b"))}, "s")
        assert len(g.concepts) == 2 and len(g.relations) == 1
        assert all(c.class_id == "Thing" for c in g.concepts.values())
        assert next(iter(g.relations.values())).rtype == EX + "interacts"

    def test_label_and_attribute(self):
        g = SemanticGraph()
        ts = {Triple(iri("a"), LABEL, Literal("kinase")),
              Triple(iri("a"), iri("mass"), Literal("42", datatype=XSD_INTEGER))}
        import_triples(g, ts, "s")
        # expected graph computed by applying the mapping rules by hand
        assert len(g.concepts) == 1
        c = g.concepts[1]
        assert c.name == "kinase"
        assert c.attributes == {AttributeValue(EX + "mass", "42", XSD_INTEGER)}

    def test_subclass_rule(self):
        g = SemanticGraph()
        import_triples(g, {Triple(iri("C1"), SUB, iri("C2"))}, "s")
        assert len(g.concepts) == 0
        assert g.classes[EX + "C1"].parent == EX + "C2"

    def test_subclass_cycle_skipped(self):
        g = SemanticGraph()
        ts = {Triple(iri("C1"), SUB, iri("C2")), Triple(iri("C2"), SUB, iri("C1"))}
        report = import_triples(g, ts, "s")
        assert len(report.skipped) == 1

    def test_multiple_types_smallest_wins(self):
        g = SemanticGraph()
        ts = {Triple(iri("a"), TYPE, iri("B")), Triple(iri("a"), TYPE, iri("A"))}
        import_triples(g, ts, "s")
        c = g.concepts[1]
        assert c.class_id == EX + "A"
        assert AttributeValue(RDF_TYPE, EX + "B") in c.attributes

    def test_label_conflict_first_wins(self):
        g = SemanticGraph()
        ts = {Triple(iri("a"), LABEL, Literal("b")), Triple(iri("a"), LABEL, Literal("a"))}
        import_triples(g, ts, "s")
        c = g.concepts[1]
        assert c.name == "a"  # canonical triple order
        assert AttributeValue(RDFS_LABEL, "b") in c.attributes

    def test_blank_rejected_untouched(self):
        g = SemanticGraph()
        with pytest.raises(BlankNodePresent):
            import_triples(g, {Triple(Blank("b"), iri("p"), iri("a"))}, "s")
        assert len(g.concepts) == 0

    def test_idempotent(self):
        rng = random.Random(42)
        ts = random_shared_tripleset(rng)
        g = SemanticGraph()
        import_triples(g, ts, "s")
        once = g.dump()
        import_triples(g, ts, "s")
        assert g.dump() == once

    def test_report_conservation(self):
        rng = random.Random(7)
        for _ in range(20):
            ts = random_shared_tripleset(rng)
            g = SemanticGraph()
            r = import_triples(g, ts, "s")
            assert r.triples_seen == len(ts)
            assert r.concepts_created + r.concepts_merged <= 2 * r.triples_seen


class TestExportGraph:
    def test_empty(self):
        assert export_graph(SemanticGraph()) == set()

    def test_inverse_of_type_rule(self):
        g = SemanticGraph()
        ts = {Triple(iri("a"), TYPE, iri("Protein"))}
        import_triples(g, ts, "s")
        assert export_graph(g) == ts

    def test_non_iri_entities_counted_not_exported(self):
        g = SemanticGraph()
        cid = g.create_concept(EX + "a", "PlainClass", "s")
        g.concepts[cid].accessions.add(Accession("DB", "X"))
        g.concepts[cid].attributes.add(AttributeValue("plain_attr", "v"))
        out, report = export_graph_with_report(g)
        assert out == set()
        assert report["non_iri_classes"] == 1
        assert report["non_iri_attributes"] == 1
        assert report["accessions"] == 1

    def test_anonymous_concept_gets_urn(self):
        g = SemanticGraph()
        cid = g.create_concept(None, EX + "C", "s")
        out = export_graph(g)
        assert out == {Triple(Iri(f"urn:concept:{cid}"), TYPE, iri("C"))}


class TestRoundTrips:
    @settings(max_examples=100, deadline=None)
    @given(st.integers(0, 10 ** 6))
    def test_triple_side(self, seed):
        ts = random_shared_tripleset(random.Random(seed))
        g = SemanticGraph()
        import_triples(g, ts, "s")
        assert export_graph(g) == ts

    @settings(max_examples=100, deadline=None)
    @given(st.integers(0, 10 ** 6))
    def test_graph_side(self, seed):
        g = random_shared_graph(random.Random(seed))
        g2 = SemanticGraph()
        import_triples(g2, export_graph(g), "reimport")
        a, b = canonical_form(g), canonical_form(g2)
        assert a[0] == b[0]  # concepts by IRI
        assert a[1] == b[1]  # relations
        assert a[2] == b[2]  # class hierarchy
