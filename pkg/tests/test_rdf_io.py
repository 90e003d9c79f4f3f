import random

import pytest
from hypothesis import given, settings, strategies as st

from semgraph.errors import ParseError, UnknownPrefix
from semgraph.rdf.ntriples import parse_ntriples, serialize_ntriples
from semgraph.rdf.terms import Blank, Iri, Literal, Triple
from semgraph.rdf.turtle import parse_turtle_subset

from conftest import random_tripleset

EX_A = Iri("http://ex/a")
EX_P = Iri("http://ex/p")
EX_B = Iri("http://ex/b")
RDF_TYPE = Iri("http://www.w3.org/1999/02/22-rdf-syntax-ns#type")


class TestParseNtriples:
    def test_single_iri_statement(self):
        ts = parse_ntriples("<http://ex/a> <http://ex/p> <http://ex/b> .")
        assert ts == {Triple(EX_A, EX_P, EX_B)}

    def test_empty_input(self):
        assert parse_ntriples("") == set()

    def test_comments_and_blank_lines_skipped(self):
        text = "# comment\n\n<http://ex/a> <http://ex/p> <http://ex/b> .\n"
        assert len(parse_ntriples(text)) == 1

    def test_escaped_quote_in_literal(self):
        ts = parse_ntriples('<http://ex/a> <http://ex/p> "say \\"hi\\"" .')
        (t,) = ts
        assert t.o == Literal('say "hi"')

    def test_all_escape_sequences(self):
        ts = parse_ntriples(
            '<http://ex/a> <http://ex/p> "\\\\ \\n \\t \\r \\u0041 \\U0001F600" .')
        (t,) = ts
        assert t.o.lexical == "\\ \n \t \r A \U0001F600"

    def test_blank_nodes(self):
        ts = parse_ntriples("_:b1 <http://ex/p> _:b2 .")
        (t,) = ts
        assert t.s == Blank("b1") and t.o == Blank("b2")

    def test_datatype_and_lang(self):
        ts = parse_ntriples(
            '<http://ex/a> <http://ex/p> "5"^^<http://www.w3.org/2001/XMLSchema#integer> .\n'
            '<http://ex/a> <http://ex/p> "hi"@EN-GB .')
        objs = {t.o for t in ts}
        assert Literal("5", datatype="http://www.w3.org/2001/XMLSchema#integer") in objs
        # language tags lower-cased on parse
        assert Literal("hi", lang="en-gb") in objs

    def test_duplicate_statements_collapse(self):
        text = "<http://ex/a> <http://ex/p> <http://ex/b> .\n" * 3
        assert len(parse_ntriples(text)) == 1

    @pytest.mark.parametrize("text,line,col", [
        ("<http://ex/a> <http://ex/p> .", 1, 29),
        ("<http://ex/a> <http://ex/p> <http://ex/b>", 1, 42),
        ('ok\n', 1, 1),
        ('<http://ex/a> <http://ex/p> "x" .\n<http://ex/a> <p .', 2, 18),
    ])
    def test_error_positions(self, text, line, col):
        with pytest.raises(ParseError) as exc:
            parse_ntriples(text)
        assert (exc.value.line, exc.value.column) == (line, col)

    def test_literal_subject_rejected(self):
        with pytest.raises(ParseError):
            parse_ntriples('"lit" <http://ex/p> <http://ex/b> .')


class TestSerializeNtriples:
    def test_empty_set(self):
        assert serialize_ntriples(set()) == ""

    def test_canonical_order_insensitive(self):
        triples = [Triple(EX_A, EX_P, Iri(f"http://ex/o{i}")) for i in range(3)]
        a = serialize_ntriples(set(triples))
        b = serialize_ntriples(set(reversed(triples)))
        assert a == b
        assert a.splitlines() == sorted(a.splitlines())

    def test_newline_escaped_and_round_trips(self):
        ts = {Triple(EX_A, EX_P, Literal("line1\nline2"))}
        out = serialize_ntriples(ts)
        assert "\\n" in out and "line1\nline2" not in out
        assert parse_ntriples(out) == ts

    @settings(max_examples=200, deadline=None)
    @given(st.integers(0, 2 ** 32 - 1))
    def test_round_trip_random_sets(self, seed):
        rng = random.Random(seed)
        ts = random_tripleset(rng, max_triples=30)
        assert parse_ntriples(serialize_ntriples(ts)) == ts


class TestTurtleSubset:
    def test_prefix_expansion(self):
        ts = parse_turtle_subset("@prefix ex: <http://ex/> . ex:a ex:p ex:b .")
        assert ts == {Triple(EX_A, EX_P, EX_B)}

    def test_a_keyword(self):
        ts = parse_turtle_subset("@prefix ex: <http://ex/> . ex:a a ex:C .")
        (t,) = ts
        assert t.p == RDF_TYPE

    def test_predicate_list(self):
        ts = parse_turtle_subset(
            "@prefix ex: <http://ex/> . ex:a ex:p ex:b ; ex:q ex:c .")
        expanded = parse_ntriples(
            "<http://ex/a> <http://ex/p> <http://ex/b> .\n"
            "<http://ex/a> <http://ex/q> <http://ex/c> .")
        assert ts == expanded

    def test_object_list(self):
        ts = parse_turtle_subset("@prefix ex: <http://ex/> . ex:a ex:p ex:b, ex:c .")
        assert len(ts) == 2

    def test_literal_shorthands(self):
        ts = parse_turtle_subset(
            "@prefix ex: <http://ex/> . ex:a ex:p 42 ; ex:p 4.2 ; ex:p true .")
        datatypes = {t.o.datatype for t in ts}
        assert datatypes == {
            "http://www.w3.org/2001/XMLSchema#integer",
            "http://www.w3.org/2001/XMLSchema#decimal",
            "http://www.w3.org/2001/XMLSchema#boolean",
        }

    def test_unknown_prefix(self):
        with pytest.raises(UnknownPrefix):
            parse_turtle_subset("ex:a ex:p ex:b .")

    def test_agreement_with_expanded_ntriples(self):
        ttl = """
@prefix ex: <http://ex/> .
@prefix rdfs: <http://www.w3.org/2000/01/rdf-schema#> .
ex:a a ex:Protein ;
    rdfs:label "kinase" ;
    ex:mass 42 ;
    ex:interacts ex:b, ex:c .
_:x ex:p "l"@en .
"""
        nt = """
<http://ex/a> <http://www.w3.org/1999/02/22-rdf-syntax-ns#type> <http://ex/Protein> .
<http://ex/a> <http://www.w3.org/2000/01/rdf-schema#label> "kinase" .
<http://ex/a> <http://ex/mass> "42"^^<http://www.w3.org/2001/XMLSchema#integer> .
<http://ex/a> <http://ex/interacts> <http://ex/b> .
<http://ex/a> <http://ex/interacts> <http://ex/c> .
_:x <http://ex/p> "l"@en .
"""
        assert parse_turtle_subset(ttl) == parse_ntriples(nt)

    def test_error_position(self):
        with pytest.raises(ParseError) as exc:
            parse_turtle_subset("@prefix ex: <http://ex/> .\nex:a ex:p ;")
        assert exc.value.line == 2
