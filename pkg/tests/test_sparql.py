import random

import pytest

from conftest import fixture_text
from oracle import as_multiset, brute_evaluate
from sparql_gen import random_pattern, random_store

from g2g.errors import ParseError, UndefinedPrefix, UnsupportedFeature
from g2g.g2gml import parse_g2gml
from g2g.rdf import RDF, RDFS, XSD, IRI, Literal, TripleStore, load_turtle
from g2g.sparql import (
    DEFAULT_PREFIXES, Filter, OptionalGroup, Path, TriplePattern, Var, evaluate, mandatory_vars,
    parse_pattern, parse_select, render_pattern, run_select,
)

EX = {"": "http://example.org/"}


def _body(g2g_name, index, kind="edge"):
    doc = parse_g2gml(fixture_text(g2g_name))
    maps = doc.edge_maps if kind == "edge" else doc.node_maps
    return maps[index].rdf_pattern.raw_text, doc.prefix_map


def test_emailed_pattern_shape():
    text, prefixes = _body("emails.g2g", 1)
    gp = parse_pattern(text, prefixes)
    tps = [e for e in gp.elements if isinstance(e, TriplePattern)]
    assert len(tps) == 4 and len({tp.s for tp in tps}) == 1
    assert isinstance(gp.elements[-1], OptionalGroup)
    assert len(gp.elements[-1].pattern.elements) == 1
    assert mandatory_vars(gp) == ["f", "p1", "p2", "y"]


def test_musician_sequence_path():
    text, prefixes = _body("musician.g2g", 0, "node")
    gp = parse_pattern(text, {**DEFAULT_PREFIXES, **prefixes})
    paths = [tp.p for tp in gp.triple_patterns() if isinstance(tp.p, Path)]
    assert paths == [Path((IRI("http://dbpedia.org/ontology/hometown"), IRI(RDFS + "label")))]


def test_a_is_rdf_type():
    gp = parse_pattern("?p a :Person .", EX)
    assert gp.elements == (TriplePattern(Var("p"), IRI(RDF + "type"), IRI("http://example.org/Person")),)


def test_dollar_variables():
    assert parse_pattern("$p a :Person .", EX) == parse_pattern("?p a :Person .", EX)


def test_person_pattern_over_emails():
    store = load_turtle(fixture_text("emails.ttl"))
    text, prefixes = _body("emails.g2g", 0, "node")
    rows = evaluate(parse_pattern(text, prefixes), store)
    assert sorted(r["n"].lexical for r in rows) == ["Alice", "Bob"]
    assert all(set(r) == {"p", "n"} for r in rows)


def test_emailed_over_attachments():
    store = load_turtle(fixture_text("emails_attachments.ttl"))
    text, prefixes = _body("emails.g2g", 1)
    rows = evaluate(parse_pattern(text, prefixes), store)
    assert len(rows) == 2 and len({r["f"] for r in rows}) == 1
    assert {r["y"] for r in rows} == {Literal("2017", datatype=XSD + "integer")}
    assert {r["a"].lexical for r in rows} == {"01.pdf", "02.pdf"}


def test_emailed_over_multi():
    store = load_turtle(fixture_text("emails_multi.ttl"))
    text, prefixes = _body("emails.g2g", 1)
    rows = evaluate(parse_pattern(text, prefixes), store)
    assert len(rows) == 2 and len({r["f"] for r in rows}) == 2
    assert sorted(r["y"].lexical for r in rows) == ["2017", "2018"]
    assert all("a" not in r for r in rows)


def test_empty_store():
    text, prefixes = _body("emails.g2g", 1)
    assert evaluate(parse_pattern(text, prefixes), TripleStore()) == []


def test_lang_filter_case_insensitive():
    store = load_turtle('<http://x/a> <http://x/l> "A"@EN , "B"@en-GB , "C"@fr , "D" .')
    rows = evaluate(parse_pattern('?s <http://x/l> ?l . FILTER(lang(?l) = "en")'), store)
    assert [r["l"].lexical for r in rows] == ["A"]


def test_lang_of_iri_filters_row():
    store = load_turtle("<http://x/a> <http://x/l> <http://x/b> .")
    assert evaluate(parse_pattern('?s <http://x/l> ?l . FILTER(lang(?l) = "")'), store) == []


def test_numeric_equality_by_value():
    store = load_turtle("<http://x/a> <http://x/v> 1.0 .")
    assert len(evaluate(parse_pattern("?s <http://x/v> ?v . FILTER(?v = 1)"), store)) == 1
    assert evaluate(parse_pattern('?s <http://x/v> ?v . FILTER(?v = "1.0")'), store) == []


def test_optional_keeps_rows():
    store = load_turtle("<http://x/a> <http://x/p> <http://x/b> . <http://x/c> <http://x/p> <http://x/d> ."
                        "<http://x/a> <http://x/q> 1 .")
    mandatory = evaluate(parse_pattern("?s <http://x/p> ?o ."), store)
    full = evaluate(parse_pattern("?s <http://x/p> ?o . OPTIONAL { ?s <http://x/q> ?v }"), store)
    for mu in mandatory:
        assert any(all(row[k] == v for k, v in mu.items()) for row in full)


def test_bind_str():
    store = load_turtle('<http://x/a> <http://x/l> "asthma"@en .')
    (row,) = evaluate(parse_pattern("?d <http://x/l> ?l . BIND(str(?l) AS ?n)"), store)
    assert row["n"] == Literal("asthma")


def test_blank_nodes_are_hidden_variables():
    store = load_turtle("<http://x/a> <http://x/p> [ <http://x/q> 1 ] .")
    rows = evaluate(parse_pattern("?s <http://x/p> [ <http://x/q> ?v ] ."), store)
    assert rows == [{"s": IRI("http://x/a"), "v": Literal("1", datatype=XSD + "integer")}]
    rows = evaluate(parse_pattern("?s <http://x/p> _:b . _:b <http://x/q> ?v ."), store)
    assert len(rows) == 1 and set(rows[0]) == {"s", "v"}


@pytest.mark.parametrize("text, exc", [
    ("{ ?s ?p ?o } UNION { ?s ?p ?o }", UnsupportedFeature),
    ("?s ?p ?o . MINUS { ?s ?p ?o }", UnsupportedFeature),
    ("?s ?p ?o . FILTER(regex(?o, \"x\"))", UnsupportedFeature),
    ("?s ?p ?o . FILTER(?o < 3)", UnsupportedFeature),
    ("?s <http://x/p>* ?o .", UnsupportedFeature),
    ("?s ex:p ?o .", UndefinedPrefix),
    ("?s ?p ?o . BIND(?o AS ?s)", ParseError),
    ("?s ?p", ParseError),
    ("?s ?p ?o . }", ParseError),
])
def test_parse_errors(text, exc):
    with pytest.raises(exc):
        parse_pattern(text, {})


def test_parse_error_position():
    with pytest.raises(ParseError) as info:
        parse_pattern("?s ?p ?o .\n?s ex:q ?o .", {})
    assert info.value.line == 2 and info.value.column == 4


def test_select_limit_offset():
    store = load_turtle(" ".join(f"<http://x/s> <http://x/p> {i} ." for i in range(10)))
    q = parse_select("SELECT ?o WHERE { ?s <http://x/p> ?o } LIMIT 3 OFFSET 4")
    assert [r["o"].lexical for r in run_select(q, store)] == ["4", "5", "6"]


def test_random_patterns_render_and_reparse():
    rng = random.Random(7)
    for _ in range(300):
        gp = random_pattern(rng)
        assert parse_pattern(render_pattern(gp), {}) == gp


def test_evaluate_matches_oracle_sample():
    # the full 200-store run lives in the acceptance suite
    rng = random.Random(11)
    for _ in range(40):
        triples = random_store(rng)
        gp = random_pattern(rng)
        got = evaluate(parse_pattern(render_pattern(gp), {}), TripleStore(triples))
        assert as_multiset(got) == as_multiset(brute_evaluate(gp, triples)), render_pattern(gp)


def test_filter_scope_is_whole_group():
    store = load_turtle("<http://x/a> <http://x/p> 1 .")
    gp = parse_pattern("FILTER(?o = 1) ?s <http://x/p> ?o .")
    assert isinstance(gp.elements[0], Filter)
    assert len(evaluate(gp, store)) == 1
