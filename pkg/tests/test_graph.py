import itertools

import pytest
from hypothesis import given, strategies as st

from kgrec.graph import (
    IRI,
    KnowledgeGraph,
    Literal,
    NTriplesParseError,
    PatternQuery,
    Term,
    Triple,
    XSD_INTEGER,
    parse_ntriples,
    parse_term,
    pattern_match,
    read_ntriples,
    serialize_ntriples,
    subgraph_by_relation,
    var,
    write_ntriples,
)

from conftest import EX, triples


def t(s, p, o):
    return Triple(IRI(EX + s), IRI(EX + p), o if isinstance(o, Term) else IRI(EX + o))


class TestTerms:
    def test_relative_iri_rejected(self):
        with pytest.raises(ValueError):
            IRI("relative/path")

    def test_xsd_string_normalised(self):
        assert Literal("a", "http://www.w3.org/2001/XMLSchema#string") == Literal("a")

    def test_numeric_literal_validated(self):
        with pytest.raises(ValueError):
            Literal("12x", XSD_INTEGER)
        assert Literal(5).to_python() == 5 and Literal(2.5).to_python() == 2.5

    def test_literal_subject_rejected(self):
        with pytest.raises(ValueError):
            Triple(Literal("x"), IRI(EX + "p"), IRI(EX + "o"))

    def test_local_name(self):
        assert IRI("http://a.org/v#bodyStyle").local_name == "bodyStyle"
        assert IRI("http://a.org/data/tesla_m3").local_name == "tesla_m3"

    @given(triples)
    def test_parse_term_inverts_n3(self, tr):
        assert parse_term(tr.object.n3()) == tr.object


class TestParser:
    def test_accepts_forms(self):
        text = (
            "# comment\n"
            f"<{EX}a> <{EX}p> <{EX}b> .\n"
            "\n"
            f'<{EX}a> <{EX}q> "hi \\"there\\"\\n" .\r\n'
            f'<{EX}a> <{EX}r> "42"^^<{XSD_INTEGER}> . # trailing\n'
            f'<{EX}a> <{EX}s> "\\u00e9" .\n'
        )
        g = parse_ntriples(text)
        assert len(g) == 4
        assert t("a", "q", Literal('hi "there"\n')) in g
        assert t("a", "r", Literal(42)) in g
        assert t("a", "s", Literal("é")) in g

    @pytest.mark.parametrize(
        "bad",
        [
            f"<{EX}a> <{EX}p> <{EX}b>",  # no dot
            f"_:b0 <{EX}p> <{EX}b> .",  # blank node
            f'<{EX}a> <{EX}p> "x"@en .',  # language tag
            f"ex:a <{EX}p> <{EX}b> .",  # prefixed name
            f"<rel> <{EX}p> <{EX}b> .",  # relative IRI
            f'"lit" <{EX}p> <{EX}b> .',  # literal subject
            f'<{EX}a> <{EX}p> "\\q" .',  # unknown escape
            f'<{EX}a> <{EX}p> "1.5"^^<{XSD_INTEGER}> .',  # bad integer
            f"<{EX}a> <{EX}p> <{EX}b> . extra",
        ],
    )
    def test_rejects_with_line_number(self, bad):
        good = f"<{EX}a> <{EX}p> <{EX}c> .\n"
        with pytest.raises(NTriplesParseError) as e:
            parse_ntriples(good + "# c\n" + bad + "\n" + good)
        assert e.value.lineno == 3
        assert "line 3" in str(e.value)

    def test_first_error_wins(self):
        with pytest.raises(NTriplesParseError) as e:
            parse_ntriples(f"<{EX}a> <{EX}p> <{EX}b> .\nbad one\nbad two\n")
        assert e.value.lineno == 2

    def test_roundtrip_corpus(self, corpus_1000):
        text = serialize_ntriples(corpus_1000)
        g = parse_ntriples(text)
        assert len(g) == 1000
        assert serialize_ntriples(g) == text
        assert g.serialize() == text

    def test_file_roundtrip(self, tmp_path, corpus_1000):
        g = KnowledgeGraph(corpus_1000)
        write_ntriples(g, tmp_path / "g.nt")
        assert read_ntriples(tmp_path / "g.nt") == g

    @given(st.lists(triples, max_size=30))
    def test_serialize_parse_fixpoint(self, ts):
        text = serialize_ntriples(ts)
        assert serialize_ntriples(parse_ntriples(text)) == text
        assert set(parse_ntriples(text)) == set(ts)


class TestStore:
    def test_indexes(self):
        g = KnowledgeGraph([t("a", "p", "b"), t("a", "q", "c"), t("d", "p", "b")])
        assert len(g.by_subject(IRI(EX + "a"))) == 2
        assert len(g.by_object(IRI(EX + "b"))) == 2
        assert [x.value for x in g.relation_types] == [EX + "p", EX + "q"]
        assert len(subgraph_by_relation(g, IRI(EX + "p"))) == 2
        assert subgraph_by_relation(g, IRI(EX + "zzz")) == KnowledgeGraph()

    def test_duplicates_collapse(self):
        assert len(KnowledgeGraph([t("a", "p", "b")] * 3)) == 1

    @given(st.lists(triples, max_size=40))
    def test_relation_subgraphs_partition(self, ts):
        g = KnowledgeGraph(ts)
        parts = [subgraph_by_relation(g, p) for p in g.relation_types]
        assert sum(len(x) for x in parts) == len(g)
        assert set().union(*[set(x) for x in parts]) == set(g) if parts else len(g) == 0


def brute_force_match(g, patterns):
    """Every assignment of graph terms to variables that makes all patterns hold."""
    names = []
    for pat in patterns:
        for slot in pat:
            if not isinstance(slot, Term) and slot.name not in names:
                names.append(slot.name)
    terms = sorted({x for tr in g for x in (tr.subject, tr.predicate, tr.object)}, key=lambda x: x.n3())
    out = []
    for combo in itertools.product(terms, repeat=len(names)):
        b = dict(zip(names, combo))
        ok = True
        for pat in patterns:
            slots = [b[x.name] if not isinstance(x, Term) else x for x in pat]
            if not (slots[0].is_iri and slots[1].is_iri) or Triple(*slots) not in g:
                ok = False
                break
        if ok:
            out.append(b)
    return out


class TestQuery:
    def test_join(self):
        g = KnowledgeGraph([t("a", "p", "b"), t("b", "p", "c"), t("c", "q", "d")])
        q = PatternQuery([(var("x"), IRI(EX + "p"), var("y")), (var("y"), IRI(EX + "p"), var("z"))])
        assert pattern_match(g, q) == [{"x": IRI(EX + "a"), "y": IRI(EX + "b"), "z": IRI(EX + "c")}]

    def test_ground_and_empty(self):
        g = KnowledgeGraph([t("a", "p", "b")])
        assert pattern_match(g, PatternQuery([(IRI(EX + "a"), IRI(EX + "p"), IRI(EX + "b"))])) == [{}]
        assert pattern_match(g, PatternQuery([(IRI(EX + "a"), IRI(EX + "p"), IRI(EX + "zz"))])) == []

    def test_needs_a_pattern(self):
        with pytest.raises(ValueError):
            PatternQuery([])

    @given(
        st.lists(st.builds(lambda s, p, o: t(s, p, o), st.sampled_from("abc"), st.sampled_from("pq"), st.sampled_from("abc")), max_size=10),
        st.lists(
            st.tuples(
                st.sampled_from([var("x"), var("y"), IRI(EX + "a"), IRI(EX + "b")]),
                st.sampled_from([var("r"), IRI(EX + "p"), IRI(EX + "q")]),
                st.sampled_from([var("x"), var("y"), IRI(EX + "c")]),
            ),
            min_size=1,
            max_size=3,
        ),
    )
    def test_matches_brute_force(self, ts, patterns):
        g = KnowledgeGraph(ts)
        got = pattern_match(g, PatternQuery(patterns))
        want = brute_force_match(g, patterns)
        key = lambda b: sorted((k, v.n3()) for k, v in b.items())
        assert sorted(map(key, got)) == sorted(map(key, want))
        assert len(got) == len({tuple(key(b)) for b in got})
