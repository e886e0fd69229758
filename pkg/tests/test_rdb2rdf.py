import random
from pathlib import Path

import pytest

from semaps.errors import ParseError, ValidationError
from semaps.rdb2rdf import (
    ConstantSpec,
    LiteralSpec,
    TableData,
    apply_mapping,
    parse_mapping,
    read_csv,
)
from semaps.rdf.terms import Iri, Literal, Triple
from semaps.rdf.turtle import serialize_turtle

MAPPING_DIR = Path(__file__).resolve().parent.parent / "fixtures" / "mapping"

MINIMAL = """
prefix ex: <urn:x/>
table people columns id,name
  subject ex:person/{id}
  property ex:name literal {name}
"""


class TestParseMapping:
    def test_minimal(self):
        (rule,) = parse_mapping(MINIMAL)
        assert rule.table == "people"
        assert rule.subject_template == "urn:x/person/{id}"
        assert rule.type_iri is None
        assert rule.properties == [("urn:x/name", LiteralSpec("name"))]

    def test_unknown_column_in_template(self):
        text = MINIMAL.replace("{id}", "{uuid}")
        with pytest.raises(ParseError) as err:
            parse_mapping(text)
        assert "uuid" in str(err.value)

    def test_markers_fixture_has_six_properties(self):
        rules = parse_mapping((MAPPING_DIR / "markers.map").read_text(encoding="utf-8"))
        (rule,) = rules
        assert len(rule.properties) == 6
        assert rule.type_iri == "http://semaps.example/ns#Marker"

    def test_relative_iri_after_expansion(self):
        with pytest.raises(ParseError) as err:
            parse_mapping("table t columns id\n  subject {id}\n")
        assert "relative" in str(err.value).lower()

    def test_subject_required(self):
        with pytest.raises(ParseError):
            parse_mapping("prefix ex: <urn:x/>\ntable t columns id\n  type ex:T\n")

    def test_error_carries_line_number(self):
        text = "prefix ex: <urn:x/>\ntable t columns id\n  subject ex:t/{id}\n  banana 1\n"
        with pytest.raises(ParseError) as err:
            parse_mapping(text)
        assert err.value.line == 4

    def test_constant_specs(self):
        text = (
            "prefix ex: <urn:x/>\n"
            "table t columns id\n"
            "  subject ex:t/{id}\n"
            "  property ex:state constant open\n"
            "  property ex:seeAlso constant <urn:other:place>\n"
            "  property ex:kind constant ex:Thing\n"
        )
        (rule,) = parse_mapping(text)
        specs = dict(rule.properties)
        assert specs["urn:x/state"] == ConstantSpec(Literal("open"))
        assert specs["urn:x/seeAlso"] == ConstantSpec(Iri("urn:other:place"))
        assert specs["urn:x/kind"] == ConstantSpec(Iri("urn:x/Thing"))


class TestApplyMapping:
    def table(self, rows):
        return TableData("people", ("id", "name"), rows)

    def test_counting_rule(self):
        text = MINIMAL + "  type ex:Person\n  property ex:alias literal {name}\n"
        rules = parse_mapping(text)
        triples = apply_mapping(rules, [self.table([("1", "Ada")])])
        assert len(triples) == 3  # type + two properties
        assert Triple(Iri("urn:x/person/1"), Iri("urn:x/name"), Literal("Ada")) in triples

    def test_empty_cell_emits_no_triple(self):
        rules = parse_mapping(MINIMAL)
        triples = apply_mapping(rules, [self.table([("1", "")])])
        assert triples == set()

    def test_empty_cell_in_iri_template(self):
        text = (
            "prefix ex: <urn:x/>\n"
            "table people columns id,name\n"
            "  subject ex:person/{id}\n"
            "  property ex:page iri ex:page/{name}\n"
        )
        triples = apply_mapping(parse_mapping(text), [self.table([("1", "")])])
        assert triples == set()

    def test_percent_encoding(self):
        rules = parse_mapping(MINIMAL)
        triples = apply_mapping(rules, [self.table([("a b/c", "x")])])
        subjects = {t.subject.value for t in triples}
        assert subjects == {"urn:x/person/a%20b%2Fc"}

    def test_missing_table(self):
        with pytest.raises(ValidationError):
            apply_mapping(parse_mapping(MINIMAL), [])

    def test_rows_must_match_arity(self):
        with pytest.raises(ValidationError):
            TableData("people", ("id", "name"), [("1",)])

    def test_determinism(self):
        rules = parse_mapping(MINIMAL)
        rows = [(str(i), f"p{i}") for i in range(20)]
        a = apply_mapping(rules, [self.table(rows)])
        b = apply_mapping(rules, [self.table(list(reversed(rows)))])
        assert a == b

    def test_cardinality_bound_random_tables(self):
        rng = random.Random(17)
        base = parse_mapping(MINIMAL + "  type ex:Person\n")
        for _ in range(100):
            rows = [
                (str(i), rng.choice(["", f"name{rng.randint(0, 8)}"]))
                for i in range(rng.randint(0, 30))
            ]
            triples = apply_mapping(base, [self.table(rows)])
            properties = 1  # one property mapping
            assert len(triples) <= len(rows) * (1 + properties)
            if all(cell != "" for _, cell in rows):
                # ids are unique, so equality holds without empty cells
                assert len(triples) == len(rows) * (1 + properties)

    def test_unique_column_subjects_injective(self):
        rules = parse_mapping(MINIMAL)
        rows = [(str(i), "same") for i in range(15)]
        triples = apply_mapping(rules, [self.table(rows)])
        assert len({t.subject for t in triples}) == 15


class TestCsv:
    def test_read_markers_fixture(self):
        table = read_csv(MAPPING_DIR / "markers.csv")
        assert table.name == "markers"
        assert table.columns == ("id", "creator", "lat", "lon", "label", "created", "status")
        assert len(table.rows) == 10
        assert table.rows[0][4] == "Pothole on Main St, near 5th Ave"  # quoted comma

    def test_golden_markers_mapping(self):
        rules = parse_mapping((MAPPING_DIR / "markers.map").read_text(encoding="utf-8"))
        table = read_csv(MAPPING_DIR / "markers.csv")
        triples = apply_mapping(rules, [table])
        assert len(triples) == 68  # 10 rows x 7 - 2 empty cells
        rendered = serialize_turtle(
            triples,
            {
                "ex": "http://semaps.example/ns#",
                "rdf": "http://www.w3.org/1999/02/22-rdf-syntax-ns#",
                "xsd": "http://www.w3.org/2001/XMLSchema#",
            },
        )
        golden = (MAPPING_DIR / "markers-golden.ttl").read_text(encoding="utf-8")
        assert rendered == golden
