"""Polystore-model parsing and the database requirements view."""

import re

import pytest

from polyforge.dlsyntax import ParseError
from polyforge.mlmodel import (
    DbKind,
    MlAttribute,
    MlDatabase,
    MlEntity,
    MlModel,
    parse_ml,
    required_databases,
)

FOUR_KINDS_SOURCE = """\
// one database of every kind
entity Reading {
    id : int
    value : float
}
database measurements : relational {
    contains Reading
}
database documents : document { }
database history : column { }
database relations : graph { }
"""


def test_single_relational_database_without_entities():
    model = parse_ml("database locman : relational { }")
    assert model == MlModel(
        databases=(MlDatabase("locman", DbKind.RELATIONAL),)
    )


def test_empty_input_is_empty_model():
    assert parse_ml("") == MlModel()


def test_entity_and_graph_database():
    model = parse_ml("entity E { id : int } database D : graph { contains E }")
    assert model.entities == (MlEntity("E", (MlAttribute("id", "int"),)),)
    assert model.databases == (MlDatabase("D", DbKind.GRAPH, ("E",)),)


def test_required_databases_keeps_declaration_order():
    model = parse_ml("database A : relational { } database B : document { }")
    assert required_databases(model) == [
        ("A", DbKind.RELATIONAL), ("B", DbKind.DOCUMENT),
    ]


def test_required_databases_empty_model():
    assert required_databases(MlModel()) == []


def test_four_kinds_cross_checked_against_source_text():
    model = parse_ml(FOUR_KINDS_SOURCE)
    pairs = required_databases(model)
    # Oracle: count database declarations directly in the source text.
    declared = re.findall(r"^database\s", FOUR_KINDS_SOURCE, flags=re.MULTILINE)
    assert len(pairs) == len(declared) == 4
    assert {kind for _, kind in pairs} == set(DbKind)


@pytest.mark.parametrize(
    "source",
    [
        "database d : keyvalue { }",
        "database d : Relational { }",
        "database d : nosql { }",
    ],
)
def test_kinds_outside_the_enum_are_parse_errors(source):
    with pytest.raises(ParseError) as excinfo:
        parse_ml(source)
    assert "database kind" in excinfo.value.expected


def test_unknown_attribute_type_is_parse_error():
    with pytest.raises(ParseError):
        parse_ml("entity E { id : uuid }")


def test_unknown_contained_entity_is_error_with_span():
    with pytest.raises(ParseError) as excinfo:
        parse_ml("database D : graph { contains Ghost }")
    assert excinfo.value.found == "'Ghost'"
    assert excinfo.value.span.line == 1


def test_forward_reference_to_entity_is_fine():
    model = parse_ml("database D : graph { contains E } entity E { }")
    assert model.databases[0].contains == ("E",)


def test_entity_in_two_databases_is_error():
    with pytest.raises(ParseError) as excinfo:
        parse_ml(
            "entity E { }\n"
            "database A : graph { contains E }\n"
            "database B : document { contains E }\n"
        )
    assert "already contained" in excinfo.value.expected


def test_entity_twice_in_same_database_is_error():
    with pytest.raises(ParseError):
        parse_ml("entity E { } database A : graph { contains E, E }")


@pytest.mark.parametrize(
    "source",
    [
        "entity E { } entity E { }",
        "database D : graph { } database D : column { }",
        "entity E { id : int id : float }",
    ],
)
def test_duplicate_names_are_errors(source):
    with pytest.raises(ParseError):
        parse_ml(source)


def test_locman_fixture_parses(fixtures_dir):
    model = parse_ml((fixtures_dir / "locman.tyml").read_text(encoding="utf-8"))
    assert required_databases(model) == [("locmandb", DbKind.RELATIONAL)]
    (entity,) = model.entities
    assert entity.name == "Location"
    assert [a.name for a in entity.attributes] == [
        "id", "latitude", "longitude", "recordedAt",
    ]
