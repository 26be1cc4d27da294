"""Parser and pretty-printer behavior, including the round-trip property."""

import pytest
from hypothesis import given, settings, strategies as st

from polyforge.dlcore import (
    Application,
    ArrayVal,
    Cluster,
    Container,
    DatabaseDecl,
    DlModel,
    ListVal,
    PlatformDecl,
    Property,
    Scalar,
    TypeCategory,
    TypeDecl,
)
from polyforge.dlsyntax import ParseError, parse_dl, print_dl

FIG_STYLE_SOURCE = """\
platformtype AWS
containertype Docker
dbtype MariaDB

database locmandb : MariaDB {
    image=gitlab.atb-bremen.de:5555/atb/docker-base-images/mariadb:10.3.7-utf8
    MYSQL_ROOT_PASSWORD=geheim
    MYSQL_DATABASE=locman
    MYSQL_USER=locman
    MYSQL_PASSWORD=geheim
}

platform myAWSPlatform : AWS {
    cluster myAWSCluster {
        application myApplication {
            container myContainer : Docker {
                deploys locmandb
                volumes = /opt/locman-staging/db:/var/lib
                networks = locman
            }
        }
    }
}
"""


def test_single_type_declaration():
    model = parse_dl("platformtype AWS")
    assert model == DlModel(types=(TypeDecl(TypeCategory.PLATFORM, "AWS"),))


def test_empty_input_is_empty_model():
    assert parse_dl("") == DlModel()


def test_full_listing_structure():
    model = parse_dl(FIG_STYLE_SOURCE)
    assert len(model.types) == 3
    assert [t.category for t in model.types] == [
        TypeCategory.PLATFORM, TypeCategory.CONTAINER, TypeCategory.DB,
    ]
    (db,) = model.databases
    assert db.name == "locmandb"
    assert db.db_type == "MariaDB"
    assert len(db.properties) == 5
    (platform,) = model.platforms
    (cluster,) = platform.clusters
    (app,) = cluster.applications
    (container,) = app.containers
    assert (platform.name, cluster.name, app.name) == (
        "myAWSPlatform", "myAWSCluster", "myApplication",
    )
    assert container.deploys == "locmandb"
    assert [p.key for p in container.properties] == ["volumes", "networks"]


def test_listing_matches_canonical_fixture(locman_model):
    assert parse_dl(FIG_STYLE_SOURCE) == locman_model


def test_unterminated_block_is_parse_error():
    with pytest.raises(ParseError) as excinfo:
        parse_dl("database x : Nope {")
    assert excinfo.value.found == "end of input"


def test_print_empty_model_is_empty_string():
    assert print_dl(DlModel()) == ""


def test_print_dbtype_line():
    model = DlModel(types=(TypeDecl(TypeCategory.DB, "MariaDB"),))
    assert print_dl(model) == "dbtype MariaDB\n"


def test_crlf_input_accepted(locman_text, locman_model):
    assert parse_dl(locman_text.replace("\n", "\r\n")) == locman_model


def test_comments_discarded_between_declarations():
    model = parse_dl("// header\nplatformtype AWS // trailing\n// footer\n")
    assert model == DlModel(types=(TypeDecl(TypeCategory.PLATFORM, "AWS"),))


def test_double_slash_inside_value_is_not_a_comment():
    model = parse_dl("database d : M {\n    url = http://host//path\n}\n")
    assert model.databases[0].properties[0].value == Scalar("http://host//path")


@pytest.mark.parametrize(
    "line, expected",
    [
        ("key = plain", Scalar("plain")),
        ("key =", Scalar("")),
        ("key = a:b=c/d", Scalar("a:b=c/d")),
        ("key = one, two", ListVal(("one", "two"))),
        ("key = a, b, c", ListVal(("a", "b", "c"))),
        ("key = []", ArrayVal(())),
        ("key = [solo]", ArrayVal(("solo",))),
        ("key = [a, b]", ArrayVal(("a", "b"))),
    ],
)
def test_property_value_forms(line, expected):
    model = parse_dl(f"database d : M {{\n    {line}\n}}\n")
    assert model.databases[0].properties[0].value == expected


def test_value_stops_at_end_of_line():
    model = parse_dl("database d : M {\n    a = one\n    b = two\n}\n")
    assert [(p.key, p.value) for p in model.databases[0].properties] == [
        ("a", Scalar("one")), ("b", Scalar("two")),
    ]


def test_unterminated_array_is_parse_error():
    with pytest.raises(ParseError):
        parse_dl("database d : M {\n    a = [one, two\n}\n")


def test_trailing_text_after_array_is_parse_error():
    with pytest.raises(ParseError):
        parse_dl("database d : M {\n    a = [one] junk\n}\n")


def test_deploys_with_equals_is_a_property():
    model = parse_dl("platformtype A\ncontainertype D\n"
                     "platform p : A { cluster c { application a {\n"
                     "container x : D {\n    deploys = img\n}\n} } }\n")
    container = model.platforms[0].clusters[0].applications[0].containers[0]
    assert container.deploys is None
    assert container.properties == (Property("deploys", Scalar("img")),)


def test_deploys_clause_then_deploys_property():
    model = parse_dl("platformtype A\ncontainertype D\ndbtype M\n"
                     "database d : M {\n    image = i\n}\n"
                     "platform p : A { cluster c { application a {\n"
                     "container x : D {\n    deploys d\n    deploys = img\n}\n} } }\n")
    container = model.platforms[0].clusters[0].applications[0].containers[0]
    assert container.deploys == "d"
    assert container.properties[0].key == "deploys"


# --- round-trip property ----------------------------------------------------

idents = st.from_regex(r"[A-Za-z_][A-Za-z0-9_.\-]{0,11}", fullmatch=True)

# No commas, brackets or newlines, which would re-parse as a different shape.
_value_word = st.text("abcszXYZ019/:=._-@", min_size=1, max_size=8)
scalar_texts = st.lists(_value_word, min_size=0, max_size=3).map(" ".join)
scalars = scalar_texts.map(Scalar)
list_values = st.lists(_value_word, min_size=2, max_size=4).map(tuple).map(ListVal)
array_values = st.lists(_value_word, min_size=0, max_size=3).map(tuple).map(ArrayVal)

properties = st.builds(
    Property, key=idents, value=st.one_of(scalars, list_values, array_values)
)
containers = st.builds(
    Container,
    name=idents,
    container_type=idents,
    deploys=st.none() | idents,
    properties=st.lists(properties, max_size=3).map(tuple),
)
applications = st.builds(
    Application, name=idents, containers=st.lists(containers, max_size=3).map(tuple)
)
clusters = st.builds(
    Cluster, name=idents, applications=st.lists(applications, max_size=2).map(tuple)
)
platforms = st.builds(
    PlatformDecl,
    name=idents,
    platform_type=idents,
    clusters=st.lists(clusters, max_size=2).map(tuple),
)
type_decls = st.builds(
    TypeDecl, category=st.sampled_from(list(TypeCategory)), name=idents
)
databases = st.builds(
    DatabaseDecl,
    name=idents,
    db_type=idents,
    properties=st.lists(properties, max_size=4).map(tuple),
)
models = st.builds(
    DlModel,
    types=st.lists(type_decls, max_size=4).map(tuple),
    databases=st.lists(databases, max_size=3).map(tuple),
    platforms=st.lists(platforms, max_size=2).map(tuple),
)


@given(models)
def test_round_trip_parse_of_printed_model(model):
    assert parse_dl(print_dl(model)) == model


@given(models)
def test_print_is_idempotent(model):
    once = print_dl(model)
    assert print_dl(parse_dl(once)) == once


def test_print_canonicalizes_fig_style_source(locman_text):
    canonical = print_dl(parse_dl(FIG_STYLE_SOURCE))
    assert canonical == locman_text
    assert print_dl(parse_dl(canonical)) == canonical


@settings(max_examples=300)
@given(st.text(alphabet="ab{}=:,[]\n \t/déploys-", max_size=40))
def test_parse_error_spans_stay_within_input(text):
    try:
        parse_dl(text)
    except ParseError as exc:
        assert 0 <= exc.span.start <= exc.span.end <= len(text.replace("\r\n", "\n"))
        assert exc.expected
        assert exc.found
