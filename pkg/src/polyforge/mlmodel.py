"""High-level polystore model (`.tyml` files): entities with typed
attributes and abstract database declarations that group them by kind.

Syntax:

    entity Order {
        id : int
        placedAt : date
    }
    database orders : relational {
        contains Order
    }
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import TYPE_CHECKING

from .dlsyntax import Lexer, ParseError, Token, join_spans

if TYPE_CHECKING:
    from .dlsyntax import SourceSpan


class DbKind(str, Enum):
    RELATIONAL = "relational"
    DOCUMENT = "document"
    COLUMN = "column"
    GRAPH = "graph"


PRIMITIVE_TYPES = ("int", "float", "string", "bool", "date", "text")


@dataclass(frozen=True)
class MlAttribute:
    name: str
    type_name: str
    span: "SourceSpan | None" = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class MlEntity:
    name: str
    attributes: tuple[MlAttribute, ...] = ()
    span: "SourceSpan | None" = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "attributes", tuple(self.attributes))


@dataclass(frozen=True)
class MlDatabase:
    name: str
    kind: DbKind
    contains: tuple[str, ...] = ()
    span: "SourceSpan | None" = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "contains", tuple(self.contains))


@dataclass(frozen=True)
class MlModel:
    entities: tuple[MlEntity, ...] = ()
    databases: tuple[MlDatabase, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "entities", tuple(self.entities))
        object.__setattr__(self, "databases", tuple(self.databases))


class _MlParser:
    def __init__(self, text: str):
        self.lexer = Lexer(text)

    def _expect_ident(self, what: str) -> Token:
        token = self.lexer.next()
        if token.kind != "ident":
            raise ParseError(token.span, what, token.describe())
        return token

    def _expect_punct(self, char: str) -> Token:
        token = self.lexer.next()
        if token.kind != "punct" or token.text != char:
            raise ParseError(token.span, f"'{char}'", token.describe())
        return token

    def _parse_entity(self, keyword: Token) -> MlEntity:
        name = self._expect_ident("an entity name")
        self._expect_punct("{")
        attributes: list[MlAttribute] = []
        seen: dict[str, MlAttribute] = {}
        while True:
            token = self.lexer.peek()
            if token.kind == "punct" and token.text == "}":
                break
            attr_name = self._expect_ident("an attribute name or '}'")
            self._expect_punct(":")
            type_token = self._expect_ident("an attribute type")
            if type_token.text not in PRIMITIVE_TYPES:
                raise ParseError(
                    type_token.span,
                    "an attribute type (" + ", ".join(PRIMITIVE_TYPES) + ")",
                    type_token.describe(),
                )
            if attr_name.text in seen:
                raise ParseError(
                    attr_name.span,
                    f"a unique attribute name within entity '{name.text}'",
                    attr_name.describe(),
                )
            attribute = MlAttribute(
                attr_name.text, type_token.text,
                span=join_spans(attr_name.span, type_token.span),
            )
            seen[attr_name.text] = attribute
            attributes.append(attribute)
        closing = self._expect_punct("}")
        return MlEntity(
            name.text, tuple(attributes), span=join_spans(keyword.span, closing.span)
        )

    def _parse_database(self, keyword: Token) -> tuple[MlDatabase, list[Token]]:
        name = self._expect_ident("a database name")
        self._expect_punct(":")
        kind_token = self._expect_ident("a database kind")
        try:
            kind = DbKind(kind_token.text)
        except ValueError:
            raise ParseError(
                kind_token.span,
                "a database kind (" + ", ".join(k.value for k in DbKind) + ")",
                kind_token.describe(),
            ) from None
        self._expect_punct("{")
        contained: list[Token] = []
        token = self.lexer.peek()
        if token.kind == "ident" and token.text == "contains":
            self.lexer.next()
            contained.append(self._expect_ident("an entity name after 'contains'"))
            while True:
                token = self.lexer.peek()
                if token.kind == "punct" and token.text == ",":
                    self.lexer.next()
                    contained.append(self._expect_ident("an entity name after ','"))
                else:
                    break
        closing = self._expect_punct("}")
        database = MlDatabase(
            name.text, kind, tuple(t.text for t in contained),
            span=join_spans(keyword.span, closing.span),
        )
        return database, contained

    def parse_model(self) -> MlModel:
        entities: list[MlEntity] = []
        entity_tokens: dict[str, Token] = {}
        databases: list[MlDatabase] = []
        database_tokens: list[tuple[MlDatabase, Token, list[Token]]] = []
        while True:
            token = self.lexer.peek()
            if token.kind == "eof":
                break
            if token.kind == "ident" and token.text == "entity":
                keyword = self.lexer.next()
                name_token = self.lexer.peek()
                entity = self._parse_entity(keyword)
                if entity.name in entity_tokens:
                    raise ParseError(
                        name_token.span, "a unique entity name", name_token.describe()
                    )
                entity_tokens[entity.name] = name_token
                entities.append(entity)
            elif token.kind == "ident" and token.text == "database":
                keyword = self.lexer.next()
                name_token = self.lexer.peek()
                database, contained = self._parse_database(keyword)
                database_tokens.append((database, name_token, contained))
                databases.append(database)
            else:
                raise ParseError(token.span, "'entity' or 'database'", token.describe())

        # reference checks after the full parse, so declaration order is free
        db_names: set[str] = set()
        owner_of: dict[str, str] = {}
        for database, name_token, contained in database_tokens:
            if database.name in db_names:
                raise ParseError(
                    name_token.span, "a unique database name", name_token.describe()
                )
            db_names.add(database.name)
            for entity_token in contained:
                if entity_token.text not in entity_tokens:
                    raise ParseError(
                        entity_token.span, "a declared entity name", entity_token.describe()
                    )
                owner = owner_of.get(entity_token.text)
                if owner is not None:
                    raise ParseError(
                        entity_token.span,
                        f"an entity not already contained in database '{owner}'",
                        entity_token.describe(),
                    )
                owner_of[entity_token.text] = database.name

        return MlModel(tuple(entities), tuple(databases))


def parse_ml(text: str) -> MlModel:
    """Parse polystore-model source; syntax and reference violations both
    raise ParseError with the offending source span."""
    return _MlParser(text).parse_model()


def required_databases(ml: MlModel) -> list[tuple[str, DbKind]]:
    """The (name, kind) pairs a deployment must provide, in declaration order."""
    return [(db.name, db.kind) for db in ml.databases]
