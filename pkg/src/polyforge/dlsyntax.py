"""Concrete syntax for deployment models (`.tdl` files): lexer,
recursive-descent parser and the canonical pretty-printer.

Lexing is newline-sensitive only inside property values — a value runs from
`=` to the end of its line (or to `]` for bracketed arrays); everywhere else
whitespace is insignificant. `//` comments run to end of line and are
discarded, except inside property values, where `//` is ordinary text (so
URLs survive). Input may use CR LF line endings; output is always LF.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .dlcore import (
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
    Value,
)

IDENT_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_.\-]*")

_TYPE_KEYWORDS = {
    "platformtype": TypeCategory.PLATFORM,
    "containertype": TypeCategory.CONTAINER,
    "dbtype": TypeCategory.DB,
}

_PUNCT = "{}:=,[]"


@dataclass(frozen=True)
class SourceSpan:
    """Byte offsets plus 1-based line/column of the span start."""

    start: int
    end: int
    line: int
    column: int

    def __post_init__(self):
        if self.start > self.end:
            raise ValueError("span start must not exceed end")


def join_spans(first: SourceSpan, last: SourceSpan) -> SourceSpan:
    return SourceSpan(first.start, last.end, first.line, first.column)


class ParseError(Exception):
    """Syntax or reference error at a single source location.

    The message is fully reproducible from `span`, `expected` and `found`.
    """

    def __init__(self, span: SourceSpan, expected: str, found: str):
        self.span = span
        self.expected = expected
        self.found = found
        super().__init__(
            f"line {span.line}, column {span.column}: expected {expected}, found {found}"
        )


@dataclass(frozen=True)
class Token:
    kind: str  # "ident", "punct" or "eof"
    text: str
    span: SourceSpan

    def describe(self) -> str:
        return "end of input" if self.kind == "eof" else f"'{self.text}'"


def parse_property_value(text: str) -> Value:
    """Classify one raw value: `[...]` is an array, a comma makes a list,
    anything else is a scalar. Raises ValueError on a malformed array."""
    raw = text.strip()
    if raw.startswith("["):
        if not raw.endswith("]"):
            raise ValueError("unterminated '[' in value")
        inner = raw[1:-1]
        if not inner.strip():
            return ArrayVal(())
        return ArrayVal(tuple(item.strip() for item in inner.split(",")))
    if "," in raw:
        return ListVal(tuple(item.strip() for item in raw.split(",")))
    return Scalar(raw)


class Lexer:
    """Pull lexer shared by the deployment and polystore model parsers."""

    def __init__(self, text: str):
        self.text = text.replace("\r\n", "\n")
        self.pos = 0
        self.line = 1
        self.column = 1
        self._pending: list[Token] = []

    def _advance(self, count: int) -> None:
        for _ in range(count):
            if self.text[self.pos] == "\n":
                self.line += 1
                self.column = 1
            else:
                self.column += 1
            self.pos += 1

    def _skip_trivia(self) -> None:
        while self.pos < len(self.text):
            ch = self.text[self.pos]
            if ch in " \t\n\r":
                self._advance(1)
            elif self.text.startswith("//", self.pos):
                end = self.text.find("\n", self.pos)
                self._advance((end if end != -1 else len(self.text)) - self.pos)
            else:
                return

    def _scan(self) -> Token:
        self._skip_trivia()
        start, line, column = self.pos, self.line, self.column
        if self.pos >= len(self.text):
            return Token("eof", "", SourceSpan(start, start, line, column))
        ch = self.text[self.pos]
        if ch in _PUNCT:
            self._advance(1)
            return Token("punct", ch, SourceSpan(start, self.pos, line, column))
        match = IDENT_RE.match(self.text, self.pos)
        if match:
            self._advance(match.end() - start)
            return Token("ident", match.group(), SourceSpan(start, self.pos, line, column))
        raise ParseError(
            SourceSpan(start, start + 1, line, column),
            "an identifier or punctuation",
            f"{ch!r}",
        )

    def peek(self, ahead: int = 0) -> Token:
        while len(self._pending) <= ahead:
            self._pending.append(self._scan())
        return self._pending[ahead]

    def next(self) -> Token:
        return self._pending.pop(0) if self._pending else self._scan()

    def read_value(self) -> tuple[Value, SourceSpan]:
        """Read one raw property value starting right after `=`.

        Scalars and lists run to end of line; an array runs to its closing
        `]` (newlines allowed inside) and only whitespace may follow it on
        the line. Must be called with no buffered tokens.
        """
        assert not self._pending, "read_value needs an unbuffered lexer"
        while self.pos < len(self.text) and self.text[self.pos] in " \t":
            self._advance(1)
        start, line, column = self.pos, self.line, self.column

        if self.pos < len(self.text) and self.text[self.pos] == "[":
            end = self.text.find("]", self.pos)
            if end == -1:
                raise ParseError(
                    SourceSpan(start, start + 1, line, column), "']'", "end of input"
                )
            raw = self.text[self.pos : end + 1]
            self._advance(end + 1 - self.pos)
            while self.pos < len(self.text) and self.text[self.pos] in " \t":
                self._advance(1)
            if self.pos < len(self.text) and self.text[self.pos] != "\n":
                trailing = self.text[self.pos : self.pos + 10].splitlines()[0]
                raise ParseError(
                    SourceSpan(self.pos, self.pos + 1, self.line, self.column),
                    "end of line after array value",
                    f"'{trailing}'",
                )
            return parse_property_value(raw), SourceSpan(start, end + 1, line, column)

        end = self.text.find("\n", self.pos)
        if end == -1:
            end = len(self.text)
        raw = self.text[self.pos : end]
        self._advance(end - self.pos)
        return parse_property_value(raw), SourceSpan(start, end, line, column)


class _Parser:
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

    def _at_property(self) -> bool:
        first = self.lexer.peek(0)
        second = self.lexer.peek(1)
        return first.kind == "ident" and second.kind == "punct" and second.text == "="

    def _parse_property(self) -> Property:
        key = self._expect_ident("a property key")
        self._expect_punct("=")
        value, value_span = self.lexer.read_value()
        return Property(key.text, value, span=join_spans(key.span, value_span))

    def _parse_properties_until_brace(self, context: str) -> list[Property]:
        properties = []
        while True:
            token = self.lexer.peek()
            if token.kind == "punct" and token.text == "}":
                return properties
            if self._at_property():
                properties.append(self._parse_property())
            else:
                raise ParseError(token.span, f"a property or '}}' in {context}", token.describe())

    def _parse_database(self, keyword: Token) -> DatabaseDecl:
        name = self._expect_ident("a database name")
        self._expect_punct(":")
        db_type = self._expect_ident("a database type name")
        self._expect_punct("{")
        properties = self._parse_properties_until_brace("a database block")
        closing = self._expect_punct("}")
        return DatabaseDecl(
            name.text, db_type.text, tuple(properties),
            span=join_spans(keyword.span, closing.span),
        )

    def _parse_container(self, keyword: Token) -> Container:
        name = self._expect_ident("a container name")
        self._expect_punct(":")
        container_type = self._expect_ident("a container type name")
        self._expect_punct("{")
        deploys = None
        first = self.lexer.peek(0)
        if first.kind == "ident" and first.text == "deploys" and not self._at_property():
            self.lexer.next()
            deploys = self._expect_ident("a database name after 'deploys'").text
        properties = []
        while True:
            token = self.lexer.peek()
            if token.kind == "punct" and token.text == "}":
                break
            if self._at_property():
                properties.append(self._parse_property())
            else:
                raise ParseError(
                    token.span, "a property or '}' in a container block", token.describe()
                )
        closing = self._expect_punct("}")
        return Container(
            name.text, container_type.text, deploys, tuple(properties),
            span=join_spans(keyword.span, closing.span),
        )

    def _parse_application(self, keyword: Token) -> Application:
        name = self._expect_ident("an application name")
        self._expect_punct("{")
        containers = []
        while True:
            token = self.lexer.peek()
            if token.kind == "punct" and token.text == "}":
                break
            if token.kind == "ident" and token.text == "container":
                containers.append(self._parse_container(self.lexer.next()))
            else:
                raise ParseError(token.span, "'container' or '}'", token.describe())
        closing = self._expect_punct("}")
        return Application(
            name.text, tuple(containers), span=join_spans(keyword.span, closing.span)
        )

    def _parse_cluster(self, keyword: Token) -> Cluster:
        name = self._expect_ident("a cluster name")
        self._expect_punct("{")
        applications = []
        while True:
            token = self.lexer.peek()
            if token.kind == "punct" and token.text == "}":
                break
            if token.kind == "ident" and token.text == "application":
                applications.append(self._parse_application(self.lexer.next()))
            else:
                raise ParseError(token.span, "'application' or '}'", token.describe())
        closing = self._expect_punct("}")
        return Cluster(
            name.text, tuple(applications), span=join_spans(keyword.span, closing.span)
        )

    def _parse_platform(self, keyword: Token) -> PlatformDecl:
        name = self._expect_ident("a platform name")
        self._expect_punct(":")
        platform_type = self._expect_ident("a platform type name")
        self._expect_punct("{")
        clusters = []
        while True:
            token = self.lexer.peek()
            if token.kind == "punct" and token.text == "}":
                break
            if token.kind == "ident" and token.text == "cluster":
                clusters.append(self._parse_cluster(self.lexer.next()))
            else:
                raise ParseError(token.span, "'cluster' or '}'", token.describe())
        closing = self._expect_punct("}")
        return PlatformDecl(
            name.text, platform_type.text, tuple(clusters),
            span=join_spans(keyword.span, closing.span),
        )

    def parse_model(self) -> DlModel:
        types: list[TypeDecl] = []
        databases: list[DatabaseDecl] = []
        platforms: list[PlatformDecl] = []
        while True:
            token = self.lexer.peek()
            if token.kind == "eof":
                break
            if token.kind == "ident" and token.text in _TYPE_KEYWORDS:
                keyword = self.lexer.next()
                name = self._expect_ident("a type name")
                types.append(TypeDecl(
                    _TYPE_KEYWORDS[keyword.text], name.text,
                    span=join_spans(keyword.span, name.span),
                ))
            elif token.kind == "ident" and token.text == "database":
                databases.append(self._parse_database(self.lexer.next()))
            elif token.kind == "ident" and token.text == "platform":
                platforms.append(self._parse_platform(self.lexer.next()))
            else:
                raise ParseError(
                    token.span,
                    "'platformtype', 'containertype', 'dbtype', 'database' or 'platform'",
                    token.describe(),
                )
        return DlModel(tuple(types), tuple(databases), tuple(platforms))


def parse_dl(text: str) -> DlModel:
    """Parse deployment-model source; raises ParseError at the first
    offending token (no recovery)."""
    return _Parser(text).parse_model()


def format_value(value: Value) -> str:
    if isinstance(value, Scalar):
        return value.text
    if isinstance(value, ListVal):
        return ", ".join(value.items)
    return "[" + ", ".join(value.items) + "]"


def _format_property(prop: Property) -> str:
    rendered = format_value(prop.value)
    return f"{prop.key} = {rendered}" if rendered else f"{prop.key} ="


def print_dl(model: DlModel) -> str:
    """Canonical rendering: type declarations first, then databases, then
    platforms; 4-space indentation, one declaration per line.

    For any model built from printable names and values (identifiers
    matching the grammar, values without newlines, scalars without commas
    or a leading `[`), `parse_dl(print_dl(m)) == m`.
    """
    lines: list[str] = []

    def emit(indent: int, text: str) -> None:
        lines.append(" " * (4 * indent) + text)

    for decl in model.types:
        emit(0, f"{decl.category.value} {decl.name}")
    for db in model.databases:
        emit(0, f"database {db.name} : {db.db_type} {{")
        for prop in db.properties:
            emit(1, _format_property(prop))
        emit(0, "}")
    for platform in model.platforms:
        emit(0, f"platform {platform.name} : {platform.platform_type} {{")
        for cluster in platform.clusters:
            emit(1, f"cluster {cluster.name} {{")
            for app in cluster.applications:
                emit(2, f"application {app.name} {{")
                for container in app.containers:
                    emit(3, f"container {container.name} : {container.container_type} {{")
                    if container.deploys is not None:
                        emit(4, f"deploys {container.deploys}")
                    for prop in container.properties:
                        emit(4, _format_property(prop))
                    emit(3, "}")
                emit(2, "}")
            emit(1, "}")
        emit(0, "}")

    if not lines:
        return ""
    return "\n".join(lines) + "\n"
