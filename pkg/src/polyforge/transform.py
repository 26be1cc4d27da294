"""Polystore-model to deployment-model transformation.

Takes the abstract databases of an MlModel plus a set of deployment answers
(platform, container technology, one concrete DBMS per database, extra
configuration) and produces a complete deployment model: every database gets
its own container under a single platform/cluster/application chain, and the
result always passes deployment-model validation.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Mapping

from .catalog import DbmsCatalog
from .dlcore import (
    Application,
    Cluster,
    Container,
    DatabaseDecl,
    DlModel,
    ENV_KEY_RE,
    PlatformDecl,
    Property,
    Scalar,
    TypeCategory,
    TypeDecl,
)
from .dlsyntax import IDENT_RE, format_value, parse_property_value
from .kvfile import KvFormatError, read_kv
from .mlmodel import MlModel

# Lowercase answer properties configure the container (volumes, networks,
# ports, resource limits); `storage` and environment-style keys stay on the
# database declaration next to its image.
_DATABASE_SIDE_KEYS = ("storage",)


class TransformError(Exception):
    """Transformation failure with a stable code:

    MISSING_ANSWER      a database has no DBMS choice
    UNKNOWN_DBMS        the choice is not in the catalog for that kind
    UNKNOWN_DATABASE    answers name a database absent from the model
    CONFLICTING_ANSWER  answers produce colliding type or container names
    """

    def __init__(self, code: str, message: str):
        self.code = code
        super().__init__(f"{code}: {message}")


@dataclass(frozen=True)
class DatabaseAnswers:
    """Per-database deployment choices."""

    dbms: str | None = None
    image: str | None = None
    container_name: str | None = None
    extras: tuple[Property, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "extras", tuple(self.extras))


@dataclass(frozen=True)
class DeploymentAnswers:
    platform_type: str = "AWS"
    platform_name: str = "myPlatform"
    cluster_name: str = "myCluster"
    application_name: str = "myApplication"
    container_type: str = "Docker"
    databases: Mapping[str, DatabaseAnswers] = field(default_factory=dict)

    def for_database(self, name: str) -> DatabaseAnswers:
        return self.databases.get(name, DatabaseAnswers())


_SINGLE_KEYS = {
    "platform.type": "platform_type",
    "platform.name": "platform_name",
    "cluster.name": "cluster_name",
    "application.name": "application_name",
    "container.type": "container_type",
}


def load_answers(text: str, known_databases: list[str]) -> DeploymentAnswers:
    """Parse an answers file.

    `db.<name>.<property>` keys are matched against `known_databases` by
    longest name first, so database names containing dots stay unambiguous.
    Unknown database names raise TransformError(UNKNOWN_DATABASE).
    """
    simple: dict[str, str] = {}
    per_db: dict[str, dict] = {}
    by_length = sorted(known_databases, key=len, reverse=True)

    for entry in read_kv(text):
        if entry.key in _SINGLE_KEYS:
            attr = _SINGLE_KEYS[entry.key]
            if attr in simple:
                raise KvFormatError(entry.line, f"duplicate '{entry.key}'")
            if not IDENT_RE.fullmatch(entry.raw_value):
                raise KvFormatError(
                    entry.line, f"'{entry.key}' must be an identifier, got '{entry.raw_value}'"
                )
            simple[attr] = entry.raw_value
            continue
        if not entry.key.startswith("db."):
            raise KvFormatError(entry.line, f"unknown answers key '{entry.key}'")
        rest = entry.key[len("db."):]
        db_name = next(
            (name for name in by_length if rest.startswith(name + ".")), None
        )
        if db_name is None:
            raise TransformError(
                "UNKNOWN_DATABASE",
                f"line {entry.line}: '{entry.key}' names no database of the model",
            )
        prop_key = rest[len(db_name) + 1:]
        if not prop_key:
            raise KvFormatError(entry.line, f"missing property name in '{entry.key}'")
        bucket = per_db.setdefault(
            db_name, {"dbms": None, "image": None, "container_name": None, "extras": []}
        )
        if prop_key in ("dbms", "image", "container_name"):
            if bucket[prop_key] is not None:
                raise KvFormatError(entry.line, f"duplicate '{entry.key}'")
            if prop_key == "container_name" and not IDENT_RE.fullmatch(entry.raw_value):
                raise KvFormatError(
                    entry.line, f"container name must be an identifier, got '{entry.raw_value}'"
                )
            bucket[prop_key] = entry.raw_value
        else:
            try:
                value = parse_property_value(entry.raw_value)
            except ValueError as exc:
                raise KvFormatError(entry.line, str(exc)) from None
            bucket["extras"].append(Property(prop_key, value))

    return DeploymentAnswers(
        **simple,
        databases={
            name: DatabaseAnswers(
                dbms=bucket["dbms"],
                image=bucket["image"],
                container_name=bucket["container_name"],
                extras=tuple(bucket["extras"]),
            )
            for name, bucket in per_db.items()
        },
    )


def emit_answers(answers: DeploymentAnswers) -> str:
    """Canonical answers-file rendering (inverse of load_answers)."""
    lines = [
        f"platform.type = {answers.platform_type}",
        f"platform.name = {answers.platform_name}",
        f"cluster.name = {answers.cluster_name}",
        f"application.name = {answers.application_name}",
        f"container.type = {answers.container_type}",
    ]
    for name, db in answers.databases.items():
        if db.dbms is not None:
            lines.append(f"db.{name}.dbms = {db.dbms}")
        if db.container_name is not None:
            lines.append(f"db.{name}.container_name = {db.container_name}")
        if db.image is not None:
            lines.append(f"db.{name}.image = {db.image}")
        for prop in db.extras:
            lines.append(f"db.{name}.{prop.key} = {format_value(prop.value)}")
    return "\n".join(lines) + "\n"


def default_properties(dbms: str, catalog: DbmsCatalog) -> list[Property]:
    """Catalog defaults for one DBMS: the image first, then CHANGEME
    placeholders for its credential keys."""
    info = catalog.get(dbms)
    if info is None:
        raise TransformError("UNKNOWN_DBMS", f"'{dbms}' is not in the catalog")
    properties = [Property("image", Scalar(info.image))]
    for key in info.credential_keys:
        properties.append(Property(key, Scalar("CHANGEME")))
    return properties


def _is_database_side(key: str) -> bool:
    return key in _DATABASE_SIDE_KEYS or ENV_KEY_RE.fullmatch(key) is not None


def ml_to_dl(ml: MlModel, answers: DeploymentAnswers, catalog: DbmsCatalog) -> DlModel:
    """Build the deployment model for a polystore model.

    Per database: one DatabaseDecl carrying the image (answer override or
    catalog default) plus the database-side answer properties, and one
    container (named `<dbname>-c` unless overridden) deploying it with the
    container-side answer properties. The output validates with zero errors.
    """
    known = {db.name for db in ml.databases}
    for name in answers.databases:
        if name not in known:
            raise TransformError(
                "UNKNOWN_DATABASE", f"answers configure unknown database '{name}'"
            )

    plans = []
    for ml_db in ml.databases:
        db_answers = answers.for_database(ml_db.name)
        if db_answers.dbms is None:
            raise TransformError(
                "MISSING_ANSWER", f"no DBMS chosen for database '{ml_db.name}'"
            )
        info = catalog.get(db_answers.dbms)
        if info is None or info.kind is not ml_db.kind:
            allowed = ", ".join(catalog.names_for(ml_db.kind))
            raise TransformError(
                "UNKNOWN_DBMS",
                f"'{db_answers.dbms}' is not a {ml_db.kind.value} DBMS of the "
                f"catalog (expected one of: {allowed})",
            )
        plans.append((ml_db, db_answers, info))

    types = [
        TypeDecl(TypeCategory.PLATFORM, answers.platform_type),
        TypeDecl(TypeCategory.CONTAINER, answers.container_type),
    ]
    for _, _, info in plans:
        if all(t.name != info.name for t in types if t.category is TypeCategory.DB):
            types.append(TypeDecl(TypeCategory.DB, info.name))
    names = [t.name for t in types]
    if len(set(names)) != len(names):
        raise TransformError(
            "CONFLICTING_ANSWER",
            "platform type, container type and DBMS names must be distinct "
            f"(got: {', '.join(names)})",
        )

    databases = []
    containers = []
    container_names: set[str] = set()
    for ml_db, db_answers, info in plans:
        db_props = [Property("image", Scalar(db_answers.image or info.image))]
        container_props = []
        for prop in db_answers.extras:
            if _is_database_side(prop.key):
                db_props.append(prop)
            else:
                container_props.append(prop)
        databases.append(DatabaseDecl(ml_db.name, info.name, tuple(db_props)))

        container_name = db_answers.container_name or f"{ml_db.name}-c"
        if container_name in container_names:
            raise TransformError(
                "CONFLICTING_ANSWER", f"two containers would be named '{container_name}'"
            )
        container_names.add(container_name)
        containers.append(Container(
            container_name,
            answers.container_type,
            deploys=ml_db.name,
            properties=tuple(container_props),
        ))

    platform = PlatformDecl(
        answers.platform_name,
        answers.platform_type,
        clusters=(Cluster(
            answers.cluster_name,
            applications=(Application(answers.application_name, tuple(containers)),),
        ),),
    )
    return DlModel(tuple(types), tuple(databases), (platform,))
