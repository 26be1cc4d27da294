"""Deployment-model core: the AST for type declarations, database software
declarations and the platform/cluster/application/container tree, plus
structural validation and reference resolution.

All nodes are immutable after construction and safe to share across threads;
`validate` and `resolve` are pure functions.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from enum import Enum
from typing import TYPE_CHECKING, Iterator, Union

if TYPE_CHECKING:
    from .dlsyntax import SourceSpan


class TypeCategory(str, Enum):
    """The three kinds of type declarations, keyed by their keyword."""

    PLATFORM = "platformtype"
    CONTAINER = "containertype"
    DB = "dbtype"


# Property keys shaped like environment variables (e.g. MYSQL_USER) are
# routed to container environments by the generators.
ENV_KEY_RE = re.compile(r"[A-Z][A-Z0-9_]*\Z")


@dataclass(frozen=True)
class Scalar:
    """Single-line property value; surrounding whitespace is not significant."""

    text: str

    def __post_init__(self):
        object.__setattr__(self, "text", self.text.strip())


@dataclass(frozen=True)
class ListVal:
    """Comma-separated value with at least two items."""

    items: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "items", tuple(self.items))
        if len(self.items) < 2:
            raise ValueError("a list value needs at least two items")


@dataclass(frozen=True)
class ArrayVal:
    """Bracketed value with any number of items."""

    items: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "items", tuple(self.items))


Value = Union[Scalar, ListVal, ArrayVal]


@dataclass(frozen=True)
class Property:
    key: str
    value: Value
    span: "SourceSpan | None" = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        if not self.key:
            raise ValueError("property key must be non-empty")


@dataclass(frozen=True)
class TypeDecl:
    category: TypeCategory
    name: str
    span: "SourceSpan | None" = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class DatabaseDecl:
    """Database software declaration, typed by a dbtype name."""

    name: str
    db_type: str
    properties: tuple[Property, ...] = ()
    span: "SourceSpan | None" = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "properties", tuple(self.properties))

    def property(self, key: str) -> Property | None:
        for prop in self.properties:
            if prop.key == key:
                return prop
        return None


@dataclass(frozen=True)
class Container:
    """Deployment unit: either deploys a declared database or carries its
    own `image` property (non-database software)."""

    name: str
    container_type: str
    deploys: str | None = None
    properties: tuple[Property, ...] = ()
    span: "SourceSpan | None" = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "properties", tuple(self.properties))

    def property(self, key: str) -> Property | None:
        for prop in self.properties:
            if prop.key == key:
                return prop
        return None


@dataclass(frozen=True)
class Application:
    name: str
    containers: tuple[Container, ...] = ()
    span: "SourceSpan | None" = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "containers", tuple(self.containers))


@dataclass(frozen=True)
class Cluster:
    name: str
    applications: tuple[Application, ...] = ()
    span: "SourceSpan | None" = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "applications", tuple(self.applications))


@dataclass(frozen=True)
class PlatformDecl:
    name: str
    platform_type: str
    clusters: tuple[Cluster, ...] = ()
    span: "SourceSpan | None" = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "clusters", tuple(self.clusters))


@dataclass(frozen=True)
class DlModel:
    """Root of a deployment model; collections keep declaration order."""

    types: tuple[TypeDecl, ...] = ()
    databases: tuple[DatabaseDecl, ...] = ()
    platforms: tuple[PlatformDecl, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "types", tuple(self.types))
        object.__setattr__(self, "databases", tuple(self.databases))
        object.__setattr__(self, "platforms", tuple(self.platforms))


class ErrorCode(str, Enum):
    UNRESOLVED_REF = "UNRESOLVED_REF"
    DUP_NAME = "DUP_NAME"
    MULTI_PLATFORM_TYPE = "MULTI_PLATFORM_TYPE"
    WRONG_CATEGORY = "WRONG_CATEGORY"
    SHARED_DATABASE = "SHARED_DATABASE"
    MISSING_IMAGE = "MISSING_IMAGE"
    EMPTY_PLATFORM = "EMPTY_PLATFORM"


@dataclass(frozen=True)
class Finding:
    code: ErrorCode
    location: str
    message: str


@dataclass(frozen=True)
class ValidationReport:
    errors: tuple[Finding, ...] = ()
    warnings: tuple[Finding, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.errors

    def render_text(self) -> str:
        """Deterministic human-readable rendering, one finding per line."""
        lines = []
        for finding in self.errors:
            lines.append(f"error [{finding.code.value}] {finding.location}: {finding.message}")
        for finding in self.warnings:
            lines.append(f"warning [{finding.code.value}] {finding.location}: {finding.message}")
        if not lines:
            lines.append("no issues found")
        else:
            lines.append(f"{len(self.errors)} error(s), {len(self.warnings)} warning(s)")
        return "\n".join(lines) + "\n"

    def to_json_obj(self) -> dict:
        def encode(findings: tuple[Finding, ...]) -> list[dict]:
            return [
                {"code": f.code.value, "location": f.location, "message": f.message}
                for f in findings
            ]

        return {"errors": encode(self.errors), "warnings": encode(self.warnings)}


def validate(model: DlModel) -> ValidationReport:
    """Check every structural constraint and report all violations.

    Never raises: every problem becomes a Finding with a stable error code.
    The report is deterministic — the same model yields byte-identical text.
    """
    errors: list[Finding] = []
    warnings: list[Finding] = []

    types_by_name: dict[str, TypeDecl] = {}
    for decl in model.types:
        loc = f"type {decl.name}"
        if decl.name in types_by_name:
            errors.append(Finding(
                ErrorCode.DUP_NAME, loc,
                f"name '{decl.name}' is already used by another type declaration",
            ))
        else:
            types_by_name[decl.name] = decl

    def check_type_ref(target: str, expected: TypeCategory, loc: str, what: str) -> None:
        decl = types_by_name.get(target)
        if decl is None:
            errors.append(Finding(
                ErrorCode.UNRESOLVED_REF, loc,
                f"reference to undeclared {what} '{target}'",
            ))
        elif decl.category is not expected:
            errors.append(Finding(
                ErrorCode.WRONG_CATEGORY, loc,
                f"'{target}' is declared as {decl.category.value}, expected {expected.value}",
            ))

    databases_by_name: dict[str, DatabaseDecl] = {}
    for db in model.databases:
        loc = f"database {db.name}"
        if db.name in databases_by_name:
            errors.append(Finding(
                ErrorCode.DUP_NAME, loc,
                f"name '{db.name}' is already used by another software declaration",
            ))
        else:
            databases_by_name[db.name] = db
        check_type_ref(db.db_type, TypeCategory.DB, loc, "database type")

    # (container location, database name) pairs, in tree order
    deploy_refs: list[tuple[str, str]] = []

    platform_names: set[str] = set()
    first_platform_type: str | None = None
    multi_type_reported = False
    for platform in model.platforms:
        ploc = f"platform {platform.name}"
        if platform.name in platform_names:
            errors.append(Finding(
                ErrorCode.DUP_NAME, ploc,
                f"name '{platform.name}' is already used by another platform",
            ))
        platform_names.add(platform.name)
        check_type_ref(platform.platform_type, TypeCategory.PLATFORM, ploc, "platform type")

        if first_platform_type is None:
            first_platform_type = platform.platform_type
        elif platform.platform_type != first_platform_type and not multi_type_reported:
            errors.append(Finding(
                ErrorCode.MULTI_PLATFORM_TYPE, ploc,
                f"platform type '{platform.platform_type}' differs from "
                f"'{first_platform_type}' used earlier; a model uses exactly one platform type",
            ))
            multi_type_reported = True

        if not platform.clusters:
            warnings.append(Finding(
                ErrorCode.EMPTY_PLATFORM, ploc, "platform declares no clusters",
            ))

        cluster_names: set[str] = set()
        for cluster in platform.clusters:
            cloc = f"{ploc} / cluster {cluster.name}"
            if cluster.name in cluster_names:
                errors.append(Finding(
                    ErrorCode.DUP_NAME, cloc,
                    f"name '{cluster.name}' is already used by another cluster in this platform",
                ))
            cluster_names.add(cluster.name)

            app_names: set[str] = set()
            for app in cluster.applications:
                aloc = f"{cloc} / application {app.name}"
                if app.name in app_names:
                    errors.append(Finding(
                        ErrorCode.DUP_NAME, aloc,
                        f"name '{app.name}' is already used by another application in this cluster",
                    ))
                app_names.add(app.name)

                container_names: set[str] = set()
                for container in app.containers:
                    kloc = f"{aloc} / container {container.name}"
                    if container.name in container_names:
                        errors.append(Finding(
                            ErrorCode.DUP_NAME, kloc,
                            f"name '{container.name}' is already used by another "
                            "container in this application",
                        ))
                    container_names.add(container.name)
                    check_type_ref(
                        container.container_type, TypeCategory.CONTAINER, kloc, "container type"
                    )
                    if container.deploys is not None:
                        if container.deploys not in databases_by_name:
                            errors.append(Finding(
                                ErrorCode.UNRESOLVED_REF, kloc,
                                f"reference to undeclared database '{container.deploys}'",
                            ))
                        else:
                            deploy_refs.append((kloc, container.deploys))
                    elif container.property("image") is None:
                        errors.append(Finding(
                            ErrorCode.MISSING_IMAGE, kloc,
                            "container deploys no database and has no 'image' property",
                        ))

    deploy_counts: dict[str, int] = {}
    for _, db_name in deploy_refs:
        deploy_counts[db_name] = deploy_counts.get(db_name, 0) + 1
    for kloc, db_name in deploy_refs:
        count = deploy_counts[db_name]
        if count >= 2:
            errors.append(Finding(
                ErrorCode.SHARED_DATABASE, kloc,
                f"database '{db_name}' is deployed by {count} containers; "
                "each database runs in its own container",
            ))

    return ValidationReport(errors=tuple(errors), warnings=tuple(warnings))


class ResolveError(Exception):
    """Raised when resolution is refused; carries the validation report."""

    def __init__(self, report: ValidationReport):
        self.code = "REFUSED_INVALID"
        self.report = report
        super().__init__(
            f"model has {len(report.errors)} validation error(s); resolve refused"
        )


@dataclass(frozen=True)
class ResolvedDatabase:
    decl: DatabaseDecl
    db_type: TypeDecl

    @property
    def name(self) -> str:
        return self.decl.name


@dataclass(frozen=True)
class ResolvedContainer:
    decl: Container
    container_type: TypeDecl
    deploys: ResolvedDatabase | None

    @property
    def name(self) -> str:
        return self.decl.name


@dataclass(frozen=True)
class ResolvedApplication:
    decl: Application
    containers: tuple[ResolvedContainer, ...]

    @property
    def name(self) -> str:
        return self.decl.name


@dataclass(frozen=True)
class ResolvedCluster:
    decl: Cluster
    applications: tuple[ResolvedApplication, ...]

    @property
    def name(self) -> str:
        return self.decl.name


@dataclass(frozen=True)
class ResolvedPlatform:
    decl: PlatformDecl
    platform_type: TypeDecl
    clusters: tuple[ResolvedCluster, ...]

    @property
    def name(self) -> str:
        return self.decl.name


@dataclass(frozen=True)
class ResolvedModel:
    """Reference-free view of a valid model; handles are the source nodes."""

    model: DlModel
    databases: tuple[ResolvedDatabase, ...]
    platforms: tuple[ResolvedPlatform, ...]

    def iter_applications(self) -> Iterator[ResolvedApplication]:
        for platform in self.platforms:
            for cluster in platform.clusters:
                yield from cluster.applications


def resolve(model: DlModel) -> ResolvedModel:
    """Replace every by-name reference with a direct handle.

    Refuses models with validation errors (ResolveError). Collection order
    in the result equals declaration order in the source model.
    """
    report = validate(model)
    if not report.ok:
        raise ResolveError(report)

    types_by_name = {t.name: t for t in model.types}
    resolved_dbs = tuple(
        ResolvedDatabase(decl=db, db_type=types_by_name[db.db_type])
        for db in model.databases
    )
    dbs_by_name = {rdb.name: rdb for rdb in resolved_dbs}

    def resolve_container(container: Container) -> ResolvedContainer:
        deploys = dbs_by_name[container.deploys] if container.deploys is not None else None
        return ResolvedContainer(
            decl=container,
            container_type=types_by_name[container.container_type],
            deploys=deploys,
        )

    platforms = tuple(
        ResolvedPlatform(
            decl=platform,
            platform_type=types_by_name[platform.platform_type],
            clusters=tuple(
                ResolvedCluster(
                    decl=cluster,
                    applications=tuple(
                        ResolvedApplication(
                            decl=app,
                            containers=tuple(resolve_container(c) for c in app.containers),
                        )
                        for app in cluster.applications
                    ),
                )
                for cluster in platform.clusters
            ),
        )
        for platform in model.platforms
    )
    return ResolvedModel(model=model, databases=resolved_dbs, platforms=platforms)
