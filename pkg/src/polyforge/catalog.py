"""DBMS catalog: the concrete engines offered per abstract database kind,
with default image references, ports and credential keys.

The default catalog ships as a data file inside the package; deployments
with other registries or versions point the CLI at an override file in the
same `key = value` format.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from pathlib import Path

from .kvfile import KvFormatError, read_kv
from .mlmodel import DbKind

# Platform types are an open set; these are the suggestions the wizard shows.
PLATFORM_TYPE_SUGGESTIONS = ("AWS", "GoogleCloud", "Azure")

# Accepted container technologies. Only Docker has a generator; the rest are
# valid in models but rejected at generation time.
CONTAINER_TYPES = ("Docker", "rkt", "VirtualBox", "VMWare")
GENERATED_CONTAINER_TYPE = "Docker"


class CatalogError(Exception):
    pass


@dataclass(frozen=True)
class DbmsInfo:
    name: str
    kind: DbKind
    image: str
    port: int
    credential_keys: tuple[str, ...] = ()


@dataclass(frozen=True)
class DbmsCatalog:
    entries: tuple[DbmsInfo, ...]

    def __post_init__(self):
        object.__setattr__(self, "entries", tuple(self.entries))
        seen: set[str] = set()
        for info in self.entries:
            if info.name in seen:
                raise CatalogError(f"DBMS '{info.name}' declared twice")
            seen.add(info.name)
        for kind in DbKind:
            if not any(info.kind is kind for info in self.entries):
                raise CatalogError(f"catalog offers no DBMS for kind '{kind.value}'")

    def for_kind(self, kind: DbKind) -> tuple[DbmsInfo, ...]:
        return tuple(info for info in self.entries if info.kind is kind)

    def names_for(self, kind: DbKind) -> tuple[str, ...]:
        return tuple(info.name for info in self.for_kind(kind))

    def get(self, name: str) -> DbmsInfo | None:
        for info in self.entries:
            if info.name == name:
                return info
        return None


def load_catalog_text(text: str) -> DbmsCatalog:
    """Parse a catalog file. Keys look like `dbms.<Name>.kind`; blocks need
    `kind`, `image` and `port`, `credentials` is optional."""
    fields: dict[str, dict[str, object]] = {}
    order: list[str] = []
    for entry in read_kv(text):
        parts = entry.key.split(".")
        if len(parts) != 3 or parts[0] != "dbms":
            raise CatalogError(f"line {entry.line}: unknown catalog key '{entry.key}'")
        _, name, attr = parts
        if name not in fields:
            fields[name] = {}
            order.append(name)
        block = fields[name]
        if attr in block:
            raise CatalogError(f"line {entry.line}: duplicate '{entry.key}'")
        if attr == "kind":
            try:
                block[attr] = DbKind(entry.raw_value)
            except ValueError:
                raise CatalogError(
                    f"line {entry.line}: unknown database kind '{entry.raw_value}'"
                ) from None
        elif attr == "image":
            block[attr] = entry.raw_value
        elif attr == "port":
            try:
                block[attr] = int(entry.raw_value)
            except ValueError:
                raise CatalogError(
                    f"line {entry.line}: port must be an integer, got '{entry.raw_value}'"
                ) from None
        elif attr == "credentials":
            block[attr] = tuple(
                item.strip() for item in entry.raw_value.split(",") if item.strip()
            )
        else:
            raise CatalogError(f"line {entry.line}: unknown catalog key '{entry.key}'")

    infos = []
    for name in order:
        block = fields[name]
        for required in ("kind", "image", "port"):
            if required not in block:
                raise CatalogError(f"DBMS '{name}' is missing 'dbms.{name}.{required}'")
        infos.append(DbmsInfo(
            name=name,
            kind=block["kind"],  # type: ignore[arg-type]
            image=block["image"],  # type: ignore[arg-type]
            port=block["port"],  # type: ignore[arg-type]
            credential_keys=block.get("credentials", ()),  # type: ignore[arg-type]
        ))
    return DbmsCatalog(tuple(infos))


def load_catalog_file(path: str | Path) -> DbmsCatalog:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise CatalogError(f"cannot read catalog file {path}: {exc}") from exc
    try:
        return load_catalog_text(text)
    except KvFormatError as exc:
        raise CatalogError(f"{path}: {exc}") from exc


@lru_cache(maxsize=1)
def default_catalog() -> DbmsCatalog:
    text = resources.files("polyforge").joinpath("data/default_catalog.txt").read_text("utf-8")
    return load_catalog_text(text)
