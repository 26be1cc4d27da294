"""Seeded random model generators for bulk property checks.

`random_dl_model` produces structurally arbitrary (possibly dangling) models
whose names and values stay within the printable subset of the grammar, so
print→parse round trips are exercised broadly. `random_valid_dl_model`
produces models that validate with zero errors. Everything is a pure
function of the passed `random.Random`.
"""

from __future__ import annotations

import random
import string
from itertools import count

from polyforge.catalog import DbmsCatalog
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
from polyforge.mlmodel import (
    MlAttribute,
    MlDatabase,
    MlEntity,
    MlModel,
    PRIMITIVE_TYPES,
    DbKind,
)
from polyforge.transform import DatabaseAnswers, DeploymentAnswers

_IDENT_FIRST = string.ascii_letters + "_"
_IDENT_REST = string.ascii_letters + string.digits + "_.-"
# No commas, brackets or newlines: those change how a value re-parses.
_VALUE_CHARS = string.ascii_letters + string.digits + "/:=._-@"


def ident(rng: random.Random) -> str:
    return rng.choice(_IDENT_FIRST) + "".join(
        rng.choice(_IDENT_REST) for _ in range(rng.randint(0, 7))
    )


def _word(rng: random.Random) -> str:
    return "".join(rng.choice(_VALUE_CHARS) for _ in range(rng.randint(1, 8)))


def scalar(rng: random.Random) -> Scalar:
    words = [_word(rng) for _ in range(rng.randint(0, 3))]
    return Scalar(" ".join(words))


def value(rng: random.Random):
    pick = rng.random()
    if pick < 0.6:
        return scalar(rng)
    if pick < 0.8:
        return ListVal(tuple(_word(rng) for _ in range(rng.randint(2, 4))))
    return ArrayVal(tuple(_word(rng) for _ in range(rng.randint(0, 3))))


def properties(rng: random.Random, most: int = 3) -> tuple[Property, ...]:
    return tuple(Property(ident(rng), value(rng)) for _ in range(rng.randint(0, most)))


def random_dl_model(rng: random.Random) -> DlModel:
    """Arbitrary printable model; references may dangle and names may clash."""
    types = tuple(
        TypeDecl(rng.choice(list(TypeCategory)), ident(rng))
        for _ in range(rng.randint(0, 3))
    )
    databases = tuple(
        DatabaseDecl(ident(rng), ident(rng), properties(rng))
        for _ in range(rng.randint(0, 3))
    )

    def container(r: random.Random) -> Container:
        deploys = ident(r) if r.random() < 0.4 else None
        return Container(ident(r), ident(r), deploys, properties(r))

    platforms = tuple(
        PlatformDecl(
            ident(rng),
            ident(rng),
            tuple(
                Cluster(
                    ident(rng),
                    tuple(
                        Application(
                            ident(rng),
                            tuple(container(rng) for _ in range(rng.randint(0, 2))),
                        )
                        for _ in range(rng.randint(0, 2))
                    ),
                )
                for _ in range(rng.randint(0, 2))
            ),
        )
        for _ in range(rng.randint(0, 2))
    )
    return DlModel(types, databases, platforms)


def random_valid_dl_model(rng: random.Random, docker_only: bool = False) -> DlModel:
    """Model that passes validation with zero errors (warnings possible).

    With docker_only=True every container is typed Docker and application
    names are globally unique, so the model is also generator-ready.
    """
    serial = count(1)

    def uniq(base: str) -> str:
        return f"{base}{next(serial)}"

    platform_type = uniq("Pt")
    if docker_only:
        container_types = ["Docker"]
    else:
        container_types = [uniq("Ct") for _ in range(rng.randint(1, 2))]
    db_types = [uniq("Dt") for _ in range(rng.randint(1, 3))]

    types = [TypeDecl(TypeCategory.PLATFORM, platform_type)]
    types += [TypeDecl(TypeCategory.CONTAINER, name) for name in container_types]
    types += [TypeDecl(TypeCategory.DB, name) for name in db_types]

    databases = [
        DatabaseDecl(
            uniq("db"),
            rng.choice(db_types),
            (Property("image", Scalar(_word(rng) + ":" + _word(rng))),) + properties(rng, 2),
        )
        for _ in range(rng.randint(0, 3))
    ]
    unused = [db.name for db in databases]

    def container(r: random.Random) -> Container:
        name = uniq("c")
        if unused and r.random() < 0.6:
            return Container(
                name, r.choice(container_types), unused.pop(0), properties(r, 2)
            )
        props = (Property("image", Scalar(_word(r))),) + properties(r, 2)
        return Container(name, r.choice(container_types), None, props)

    platforms = tuple(
        PlatformDecl(
            uniq("p"),
            platform_type,
            tuple(
                Cluster(
                    uniq("k"),
                    tuple(
                        Application(
                            uniq("a"),
                            tuple(container(rng) for _ in range(rng.randint(0, 2))),
                        )
                        for _ in range(rng.randint(0, 2))
                    ),
                )
                for _ in range(rng.randint(0, 2))
            ),
        )
        for _ in range(rng.randint(0, 2))
    )
    return DlModel(tuple(types), tuple(databases), platforms)


def random_ml_model(rng: random.Random) -> MlModel:
    serial = count(1)
    entities = [
        MlEntity(
            f"E{next(serial)}",
            tuple(
                MlAttribute(f"f{i}", rng.choice(PRIMITIVE_TYPES))
                for i in range(rng.randint(0, 3))
            ),
        )
        for _ in range(rng.randint(0, 3))
    ]
    free = [entity.name for entity in entities]
    rng.shuffle(free)
    databases = []
    for _ in range(rng.randint(0, 4)):
        contained = [free.pop(0) for _ in range(rng.randint(0, len(free)))]
        databases.append(MlDatabase(
            f"store{next(serial)}", rng.choice(list(DbKind)), tuple(contained)
        ))
    return MlModel(tuple(entities), tuple(databases))


_EXTRA_KEYS = ("volumes", "networks", "ports", "cpus", "memory", "storage",
               "ADMIN_USER", "ADMIN_PASSWORD")


def random_answers(
    rng: random.Random, ml: MlModel, catalog: DbmsCatalog
) -> DeploymentAnswers:
    """Complete answers for `ml` with random catalog choices and extras."""
    serial = count(1)
    databases = {}
    for db in ml.databases:
        extras = tuple(
            Property(key, scalar(rng))
            for key in rng.sample(_EXTRA_KEYS, rng.randint(0, 3))
        )
        databases[db.name] = DatabaseAnswers(
            dbms=rng.choice(catalog.names_for(db.kind)),
            image=(_word(rng) + ":" + _word(rng)) if rng.random() < 0.3 else None,
            container_name=f"ctr{next(serial)}" if rng.random() < 0.3 else None,
            extras=extras,
        )
    return DeploymentAnswers(
        platform_type=rng.choice(("AWS", "GoogleCloud", "Azure")),
        platform_name=f"plat{rng.randint(1, 99)}",
        cluster_name=f"clus{rng.randint(1, 99)}",
        application_name=f"app{rng.randint(1, 99)}",
        container_type="Docker",
        databases=databases,
    )
