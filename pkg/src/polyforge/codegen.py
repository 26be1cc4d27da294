"""Generators turning a resolved deployment model into docker-compose files
(one per application) and minimal Kubernetes manifests (per database
container). Both share one deterministic YAML writer, so repeated runs are
byte-identical.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Callable

from .catalog import DbmsCatalog, GENERATED_CONTAINER_TYPE, default_catalog
from .dlcore import (
    ENV_KEY_RE,
    ArrayVal,
    ListVal,
    Property,
    ResolvedApplication,
    ResolvedContainer,
    ResolvedModel,
    Scalar,
    Value,
)
from .yamlwriter import SingleQuoted, render

COMPOSE_VERSION = "3.7"

# Service keys in emission order; lowercase properties with these names map
# onto the like-named compose fields, everything else lowercase passes
# through with a warning.
SERVICE_FIELDS = (
    "image",
    "container_name",
    "entrypoint",
    "depends_on",
    "environment",
    "volumes",
    "ports",
    "networks",
)
_LIST_FIELDS = ("entrypoint", "ports", "volumes", "networks", "depends_on")

WarnFn = Callable[[str], None]


class GenerationError(Exception):
    """Generation failure with a stable code: UNKNOWN_APPLICATION,
    AMBIGUOUS_APPLICATION, UNSUPPORTED_CONTAINER_TYPE or MISSING_IMAGE."""

    def __init__(self, code: str, message: str):
        self.code = code
        super().__init__(f"{code}: {message}")


@dataclass(frozen=True)
class ComposeService:
    image: str
    container_name: str
    entrypoint: tuple[str, ...] = ()
    depends_on: tuple[str, ...] = ()
    environment: tuple[str, ...] = ()
    volumes: tuple[str, ...] = ()
    ports: tuple[str, ...] = ()
    networks: tuple[str, ...] = ()
    passthrough: tuple[tuple[str, Value], ...] = ()


@dataclass(frozen=True)
class ComposePlan:
    services: tuple[tuple[str, ComposeService], ...] = ()
    networks: tuple[str, ...] = ()
    version: str = COMPOSE_VERSION


def _as_text(value: Value) -> str:
    if isinstance(value, Scalar):
        return value.text
    return ",".join(value.items)


def _as_list(value: Value) -> tuple[str, ...]:
    if isinstance(value, Scalar):
        return (value.text,)
    return value.items


def merged_properties(container: ResolvedContainer) -> list[Property]:
    """Database properties first, then container-only ones; on a key clash
    the container value wins, keeping the database position."""
    if container.deploys is None:
        return list(container.decl.properties)
    merged = list(container.deploys.decl.properties)
    index = {prop.key: i for i, prop in enumerate(merged)}
    for prop in container.decl.properties:
        if prop.key in index:
            merged[index[prop.key]] = prop
        else:
            merged.append(prop)
    return merged


def _find_application(model: ResolvedModel, name: str) -> ResolvedApplication:
    matches = [app for app in model.iter_applications() if app.name == name]
    if not matches:
        raise GenerationError("UNKNOWN_APPLICATION", f"no application named '{name}'")
    if len(matches) > 1:
        raise GenerationError(
            "AMBIGUOUS_APPLICATION", f"{len(matches)} applications are named '{name}'"
        )
    return matches[0]


def _check_container_type(container: ResolvedContainer) -> None:
    if container.container_type.name != GENERATED_CONTAINER_TYPE:
        raise GenerationError(
            "UNSUPPORTED_CONTAINER_TYPE",
            f"container '{container.name}' uses '{container.container_type.name}'; "
            f"only {GENERATED_CONTAINER_TYPE} containers can be generated",
        )


def _build_service(container: ResolvedContainer, warn: WarnFn | None) -> ComposeService:
    image: str | None = None
    fields: dict[str, tuple[str, ...]] = {name: () for name in _LIST_FIELDS}
    container_name = container.name
    environment: list[str] = []
    passthrough: list[tuple[str, Value]] = []

    for prop in merged_properties(container):
        if prop.key == "image":
            image = _as_text(prop.value)
        elif prop.key == "container_name":
            container_name = _as_text(prop.value)
        elif prop.key in _LIST_FIELDS:
            fields[prop.key] = _as_list(prop.value)
        elif ENV_KEY_RE.fullmatch(prop.key):
            environment.append(f"{prop.key}={_as_text(prop.value)}")
        else:
            passthrough.append((prop.key, prop.value))
            if warn is not None:
                warn(
                    f"service '{container.name}': unrecognized property "
                    f"'{prop.key}' passed through to the compose file"
                )

    if not image:
        raise GenerationError(
            "MISSING_IMAGE", f"container '{container.name}' resolves to no image"
        )
    return ComposeService(
        image=image,
        container_name=container_name,
        entrypoint=fields["entrypoint"],
        depends_on=fields["depends_on"],
        environment=tuple(environment),
        volumes=fields["volumes"],
        ports=fields["ports"],
        networks=fields["networks"],
        passthrough=tuple(passthrough),
    )


def generate_compose(
    model: ResolvedModel, application: str, *, warn: WarnFn | None = None
) -> ComposePlan:
    """One service per container of the named application, in declaration
    order; referenced networks are collected once at top level."""
    app = _find_application(model, application)
    services: list[tuple[str, ComposeService]] = []
    networks: list[str] = []
    for container in app.containers:
        _check_container_type(container)
        service = _build_service(container, warn)
        services.append((container.name, service))
        for network in service.networks:
            if network not in networks:
                networks.append(network)
    return ComposePlan(services=tuple(services), networks=tuple(networks))


def emit_compose(plan: ComposePlan) -> str:
    """Deterministic rendering of a compose plan; byte-stable across runs."""
    doc: dict = {"version": SingleQuoted(plan.version)}
    if not plan.services:
        doc["services"] = {}
    else:
        services: dict = {}
        for name, service in plan.services:
            block: dict = {
                "image": service.image,
                "container_name": service.container_name,
            }
            if service.entrypoint:
                block["entrypoint"] = list(service.entrypoint)
            if service.depends_on:
                block["depends_on"] = list(service.depends_on)
            if service.environment:
                block["environment"] = list(service.environment)
            if service.volumes:
                block["volumes"] = list(service.volumes)
            if service.ports:
                block["ports"] = list(service.ports)
            if service.networks:
                block["networks"] = list(service.networks)
            for key, value in service.passthrough:
                if isinstance(value, (ListVal, ArrayVal)):
                    block[key] = list(value.items)
                else:
                    block[key] = value.text
            services[name] = block
        doc["services"] = services
    if plan.networks:
        doc["networks"] = {name: {"name": name} for name in plan.networks}
    return render(doc)


_DNS_UNSAFE_RE = re.compile(r"[^a-z0-9-]+")


def dns_label(name: str) -> str:
    """Lowercase DNS-label-safe derivation of a container name."""
    label = _DNS_UNSAFE_RE.sub("-", name.lower()).strip("-")
    return label or "c"


@dataclass(frozen=True)
class K8sManifest:
    role: str  # "deployment", "service" or "pvc"
    filename: str
    text: str


@dataclass(frozen=True)
class K8sManifestSet:
    """Manifests for one database container: a single-replica deployment, a
    service, and a persistent volume claim iff the container has volumes."""

    container: str
    label: str
    image: str
    environment: tuple[str, ...]
    manifests: tuple[K8sManifest, ...]


def _service_port(
    props: dict[str, Property],
    container: ResolvedContainer,
    catalog: DbmsCatalog,
    warn: WarnFn | None,
) -> int:
    ports_prop = props.get("ports")
    if ports_prop is not None:
        first = _as_list(ports_prop.value)[0]
        candidate = first.rsplit(":", 1)[-1].split("/")[0]
        if candidate.isdigit():
            return int(candidate)
        if warn is not None:
            warn(f"container '{container.name}': cannot read a port from '{first}'")
    assert container.deploys is not None
    info = catalog.get(container.deploys.db_type.name)
    if info is not None:
        return info.port
    if warn is not None:
        warn(
            f"container '{container.name}': no ports property and "
            f"'{container.deploys.db_type.name}' is not in the catalog; using 8080"
        )
    return 8080


def generate_k8s(
    model: ResolvedModel,
    application: str,
    *,
    catalog: DbmsCatalog | None = None,
    warn: WarnFn | None = None,
) -> tuple[K8sManifestSet, ...]:
    """Manifest sets for every database container of the named application.

    Environment entries match the compose generator's. Manifest names are
    DNS-label-safe lowercase derivations of the container name.
    """
    catalog = catalog if catalog is not None else default_catalog()
    app = _find_application(model, application)
    sets: list[K8sManifestSet] = []
    for container in app.containers:
        _check_container_type(container)
        if container.deploys is None:
            continue
        merged = merged_properties(container)
        props = {prop.key: prop for prop in merged}
        image_prop = props.get("image")
        if image_prop is None:
            raise GenerationError(
                "MISSING_IMAGE", f"container '{container.name}' resolves to no image"
            )
        image = _as_text(image_prop.value)
        environment = tuple(
            f"{p.key}={_as_text(p.value)}" for p in merged if ENV_KEY_RE.fullmatch(p.key)
        )
        label = dns_label(container.name)
        port = _service_port(props, container, catalog, warn)
        volumes_prop = props.get("volumes")
        storage_prop = props.get("storage")
        storage = _as_text(storage_prop.value) if storage_prop is not None else "1Gi"

        env_items = [
            {"name": entry.split("=", 1)[0], "value": entry.split("=", 1)[1]}
            for entry in environment
        ]
        pod_container: dict = {"name": label, "image": image}
        if env_items:
            pod_container["env"] = env_items
        pod_container["ports"] = [{"containerPort": port}]
        pod_spec: dict = {"containers": [pod_container]}
        if volumes_prop is not None:
            mount_path = _as_list(volumes_prop.value)[0].rsplit(":", 1)[-1]
            pod_container["volumeMounts"] = [{"name": "data", "mountPath": mount_path}]
            pod_spec["volumes"] = [
                {"name": "data", "persistentVolumeClaim": {"claimName": f"{label}-pvc"}}
            ]

        deployment = {
            "apiVersion": "apps/v1",
            "kind": "Deployment",
            "metadata": {"name": f"{label}-deployment", "labels": {"app": label}},
            "spec": {
                "replicas": 1,
                "selector": {"matchLabels": {"app": label}},
                "template": {
                    "metadata": {"labels": {"app": label}},
                    "spec": pod_spec,
                },
            },
        }
        service = {
            "apiVersion": "v1",
            "kind": "Service",
            "metadata": {"name": f"{label}-service"},
            "spec": {
                "selector": {"app": label},
                "ports": [{"port": port, "targetPort": port}],
            },
        }
        manifests = [
            K8sManifest("deployment", f"{label}-deployment.yaml", render(deployment)),
            K8sManifest("service", f"{label}-service.yaml", render(service)),
        ]
        if volumes_prop is not None:
            pvc = {
                "apiVersion": "v1",
                "kind": "PersistentVolumeClaim",
                "metadata": {"name": f"{label}-pvc"},
                "spec": {
                    "accessModes": ["ReadWriteOnce"],
                    "resources": {"requests": {"storage": storage}},
                },
            }
            manifests.append(K8sManifest("pvc", f"{label}-pvc.yaml", render(pvc)))
        sets.append(K8sManifestSet(
            container=container.name,
            label=label,
            image=image,
            environment=environment,
            manifests=tuple(manifests),
        ))
    return tuple(sets)
