"""polyforge command line.

Subcommands: check, transform, generate, init, fmt, estimate. Exit codes:
0 success, 1 parse error, 2 validation error, 3 I/O or argument error,
4 generation error. Diagnostics go to stderr; artifacts and reports go to
files or stdout.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .capacity import estimate_fleet, format_machine, format_table
from .catalog import (
    CONTAINER_TYPES,
    CatalogError,
    DbmsCatalog,
    DbmsInfo,
    PLATFORM_TYPE_SUGGESTIONS,
    default_catalog,
    load_catalog_file,
)
from .codegen import GenerationError, generate_compose, generate_k8s, emit_compose
from .dlcore import ResolveError, resolve, validate
from .dlsyntax import IDENT_RE, ParseError, parse_dl, print_dl
from .kvfile import KvFormatError
from .mlmodel import DbKind, required_databases, parse_ml
from .transform import (
    DatabaseAnswers,
    DeploymentAnswers,
    TransformError,
    default_properties,
    emit_answers,
    load_answers,
    ml_to_dl,
)

EXIT_OK = 0
EXIT_PARSE = 1
EXIT_VALIDATION = 2
EXIT_IO = 3
EXIT_GENERATION = 4


def _err(message: str) -> None:
    print(message, file=sys.stderr)


def _read(path: str) -> str:
    return Path(path).read_text(encoding="utf-8")


def _write(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        handle.write(text)


def _catalog_for(args: argparse.Namespace) -> DbmsCatalog:
    if args.catalog:
        return load_catalog_file(args.catalog)
    return default_catalog()


def _warn_fn(args: argparse.Namespace):
    if args.quiet:
        return None
    return lambda message: _err(f"warning: {message}")


def cmd_check(args: argparse.Namespace) -> int:
    try:
        model = parse_dl(_read(args.path))
    except ParseError as exc:
        _err(f"{args.path}: {exc}")
        return EXIT_PARSE
    report = validate(model)
    if args.format == "json":
        print(json.dumps(report.to_json_obj(), indent=2, sort_keys=True))
    else:
        print(report.render_text(), end="")
    return EXIT_OK if report.ok else EXIT_VALIDATION


def cmd_transform(args: argparse.Namespace) -> int:
    try:
        ml = parse_ml(_read(args.model))
    except ParseError as exc:
        _err(f"{args.model}: {exc}")
        return EXIT_PARSE
    try:
        catalog = _catalog_for(args)
    except CatalogError as exc:
        _err(str(exc))
        return EXIT_IO
    known = [name for name, _ in required_databases(ml)]
    try:
        answers = load_answers(_read(args.answers), known)
        model = ml_to_dl(ml, answers, catalog)
    except KvFormatError as exc:
        _err(f"{args.answers}: {exc}")
        return EXIT_PARSE
    except TransformError as exc:
        _err(str(exc))
        return EXIT_VALIDATION
    out = Path(args.out)
    _write(out, print_dl(model))
    if not args.quiet:
        print(out)
    return EXIT_OK


def cmd_generate(args: argparse.Namespace) -> int:
    try:
        model = parse_dl(_read(args.path))
    except ParseError as exc:
        _err(f"{args.path}: {exc}")
        return EXIT_PARSE
    report = validate(model)
    if not report.ok:
        _err(report.render_text().rstrip("\n"))
        return EXIT_VALIDATION
    try:
        resolved = resolve(model)
    except ResolveError as exc:
        _err(str(exc))
        return EXIT_VALIDATION

    applications = list(resolved.iter_applications())
    if not applications:
        _err("model declares no applications; nothing to generate")
        return EXIT_OK

    try:
        catalog = _catalog_for(args)
    except CatalogError as exc:
        _err(str(exc))
        return EXIT_IO

    outdir = Path(args.outdir)
    warn = _warn_fn(args)
    written: list[Path] = []
    try:
        for app in applications:
            if args.target == "compose":
                plan = generate_compose(resolved, app.name, warn=warn)
                path = outdir / app.name / "docker-compose.yml"
                _write(path, emit_compose(plan))
                written.append(path)
            else:
                for manifest_set in generate_k8s(
                    resolved, app.name, catalog=catalog, warn=warn
                ):
                    for manifest in manifest_set.manifests:
                        path = outdir / app.name / "k8s" / manifest.filename
                        _write(path, manifest.text)
                        written.append(path)
    except GenerationError as exc:
        _err(str(exc))
        return EXIT_GENERATION
    if not args.quiet:
        for path in written:
            print(path)
    return EXIT_OK


class _WizardError(Exception):
    pass


def _ask(label: str, default: str) -> str:
    try:
        raw = input(f"{label} [{default}]: ")
    except EOFError:
        return default
    return raw.strip() or default


def _ask_identifier(label: str, default: str) -> str:
    answer = _ask(label, default)
    if not IDENT_RE.fullmatch(answer):
        raise _WizardError(f"'{answer}' is not a valid identifier")
    return answer


def _choose_dbms(db_name: str, kind: DbKind, catalog: DbmsCatalog) -> DbmsInfo:
    options = catalog.for_kind(kind)
    menu = ", ".join(f"{i}) {info.name}" for i, info in enumerate(options, start=1))
    raw = _ask(f"DBMS for database '{db_name}' ({kind.value}): {menu}", "1")
    if raw.isdigit() and 1 <= int(raw) <= len(options):
        return options[int(raw) - 1]
    for info in options:
        if info.name == raw:
            return info
    raise _WizardError(f"'{raw}' is not a {kind.value} DBMS of the catalog")


def _database_answers(info: DbmsInfo, catalog: DbmsCatalog) -> DatabaseAnswers:
    # image is left to the catalog default at transform time; credentials
    # are written as CHANGEME placeholders for the user to edit.
    placeholders = tuple(
        prop for prop in default_properties(info.name, catalog) if prop.key != "image"
    )
    return DatabaseAnswers(dbms=info.name, extras=placeholders)


def cmd_init(args: argparse.Namespace) -> int:
    try:
        ml = parse_ml(_read(args.model))
    except ParseError as exc:
        _err(f"{args.model}: {exc}")
        return EXIT_PARSE
    try:
        catalog = _catalog_for(args)
    except CatalogError as exc:
        _err(str(exc))
        return EXIT_IO

    needed = required_databases(ml)
    try:
        if args.defaults:
            answers = DeploymentAnswers(databases={
                name: _database_answers(catalog.for_kind(kind)[0], catalog)
                for name, kind in needed
            })
        else:
            platform_type = _ask_identifier(
                "Platform type (e.g. " + ", ".join(PLATFORM_TYPE_SUGGESTIONS) + ")", "AWS"
            )
            platform_name = _ask_identifier("Platform name", "myPlatform")
            cluster_name = _ask_identifier("Cluster name", "myCluster")
            application_name = _ask_identifier("Application name", "myApplication")
            container_type = _ask(
                "Container technology (" + ", ".join(CONTAINER_TYPES)
                + "; only Docker generates)",
                "Docker",
            )
            if container_type not in CONTAINER_TYPES:
                raise _WizardError(
                    f"'{container_type}' is not a supported container technology"
                )
            databases = {}
            for name, kind in needed:
                info = _choose_dbms(name, kind, catalog)
                databases[name] = _database_answers(info, catalog)
            answers = DeploymentAnswers(
                platform_type=platform_type,
                platform_name=platform_name,
                cluster_name=cluster_name,
                application_name=application_name,
                container_type=container_type,
                databases=databases,
            )
    except _WizardError as exc:
        _err(str(exc))
        return EXIT_VALIDATION

    out = Path(args.out)
    _write(out, emit_answers(answers))
    if not args.quiet:
        print(out)
    return EXIT_OK


def cmd_fmt(args: argparse.Namespace) -> int:
    text = _read(args.path)
    try:
        model = parse_dl(text)
    except ParseError as exc:
        _err(f"{args.path}: {exc}")
        return EXIT_PARSE
    canonical = print_dl(model)
    if args.check:
        if canonical != text:
            _err(f"{args.path}: not in canonical form")
            return EXIT_VALIDATION
        return EXIT_OK
    if canonical != text:
        _write(Path(args.path), canonical)
        if not args.quiet:
            print(args.path)
    return EXIT_OK


def cmd_estimate(args: argparse.Namespace) -> int:
    if args.fleet < 0:
        _err("fleet size must be non-negative")
        return EXIT_IO
    estimate = estimate_fleet(args.fleet)
    output = format_machine(estimate) if args.machine else format_table(estimate)
    print(output, end="")
    return EXIT_OK


class _ArgumentParser(argparse.ArgumentParser):
    def error(self, message):  # argument errors map to the I/O exit code
        self.print_usage(sys.stderr)
        _err(f"{self.prog}: error: {message}")
        raise SystemExit(EXIT_IO)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--format", choices=("text", "json"), default="text",
        help="report format (default: text)",
    )
    common.add_argument("--catalog", metavar="PATH", help="override the DBMS catalog file")
    common.add_argument("--quiet", action="store_true", help="suppress informational output")

    parser = _ArgumentParser(
        prog="polyforge",
        description="Compile polystore deployment models into container-orchestration "
        "configuration, and estimate fleet data volumes.",
    )
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")

    p = sub.add_parser("check", parents=[common], help="validate a deployment model")
    p.add_argument("path", help="deployment model (.tdl)")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser(
        "transform", parents=[common],
        help="transform a polystore model plus answers into a deployment model",
    )
    p.add_argument("model", help="polystore model (.tyml)")
    p.add_argument("answers", help="answers file")
    p.add_argument("-o", "--out", required=True, help="output deployment model (.tdl)")
    p.set_defaults(func=cmd_transform)

    p = sub.add_parser(
        "generate", parents=[common], help="generate deployment artifacts"
    )
    p.add_argument("path", help="deployment model (.tdl)")
    p.add_argument(
        "--target", choices=("compose", "kubernetes"), default="compose",
        help="artifact kind (default: compose)",
    )
    p.add_argument("--outdir", default=".", help="output directory (default: .)")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser(
        "init", parents=[common],
        help="create an answers file for a polystore model (wizard)",
    )
    p.add_argument("model", help="polystore model (.tyml)")
    p.add_argument("-o", "--out", required=True, help="output answers file")
    p.add_argument(
        "--defaults", action="store_true",
        help="non-interactive: first catalog entry everywhere",
    )
    p.set_defaults(func=cmd_init)

    p = sub.add_parser("fmt", parents=[common], help="rewrite a model in canonical form")
    p.add_argument("path", help="deployment model (.tdl)")
    p.add_argument(
        "--check", action="store_true",
        help="exit non-zero if formatting would change the file",
    )
    p.set_defaults(func=cmd_fmt)

    p = sub.add_parser(
        "estimate", parents=[common], help="estimate fleet data volumes"
    )
    p.add_argument("--fleet", type=int, default=1000, help="fleet size (default: 1000)")
    p.add_argument(
        "--machine", action="store_true",
        help="machine-readable output: source,daily_tb,yearly_pb per row",
    )
    p.set_defaults(func=cmd_estimate)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_IO
    try:
        return args.func(args)
    except OSError as exc:
        _err(f"error: {exc}")
        return EXIT_IO


def run() -> None:
    sys.exit(main())
