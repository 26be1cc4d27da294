"""polyforge: compile polystore deployment models into ready-to-run
container-orchestration configuration, plus a fleet data-volume estimator."""

from .capacity import DataSourceRate, FleetEstimate, estimate_fleet
from .catalog import DbmsCatalog, DbmsInfo, default_catalog
from .codegen import (
    ComposePlan,
    ComposeService,
    GenerationError,
    K8sManifestSet,
    emit_compose,
    generate_compose,
    generate_k8s,
)
from .dlcore import (
    DlModel,
    ErrorCode,
    ResolveError,
    ValidationReport,
    resolve,
    validate,
)
from .dlsyntax import ParseError, SourceSpan, parse_dl, print_dl
from .mlmodel import DbKind, MlModel, parse_ml, required_databases
from .transform import (
    DatabaseAnswers,
    DeploymentAnswers,
    TransformError,
    default_properties,
    load_answers,
    ml_to_dl,
)

__version__ = "0.1.0"

__all__ = [
    "ComposePlan",
    "ComposeService",
    "DataSourceRate",
    "DatabaseAnswers",
    "DbKind",
    "DbmsCatalog",
    "DbmsInfo",
    "DeploymentAnswers",
    "DlModel",
    "ErrorCode",
    "FleetEstimate",
    "GenerationError",
    "K8sManifestSet",
    "MlModel",
    "ParseError",
    "ResolveError",
    "SourceSpan",
    "TransformError",
    "ValidationReport",
    "default_catalog",
    "default_properties",
    "emit_compose",
    "estimate_fleet",
    "generate_compose",
    "generate_k8s",
    "load_answers",
    "ml_to_dl",
    "parse_dl",
    "parse_ml",
    "print_dl",
    "required_databases",
    "resolve",
    "validate",
]
