from pathlib import Path

import pytest

from polyforge.dlcore import resolve
from polyforge.dlsyntax import parse_dl

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture(scope="session")
def fixtures_dir() -> Path:
    return FIXTURES


@pytest.fixture(scope="session")
def locman_text() -> str:
    return (FIXTURES / "locman.tdl").read_text(encoding="utf-8")


@pytest.fixture(scope="session")
def locman_model(locman_text):
    return parse_dl(locman_text)


@pytest.fixture(scope="session")
def locman_resolved(locman_model):
    return resolve(locman_model)


@pytest.fixture(scope="session")
def golden_compose() -> str:
    return (FIXTURES / "locman-compose.yml").read_text(encoding="utf-8")
