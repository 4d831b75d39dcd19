"""
Pytest configuration and shared fixtures.
"""
from pathlib import Path
from typing import Callable, List

import numpy as np
import pytest
from typer.testing import CliRunner

from app.cli import app
from app.models.disk import EllipticSymbol
from app.models.operator import OperatorMatrix
from app.services.disk_maps import elliptic_symbol
from app.services.hardy_operator import adjoint, composition_matrix

# Fixed point used by most worked examples.
HALF = 0.5

TEST_SEED = 20240601


@pytest.fixture(scope="session")
def order2_symbol() -> EllipticSymbol:
    """Order-2 symbol fixing 0.5; the map is (0.8 - z)/(1 - 0.8 z)."""
    return elliptic_symbol(HALF, 2)


@pytest.fixture(scope="session")
def order3_symbol() -> EllipticSymbol:
    """Order-3 symbol fixing 0.5 with multiplier exp(2 pi i/3)."""
    return elliptic_symbol(HALF, 3)


@pytest.fixture(scope="session")
def rotation3_symbol() -> EllipticSymbol:
    """Rotation z -> exp(2 pi i/3) z."""
    return elliptic_symbol(0.0, 3)


@pytest.fixture(scope="session")
def order2_matrix(order2_symbol) -> OperatorMatrix:
    return composition_matrix(order2_symbol, 256)


@pytest.fixture(scope="session")
def order3_matrix(order3_symbol) -> OperatorMatrix:
    return composition_matrix(order3_symbol, 256)


@pytest.fixture(scope="session")
def order2_adjoint(order2_matrix) -> OperatorMatrix:
    return adjoint(order2_matrix)


@pytest.fixture(scope="session")
def order3_adjoint(order3_matrix) -> OperatorMatrix:
    return adjoint(order3_matrix)


@pytest.fixture
def rng() -> np.random.Generator:
    """Fresh generator per test so results do not depend on test order."""
    return np.random.default_rng(TEST_SEED)


@pytest.fixture(scope="session")
def cli_runner() -> CliRunner:
    return CliRunner()


@pytest.fixture
def invoke(cli_runner) -> Callable:
    """Run the CLI with logging reduced to errors so stdout holds only the output."""

    def _invoke(args: List[str]):
        return cli_runner.invoke(app, ["--log-level", "ERROR", *args])

    return _invoke


@pytest.fixture
def output_dir(tmp_path: Path) -> Path:
    """Directory for files written by CLI commands."""
    path = tmp_path / "out"
    path.mkdir()
    return path


def pytest_configure(config):
    """Configure custom pytest markers."""
    config.addinivalue_line(
        "markers", "unit: fast tests of a single module"
    )
    config.addinivalue_line(
        "markers", "integration: CLI, suites and pipeline runs"
    )
    config.addinivalue_line(
        "markers", "slow: acceptance runs at full truncation (minutes)"
    )
