"""Pytest configuration and fixtures."""

from pathlib import Path

import numpy as np
import pytest

from krylov_cli.data.linalg import random_hermitian, random_state


@pytest.fixture
def rng():
    """Seeded generator so randomized checks are reproducible."""
    return np.random.default_rng(20240611)


@pytest.fixture
def random_system(rng):
    """Random 6-level Hamiltonian and seed."""
    return random_hermitian(rng, 6), random_state(rng, 6)


QUBIT_SCENARIO = """\
name = "qubit_test"
model = "single_qubit"
description = "Test qubit"
seed = ["psi0"]
outputs = ["complexity", "populations", "shannon", "ipr", "lanczos", "bloch"]

[params]
omega = 2.0
theta = "pi/3"
phi = "pi/7"

[time_grid]
start = 0.0
end = "2pi"
points = 201
"""

BLOCKADE_SCENARIO = """\
name = "blockade_test"
model = "rydberg_pair"
seed = ["gg", "plus", "ge"]
bases = ["krylov_full", { explicit = ["plus", "gg", "ee", "minus"] }]
outputs = ["complexity", "populations", "lanczos"]

[params]
Omega = 1.0
Delta = 0.0
V0 = 100.0

[time_grid]
end = 20.0
points = 2001
"""

MALFORMED_SCENARIO = """\
name = "broken"
model = "single_qubit"
seed = "psi0"

[params]
omega = 1.0
theta = 0.5

[time_grid]
start = 1.0
end = 0.5
points = 10
"""

NON_ORTHOGONAL_BASIS_SCENARIO = """\
name = "skewed_basis"
model = "rydberg_pair"
seed = "gg"
bases = [{ explicit = ["ge", "plus"] }]

[params]
Omega = 1.0
V0 = 10.0

[time_grid]
end = 5.0
points = 11
"""


def _write(directory: Path, name: str, text: str) -> Path:
    path = directory / name
    path.write_text(text, encoding="utf-8")
    return path


@pytest.fixture
def qubit_scenario_file(tmp_path):
    """Scenario file for a generic single qubit."""
    return _write(tmp_path, "qubit_test.toml", QUBIT_SCENARIO)


@pytest.fixture
def blockade_scenario_file(tmp_path):
    """Scenario file for the blockaded Rydberg pair."""
    return _write(tmp_path, "blockade_test.toml", BLOCKADE_SCENARIO)


@pytest.fixture
def malformed_scenario_file(tmp_path):
    """Scenario whose time grid ends before it starts."""
    return _write(tmp_path, "broken.toml", MALFORMED_SCENARIO)


@pytest.fixture
def skewed_basis_scenario_file(tmp_path):
    """Scenario whose explicit basis is not orthonormal."""
    return _write(tmp_path, "skewed_basis.toml", NON_ORTHOGONAL_BASIS_SCENARIO)


@pytest.fixture
def out_dir(tmp_path):
    """Empty output directory."""
    path = tmp_path / "out"
    path.mkdir()
    return path
