"""Computational layer: states, operators, Krylov analysis and scenarios."""

from .errors import KrylovError, ScenarioError, ScenarioValidationError
from .krylov_analysis import KrylovBasis, OrderedBasis, lanczos, spread_complexity
from .models import HermitianOperator, SpectralDecomposition, StateVector
from .runner import ScenarioRunner, run_scenario, run_sweep
from .scenario import Scenario, ScenarioFile, load_scenario

__all__ = [
    "HermitianOperator",
    "KrylovBasis",
    "KrylovError",
    "OrderedBasis",
    "Scenario",
    "ScenarioError",
    "ScenarioFile",
    "ScenarioRunner",
    "ScenarioValidationError",
    "SpectralDecomposition",
    "StateVector",
    "lanczos",
    "load_scenario",
    "run_scenario",
    "run_sweep",
    "spread_complexity",
]
