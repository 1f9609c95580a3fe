"""CLI commands for Krylov complexity scenarios."""

from . import list_scenarios, run, sweep, validate

__all__ = [
    "list_scenarios",
    "run",
    "sweep",
    "validate",
]
