"""Validate command: parse and check a scenario without computing it."""

import click

from ..data.scenario import load_scenario
from ..output.formatter import OutputFormatter
from .common import get_format, translate_errors


@click.command()
@click.argument("scenario")
@click.pass_context
def validate(ctx: click.Context, scenario: str) -> None:
    """Check that a scenario parses and matches its model.

    Example:
        krylov-cli validate qubit_entropy
    """
    with translate_errors():
        parsed = load_scenario(scenario)
        instance = parsed.build()

    summary = parsed.to_dict()
    summary["dim"] = instance.hamiltonian.dim
    summary["basis_labels"] = list(instance.basis_labels)
    summary["valid"] = True
    formatter = OutputFormatter(get_format(ctx))
    click.echo(formatter.format_output(summary, title=f"Scenario: {parsed.name}"))
