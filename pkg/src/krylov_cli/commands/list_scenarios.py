"""List bundled scenarios."""

import click

from ..data.scenario import ScenarioFile, bundled_scenarios
from ..output.formatter import OutputFormatter
from .common import get_format, translate_errors


@click.command(name="list-scenarios")
@click.pass_context
def list_scenarios(ctx: click.Context) -> None:
    """List the bundled scenarios with their models and descriptions.

    Example:
        krylov-cli list-scenarios
    """
    rows = []
    with translate_errors():
        for path in bundled_scenarios():
            scenario = ScenarioFile(path).load()
            rows.append(
                {
                    "name": scenario.name,
                    "model": scenario.model,
                    "seeds": [s.name for s in scenario.seeds],
                    "description": scenario.description,
                }
            )

    formatter = OutputFormatter(get_format(ctx))
    click.echo(formatter.format_output(rows, headers=["name", "model", "seeds", "description"]))
