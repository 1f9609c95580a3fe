"""Sweep command: rerun a scenario over parameter grids."""

import click

from ..data.errors import ScenarioValidationError
from ..data.runner import run_sweep
from ..data.scenario import load_scenario, parse_sweep_values
from ..output.formatter import OutputFormatter
from .common import get_format, translate_errors


@click.command()
@click.argument("scenario")
@click.option(
    "--param",
    "-p",
    "params",
    multiple=True,
    required=True,
    help="Parameter to sweep (repeatable, paired with --values)",
)
@click.option(
    "--values",
    "-V",
    "values",
    multiple=True,
    required=True,
    help="Comma list ('0, pi/4, pi/2') or range start:stop:num",
)
@click.pass_context
def sweep(ctx: click.Context, scenario: str, params: tuple[str, ...], values: tuple[str, ...]) -> None:
    """Sweep scenario parameters over the cartesian product of values.

    Writes per-instance traces and a summary CSV with trace amplitudes.

    Example:
        krylov-cli sweep pair_cross_term --param theta2 --values 0:pi:37
        krylov-cli sweep pair_cross_term -p theta1 -V 0:pi:19 -p theta2 -V 0:pi:19
    """
    with translate_errors():
        if len(params) != len(values):
            raise ScenarioValidationError("--values", "give one --values per --param")
        parsed = load_scenario(scenario)
        grid = []
        for name, text in zip(params, values):
            if name not in parsed.params:
                raise ScenarioValidationError(
                    "--param", f"'{name}' is not a parameter of scenario '{parsed.name}'"
                )
            grid.append((name, parse_sweep_values(text)))
        summary = run_sweep(parsed, grid, ctx.obj["out"])

    formatter = OutputFormatter(get_format(ctx))
    click.echo(formatter.format_output(summary.rows, title=f"Sweep: {parsed.name}"))
