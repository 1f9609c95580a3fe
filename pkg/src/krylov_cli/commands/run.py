"""Run command: compute traces and the report for one scenario."""

import json
import logging

import click

from ..data.runner import ScenarioRunner
from ..data.scenario import load_scenario
from ..output.formatter import OutputFormat, OutputFormatter
from .common import get_format, translate_errors

logger = logging.getLogger(__name__)

TRACE_HEADERS = ["seed", "basis", "amplitude", "frequency", "max_leak", "closed_form_deviation", "file"]


@click.command()
@click.argument("scenario")
@click.pass_context
def run(ctx: click.Context, scenario: str) -> None:
    """Run a scenario file or bundled scenario and write its traces.

    Example:
        krylov-cli run blockade
        krylov-cli --out results run my_scenario.toml
    """
    output_format = get_format(ctx)
    out_dir = ctx.obj["out"]

    with translate_errors():
        parsed = load_scenario(scenario)
        report = ScenarioRunner(parsed, out_dir).run()

    logger.info("Wrote %d files to %s", len(report.files), out_dir)
    if output_format == OutputFormat.JSON:
        click.echo(json.dumps(report.to_dict(), indent=2))
        return

    formatter = OutputFormatter(output_format)
    rows = [trace.to_dict() for trace in report.traces]
    click.echo(formatter.format_output(rows, headers=TRACE_HEADERS, title=f"Scenario: {parsed.name}"))
