"""Main CLI entry point for Krylov CLI."""

import logging
from pathlib import Path

import click

from . import __version__
from .commands import list_scenarios, run, sweep, validate

LOG_FORMAT = "%(levelname)s %(name)s: %(message)s"


def _log_level(verbose: int) -> int:
    if verbose >= 2:
        return logging.DEBUG
    if verbose == 1:
        return logging.INFO
    return logging.WARNING


@click.group()
@click.version_option(version=__version__, prog_name="krylov-cli")
@click.option(
    "--format",
    "-f",
    type=click.Choice(["table", "json", "csv"]),
    default="table",
    help="Output format (table, json, csv)",
)
@click.option(
    "--out",
    "-o",
    type=click.Path(file_okay=False, path_type=Path),
    default=Path("out"),
    envvar="KRYLOV_CLI_OUT",
    show_default=True,
    help="Output directory for traces and reports",
)
@click.option("--verbose", "-v", count=True, help="Increase log verbosity (-v, -vv)")
@click.pass_context
def cli(ctx: click.Context, format: str, out: Path, verbose: int) -> None:
    """Krylov CLI - spread complexity of small quantum systems.

    Runs declarative scenarios (single qubits, qubit pairs, Rydberg
    pairs, partitioned Hamiltonians) and writes plot-ready traces of
    Krylov complexity, populations, entropy and participation ratio.
    """
    logging.basicConfig(level=_log_level(verbose), format=LOG_FORMAT)
    ctx.ensure_object(dict)
    ctx.obj["format"] = format
    ctx.obj["out"] = out


# Register commands
cli.add_command(run.run)
cli.add_command(sweep.sweep)
cli.add_command(validate.validate)
cli.add_command(list_scenarios.list_scenarios, name="list-scenarios")


def main() -> None:
    """Main entry point."""
    cli()


if __name__ == "__main__":
    main()
