"""Shared helpers for CLI commands."""

import logging
from contextlib import contextmanager
from typing import Iterator

import click

from ..data.errors import KrylovError, ScenarioError, ScenarioValidationError, SeedNotInSubspaceError
from ..output.formatter import OutputFormat

logger = logging.getLogger(__name__)

EXIT_VALIDATION = 2
EXIT_NUMERICAL = 3


def get_format(ctx: click.Context) -> OutputFormat:
    """Get output format from context."""
    format_str = ctx.obj.get("format", "table") if ctx.obj else "table"
    return OutputFormat(format_str)


class ValidationFailure(click.ClickException):
    """Scenario could not be parsed or validated."""

    exit_code = EXIT_VALIDATION


class NumericalFailure(click.ClickException):
    """A numerical check failed while running a scenario."""

    exit_code = EXIT_NUMERICAL


@contextmanager
def translate_errors() -> Iterator[None]:
    """Map library errors onto CLI exit codes."""
    try:
        yield
    except ScenarioValidationError as e:
        raise ValidationFailure(f"Invalid scenario: {e}") from e
    except ScenarioError as e:
        raise ValidationFailure(str(e)) from e
    except SeedNotInSubspaceError as e:
        raise ValidationFailure(f"Invalid scenario: {e}") from e
    except KrylovError as e:
        logger.debug("Numerical failure", exc_info=True)
        raise NumericalFailure(f"{type(e).__name__}: {e}") from e
