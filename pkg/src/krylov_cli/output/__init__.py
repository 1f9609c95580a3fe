"""Output formatting and trace files."""

from .formatter import OutputFormat, OutputFormatter
from .trace_file import TraceFile, write_atomic, write_json

__all__ = ["OutputFormat", "OutputFormatter", "TraceFile", "write_atomic", "write_json"]
