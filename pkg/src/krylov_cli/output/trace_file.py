"""Plot-ready trace files: one metadata line, a header row, full-precision floats."""

import json
import logging
import os
import tempfile
from pathlib import Path

import pandas as pd

logger = logging.getLogger(__name__)

FLOAT_FORMAT = "%.17g"
METADATA_PREFIX = "# "


def write_atomic(path: Path, text: str) -> Path:
    """Write text to a temporary file in the target directory, then rename."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as f:
            f.write(text)
        os.replace(tmp, path)
    except BaseException:
        Path(tmp).unlink(missing_ok=True)
        raise
    logger.debug("Wrote %s", path)
    return path


def write_json(path: Path, data: dict) -> Path:
    return write_atomic(path, json.dumps(data, indent=2, sort_keys=True, allow_nan=False) + "\n")


def trace_file_name(scenario: str, seed: str, basis: str) -> str:
    return f"{scenario}__{seed}__{basis}.csv"


class TraceFile:
    """Reader/writer for trace CSVs.

    The first line carries ``key=value`` metadata (scenario, digest, ...),
    followed by a pandas CSV with a header row.
    """

    def __init__(self, path: str | Path):
        """Initialize with path to a trace file.

        Args:
            path: Path to the CSV file.
        """
        self.path = Path(path)

    @staticmethod
    def metadata_line(metadata: dict[str, str]) -> str:
        fields = " ".join(f"{key}={value}" for key, value in metadata.items())
        return f"{METADATA_PREFIX}{fields}\n"

    def write(self, frame: pd.DataFrame, metadata: dict[str, str]) -> Path:
        body = frame.to_csv(index=False, float_format=FLOAT_FORMAT, lineterminator="\n")
        return write_atomic(self.path, self.metadata_line(metadata) + body)

    def read_metadata(self) -> dict[str, str]:
        with open(self.path, encoding="utf-8") as f:
            first = f.readline()
        if not first.startswith(METADATA_PREFIX):
            return {}
        pairs = first[len(METADATA_PREFIX) :].split()
        return dict(pair.split("=", 1) for pair in pairs if "=" in pair)

    def read(self) -> pd.DataFrame:
        return pd.read_csv(self.path, skiprows=1, float_precision="round_trip")
