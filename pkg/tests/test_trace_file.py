"""Tests for trace file reading and writing."""

import json

import numpy as np
import pandas as pd
import pytest

from krylov_cli.output.trace_file import TraceFile, trace_file_name, write_atomic, write_json


@pytest.fixture
def frame():
    """Small trace with values that need full precision."""
    times = np.linspace(0.0, 1.0, 4)
    return pd.DataFrame({"time": times, "C": np.sin(times) ** 2 / 3, "leak": np.zeros(4)})


class TestTraceFile:
    """Tests for TraceFile."""

    def test_metadata_line(self):
        """Test the metadata header format."""
        line = TraceFile.metadata_line({"scenario": "blockade", "seed": "gg"})
        assert line == "# scenario=blockade seed=gg\n"

    def test_write_read(self, tmp_path, frame):
        """Test columns and metadata survive a write/read cycle."""
        trace = TraceFile(tmp_path / "t.csv")
        trace.write(frame, {"scenario": "s", "digest": "abc"})

        assert trace.read_metadata() == {"scenario": "s", "digest": "abc"}
        loaded = trace.read()
        assert list(loaded.columns) == ["time", "C", "leak"]
        # 17 significant digits reproduce the doubles exactly
        np.testing.assert_array_equal(loaded["C"].to_numpy(), frame["C"].to_numpy())

    def test_header_line_order(self, tmp_path, frame):
        """Test metadata line precedes the header row."""
        path = TraceFile(tmp_path / "t.csv").write(frame, {"seed": "ge"})
        lines = path.read_text().splitlines()
        assert lines[0].startswith("# ")
        assert lines[1] == "time,C,leak"
        assert len(lines) == 2 + len(frame)

    def test_missing_metadata(self, tmp_path):
        """Test files without a metadata line."""
        path = tmp_path / "plain.csv"
        path.write_text("time,C\n0,0\n")
        assert TraceFile(path).read_metadata() == {}


def test_write_atomic_creates_parent(tmp_path):
    """Test atomic writes create directories and leave no temp files."""
    target = tmp_path / "nested" / "file.txt"
    write_atomic(target, "hello\n")
    assert target.read_text() == "hello\n"
    assert [p.name for p in target.parent.iterdir()] == ["file.txt"]


def test_write_json_rejects_nan(tmp_path):
    """Test JSON reports refuse NaN."""
    with pytest.raises(ValueError):
        write_json(tmp_path / "r.json", {"x": float("nan")})
    assert not (tmp_path / "r.json").exists()


def test_write_json_sorted(tmp_path):
    """Test JSON reports are deterministic."""
    path = write_json(tmp_path / "r.json", {"b": 1, "a": 2})
    assert json.loads(path.read_text()) == {"a": 2, "b": 1}
    assert path.read_text().index('"a"') < path.read_text().index('"b"')


def test_trace_file_name():
    """Test the trace naming scheme."""
    assert trace_file_name("blockade", "gg", "krylov_full") == "blockade__gg__krylov_full.csv"
