"""Scenario file access layer (TOML)."""

import copy
import hashlib
import json
import logging
import re
try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Any, Optional

import numpy as np

from .errors import (
    InvalidSpecError,
    KrylovError,
    ScenarioError,
    ScenarioValidationError,
)
from .model_zoo import MODEL_BUILDERS, ModelInstance, build_model

logger = logging.getLogger(__name__)

OUTPUT_KINDS = ("complexity", "populations", "shannon", "ipr", "lanczos", "bloch", "comparison")
TRACE_OUTPUTS = frozenset({"complexity", "populations", "shannon", "ipr"})
MATRIX_PARAMS = frozenset({"c_A", "c_B", "d"})
LABEL_PARAMS = frozenset({"labels_A", "labels_B"})
SCENARIO_SUFFIX = ".toml"

_NUMBER = r"(?:\d+(?:\.\d*)?|\.\d+)(?:e[+-]?\d+)?"
_PI_PATTERN = re.compile(rf"([+-]?)({_NUMBER})?\*?pi(?:/({_NUMBER}))?")


def parse_number(value: Any, field_name: str) -> float:
    """Real number from a TOML number or a string such as "3pi/4" or "0.25*pi"."""
    if isinstance(value, bool):
        raise ScenarioValidationError(field_name, "expected a number, got a boolean")
    if isinstance(value, (int, float)):
        return float(value)
    if isinstance(value, str):
        text = value.strip().lower().replace(" ", "")
        if "pi" not in text:
            try:
                return float(text)
            except ValueError:
                pass
        else:
            match = _PI_PATTERN.fullmatch(text)
            if match:
                sign, coeff, divisor = match.groups()
                result = (float(coeff) if coeff else 1.0) * np.pi
                if divisor:
                    result /= float(divisor)
                return -result if sign == "-" else result
    raise ScenarioValidationError(field_name, f"expected a number, got {value!r}")


def parse_complex(value: Any, field_name: str) -> complex:
    """Complex number from a real number or an [re, im] pair."""
    if isinstance(value, list):
        if len(value) != 2:
            raise ScenarioValidationError(field_name, "complex numbers are [re, im] pairs")
        return complex(parse_number(value[0], field_name), parse_number(value[1], field_name))
    return complex(parse_number(value, field_name))


def _parse_matrix(value: Any, field_name: str) -> np.ndarray:
    if not isinstance(value, list) or not value or not all(isinstance(r, list) for r in value):
        raise ScenarioValidationError(field_name, "expected a nonempty list of rows")
    rows = [
        [parse_complex(entry, f"{field_name}[{i}][{j}]") for j, entry in enumerate(row)]
        for i, row in enumerate(value)
    ]
    if len({len(r) for r in rows}) != 1:
        raise ScenarioValidationError(field_name, "rows have different lengths")
    return np.array(rows, dtype=np.complex128)


@dataclass
class TimeGrid:
    start: float
    end: float
    points: int

    def times(self) -> np.ndarray:
        return np.linspace(self.start, self.end, self.points)

    def to_dict(self) -> dict:
        """Convert to dictionary for JSON output."""
        return {"start": self.start, "end": self.end, "points": self.points}


@dataclass
class SeedRequest:
    """A named seed of the model, or explicit amplitudes over its basis."""

    label: Optional[str] = None
    amplitudes: Optional[list[complex]] = None

    @property
    def name(self) -> str:
        return self.label if self.label is not None else "custom"


@dataclass
class BasisRequest:
    kind: str
    labels: tuple[str, ...] = ()
    weights: Optional[list[float]] = None

    @property
    def name(self) -> str:
        if self.kind == "explicit":
            return "explicit_" + "_".join(self.labels)
        return self.kind


@dataclass
class Scenario:
    """Parsed scenario: which model to build, which seeds and bases to score."""

    name: str
    model: str
    description: str
    params: dict[str, Any]
    seeds: list[SeedRequest]
    time_grid: TimeGrid
    bases: list[BasisRequest]
    outputs: list[str]
    random_seed: Optional[int] = None
    reference_frequency: Optional[str] = None
    raw: dict[str, Any] = field(default_factory=dict, repr=False)

    @property
    def digest(self) -> str:
        """SHA-256 of the canonical parsed content."""
        canonical = json.dumps(self.raw, sort_keys=True, default=str)
        return hashlib.sha256(canonical.encode()).hexdigest()

    def times(self) -> np.ndarray:
        return self.time_grid.times()

    def rng(self) -> np.random.Generator:
        return np.random.default_rng(self.random_seed)

    def with_params(self, overrides: dict[str, Any], name: Optional[str] = None) -> "Scenario":
        """Copy with parameter overrides, re-validated."""
        raw = copy.deepcopy(self.raw)
        raw.setdefault("params", {}).update(overrides)
        if name is not None:
            raw["name"] = name
        return parse_scenario(raw)

    def build(self) -> ModelInstance:
        """Build the model and check seeds, bases and outputs against it."""
        try:
            instance = build_model(self.model, self.params, self.rng())
        except InvalidSpecError as e:
            raise ScenarioValidationError(f"params.{e.field}", e.message) from e
        except KrylovError as e:
            raise ScenarioValidationError("params", str(e)) from e

        for seed in self.seeds:
            if seed.label is not None and seed.label not in instance.seeds:
                known = ", ".join(instance.seeds)
                raise ScenarioValidationError("seed", f"unknown seed '{seed.label}' (known: {known})")
            if seed.amplitudes is not None and len(seed.amplitudes) != instance.hamiltonian.dim:
                raise ScenarioValidationError(
                    "seed.amplitudes",
                    f"expected {instance.hamiltonian.dim} amplitudes, got {len(seed.amplitudes)}",
                )

        for i, basis in enumerate(self.bases):
            if basis.kind == "krylov_effective" and instance.partition is None:
                raise ScenarioValidationError(
                    f"bases[{i}]", f"model '{self.model}' has no effective Hamiltonian"
                )
            if basis.kind == "explicit":
                missing = [x for x in basis.labels if x not in instance.seeds]
                if missing:
                    raise ScenarioValidationError(
                        f"bases[{i}].explicit", f"unknown basis label '{missing[0]}'"
                    )
        if "bloch" in self.outputs and instance.hamiltonian.dim != 2:
            raise ScenarioValidationError("outputs", "bloch output needs a two-level model")
        if "comparison" in self.outputs and instance.partition is None:
            raise ScenarioValidationError("outputs", f"model '{self.model}' has no partition")
        return instance

    def to_dict(self) -> dict:
        """Convert to dictionary for JSON output."""
        return {
            "name": self.name,
            "model": self.model,
            "description": self.description,
            "seeds": [s.name for s in self.seeds],
            "bases": [b.name for b in self.bases],
            "outputs": self.outputs,
            "time_grid": self.time_grid.to_dict(),
            "random_seed": self.random_seed,
            "reference_frequency": self.reference_frequency,
            "digest": self.digest,
        }


def _parse_params(raw: Any) -> dict[str, Any]:
    if raw is None:
        return {}
    if not isinstance(raw, dict):
        raise ScenarioValidationError("params", "expected a table")
    params: dict[str, Any] = {}
    for key, value in raw.items():
        where = f"params.{key}"
        if key in MATRIX_PARAMS:
            params[key] = _parse_matrix(value, where)
        elif key in LABEL_PARAMS:
            if not isinstance(value, list) or not all(isinstance(x, str) for x in value):
                raise ScenarioValidationError(where, "expected a list of labels")
            params[key] = list(value)
        elif isinstance(value, list):
            params[key] = parse_complex(value, where)
        else:
            params[key] = parse_number(value, where)
    return params


def _parse_seeds(raw: Any) -> list[SeedRequest]:
    if isinstance(raw, str):
        return [SeedRequest(label=raw)]
    if isinstance(raw, list) and raw and all(isinstance(x, str) for x in raw):
        return [SeedRequest(label=x) for x in raw]
    if isinstance(raw, dict) and "amplitudes" in raw:
        values = raw["amplitudes"]
        if not isinstance(values, list) or not values:
            raise ScenarioValidationError("seed.amplitudes", "expected a nonempty list")
        amps = [parse_complex(v, f"seed.amplitudes[{i}]") for i, v in enumerate(values)]
        norm = float(np.linalg.norm(amps))
        if norm == 0:
            raise ScenarioValidationError("seed.amplitudes", "zero vector")
        if abs(norm - 1.0) > 1e-12:
            logger.warning("Renormalizing scenario seed (norm %.6g)", norm)
            amps = [a / norm for a in amps]
        return [SeedRequest(amplitudes=amps)]
    raise ScenarioValidationError(
        "seed", "expected a label, a list of labels or {amplitudes = [...]}"
    )


def _parse_time_grid(raw: Any) -> TimeGrid:
    if not isinstance(raw, dict):
        raise ScenarioValidationError("time_grid", "expected a table {start, end, points}")
    for key in ("end", "points"):
        if key not in raw:
            raise ScenarioValidationError(f"time_grid.{key}", "missing")
    start = parse_number(raw.get("start", 0.0), "time_grid.start")
    end = parse_number(raw["end"], "time_grid.end")
    points = raw["points"]
    if isinstance(points, bool) or not isinstance(points, int) or points < 2:
        raise ScenarioValidationError("time_grid.points", "expected an integer >= 2")
    if end <= start:
        raise ScenarioValidationError("time_grid.end", "must be greater than start")
    return TimeGrid(start, end, points)


def _parse_bases(raw: Any) -> list[BasisRequest]:
    if raw is None:
        return [BasisRequest("krylov_full")]
    if not isinstance(raw, list) or not raw:
        raise ScenarioValidationError("bases", "expected a nonempty list")
    bases = []
    for i, entry in enumerate(raw):
        where = f"bases[{i}]"
        if entry in ("krylov_full", "krylov_effective"):
            bases.append(BasisRequest(entry))
        elif isinstance(entry, dict) and "explicit" in entry:
            labels = entry["explicit"]
            if not isinstance(labels, list) or not labels or not all(isinstance(x, str) for x in labels):
                raise ScenarioValidationError(f"{where}.explicit", "expected a list of labels")
            weights = entry.get("weights")
            if weights is not None:
                weights = [parse_number(w, f"{where}.weights") for w in weights]
            bases.append(BasisRequest("explicit", tuple(labels), weights))
        else:
            raise ScenarioValidationError(
                where, "expected krylov_full, krylov_effective or {explicit = [...]}"
            )
    return bases


def _parse_outputs(raw: Any) -> list[str]:
    if raw is None:
        return ["complexity"]
    if not isinstance(raw, list) or not all(isinstance(x, str) for x in raw):
        raise ScenarioValidationError("outputs", "expected a list of output names")
    for name in raw:
        if name not in OUTPUT_KINDS:
            raise ScenarioValidationError("outputs", f"unknown output '{name}'")
    return list(raw)


def parse_scenario(raw: dict[str, Any]) -> Scenario:
    """Validate a decoded scenario table."""
    for key in ("name", "model", "seed", "time_grid"):
        if key not in raw:
            raise ScenarioValidationError(key, "missing required field")
    name = raw["name"]
    if not isinstance(name, str) or not name or "/" in name:
        raise ScenarioValidationError("name", "expected a nonempty string without '/'")
    model = raw["model"]
    if model not in MODEL_BUILDERS:
        raise ScenarioValidationError("model", f"unknown model '{model}'")

    random_seed = raw.get("random_seed")
    if random_seed is not None and (isinstance(random_seed, bool) or not isinstance(random_seed, int)):
        raise ScenarioValidationError("random_seed", "expected an integer")

    return Scenario(
        name=name,
        model=model,
        description=str(raw.get("description", "")),
        params=_parse_params(raw.get("params")),
        seeds=_parse_seeds(raw["seed"]),
        time_grid=_parse_time_grid(raw["time_grid"]),
        bases=_parse_bases(raw.get("bases")),
        outputs=_parse_outputs(raw.get("outputs")),
        random_seed=random_seed,
        reference_frequency=raw.get("reference_frequency"),
        raw=raw,
    )


class ScenarioFile:
    """Access layer for scenario TOML files."""

    def __init__(self, path: str | Path):
        """Initialize with path to a scenario file.

        Args:
            path: Path to the TOML file.
        """
        self.path = Path(path)

    def is_valid(self) -> bool:
        return self.path.is_file()

    def load(self) -> Scenario:
        """Read, decode and validate the scenario.

        Raises:
            ScenarioError: File is missing or is not valid TOML.
            ScenarioValidationError: A field is invalid.
        """
        if not self.is_valid():
            raise ScenarioError(f"Scenario file not found: {self.path}")
        try:
            with open(self.path, "rb") as f:
                raw = tomllib.load(f)
        except tomllib.TOMLDecodeError as e:
            raise ScenarioError(f"Cannot parse {self.path}: {e}") from e
        return parse_scenario(raw)


def bundled_scenario_dir() -> Path:
    return Path(str(resources.files("krylov_cli") / "scenarios"))


def bundled_scenarios() -> list[Path]:
    return sorted(bundled_scenario_dir().glob(f"*{SCENARIO_SUFFIX}"))


def resolve_scenario(name_or_path: str | Path) -> Path:
    """Path of a scenario file, or of the bundled scenario with that name."""
    path = Path(name_or_path)
    if path.is_file():
        return path
    stem = path.name.removesuffix(SCENARIO_SUFFIX)
    bundled = bundled_scenario_dir() / f"{stem}{SCENARIO_SUFFIX}"
    if bundled.is_file():
        return bundled
    raise ScenarioError(f"No scenario file or bundled scenario named '{name_or_path}'")


def load_scenario(name_or_path: str | Path) -> Scenario:
    return ScenarioFile(resolve_scenario(name_or_path)).load()


def parse_sweep_values(text: str, field_name: str = "--values") -> list[float]:
    """Comma list ("0, pi/4, pi/2") or range start:stop:num (inclusive)."""
    text = text.strip()
    if not text:
        raise ScenarioValidationError(field_name, "empty value list")
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise ScenarioValidationError(field_name, "range must be start:stop:num")
        start, stop = parse_number(parts[0], field_name), parse_number(parts[1], field_name)
        try:
            num = int(parts[2])
        except ValueError:
            raise ScenarioValidationError(field_name, "range count must be an integer") from None
        if num < 1:
            raise ScenarioValidationError(field_name, "range count must be positive")
        return np.linspace(start, stop, num).tolist()
    items = [item for item in text.split(",") if item.strip()]
    if not items:
        raise ScenarioValidationError(field_name, "empty value list")
    return [parse_number(item, field_name) for item in items]
