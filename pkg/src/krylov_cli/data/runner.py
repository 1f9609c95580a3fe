"""Scenario execution: traces per seed and basis, reports and sweeps."""

import itertools
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Optional, Sequence

import numpy as np
import pandas as pd

from ..output.formatter import finite_values
from ..output.trace_file import TraceFile, trace_file_name, write_atomic, write_json
from .bloch_analysis import bloch_trajectory
from .errors import SeedNotInSubspaceError
from .krylov_analysis import (
    ComplexityTrace,
    KrylovBasis,
    LeakPolicy,
    OrderedBasis,
    lanczos,
    lanczos_evolution_invariance_check,
    oscillation_frequency,
    spread_complexity,
)
from .linalg import evolve_many
from .model_zoo import (
    ModelInstance,
    biased_freezing_reference,
    blockade_reference_lanczos,
    noninteracting_pair_complexity,
)
from .models import StateVector
from .scenario import TRACE_OUTPUTS, BasisRequest, Scenario, SeedRequest
from .subspace_analysis import SEED_WEIGHT_TOLERANCE, SubspaceAnalyzer

logger = logging.getLogger(__name__)

# Numeric C_K - C1 - C2 against the closed-form cross term
PAIR_CROSS_TERM_TOLERANCE = 1e-8


@dataclass
class TraceSummary:
    """Per-basis figures of one seed's trace."""

    seed: str
    basis: str
    amplitude: float
    frequency: float
    max_leak: float
    closed_form_deviation: Optional[float] = None
    path: Optional[Path] = None

    def to_dict(self) -> dict:
        """Convert to dictionary for JSON output."""
        return {
            "seed": self.seed,
            "basis": self.basis,
            "amplitude": self.amplitude,
            "frequency": self.frequency,
            "max_leak": self.max_leak,
            "closed_form_deviation": self.closed_form_deviation,
            "file": self.path.name if self.path else None,
        }


@dataclass
class SeedReport:
    seed: str
    lanczos: dict
    traces: list[TraceSummary] = field(default_factory=list)
    extras: dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> dict:
        """Convert to dictionary for JSON output."""
        data = {
            "seed": self.seed,
            "lanczos": self.lanczos,
            "traces": [t.to_dict() for t in self.traces],
        }
        data.update(self.extras)
        return data


@dataclass
class RunReport:
    scenario: Scenario
    seeds: list[SeedReport] = field(default_factory=list)
    files: list[Path] = field(default_factory=list)

    @property
    def traces(self) -> list[TraceSummary]:
        return [t for s in self.seeds for t in s.traces]

    def to_dict(self) -> dict:
        """Convert to dictionary for JSON output."""
        return finite_values(
            {
                "scenario": self.scenario.to_dict(),
                "seeds": [s.to_dict() for s in self.seeds],
                "files": [p.name for p in self.files],
            }
        )


class ScenarioRunner:
    """Runs one scenario and optionally writes its files to ``out_dir``."""

    def __init__(self, scenario: Scenario, out_dir: Optional[Path] = None):
        """Initialize with a parsed scenario.

        Args:
            scenario: Validated scenario.
            out_dir: Output directory; nothing is written when None.
        """
        self.scenario = scenario
        self.out_dir = Path(out_dir) if out_dir is not None else None
        self.instance: ModelInstance = scenario.build()
        self.times = scenario.times()

    def _seed_state(self, request: SeedRequest) -> StateVector:
        if request.label is not None:
            return self.instance.seed(request.label)
        return StateVector.normalized(request.amplitudes, self.instance.basis_labels)

    def _ordered_basis(
        self, request: BasisRequest, seed: StateVector
    ) -> tuple[OrderedBasis, KrylovBasis | None]:
        h = self.instance.hamiltonian
        if request.kind == "krylov_full":
            basis = lanczos(h, seed)
            return basis.to_ordered_basis(name=request.name), basis
        if request.kind == "krylov_effective":
            partition = self.instance.partition
            weight = partition.b_weight(seed.amplitudes)
            if weight > SEED_WEIGHT_TOLERANCE:
                raise SeedNotInSubspaceError(weight)
            basis = lanczos(partition.effective_hamiltonian(), seed)
            return basis.to_ordered_basis(name=request.name), basis
        states = [self.instance.seed(label) for label in request.labels]
        return OrderedBasis.from_states(states, request.weights, request.name), None

    @staticmethod
    def _score(
        states: np.ndarray, times: np.ndarray, request: BasisRequest, basis: OrderedBasis
    ) -> ComplexityTrace:
        if request.kind == "krylov_full":
            return spread_complexity(states, basis, times, LeakPolicy.RAISE)
        if request.kind == "krylov_effective":
            # leak out of span(K_A) is reported per time point, never an error
            return spread_complexity(states, basis, times, LeakPolicy.WARN, support_tolerance=np.inf)
        return spread_complexity(states, basis, times, LeakPolicy.WARN)

    def _write(self, name: str, frame: pd.DataFrame, metadata: dict[str, str], report: RunReport) -> Path | None:
        if self.out_dir is None:
            return None
        path = TraceFile(self.out_dir / name).write(frame, metadata)
        report.files.append(path)
        return path

    def _trace_frame(self, trace: ComplexityTrace) -> pd.DataFrame:
        frame = trace.to_frame()
        outputs = set(self.scenario.outputs)
        keep = ["time"]
        if "complexity" in outputs:
            keep.append("C")
        if "populations" in outputs:
            keep.extend(c for c in frame.columns if c.startswith("P_"))
        if "shannon" in outputs:
            keep.append("S_Sh")
        if "ipr" in outputs:
            keep.append("IPR")
        keep.append("leak")
        return frame[keep]

    def _run_seed(self, request: SeedRequest, report: RunReport) -> SeedReport:
        scenario = self.scenario
        seed = self._seed_state(request)
        h = self.instance.hamiltonian
        states = evolve_many(h, seed, self.times)
        krylov = lanczos(h, seed)

        lanczos_info = krylov.to_dict()
        if "lanczos" in scenario.outputs:
            lanczos_info["orthonormality_residual"] = krylov.orthonormality_residual()
            lanczos_info["tridiagonality_residual"] = krylov.tridiagonality_residual(h)
            shift = float(self.times[len(self.times) // 2])
            lanczos_info["invariance"] = lanczos_evolution_invariance_check(h, seed, shift).to_dict()
            lanczos_info.update(self._reference_lanczos(request.name, krylov))
        seed_report = SeedReport(seed=request.name, lanczos=lanczos_info)

        for basis_request in scenario.bases:
            ordered, basis = self._ordered_basis(basis_request, seed)
            if basis_request.kind == "krylov_effective":
                seed_report.extras["effective_lanczos"] = basis.to_dict()
            trace = self._score(states, self.times, basis_request, ordered)
            summary = TraceSummary(
                seed=request.name,
                basis=basis_request.name,
                amplitude=trace.amplitude,
                frequency=oscillation_frequency(self.times, trace.complexity),
                max_leak=trace.max_leak,
                closed_form_deviation=self._deviation(request.name, basis_request.kind, trace),
            )
            if TRACE_OUTPUTS & set(scenario.outputs):
                summary.path = self._write(
                    trace_file_name(scenario.name, request.name, basis_request.name),
                    self._trace_frame(trace),
                    self._metadata(request.name, basis_request.name),
                    report,
                )
            seed_report.traces.append(summary)

        if self.instance.pair_spec is not None and request.name == "psi0":
            pair = noninteracting_pair_complexity(self.instance.pair_spec, self.times)
            krylov_trace = spread_complexity(states, krylov.to_ordered_basis(), self.times)
            cross_term = krylov_trace.complexity - pair.c1 - pair.c2
            deviation = float(np.max(np.abs(cross_term - pair.f)))
            if deviation > PAIR_CROSS_TERM_TOLERANCE:
                logger.warning("Cross term deviates from its closed form by %.3e", deviation)
            seed_report.extras["pair"] = pair.to_dict()
            seed_report.extras["F_amplitude"] = float(np.max(cross_term))
            seed_report.extras["F_closed_form_deviation"] = deviation

        if "bloch" in scenario.outputs:
            trajectory = bloch_trajectory(h, seed, self.times)
            krylov_trace = spread_complexity(states, krylov.to_ordered_basis(), self.times)
            seed_report.extras["bloch"] = {
                "max_identity_deviation": float(
                    np.max(np.abs(trajectory.displacement_sq - krylov_trace.complexity))
                ),
                "max_displacement_sq": float(np.max(trajectory.displacement_sq)),
            }
            self._write(
                trace_file_name(scenario.name, request.name, "bloch"),
                trajectory.to_frame(),
                self._metadata(request.name, "bloch"),
                report,
            )

        if "comparison" in scenario.outputs:
            analyzer = SubspaceAnalyzer(self.instance.partition)
            comparison = analyzer.compare_spread(seed, self.times)
            data = comparison.to_dict()
            if comparison.full_basis.dim > 1:
                data["km_decomposition"] = analyzer.km_decomposition(seed, 1).to_dict()
            seed_report.extras["comparison"] = data
            self._write(
                trace_file_name(scenario.name, request.name, "comparison"),
                comparison.to_frame(),
                self._metadata(request.name, "comparison"),
                report,
            )
        return seed_report

    def _metadata(self, seed: str, basis: str) -> dict[str, str]:
        metadata = {
            "scenario": self.scenario.name,
            "digest": self.scenario.digest,
            "seed": seed,
            "basis": basis,
        }
        if self.scenario.reference_frequency:
            metadata["unit"] = self.scenario.reference_frequency
        return metadata

    def _deviation(self, seed: str, kind: str, trace: ComplexityTrace) -> Optional[float]:
        if kind == "krylov_full":
            oracle = self.instance.closed_forms.get(seed)
        elif kind == "krylov_effective":
            oracle = self.instance.effective_closed_forms.get(seed)
        else:
            oracle = None
        if oracle is None:
            return None
        return float(np.max(np.abs(trace.complexity - oracle(self.times))))

    def _reference_lanczos(self, seed: str, krylov: KrylovBasis) -> dict:
        # analytic coefficients exist for the resonant, interacting pair only
        params = self.scenario.params
        if self.instance.name != "rydberg_pair" or seed not in ("gg", "plus", "ge"):
            return {}
        if any(params.get(k, 0.0) != 0.0 for k in ("Delta", "Delta1", "Delta2")):
            return {}
        omega = params.get("Omega", 0.0)
        omega1 = params.get("Omega1", omega)
        omega2 = params.get("Omega2", omega)
        v0 = params.get("V0", 0.0)
        if v0 <= 0 or omega1 <= 0 or omega2 <= 0:
            return {}
        if omega1 == omega2:
            reference = blockade_reference_lanczos(seed, omega1, v0)
        elif seed in ("gg", "ge"):
            reference = biased_freezing_reference(seed, omega1, omega2, v0)
        else:
            return {}
        n = min(len(reference.a), krylov.dim)
        deviation = max(
            float(np.max(np.abs(np.asarray(reference.a[:n]) - krylov.a[:n]))),
            float(np.max(np.abs(np.asarray(reference.b[:n]) - krylov.b[:n]))),
        )
        logger.debug("Reference Lanczos deviation for seed %s: %.3g", seed, deviation)
        return {"reference": reference.to_dict(), "reference_max_deviation": deviation}

    def run(self) -> RunReport:
        """Compute every seed and basis and write traces plus the JSON report."""
        report = RunReport(scenario=self.scenario)
        logger.info(
            "Running scenario '%s' (%s, %d points)",
            self.scenario.name,
            self.scenario.model,
            len(self.times),
        )
        for request in self.scenario.seeds:
            report.seeds.append(self._run_seed(request, report))
        if self.out_dir is not None:
            path = self.out_dir / f"{self.scenario.name}__report.json"
            write_json(path, report.to_dict())
            report.files.append(path)
        return report


def run_scenario(scenario: Scenario, out_dir: Optional[Path] = None) -> RunReport:
    return ScenarioRunner(scenario, out_dir).run()


@dataclass
class SweepSummary:
    """One row per parameter combination with per-trace amplitudes."""

    scenario: str
    parameters: list[str]
    rows: list[dict[str, Any]]
    path: Optional[Path] = None

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(self.rows)

    def best(self, column: str) -> dict[str, Any]:
        """Row with the largest value in ``column``."""
        return max(self.rows, key=lambda r: r.get(column, -np.inf))


def _format_value(value: float) -> str:
    return f"{value:.6g}"


def run_sweep(
    scenario: Scenario,
    sweep: Sequence[tuple[str, Sequence[float]]],
    out_dir: Optional[Path] = None,
) -> SweepSummary:
    """Run the cartesian product of parameter values.

    Args:
        scenario: Base scenario.
        sweep: (parameter name, values) pairs.
        out_dir: Output directory for per-instance files and the summary.

    Returns:
        SweepSummary with amplitudes per seed and basis.
    """
    names = [name for name, _ in sweep]
    rows = []
    for combo in itertools.product(*(values for _, values in sweep)):
        overrides = dict(zip(names, combo))
        suffix = "__".join(f"{k}={_format_value(v)}" for k, v in overrides.items())
        instance = scenario.with_params(overrides, name=f"{scenario.name}__{suffix}")
        report = run_scenario(instance, out_dir)

        row: dict[str, Any] = dict(overrides)
        for trace in report.traces:
            row[f"amplitude_{trace.seed}_{trace.basis}"] = trace.amplitude
        for seed in report.seeds:
            if "F_amplitude" in seed.extras:
                row["F_amplitude"] = seed.extras["F_amplitude"]
                row["F_closed_form_deviation"] = seed.extras["F_closed_form_deviation"]
        rows.append(row)

    summary = SweepSummary(scenario=scenario.name, parameters=names, rows=rows)
    if out_dir is not None:
        csv_text = summary.to_frame().to_csv(index=False, float_format="%.17g", lineterminator="\n")
        summary.path = write_atomic(Path(out_dir) / f"{scenario.name}__sweep.csv", csv_text)
    return summary
