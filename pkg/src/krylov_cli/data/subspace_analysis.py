"""Partitioned Hamiltonians and spread minimization by the effective Krylov basis.

A Hamiltonian split into an A block, a B block and a weak A-B coupling
evolves a seed in A mostly inside A. The Krylov basis of the A block alone
(the zeroth-order effective Hamiltonian) then scores the exact dynamics
with lower spread complexity than the full Krylov basis.
"""

import logging
from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence

import numpy as np
import pandas as pd

from .errors import (
    BlockShapeMismatchError,
    DimensionMismatchError,
    KrylovError,
    PrefixMismatchError,
    SeedNotInSubspaceError,
)
from .krylov_analysis import (
    ComplexityTrace,
    KrylovBasis,
    LeakPolicy,
    lanczos,
    spread_complexity,
)
from .linalg import eigendecompose, evolve_many, random_unitary
from .models import HermitianOperator, StateVector

logger = logging.getLogger(__name__)

# Coupling ratio max|d| / gap below which the blocks count as weakly coupled
WEAK_COUPLING_THRESHOLD = 0.02
PREFIX_TOLERANCE = 1e-6
SEED_WEIGHT_TOLERANCE = 1e-10
DECOMPOSITION_RELATIVE_TOLERANCE = 1e-8
VIOLATION_TOLERANCE = 1e-6
# Reported leak sanity bound, in units of ratio^2
LEAK_BOUND_FACTOR = 10.0
# Jitter on the evenly spaced A-block spectrum of random partitions
A_SPECTRUM_JITTER = 0.05


@dataclass(frozen=True, eq=False)
class PartitionedHamiltonian:
    """H = H_A + H_B + H_AB over the ordered basis labels_A + labels_B."""

    labels_A: tuple[str, ...]
    labels_B: tuple[str, ...]
    c_A: np.ndarray
    c_B: np.ndarray
    d: np.ndarray

    def __post_init__(self) -> None:
        labels_a = tuple(str(x) for x in self.labels_A)
        labels_b = tuple(str(x) for x in self.labels_B)
        c_a = np.array(self.c_A, dtype=np.complex128)
        c_b = np.array(self.c_B, dtype=np.complex128)
        d = np.array(self.d, dtype=np.complex128)
        if d.ndim == 1:
            d = d.reshape(len(labels_a), len(labels_b))

        n_a, n_b = len(labels_a), len(labels_b)
        if n_a < 1 or n_b < 1:
            raise BlockShapeMismatchError("Both subspaces need at least one basis state")
        if set(labels_a) & set(labels_b):
            raise BlockShapeMismatchError("Subspace labels must be disjoint")
        if c_a.shape != (n_a, n_a):
            raise BlockShapeMismatchError(f"c_A has shape {c_a.shape}, expected {(n_a, n_a)}")
        if c_b.shape != (n_b, n_b):
            raise BlockShapeMismatchError(f"c_B has shape {c_b.shape}, expected {(n_b, n_b)}")
        if d.shape != (n_a, n_b):
            raise BlockShapeMismatchError(f"d has shape {d.shape}, expected {(n_a, n_b)}")

        # HermitianOperator raises NonHermitianError on bad diagonal blocks
        HermitianOperator(c_a)
        HermitianOperator(c_b)

        for name, value in (("labels_A", labels_a), ("labels_B", labels_b)):
            object.__setattr__(self, name, value)
        for name, arr in (("c_A", c_a), ("c_B", c_b), ("d", d)):
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    @property
    def n_A(self) -> int:
        return len(self.labels_A)

    @property
    def n_B(self) -> int:
        return len(self.labels_B)

    @property
    def full_labels(self) -> tuple[str, ...]:
        return self.labels_A + self.labels_B

    def _embed_blocks(self, a: np.ndarray, b: np.ndarray, d: np.ndarray) -> np.ndarray:
        n_a = self.n_A
        mat = np.zeros((n_a + self.n_B,) * 2, dtype=np.complex128)
        mat[:n_a, :n_a] = a
        mat[n_a:, n_a:] = b
        mat[:n_a, n_a:] = d
        mat[n_a:, :n_a] = d.conj().T
        return mat

    def assemble(self) -> HermitianOperator:
        """Full Hamiltonian with diagonal blocks c_A, c_B and off-blocks d, d^dagger."""
        return HermitianOperator(self._embed_blocks(self.c_A, self.c_B, self.d), self.full_labels)

    def coupling_operator(self) -> HermitianOperator:
        """H_AB embedded in the full space."""
        zeros_a = np.zeros_like(self.c_A)
        zeros_b = np.zeros_like(self.c_B)
        return HermitianOperator(self._embed_blocks(zeros_a, zeros_b, self.d), self.full_labels)

    def effective_hamiltonian(self) -> HermitianOperator:
        """Zeroth-order effective Hamiltonian: H_A embedded in the full space."""
        zeros_b = np.zeros_like(self.c_B)
        zeros_d = np.zeros_like(self.d)
        return HermitianOperator(self._embed_blocks(self.c_A, zeros_b, zeros_d), self.full_labels)

    def embed(self, amplitudes_A: Sequence[complex] | np.ndarray) -> StateVector:
        """Full-space state from amplitudes over the A labels."""
        amps = np.asarray(amplitudes_A, dtype=np.complex128).reshape(-1)
        if amps.size != self.n_A:
            raise DimensionMismatchError(self.n_A, amps.size, "A amplitude count")
        return StateVector.normalized(np.concatenate([amps, np.zeros(self.n_B)]), self.full_labels)

    def b_weight(self, amplitudes: np.ndarray) -> float:
        """Probability in the B subspace."""
        amps = np.asarray(amplitudes).reshape(-1)
        return float(np.sum(np.abs(amps[self.n_A :]) ** 2))

    def to_dict(self) -> dict:
        """Convert to dictionary for JSON output."""
        return {
            "labels_A": list(self.labels_A),
            "labels_B": list(self.labels_B),
            "max_abs_d": float(np.max(np.abs(self.d))),
        }


def assemble(p: PartitionedHamiltonian) -> HermitianOperator:
    return p.assemble()


@dataclass
class CouplingDiagnostics:
    """Weak-coupling diagnostics: max|d| against the A-B spectral gap."""

    max_abs_d: float
    gap: float
    ratio: float
    nonpositive_gap: bool
    weak_coupling: bool
    eigenvalues_A: list[float] = field(default_factory=list)
    eigenvalues_B: list[float] = field(default_factory=list)

    @property
    def leak_bound(self) -> float:
        return LEAK_BOUND_FACTOR * self.ratio**2

    def to_dict(self) -> dict:
        """Convert to dictionary for JSON output."""
        return {
            "max_abs_d": self.max_abs_d,
            "gap": self.gap,
            "ratio": self.ratio,
            "nonpositive_gap": self.nonpositive_gap,
            "weak_coupling": self.weak_coupling,
            "eigenvalues_A": self.eigenvalues_A,
            "eigenvalues_B": self.eigenvalues_B,
        }


@dataclass
class KMDecompositionReport:
    """Residual of b_M|K_M> = b_{A,M}|K_{A,M}> + H_AB|K_{A,M-1}>."""

    m: int
    shared_prefix: int
    b_full: float
    b_effective: float
    residual: float
    tolerance: float
    alpha: float
    remainder_norm: float
    remainder_phase: float
    remainder_b_weight: float
    overlap: complex

    @property
    def passed(self) -> bool:
        return self.residual < self.tolerance

    def to_dict(self) -> dict:
        """Convert to dictionary for JSON output."""
        return {
            "M": self.m,
            "shared_prefix": self.shared_prefix,
            "b_M": self.b_full,
            "b_A_M": self.b_effective,
            "residual": self.residual,
            "tolerance": self.tolerance,
            "passed": self.passed,
            "alpha": self.alpha,
            "remainder_norm": self.remainder_norm,
            "lambda": self.remainder_phase,
            "remainder_b_weight": self.remainder_b_weight,
            "overlap_abs": abs(self.overlap),
        }


@dataclass
class MinimizationReport:
    """Spread of the exact evolution in the full vs effective Krylov bases."""

    times: np.ndarray
    full: ComplexityTrace
    effective: ComplexityTrace
    full_basis: KrylovBasis
    effective_basis: KrylovBasis
    shared_prefix: int
    first_violation_time: float | None
    b_weight: np.ndarray
    diagnostics: CouplingDiagnostics | None = None

    @property
    def c_full(self) -> np.ndarray:
        return self.full.complexity

    @property
    def c_eff(self) -> np.ndarray:
        return self.effective.complexity

    @property
    def leak(self) -> np.ndarray:
        return self.effective.leak

    @property
    def max_b_weight(self) -> float:
        return float(np.max(self.b_weight)) if self.b_weight.size else 0.0

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(
            {
                "time": self.times,
                "C_full": self.c_full,
                "C_eff": self.c_eff,
                "difference": self.c_eff - self.c_full,
                "leak_eff": self.leak,
                "B_weight": self.b_weight,
            }
        )

    def to_dict(self) -> dict:
        """Convert to dictionary for JSON output."""
        data = {
            "max_C_full": float(np.max(self.c_full)),
            "max_C_eff": float(np.max(self.c_eff)),
            "first_violation_time": self.first_violation_time,
            "shared_prefix": self.shared_prefix,
            "max_leak_eff": self.effective.max_leak,
            "max_B_weight": self.max_b_weight,
            "full_lanczos": self.full_basis.to_dict(),
            "effective_lanczos": self.effective_basis.to_dict(),
        }
        if self.diagnostics is not None:
            data["coupling"] = self.diagnostics.to_dict()
            data["leak_bound"] = self.diagnostics.leak_bound
            data["leak_bound_respected"] = self.max_b_weight <= self.diagnostics.leak_bound
        return data


def shared_prefix_length(k: KrylovBasis, k_a: KrylovBasis, tol: float = PREFIX_TOLERANCE) -> int:
    """Number of leading vectors equal up to phase in two Krylov bases."""
    m = 0
    for u, v in zip(k.vectors, k_a.vectors):
        if abs(np.vdot(u.amplitudes, v.amplitudes)) < 1.0 - tol:
            break
        m += 1
    return m


class SubspaceAnalyzer:
    """Weak-coupling diagnostics and Krylov comparisons for one partition."""

    def __init__(self, partition: PartitionedHamiltonian):
        """Initialize with a partitioned Hamiltonian.

        Args:
            partition: Blocks c_A, c_B and coupling d.
        """
        self.partition = partition

    @cached_property
    def hamiltonian(self) -> HermitianOperator:
        return self.partition.assemble()

    def _check_seed(self, seed: StateVector) -> None:
        if seed.dim != self.hamiltonian.dim:
            raise DimensionMismatchError(self.hamiltonian.dim, seed.dim)
        weight = self.partition.b_weight(seed.amplitudes)
        if weight > SEED_WEIGHT_TOLERANCE:
            raise SeedNotInSubspaceError(weight)

    def diagnostics(self) -> CouplingDiagnostics:
        """Compute max|d|, the gap min(E_B) - max(E_A) and their ratio."""
        p = self.partition
        e_a = np.linalg.eigvalsh(p.c_A)
        e_b = np.linalg.eigvalsh(p.c_B)
        max_abs_d = float(np.max(np.abs(p.d)))
        gap = float(np.min(e_b) - np.max(e_a))

        nonpositive = gap <= 0
        if nonpositive:
            logger.warning("Subspace B does not lie above subspace A (gap %.6g)", gap)
            ratio = float("inf")
        else:
            ratio = max_abs_d / gap

        return CouplingDiagnostics(
            max_abs_d=max_abs_d,
            gap=gap,
            ratio=ratio,
            nonpositive_gap=nonpositive,
            weak_coupling=not nonpositive and ratio <= WEAK_COUPLING_THRESHOLD,
            eigenvalues_A=e_a.tolist(),
            eigenvalues_B=e_b.tolist(),
        )

    def km_decomposition(self, seed: StateVector, m: int) -> KMDecompositionReport:
        """Check how K_M splits into K_{A,M} and a B-subspace remainder.

        Args:
            seed: State supported in A.
            m: Number of leading Krylov vectors required to coincide.

        Returns:
            KMDecompositionReport with the residual and the alpha/lambda split.
        """
        self._check_seed(seed)
        if m < 1:
            raise KrylovError(f"M must be at least 1, got {m}")

        full = lanczos(self.hamiltonian, seed)
        effective = lanczos(self.partition.effective_hamiltonian(), seed)
        shared = shared_prefix_length(full, effective)
        if shared < m:
            raise PrefixMismatchError(shared, m)
        if m >= full.dim:
            raise KrylovError(f"Full Krylov basis has only {full.dim} vectors, K_{m} undefined")

        # align the phase of the A chain to the shared full-chain vector
        k_prev = full.vectors[m - 1].amplitudes
        ka_prev = effective.vectors[m - 1].amplitudes
        overlap_prev = np.vdot(ka_prev, k_prev)
        phase = overlap_prev / abs(overlap_prev)
        ka_prev = phase * ka_prev
        if m < effective.dim:
            ka_m = phase * effective.vectors[m].amplitudes
            b_eff = float(effective.b[m])
        else:
            ka_m = np.zeros_like(ka_prev)
            b_eff = 0.0

        k_m = full.vectors[m].amplitudes
        b_m = float(full.b[m])
        coupled = self.partition.coupling_operator().apply(ka_prev)
        residual = float(np.linalg.norm(b_m * k_m - b_eff * ka_m - coupled))

        alpha = b_eff / b_m
        remainder = k_m - alpha * ka_m
        remainder_norm = float(np.linalg.norm(remainder))
        if remainder_norm > 0:
            pivot = int(np.argmax(np.abs(remainder)))
            remainder_phase = float(np.angle(remainder[pivot]))
            b_part = self.partition.b_weight(remainder) / remainder_norm**2
        else:
            remainder_phase = 0.0
            b_part = 0.0

        return KMDecompositionReport(
            m=m,
            shared_prefix=shared,
            b_full=b_m,
            b_effective=b_eff,
            residual=residual,
            tolerance=DECOMPOSITION_RELATIVE_TOLERANCE * max(self.hamiltonian.norm_max, 1e-300),
            alpha=alpha,
            remainder_norm=remainder_norm,
            remainder_phase=remainder_phase,
            remainder_b_weight=b_part,
            overlap=complex(np.vdot(ka_m, k_m)),
        )

    def compare_spread(
        self,
        seed: StateVector,
        times: Sequence[float] | np.ndarray,
        effective_h: HermitianOperator | None = None,
    ) -> MinimizationReport:
        """Score the exact evolution against the full and effective Krylov bases.

        Args:
            seed: State supported in A.
            times: Time grid.
            effective_h: Effective Hamiltonian; defaults to the embedded H_A.

        Returns:
            MinimizationReport with both traces and the first violation time.
        """
        self._check_seed(seed)
        times = np.asarray(times, dtype=np.float64)
        if effective_h is None:
            effective_h = self.partition.effective_hamiltonian()

        full_basis = lanczos(self.hamiltonian, seed)
        effective_basis = lanczos(effective_h, seed)
        states = evolve_many(self.hamiltonian, seed, times)

        full = spread_complexity(states, full_basis.to_ordered_basis(), times, LeakPolicy.RAISE)
        # leak against K_A is expected and reported per time point
        effective = spread_complexity(
            states,
            effective_basis.to_ordered_basis(name="krylov_effective"),
            times,
            LeakPolicy.WARN,
            support_tolerance=np.inf,
        )

        violations = np.nonzero(effective.complexity > full.complexity + VIOLATION_TOLERANCE)[0]
        first_violation = float(times[violations[0]]) if violations.size else None
        if first_violation is not None:
            logger.info("Effective basis exceeds full Krylov spread at t=%.6g", first_violation)

        b_weight = np.sum(np.abs(states[self.partition.n_A :, :]) ** 2, axis=0)
        return MinimizationReport(
            times=times,
            full=full,
            effective=effective,
            full_basis=full_basis,
            effective_basis=effective_basis,
            shared_prefix=shared_prefix_length(full_basis, effective_basis),
            first_violation_time=first_violation,
            b_weight=b_weight,
            diagnostics=self.diagnostics(),
        )

    def window(self, seed: StateVector, periods: float = 2.0) -> float:
        """End time covering ``periods`` of the slowest populated A-block Bohr frequency."""
        self._check_seed(seed)
        spectrum = eigendecompose(HermitianOperator(self.partition.c_A))
        weights = np.abs(spectrum.eigenvectors.conj().T @ seed.amplitudes[: self.partition.n_A]) ** 2
        energies = spectrum.eigenvalues[weights > SEED_WEIGHT_TOLERANCE]
        gaps = np.abs(energies[:, None] - energies[None, :])
        gaps = gaps[gaps > 1e-12]
        if gaps.size == 0:
            logger.warning("Seed is stationary under H_A; using a unit-frequency window")
            return periods * 2 * np.pi
        return periods * 2 * np.pi / float(np.min(gaps))


def coupling_diagnostics(p: PartitionedHamiltonian) -> CouplingDiagnostics:
    return SubspaceAnalyzer(p).diagnostics()


def km_decomposition_check(
    p: PartitionedHamiltonian, seed: StateVector, m: int
) -> KMDecompositionReport:
    return SubspaceAnalyzer(p).km_decomposition(seed, m)


def compare_spread(
    p: PartitionedHamiltonian,
    seed: StateVector,
    effective_h: HermitianOperator | None,
    times: Sequence[float] | np.ndarray,
) -> MinimizationReport:
    return SubspaceAnalyzer(p).compare_spread(seed, times, effective_h)


def a_subspace_window(p: PartitionedHamiltonian, seed: StateVector, periods: float = 2.0) -> float:
    return SubspaceAnalyzer(p).window(seed, periods)


def random_partition(
    rng: np.random.Generator,
    n_a: int,
    n_b: int,
    gap: float,
    ratio: float,
) -> PartitionedHamiltonian:
    """Random weakly coupled partition with a prescribed gap and coupling ratio.

    The A spectrum is evenly spaced on [-1, 1] with small jitter, the B
    spectrum sits at least ``gap`` above it, and d is rescaled so that
    max|d| equals ``ratio`` times the realized gap.
    """
    if n_a < 1 or n_b < 1:
        raise BlockShapeMismatchError("Both subspaces need at least one basis state")
    if gap <= 0 or ratio < 0:
        raise KrylovError("gap must be positive and ratio nonnegative")

    e_a = np.linspace(-1.0, 1.0, n_a) + rng.uniform(-A_SPECTRUM_JITTER, A_SPECTRUM_JITTER, n_a)
    e_b = np.max(e_a) + gap + rng.uniform(0.0, 1.0, n_b)
    u_a = random_unitary(rng, n_a)
    u_b = random_unitary(rng, n_b)
    c_a = (u_a * e_a) @ u_a.conj().T
    c_b = (u_b * e_b) @ u_b.conj().T
    c_a = (c_a + c_a.conj().T) / 2
    c_b = (c_b + c_b.conj().T) / 2

    d = rng.normal(size=(n_a, n_b)) + 1j * rng.normal(size=(n_a, n_b))
    realized_gap = float(np.min(e_b) - np.max(e_a))
    d *= ratio * realized_gap / np.max(np.abs(d))

    return PartitionedHamiltonian(
        labels_A=tuple(f"a{i}" for i in range(n_a)),
        labels_B=tuple(f"b{j}" for j in range(n_b)),
        c_A=c_a,
        c_B=c_b,
        d=d,
    )
