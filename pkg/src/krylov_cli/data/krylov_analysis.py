"""Krylov bases via Lanczos, and spread complexity along exact time evolution."""

import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Sequence

import numpy as np
import pandas as pd
from scipy.signal import find_peaks

from .errors import (
    DimensionMismatchError,
    InvalidDistributionError,
    KrylovError,
    SupportLeakError,
    UnnormalizedSeedError,
)
from .linalg import evolve, evolve_many, project_out
from .models import NORM_TOLERANCE, HermitianOperator, StateVector

logger = logging.getLogger(__name__)

# Lanczos stops when the next b falls below this fraction of ||H||_max
LANCZOS_RELATIVE_TOLERANCE = 1e-8
ORTHONORMALITY_TOLERANCE = 1e-10
# Largest tolerated probability outside an ordered basis
SUPPORT_TOLERANCE = 1e-6
DISTRIBUTION_TOLERANCE = 1e-6
INVARIANCE_RELATIVE_TOLERANCE = 1e-8


class LeakPolicy(Enum):
    """What spread_complexity does when the basis misses part of the state."""

    RAISE = "raise"
    WARN = "warn"


def default_lanczos_tolerance(h: HermitianOperator) -> float:
    return LANCZOS_RELATIVE_TOLERANCE * max(h.norm_max, np.finfo(float).tiny)


@dataclass(frozen=True, eq=False)
class KrylovBasis:
    """Lanczos output: ordered orthonormal vectors and coefficients.

    ``b`` has the same length as ``vectors`` with ``b[0] = 0``; ``b[n]``
    couples ``vectors[n-1]`` and ``vectors[n]``.
    """

    vectors: tuple[StateVector, ...]
    a: np.ndarray
    b: np.ndarray
    terminated: bool
    tolerance: float = 0.0

    @property
    def dim(self) -> int:
        return len(self.vectors)

    @property
    def matrix(self) -> np.ndarray:
        """Krylov vectors as columns."""
        return np.column_stack([v.amplitudes for v in self.vectors])

    def tridiagonal(self) -> np.ndarray:
        """Chain Hamiltonian with diagonal a and off-diagonal b."""
        t = np.diag(self.a.astype(np.complex128))
        off = self.b[1:]
        return t + np.diag(off, 1) + np.diag(off, -1)

    def projected(self, h: HermitianOperator) -> np.ndarray:
        k = self.matrix
        return k.conj().T @ h.matrix @ k

    def orthonormality_residual(self) -> float:
        k = self.matrix
        return float(np.max(np.abs(k.conj().T @ k - np.eye(self.dim))))

    def tridiagonality_residual(self, h: HermitianOperator) -> float:
        """Max deviation of K^dagger H K from the (a, b) tridiagonal matrix."""
        return float(np.max(np.abs(self.projected(h) - self.tridiagonal())))

    def to_ordered_basis(
        self, weights: Sequence[float] | None = None, name: str = "krylov"
    ) -> "OrderedBasis":
        return OrderedBasis(
            vectors=self.matrix,
            weights=np.arange(self.dim, dtype=np.float64) if weights is None else weights,
            name=name,
        )

    def to_dict(self) -> dict:
        """Convert to dictionary for JSON output."""
        return {
            "dim": self.dim,
            "a": self.a.tolist(),
            "b": self.b.tolist(),
            "terminated": self.terminated,
            "tolerance": self.tolerance,
        }


@dataclass(frozen=True, eq=False)
class OrderedBasis:
    """Ordered orthonormal vectors (as columns) with nondecreasing cost weights."""

    vectors: np.ndarray
    weights: np.ndarray | None = None
    name: str = "explicit"

    def __post_init__(self) -> None:
        q = np.array(self.vectors, dtype=np.complex128)
        if q.ndim == 1:
            q = q.reshape(-1, 1)
        n = q.shape[1]
        weights = (
            np.arange(n, dtype=np.float64)
            if self.weights is None
            else np.asarray(self.weights, dtype=np.float64).reshape(-1)
        )
        if weights.size != n:
            raise DimensionMismatchError(n, weights.size, "weight count")
        if np.any(weights < 0) or np.any(np.diff(weights) < 0):
            raise KrylovError("Cost weights must be nonnegative and nondecreasing")

        residual = float(np.max(np.abs(q.conj().T @ q - np.eye(n))))
        if residual > ORTHONORMALITY_TOLERANCE:
            raise KrylovError(f"Ordered basis is not orthonormal (residual {residual:.3e})")

        q.setflags(write=False)
        weights.setflags(write=False)
        object.__setattr__(self, "vectors", q)
        object.__setattr__(self, "weights", weights)

    @classmethod
    def from_states(
        cls,
        states: Sequence[StateVector],
        weights: Sequence[float] | None = None,
        name: str = "explicit",
    ) -> "OrderedBasis":
        return cls(np.column_stack([s.amplitudes for s in states]), weights, name)

    @property
    def size(self) -> int:
        return self.vectors.shape[1]

    @property
    def hilbert_dim(self) -> int:
        return self.vectors.shape[0]


@dataclass
class ComplexityTrace:
    """Populations and complexity diagnostics on a time grid."""

    times: np.ndarray
    populations: np.ndarray  # (basis size, n_times)
    complexity: np.ndarray
    shannon: np.ndarray
    ipr: np.ndarray
    leak: np.ndarray
    basis_name: str = "krylov"

    @property
    def amplitude(self) -> float:
        return trace_amplitude(self.complexity)

    @property
    def max_leak(self) -> float:
        return float(np.max(self.leak)) if self.leak.size else 0.0

    def to_frame(self) -> pd.DataFrame:
        """One row per time point: time, C, P_0..P_{N-1}, S_Sh, IPR, leak."""
        columns: dict[str, np.ndarray] = {"time": self.times, "C": self.complexity}
        for n, row in enumerate(self.populations):
            columns[f"P_{n}"] = row
        columns["S_Sh"] = self.shannon
        columns["IPR"] = self.ipr
        columns["leak"] = self.leak
        return pd.DataFrame(columns)

    def to_dict(self) -> dict:
        """Convert to dictionary for JSON output."""
        return {
            "basis": self.basis_name,
            "points": int(self.times.size),
            "basis_size": int(self.populations.shape[0]),
            "amplitude": self.amplitude,
            "max_shannon": float(np.nanmax(self.shannon)),
            "max_ipr": float(np.nanmax(self.ipr)),
            "max_leak": self.max_leak,
        }


def _seed_amplitudes(seed: StateVector | np.ndarray) -> np.ndarray:
    if isinstance(seed, StateVector):
        return seed.amplitudes
    amps = np.asarray(seed, dtype=np.complex128).reshape(-1)
    norm = float(np.linalg.norm(amps))
    if abs(norm - 1.0) > NORM_TOLERANCE:
        raise UnnormalizedSeedError(norm)
    return amps


def lanczos(
    h: HermitianOperator, seed: StateVector | np.ndarray, tol: float | None = None
) -> KrylovBasis:
    """Krylov basis of ``seed`` under ``h`` with full reorthogonalization.

    Each candidate is projected against every previous Krylov vector twice.
    The recursion ends when the next b falls below ``tol`` (the candidate is
    discarded) or when the Hilbert space is exhausted.

    Args:
        h: Hamiltonian.
        seed: Normalized seed state, K_0.
        tol: Termination threshold; defaults to 1e-8 * ||H||_max.

    Returns:
        KrylovBasis with real a_n and b_n >= 0.
    """
    k0 = _seed_amplitudes(seed)
    if k0.size != h.dim:
        raise DimensionMismatchError(h.dim, k0.size)
    if tol is None:
        tol = default_lanczos_tolerance(h)

    labels = seed.basis_labels if isinstance(seed, StateVector) else h.basis_labels
    vectors: list[np.ndarray] = [k0]
    a: list[float] = []
    b: list[float] = [0.0]
    terminated = False

    while True:
        k = vectors[-1]
        hk = h.matrix @ k
        a.append(float(np.real(np.vdot(k, hk))))
        if len(vectors) == h.dim:
            break

        w = hk - a[-1] * k
        if len(vectors) > 1:
            w = w - b[-1] * vectors[-2]
        w = project_out(w, vectors)
        b_next = float(np.linalg.norm(w))
        if b_next < tol:
            logger.debug("Lanczos terminated at n=%d (b=%.3e < tol=%.3e)", len(vectors), b_next, tol)
            terminated = True
            break
        b.append(b_next)
        vectors.append(w / b_next)

    # renormalize against accumulated roundoff so StateVector accepts each vector
    states = tuple(
        StateVector(v / np.linalg.norm(v), labels) for v in vectors
    )
    return KrylovBasis(
        vectors=states,
        a=np.asarray(a, dtype=np.float64),
        b=np.asarray(b, dtype=np.float64),
        terminated=terminated,
        tolerance=tol,
    )


def _check_distribution(populations: np.ndarray) -> np.ndarray:
    p = np.asarray(populations, dtype=np.float64)
    if p.ndim == 1:
        p = p.reshape(-1, 1)
    if np.any(p < -DISTRIBUTION_TOLERANCE):
        raise InvalidDistributionError("Populations must be nonnegative")
    totals = p.sum(axis=0)
    if np.any(np.abs(totals - 1.0) > DISTRIBUTION_TOLERANCE):
        worst = float(np.max(np.abs(totals - 1.0)))
        raise InvalidDistributionError(f"Populations do not sum to 1 (deviation {worst:.3e})")
    return np.clip(p, 0.0, None)


def _shannon(p: np.ndarray) -> np.ndarray:
    safe = np.where(p > 0, p, 1.0)
    return -np.sum(np.where(p > 0, p * np.log2(safe), 0.0), axis=0)


def _ipr(p: np.ndarray) -> np.ndarray:
    return 1.0 / np.sum(p**2, axis=0) - 1.0


def shannon_entropy(populations: np.ndarray) -> np.ndarray:
    """S = -sum_n P_n log2 P_n per column, with 0 log 0 = 0.

    Accepts a single distribution or a (basis size, n_times) matrix.
    """
    return _shannon(_check_distribution(populations))


def ipr(populations: np.ndarray) -> np.ndarray:
    """Inverse participation ratio 1 / sum_n P_n^2 - 1 per column."""
    return _ipr(_check_distribution(populations))


def entropy_ipr_closed_forms(c: float | np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Shannon entropy and IPR as functions of C for a 2-vector Krylov space."""
    c = np.asarray(c, dtype=np.float64)
    with np.errstate(divide="ignore", invalid="ignore"):
        s = np.where(c > 0, -c * np.log2(np.where(c > 0, c, 1.0)), 0.0) + np.where(
            c < 1, -(1 - c) * np.log2(np.where(c < 1, 1 - c, 1.0)), 0.0
        )
    pi = 1.0 / (2 * c**2 - 2 * c + 1) - 1.0
    return s, pi


def spread_complexity(
    states: np.ndarray | Sequence[StateVector],
    basis: OrderedBasis,
    times: Sequence[float] | np.ndarray | None = None,
    leak_policy: LeakPolicy = LeakPolicy.RAISE,
    support_tolerance: float = SUPPORT_TOLERANCE,
) -> ComplexityTrace:
    """Cost sum_n c_n P(n, t) of evolved states against an ordered basis.

    Probability outside the basis carries no weight and is reported as
    ``leak``. Entropy and IPR are evaluated on the in-basis distribution
    renormalized by (1 - leak).

    Args:
        states: Evolved states, either StateVectors or a (dim, n_times) matrix.
        basis: Ordered basis with cost weights.
        times: Grid matching the states; defaults to 0..n-1.
        leak_policy: Raise SupportLeakError or warn when the leak exceeds
            ``support_tolerance``.
        support_tolerance: Largest leak accepted silently.

    Returns:
        ComplexityTrace over the grid.
    """
    if isinstance(states, np.ndarray):
        psi = np.asarray(states, dtype=np.complex128)
        if psi.ndim == 1:
            psi = psi.reshape(-1, 1)
    else:
        psi = np.column_stack([s.amplitudes for s in states])
    if psi.shape[0] != basis.hilbert_dim:
        raise DimensionMismatchError(basis.hilbert_dim, psi.shape[0])

    n_times = psi.shape[1]
    grid = (
        np.arange(n_times, dtype=np.float64)
        if times is None
        else np.asarray(times, dtype=np.float64)
    )
    if grid.size != n_times:
        raise DimensionMismatchError(n_times, grid.size, "time grid")

    populations = np.abs(basis.vectors.conj().T @ psi) ** 2
    in_basis = populations.sum(axis=0)
    leak = np.clip(1.0 - in_basis, 0.0, None)

    worst = int(np.argmax(leak)) if n_times else 0
    if n_times and leak[worst] > support_tolerance:
        if leak_policy is LeakPolicy.RAISE:
            raise SupportLeakError(float(leak[worst]), float(grid[worst]))
        logger.warning(
            "Basis '%s' misses probability %.3e at t=%.6g", basis.name, leak[worst], grid[worst]
        )

    complexity = basis.weights @ populations
    # entropy and IPR are undefined where nothing remains in the basis
    empty = in_basis <= np.finfo(float).eps
    renormalized = populations / np.where(empty, 1.0, in_basis)
    renormalized[:, empty] = 0.0
    renormalized[0, empty] = 1.0
    shannon = np.where(empty, np.nan, _shannon(renormalized))
    participation = np.where(empty, np.nan, _ipr(renormalized))
    return ComplexityTrace(
        times=grid,
        populations=populations,
        complexity=complexity,
        shannon=shannon,
        ipr=participation,
        leak=leak,
        basis_name=basis.name,
    )


def krylov_complexity(
    h: HermitianOperator,
    seed: StateVector,
    times: Sequence[float] | np.ndarray,
    tol: float | None = None,
) -> ComplexityTrace:
    """C_K(t): spread complexity in the seed's own Krylov basis with c_n = n."""
    basis = lanczos(h, seed, tol)
    states = evolve_many(h, seed, times)
    return spread_complexity(states, basis.to_ordered_basis(), times, LeakPolicy.RAISE)


@dataclass
class InvarianceReport:
    """Lanczos coefficients of a seed compared with those of its evolved image."""

    t_shift: float
    a_seed: list[float]
    b_seed: list[float]
    a_shifted: list[float]
    b_shifted: list[float]
    max_delta_a: float
    max_delta_b: float
    tolerance: float
    passed: bool
    notes: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        """Convert to dictionary for JSON output."""
        return {
            "t_shift": self.t_shift,
            "a_seed": self.a_seed,
            "b_seed": self.b_seed,
            "a_shifted": self.a_shifted,
            "b_shifted": self.b_shifted,
            "max_delta_a": self.max_delta_a,
            "max_delta_b": self.max_delta_b,
            "tolerance": self.tolerance,
            "passed": self.passed,
            "notes": self.notes,
        }


def lanczos_evolution_invariance_check(
    h: HermitianOperator, seed: StateVector, t_shift: float
) -> InvarianceReport:
    """Compare Lanczos coefficients of |seed> and e^{-iH t_shift}|seed>."""
    original = lanczos(h, seed)
    shifted = lanczos(h, evolve(h, seed, t_shift))
    tolerance = INVARIANCE_RELATIVE_TOLERANCE * max(h.norm_max, 1.0)

    notes = []
    if original.dim != shifted.dim:
        notes.append(f"Krylov dimensions differ: {original.dim} vs {shifted.dim}")
        delta_a = delta_b = float("inf")
    else:
        delta_a = float(np.max(np.abs(original.a - shifted.a)))
        delta_b = float(np.max(np.abs(original.b - shifted.b)))

    return InvarianceReport(
        t_shift=t_shift,
        a_seed=original.a.tolist(),
        b_seed=original.b.tolist(),
        a_shifted=shifted.a.tolist(),
        b_shifted=shifted.b.tolist(),
        max_delta_a=delta_a,
        max_delta_b=delta_b,
        tolerance=tolerance,
        passed=not notes and delta_a < tolerance and delta_b < tolerance,
        notes=notes,
    )


def trace_amplitude(values: Sequence[float] | np.ndarray) -> float:
    """Peak value over the grid."""
    arr = np.asarray(values, dtype=np.float64)
    return float(np.max(arr)) if arr.size else 0.0


def _refine_peak(times: np.ndarray, values: np.ndarray, i: int) -> float:
    # parabola through the three samples around an interior maximum
    if i == 0 or i == values.size - 1:
        return float(times[i])
    y0, y1, y2 = values[i - 1], values[i], values[i + 1]
    denom = y0 - 2 * y1 + y2
    if denom == 0:
        return float(times[i])
    offset = 0.5 * (y0 - y2) / denom
    return float(times[i] + offset * (times[i + 1] - times[i]))


def oscillation_frequency(
    times: Sequence[float] | np.ndarray,
    values: Sequence[float] | np.ndarray,
    relative_prominence: float = 0.5,
) -> float:
    """Angular frequency 2*pi/T from the mean spacing T of prominent maxima.

    Returns NaN when fewer than two maxima are found on the grid.
    """
    t = np.asarray(times, dtype=np.float64)
    y = np.asarray(values, dtype=np.float64)
    span = float(np.max(y) - np.min(y)) if y.size else 0.0
    if span <= 0:
        return float("nan")

    peaks, _ = find_peaks(y, prominence=relative_prominence * span)
    if peaks.size < 2:
        logger.debug("Fewer than two maxima on the grid; frequency undefined")
        return float("nan")

    refined = np.array([_refine_peak(t, y, int(i)) for i in peaks])
    period = float(np.mean(np.diff(refined)))
    return 2 * np.pi / period
