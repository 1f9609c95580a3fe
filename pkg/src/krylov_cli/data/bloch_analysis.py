"""Single-qubit geometry: the half-radius Bloch sphere and complexity as distance.

For a pure state rho = I/2 + alpha . sigma the vector alpha lies on a sphere
of radius 1/2, and the squared distance travelled from the initial point
equals the Krylov complexity.
"""

import logging
from dataclasses import dataclass
from typing import Sequence

import numpy as np
import pandas as pd

from .errors import DimensionMismatchError, InvalidSpecError
from .linalg import evolve_many
from .model_zoo import SingleQubitSpec, single_qubit_complexity_closed
from .models import HermitianOperator, StateVector

logger = logging.getLogger(__name__)

TRIANGLE_SLACK = 1e-12
AXIS_TOLERANCE = 1e-12

PAULI = np.array(
    [
        [[0, 1], [1, 0]],
        [[0, -1j], [1j, 0]],
        [[1, 0], [0, -1]],
    ],
    dtype=np.complex128,
)


@dataclass(frozen=True)
class BlochVector:
    x: float
    y: float
    z: float

    @classmethod
    def from_array(cls, values: Sequence[float] | np.ndarray) -> "BlochVector":
        x, y, z = (float(v) for v in values)
        return cls(x, y, z)

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z])

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.as_array()))

    def density_matrix(self) -> np.ndarray:
        """I/2 + alpha . sigma."""
        return np.eye(2) / 2 + np.tensordot(self.as_array(), PAULI, axes=1)

    def to_dict(self) -> dict:
        """Convert to dictionary for JSON output."""
        return {"x": self.x, "y": self.y, "z": self.z}


@dataclass(frozen=True)
class RotationSpec:
    """Rotation U = cos(a) I + i sin(a) (n . sigma) with unit axis n."""

    axis: tuple[float, float, float]
    half_angle: float

    def __post_init__(self) -> None:
        axis = tuple(float(v) for v in self.axis)
        if len(axis) != 3:
            raise InvalidSpecError("axis", "expected three components")
        norm = float(np.linalg.norm(axis))
        if abs(norm - 1.0) > AXIS_TOLERANCE:
            raise InvalidSpecError("axis", f"norm {norm:.15g}, expected 1")
        object.__setattr__(self, "axis", axis)

    @classmethod
    def normalized(cls, axis: Sequence[float], half_angle: float) -> "RotationSpec":
        n = np.asarray(axis, dtype=np.float64)
        return cls(tuple(n / np.linalg.norm(n)), half_angle)


def _bloch_components(amplitudes: np.ndarray) -> np.ndarray:
    # amplitudes: (2, n) -> (n, 3)
    c0, c1 = amplitudes[0], amplitudes[1]
    coherence = c0 * np.conj(c1)
    return np.column_stack(
        [coherence.real, -coherence.imag, (np.abs(c0) ** 2 - np.abs(c1) ** 2) / 2]
    )


def bloch_of(psi: StateVector) -> BlochVector:
    """alpha vector of a pure qubit state, |alpha| = 1/2."""
    if psi.dim != 2:
        raise DimensionMismatchError(2, psi.dim)
    return BlochVector.from_array(_bloch_components(psi.amplitudes.reshape(2, 1))[0])


def displacement_sq(psi_a: StateVector, psi_b: StateVector) -> float:
    """Squared Euclidean distance between the two alpha vectors."""
    diff = bloch_of(psi_a).as_array() - bloch_of(psi_b).as_array()
    return float(diff @ diff)


def rotate_bloch(v: BlochVector, r: RotationSpec) -> BlochVector:
    """Image of alpha under the rotation generated by r."""
    alpha = v.as_array()
    n = np.asarray(r.axis)
    a = r.half_angle
    rotated = (
        np.cos(2 * a) * alpha
        - np.sin(2 * a) * np.cross(n, alpha)
        + 2 * np.sin(a) ** 2 * np.dot(n, alpha) * n
    )
    return BlochVector.from_array(rotated)


def rotation_unitary(r: RotationSpec) -> np.ndarray:
    return np.cos(r.half_angle) * np.eye(2) + 1j * np.sin(r.half_angle) * np.tensordot(
        np.asarray(r.axis), PAULI, axes=1
    )


@dataclass
class BlochTrajectory:
    times: np.ndarray
    vectors: np.ndarray  # (n_times, 3)

    @property
    def displacement_sq(self) -> np.ndarray:
        diff = self.vectors - self.vectors[0]
        return np.sum(diff**2, axis=1)

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(
            {
                "time": self.times,
                "x": self.vectors[:, 0],
                "y": self.vectors[:, 1],
                "z": self.vectors[:, 2],
                "displacement_sq": self.displacement_sq,
            }
        )


def bloch_trajectory(
    h: HermitianOperator, psi0: StateVector, times: Sequence[float] | np.ndarray
) -> BlochTrajectory:
    """alpha(t) along the exact evolution of a qubit."""
    if psi0.dim != 2:
        raise DimensionMismatchError(2, psi0.dim)
    times = np.asarray(times, dtype=np.float64)
    states = evolve_many(h, psi0, times)
    return BlochTrajectory(times=times, vectors=_bloch_components(states))


@dataclass
class TriangleReport:
    """sqrt(C(t3-t1)) <= sqrt(C(t3-t2)) + sqrt(C(t2-t1))."""

    lhs: float
    rhs: float
    holds: bool

    def to_dict(self) -> dict:
        """Convert to dictionary for JSON output."""
        return {"lhs": self.lhs, "rhs": self.rhs, "holds": self.holds}


def triangle_inequality_check(
    spec: SingleQubitSpec, t1: float, t2: float, t3: float
) -> TriangleReport:
    def root(dt: float) -> float:
        return float(np.sqrt(single_qubit_complexity_closed(spec, dt)))

    lhs = root(t3 - t1)
    rhs = root(t3 - t2) + root(t2 - t1)
    return TriangleReport(lhs=lhs, rhs=rhs, holds=lhs <= rhs + TRIANGLE_SLACK)


@dataclass
class TriangleSweepReport:
    n_draws: int
    violations: int
    worst_margin: float

    def to_dict(self) -> dict:
        """Convert to dictionary for JSON output."""
        return {
            "n_draws": self.n_draws,
            "violations": self.violations,
            "worst_margin": self.worst_margin,
        }


def triangle_inequality_sweep(
    rng: np.random.Generator,
    n_draws: int,
    max_time: float = 20.0,
    omega_range: tuple[float, float] = (0.1, 10.0),
) -> TriangleSweepReport:
    """Monte-Carlo check over random (theta0, omega, t1, t2, t3)."""
    theta = rng.uniform(0, np.pi, n_draws)
    omega = rng.uniform(*omega_range, n_draws)
    t1, t2, t3 = (rng.uniform(0, max_time, n_draws) for _ in range(3))

    def root(dt: np.ndarray) -> np.ndarray:
        return np.abs(np.sin(theta)) * np.abs(np.sin(omega * dt / 2))

    margin = root(t3 - t2) + root(t2 - t1) - root(t3 - t1)
    violations = int(np.sum(margin < -TRIANGLE_SLACK))
    if violations:
        logger.warning("Triangle inequality violated in %d of %d draws", violations, n_draws)
    return TriangleSweepReport(
        n_draws=n_draws, violations=violations, worst_margin=float(np.min(margin))
    )


def taylor_coefficients_sqrtC(a0: float, a1: float, b1: float, b2: float) -> tuple[float, float]:
    """Small-t expansion sqrt(C) = c1 t + c3 t^3 + O(t^5)."""
    c1 = b1
    c3 = -b1 * ((a0 - a1) ** 2 + 2 * (2 * b1**2 - b2**2)) / 24
    return c1, c3
