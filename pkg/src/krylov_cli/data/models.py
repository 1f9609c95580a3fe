"""Core data models: states, Hermitian operators and spectral decompositions."""

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import DimensionMismatchError, KrylovError, NonHermitianError

NORM_TOLERANCE = 1e-12
HERMITICITY_TOLERANCE = 1e-12


def _as_complex_vector(values: Sequence[complex] | np.ndarray) -> np.ndarray:
    vec = np.array(values, dtype=np.complex128).reshape(-1)
    vec.setflags(write=False)
    return vec


@dataclass(frozen=True, eq=False)
class StateVector:
    """Normalized complex amplitudes over a labeled computational basis."""

    amplitudes: np.ndarray
    basis_labels: tuple[str, ...]

    def __post_init__(self) -> None:
        amps = _as_complex_vector(self.amplitudes)
        labels = tuple(str(label) for label in self.basis_labels)
        object.__setattr__(self, "amplitudes", amps)
        object.__setattr__(self, "basis_labels", labels)

        if amps.size < 1:
            raise KrylovError("StateVector needs at least one amplitude")
        if amps.size != len(labels):
            raise DimensionMismatchError(len(labels), amps.size, "amplitude/label count")
        norm = float(np.linalg.norm(amps))
        if abs(norm - 1.0) > NORM_TOLERANCE:
            raise KrylovError(f"StateVector is not normalized (norm = {norm:.15g})")

    @classmethod
    def normalized(
        cls, amplitudes: Sequence[complex] | np.ndarray, basis_labels: Sequence[str]
    ) -> "StateVector":
        """Build a state after rescaling the amplitudes to unit norm."""
        amps = np.asarray(amplitudes, dtype=np.complex128).reshape(-1)
        norm = np.linalg.norm(amps)
        if norm == 0:
            raise KrylovError("Cannot normalize the zero vector")
        return cls(amps / norm, tuple(basis_labels))

    @classmethod
    def basis_state(cls, label: str, basis_labels: Sequence[str]) -> "StateVector":
        """Computational-basis state named by ``label``."""
        labels = tuple(basis_labels)
        amps = np.zeros(len(labels), dtype=np.complex128)
        amps[labels.index(label)] = 1.0
        return cls(amps, labels)

    @property
    def dim(self) -> int:
        return self.amplitudes.size

    def with_amplitudes(self, amplitudes: np.ndarray) -> "StateVector":
        """Same basis, new amplitudes."""
        return StateVector(amplitudes, self.basis_labels)

    def to_dict(self) -> dict:
        """Convert to dictionary for JSON output."""
        return {
            "basis_labels": list(self.basis_labels),
            "amplitudes": [[float(a.real), float(a.imag)] for a in self.amplitudes],
        }


@dataclass(frozen=True, eq=False)
class HermitianOperator:
    """Dense Hermitian matrix (energy units, hbar = 1)."""

    matrix: np.ndarray
    basis_labels: tuple[str, ...] = field(default=())

    def __post_init__(self) -> None:
        mat = np.array(self.matrix, dtype=np.complex128)
        if mat.ndim != 2 or mat.shape[0] != mat.shape[1] or mat.shape[0] < 1:
            raise KrylovError(f"Operator must be a nonempty square matrix, got {mat.shape}")
        labels = tuple(self.basis_labels) or tuple(str(i) for i in range(mat.shape[0]))
        if len(labels) != mat.shape[0]:
            raise DimensionMismatchError(mat.shape[0], len(labels), "label count")

        scale = max(1.0, float(np.max(np.abs(mat))))
        residual = float(np.max(np.abs(mat - mat.conj().T)))
        tolerance = HERMITICITY_TOLERANCE * scale
        if residual > tolerance:
            raise NonHermitianError(residual, tolerance)

        mat.setflags(write=False)
        object.__setattr__(self, "matrix", mat)
        object.__setattr__(self, "basis_labels", labels)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def norm_max(self) -> float:
        """Largest absolute matrix element."""
        return float(np.max(np.abs(self.matrix)))

    def apply(self, vector: np.ndarray) -> np.ndarray:
        return self.matrix @ vector

    def expectation(self, state: StateVector) -> float:
        return float(np.real(np.vdot(state.amplitudes, self.matrix @ state.amplitudes)))

    def to_dict(self) -> dict:
        """Convert to dictionary for JSON output."""
        return {
            "basis_labels": list(self.basis_labels),
            "real": self.matrix.real.tolist(),
            "imag": self.matrix.imag.tolist(),
        }


@dataclass(frozen=True, eq=False)
class SpectralDecomposition:
    """Eigenvalues (ascending) and orthonormal eigenvector columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def reconstruct(self) -> np.ndarray:
        """V diag(E) V^dagger."""
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T

    def gram_residual(self) -> float:
        v = self.eigenvectors
        return float(np.max(np.abs(v.conj().T @ v - np.eye(v.shape[1]))))

    def propagator(self, t: float) -> np.ndarray:
        """exp(-iHt) built from the decomposition."""
        v = self.eigenvectors
        return (v * np.exp(-1j * self.eigenvalues * t)) @ v.conj().T

    def to_dict(self) -> dict:
        """Convert to dictionary for JSON output."""
        return {"eigenvalues": self.eigenvalues.tolist()}
