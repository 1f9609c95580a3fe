"""Dense complex linear algebra: eigendecomposition, exact propagation, Gram-Schmidt."""

import logging
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy import linalg as sla

from .errors import DimensionMismatchError
from .models import HermitianOperator, SpectralDecomposition, StateVector

logger = logging.getLogger(__name__)

# Gram-Schmidt drop tolerance relative to the largest input norm
DROP_TOLERANCE = 1e-8


def operator_norm_max(h: HermitianOperator | np.ndarray) -> float:
    """Largest absolute matrix element, the scale for relative tolerances."""
    mat = h.matrix if isinstance(h, HermitianOperator) else np.asarray(h)
    return float(np.max(np.abs(mat))) if mat.size else 0.0


def eigendecompose(h: HermitianOperator) -> SpectralDecomposition:
    """Hermitian eigendecomposition with ascending eigenvalues.

    Hermiticity is enforced when the HermitianOperator is built, so a
    NonHermitianError surfaces there rather than here.
    """
    eigenvalues, eigenvectors = sla.eigh(h.matrix)
    return SpectralDecomposition(
        eigenvalues=np.asarray(eigenvalues, dtype=np.float64),
        eigenvectors=np.asarray(eigenvectors, dtype=np.complex128),
    )


def _check_dims(h: HermitianOperator, psi: StateVector) -> None:
    if h.dim != psi.dim:
        raise DimensionMismatchError(h.dim, psi.dim)


def evolve(
    h: HermitianOperator,
    psi0: StateVector,
    t: float,
    spectrum: SpectralDecomposition | None = None,
) -> StateVector:
    """Exact e^{-iHt}|psi0>.

    Args:
        h: Hamiltonian.
        psi0: Initial state.
        t: Evolution time.
        spectrum: Precomputed eigendecomposition of ``h`` to reuse.

    Returns:
        Evolved state over the same basis labels.
    """
    _check_dims(h, psi0)
    if t == 0:
        return psi0
    spec = spectrum if spectrum is not None else eigendecompose(h)
    v = spec.eigenvectors
    coeffs = v.conj().T @ psi0.amplitudes
    amps = v @ (np.exp(-1j * spec.eigenvalues * t) * coeffs)
    return psi0.with_amplitudes(amps)


def evolve_many(
    h: HermitianOperator,
    psi0: StateVector,
    times: Sequence[float] | np.ndarray,
    spectrum: SpectralDecomposition | None = None,
) -> np.ndarray:
    """Amplitudes of e^{-iHt}|psi0> for every t, as a (dim, n_times) matrix."""
    _check_dims(h, psi0)
    times = np.asarray(times, dtype=np.float64)
    spec = spectrum if spectrum is not None else eigendecompose(h)
    v = spec.eigenvectors
    coeffs = v.conj().T @ psi0.amplitudes
    phases = np.exp(-1j * np.outer(spec.eigenvalues, times))
    states = v @ (phases * coeffs[:, None])
    # t = 0 columns are the seed itself
    states[:, times == 0] = psi0.amplitudes[:, None]
    return states


def inner(u: StateVector, v: StateVector) -> complex:
    """<u|v>, conjugate-linear in the first argument."""
    if u.dim != v.dim:
        raise DimensionMismatchError(u.dim, v.dim)
    return complex(np.vdot(u.amplitudes, v.amplitudes))


def project_out(vector: np.ndarray, basis: Sequence[np.ndarray], passes: int = 2) -> np.ndarray:
    """Remove the components of ``vector`` along orthonormal ``basis`` vectors."""
    w = np.array(vector, dtype=np.complex128)
    for _ in range(passes):
        for q in basis:
            w = w - np.vdot(q, w) * q
    return w


@dataclass
class OrthonormalizationResult:
    """Gram-Schmidt output together with the indices that were dropped."""

    vectors: list[np.ndarray]
    kept: list[int] = field(default_factory=list)
    dropped: list[int] = field(default_factory=list)
    tolerance: float = 0.0

    def gram_residual(self) -> float:
        if not self.vectors:
            return 0.0
        q = np.column_stack(self.vectors)
        return float(np.max(np.abs(q.conj().T @ q - np.eye(q.shape[1]))))

    def to_dict(self) -> dict:
        """Convert to dictionary for JSON output."""
        return {
            "kept": self.kept,
            "dropped": self.dropped,
            "tolerance": self.tolerance,
        }


def orthonormalize(
    vectors: Sequence[Sequence[complex] | np.ndarray],
    tol: float | None = None,
) -> OrthonormalizationResult:
    """Ordered Gram-Schmidt with one reorthogonalization pass.

    Args:
        vectors: Ordered, nonempty list of complex vectors.
        tol: Drop threshold on the post-projection norm; defaults to
            DROP_TOLERANCE times the largest input norm.

    Returns:
        OrthonormalizationResult listing kept and dropped input indices.
    """
    if len(vectors) == 0:
        raise ValueError("orthonormalize needs at least one vector")
    arrays = [np.asarray(v, dtype=np.complex128).reshape(-1) for v in vectors]
    dim = arrays[0].size
    for arr in arrays:
        if arr.size != dim:
            raise DimensionMismatchError(dim, arr.size)

    if tol is None:
        tol = DROP_TOLERANCE * max(float(np.linalg.norm(a)) for a in arrays)

    result = OrthonormalizationResult(vectors=[], tolerance=tol)
    for index, arr in enumerate(arrays):
        w = project_out(arr, result.vectors)
        norm = float(np.linalg.norm(w))
        if norm < tol or norm == 0.0:
            logger.debug("Dropping vector %d (residual norm %.3e < %.3e)", index, norm, tol)
            result.dropped.append(index)
            continue
        result.vectors.append(w / norm)
        result.kept.append(index)

    if result.dropped:
        logger.info("Gram-Schmidt dropped %d linearly dependent vector(s)", len(result.dropped))
    return result


def random_hermitian(rng: np.random.Generator, dim: int, scale: float = 1.0) -> HermitianOperator:
    """Random dense Hermitian matrix with Gaussian entries."""
    a = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    return HermitianOperator(scale * (a + a.conj().T) / 2)


def random_state(
    rng: np.random.Generator, dim: int, basis_labels: Sequence[str] | None = None
) -> StateVector:
    """Haar-uniform random pure state."""
    amps = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    labels = tuple(basis_labels) if basis_labels is not None else tuple(str(i) for i in range(dim))
    return StateVector.normalized(amps, labels)


def random_unitary(rng: np.random.Generator, dim: int) -> np.ndarray:
    """Haar-random unitary via QR of a complex Gaussian matrix."""
    z = (rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diagonal(r)
    return q * (d / np.abs(d))
