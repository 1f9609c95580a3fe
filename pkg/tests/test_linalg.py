"""Tests for the dense linear algebra layer."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.linalg import expm

from krylov_cli.data.errors import DimensionMismatchError, NonHermitianError
from krylov_cli.data.linalg import (
    eigendecompose,
    evolve,
    evolve_many,
    inner,
    operator_norm_max,
    orthonormalize,
    project_out,
    random_hermitian,
    random_state,
    random_unitary,
)
from krylov_cli.data.models import HermitianOperator, StateVector


class TestModels:
    """Tests for StateVector and HermitianOperator."""

    def test_state_requires_unit_norm(self):
        """Test unnormalized amplitudes are rejected."""
        with pytest.raises(Exception, match="not normalized"):
            StateVector([1.0, 1.0], ("0", "1"))

    def test_normalized_constructor(self):
        """Test normalized() rescales."""
        psi = StateVector.normalized([3.0, 4.0j], ("0", "1"))
        np.testing.assert_allclose(psi.amplitudes, [0.6, 0.8j])

    def test_label_count_mismatch(self):
        """Test amplitudes and labels must agree."""
        with pytest.raises(DimensionMismatchError):
            StateVector([1.0], ("0", "1"))

    def test_non_hermitian_rejected(self):
        """Test Hermiticity check."""
        with pytest.raises(NonHermitianError):
            HermitianOperator([[0, 1], [0, 0]])

    def test_operator_is_read_only(self):
        """Test stored matrices cannot be mutated."""
        h = HermitianOperator(np.eye(2))
        with pytest.raises(ValueError):
            h.matrix[0, 0] = 5

    def test_default_labels(self):
        """Test numeric labels when none are given."""
        assert HermitianOperator(np.eye(3)).basis_labels == ("0", "1", "2")


class TestEvolution:
    """Tests for eigendecomposition and exact propagation."""

    def test_eigendecompose_reconstructs(self, rng):
        """Test V diag(E) V^dagger reproduces H."""
        h = random_hermitian(rng, 7)
        spectrum = eigendecompose(h)
        np.testing.assert_allclose(spectrum.reconstruct(), h.matrix, atol=1e-12)
        assert spectrum.gram_residual() < 1e-12
        assert np.all(np.diff(spectrum.eigenvalues) >= 0)

    def test_evolve_matches_expm(self, rng):
        """Test propagation against scipy's matrix exponential."""
        for _ in range(10):
            h = random_hermitian(rng, 5)
            psi = random_state(rng, 5)
            t = rng.uniform(0, 10)
            expected = expm(-1j * h.matrix * t) @ psi.amplitudes
            np.testing.assert_allclose(evolve(h, psi, t).amplitudes, expected, atol=1e-10)

    def test_evolve_zero_time_is_identity(self, random_system):
        """Test t = 0 returns the seed."""
        h, psi = random_system
        assert evolve(h, psi, 0.0) is psi

    def test_evolve_many_columns(self, random_system):
        """Test each column of evolve_many equals evolve."""
        h, psi = random_system
        times = np.array([0.0, 0.3, 1.7, 5.0])
        states = evolve_many(h, psi, times)
        assert states.shape == (6, 4)
        for k, t in enumerate(times):
            np.testing.assert_allclose(states[:, k], evolve(h, psi, t).amplitudes, atol=1e-12)
        np.testing.assert_array_equal(states[:, 0], psi.amplitudes)

    def test_dimension_mismatch(self, rng):
        """Test evolution refuses mismatched dimensions."""
        with pytest.raises(DimensionMismatchError):
            evolve(random_hermitian(rng, 3), random_state(rng, 4), 1.0)

    @settings(max_examples=30, deadline=None)
    @given(
        seed=st.integers(min_value=0, max_value=2**32 - 1),
        dim=st.integers(min_value=1, max_value=8),
        t=st.floats(min_value=-50, max_value=50, allow_nan=False),
    )
    def test_evolution_preserves_norm(self, seed, dim, t):
        """Test unitarity of propagation."""
        gen = np.random.default_rng(seed)
        h = random_hermitian(gen, dim, scale=3.0)
        psi = random_state(gen, dim)
        assert abs(np.linalg.norm(evolve(h, psi, t).amplitudes) - 1.0) < 1e-12


class TestOrthonormalize:
    """Tests for Gram-Schmidt."""

    def test_drops_dependent_vectors(self):
        """Test linearly dependent inputs are reported as dropped."""
        result = orthonormalize([[1, 0, 0], [1, 1, 0], [2, 1, 0], [0, 0, 1j]])
        assert result.kept == [0, 1, 3]
        assert result.dropped == [2]
        assert result.gram_residual() < 1e-12

    def test_preserves_order(self):
        """Test the first vector is kept as given (up to norm)."""
        result = orthonormalize([[0, 2], [1, 1]])
        np.testing.assert_allclose(result.vectors[0], [0, 1])
        np.testing.assert_allclose(result.vectors[1], [1, 0])

    def test_empty_input(self):
        """Test empty input is an error."""
        with pytest.raises(ValueError):
            orthonormalize([])

    def test_project_out(self):
        """Test projection removes components along the basis."""
        basis = [np.array([1, 0, 0], dtype=complex)]
        np.testing.assert_allclose(project_out([3, 4, 5], basis), [0, 4, 5])


def test_inner_is_conjugate_linear():
    """Test <u|v> conjugates the first argument."""
    u = StateVector([1j, 0], ("0", "1"))
    v = StateVector([1, 0], ("0", "1"))
    assert inner(u, v) == -1j


def test_random_unitary(rng):
    """Test Haar sampler returns unitaries."""
    u = random_unitary(rng, 5)
    np.testing.assert_allclose(u.conj().T @ u, np.eye(5), atol=1e-12)


def test_operator_norm_max():
    """Test max-entry norm."""
    assert operator_norm_max(np.array([[1, -3], [-3, 2]])) == 3.0
