"""Tests for single-qubit Bloch geometry."""

import numpy as np
import pytest

from krylov_cli.data.bloch_analysis import (
    BlochVector,
    RotationSpec,
    bloch_of,
    bloch_trajectory,
    displacement_sq,
    rotate_bloch,
    rotation_unitary,
    taylor_coefficients_sqrtC,
    triangle_inequality_check,
    triangle_inequality_sweep,
)
from krylov_cli.data.errors import DimensionMismatchError, InvalidSpecError
from krylov_cli.data.krylov_analysis import krylov_complexity, lanczos
from krylov_cli.data.linalg import evolve, random_state
from krylov_cli.data.model_zoo import (
    SingleQubitSpec,
    build_single_qubit,
    single_qubit_complexity_closed,
)
from krylov_cli.data.models import StateVector


def _random_rotation(rng) -> RotationSpec:
    return RotationSpec.normalized(rng.normal(size=3), rng.uniform(0, 2 * np.pi))


class TestBlochVector:
    """Tests for the alpha-vector map."""

    def test_pure_states_on_half_sphere(self, rng):
        """Test |alpha| = 1/2 and rho = I/2 + alpha . sigma."""
        for _ in range(20):
            psi = random_state(rng, 2)
            alpha = bloch_of(psi)
            assert alpha.norm == pytest.approx(0.5, abs=1e-12)
            rho = np.outer(psi.amplitudes, psi.amplitudes.conj())
            np.testing.assert_allclose(alpha.density_matrix(), rho, atol=1e-12)

    def test_basis_states(self):
        """Test |+> and |-> sit at the poles."""
        labels = ("+", "-")
        assert bloch_of(StateVector.basis_state("+", labels)).to_dict() == {"x": 0.0, "y": 0.0, "z": 0.5}
        assert bloch_of(StateVector.basis_state("-", labels)).z == -0.5

    def test_requires_qubit(self, rng):
        """Test only two-level states have an alpha vector."""
        with pytest.raises(DimensionMismatchError):
            bloch_of(random_state(rng, 3))


class TestDisplacementIdentity:
    """Tests for |alpha(t) - alpha(0)|^2 = C_K(t)."""

    def test_closed_form(self, rng):
        """Test the identity over random (theta, phi, omega, t)."""
        for _ in range(1000):
            spec = SingleQubitSpec.from_angles(
                rng.uniform(0.1, 10.0), rng.uniform(0, np.pi), rng.uniform(0, 2 * np.pi)
            )
            h, seed = build_single_qubit(spec)
            t = rng.uniform(0, 20)
            assert displacement_sq(seed, evolve(h, seed, t)) == pytest.approx(
                float(single_qubit_complexity_closed(spec, t)), abs=1e-10
            )

    def test_numeric_pipeline(self, rng):
        """Test the identity against numeric Krylov complexity along a trajectory."""
        for _ in range(20):
            spec = SingleQubitSpec.from_angles(
                rng.uniform(0.1, 5.0), rng.uniform(0.05, np.pi - 0.05), rng.uniform(0, 2 * np.pi)
            )
            h, seed = build_single_qubit(spec)
            times = np.linspace(0, 10, 200)
            trajectory = bloch_trajectory(h, seed, times)
            numeric = krylov_complexity(h, seed, times).complexity
            np.testing.assert_allclose(trajectory.displacement_sq, numeric, atol=1e-10)

    def test_phase_independence(self):
        """Test C_K does not depend on the azimuth of the seed."""
        times = np.linspace(0, 10, 100)
        curves = []
        for phi in (0.0, 1.0, 4.0):
            h, seed = build_single_qubit(SingleQubitSpec.from_angles(1.7, 0.9, phi))
            curves.append(krylov_complexity(h, seed, times).complexity)
        np.testing.assert_allclose(curves[0], curves[1], atol=1e-12)
        np.testing.assert_allclose(curves[0], curves[2], atol=1e-12)

    def test_trajectory_frame(self):
        """Test trajectory table columns."""
        h, seed = build_single_qubit(SingleQubitSpec.from_angles(1.0, np.pi / 2))
        frame = bloch_trajectory(h, seed, np.linspace(0, 1, 3)).to_frame()
        assert list(frame.columns) == ["time", "x", "y", "z", "displacement_sq"]
        assert frame["displacement_sq"].iloc[0] == 0.0


class TestRotations:
    """Tests for rotations of the alpha vector."""

    def test_isometry(self, rng):
        """Test rotations preserve lengths and distances."""
        for _ in range(100):
            r = _random_rotation(rng)
            u = BlochVector.from_array(rng.normal(size=3))
            v = BlochVector.from_array(rng.normal(size=3))
            ru, rv = rotate_bloch(u, r), rotate_bloch(v, r)
            assert ru.norm == pytest.approx(u.norm, abs=1e-12)
            assert np.linalg.norm(ru.as_array() - rv.as_array()) == pytest.approx(
                np.linalg.norm(u.as_array() - v.as_array()), abs=1e-12
            )

    def test_matches_unitary_action(self, rng):
        """Test rotating alpha equals conjugating the state by U."""
        for _ in range(50):
            r = _random_rotation(rng)
            psi = random_state(rng, 2)
            rotated_state = psi.with_amplitudes(rotation_unitary(r) @ psi.amplitudes)
            np.testing.assert_allclose(
                bloch_of(rotated_state).as_array(),
                rotate_bloch(bloch_of(psi), r).as_array(),
                atol=1e-12,
            )

    def test_displacement_is_basis_independent(self, rng):
        """Test a common rotation leaves the displacement unchanged."""
        r = _random_rotation(rng)
        u = rotation_unitary(r)
        a, b = random_state(rng, 2), random_state(rng, 2)
        ua = a.with_amplitudes(u @ a.amplitudes)
        ub = b.with_amplitudes(u @ b.amplitudes)
        assert displacement_sq(ua, ub) == pytest.approx(displacement_sq(a, b), abs=1e-12)

    def test_unit_axis_required(self):
        """Test non-unit axes are rejected."""
        with pytest.raises(InvalidSpecError):
            RotationSpec((1.0, 1.0, 0.0), 0.3)


class TestTriangleInequality:
    """Tests for sqrt(C_K) as a distance."""

    def test_single_check(self):
        """Test one explicit triple."""
        spec = SingleQubitSpec.from_angles(1.0, np.pi / 2)
        report = triangle_inequality_check(spec, 0.0, 1.0, 2.5)
        assert report.holds
        assert report.lhs <= report.rhs

    def test_sweep_has_no_violations(self, rng):
        """Test a large randomized sweep finds no violation."""
        report = triangle_inequality_sweep(rng, 100_000)
        assert report.n_draws == 100_000
        assert report.violations == 0
        assert report.worst_margin >= -1e-12


class TestTaylorCoefficients:
    """Tests for the small-t expansion of sqrt(C_K)."""

    def test_single_qubit_expansion(self):
        """Test c1 t + c3 t^3 against the exact single-qubit curve."""
        spec = SingleQubitSpec.from_angles(1.3, 1.1)
        h, seed = build_single_qubit(spec)
        basis = lanczos(h, seed)
        c1, c3 = taylor_coefficients_sqrtC(basis.a[0], basis.a[1], basis.b[1], 0.0)
        assert c3 < 0
        assert c3 == pytest.approx(-(1.3**3) * np.sin(1.1) / 48, rel=1e-10)
        t = 1e-2
        exact = np.sqrt(float(single_qubit_complexity_closed(spec, t)))
        assert abs(exact - (c1 * t + c3 * t**3)) < 1e-10

    def test_vanishing_cubic_term(self):
        """Test c3 = 0 when a0 = a1 and b2 = sqrt(2) b1."""
        _, c3 = taylor_coefficients_sqrtC(0.4, 0.4, 1.0, np.sqrt(2))
        assert c3 == pytest.approx(0.0, abs=1e-15)
