"""Tests for model Hamiltonians and their closed-form oracles."""

import numpy as np
import pytest

from krylov_cli.data.errors import InvalidSpecError, UnknownSeedLabelError
from krylov_cli.data.krylov_analysis import (
    LeakPolicy,
    krylov_complexity,
    lanczos,
    oscillation_frequency,
    spread_complexity,
)
from krylov_cli.data.linalg import evolve_many
from krylov_cli.data.model_zoo import (
    PAIR_LABELS,
    PairSpec,
    RydbergPairSpec,
    SingleQubitSpec,
    TwoLevelAtomSpec,
    biased_freezing_reference,
    blockade_gg_complexity_closed,
    blockade_partition,
    blockade_reference_lanczos,
    build_model,
    build_pair,
    build_rydberg_pair,
    build_single_qubit,
    build_two_level_atom,
    effective_blockade_hamiltonian,
    effective_ge_complexity_closed,
    global_drive_pair_complexity_closed,
    noninteracting_pair_complexity,
    pair_state,
    single_qubit_complexity_closed,
    single_qubit_complexity_lanczos_form,
    two_level_atom_complexity,
)


def _random_qubit_spec(rng) -> SingleQubitSpec:
    amps = rng.normal(size=2) + 1j * rng.normal(size=2)
    amps /= np.linalg.norm(amps)
    return SingleQubitSpec(rng.uniform(0.1, 5.0), complex(amps[0]), complex(amps[1]))


class TestSingleQubit:
    """Tests for the single qubit."""

    def test_closed_form_matches_pipeline(self, rng):
        """Test 4|alpha|^2|beta|^2 sin^2(omega t/2) against numeric Lanczos."""
        for _ in range(50):
            spec = _random_qubit_spec(rng)
            h, seed = build_single_qubit(spec)
            times = np.linspace(0, 4 * np.pi / spec.omega, 400)
            numeric = krylov_complexity(h, seed, times).complexity
            np.testing.assert_allclose(
                numeric, single_qubit_complexity_closed(spec, times), atol=1e-8
            )

    def test_lanczos_form_agrees(self, rng):
        """Test the (a0, a1, b1) form equals the amplitude form."""
        spec = _random_qubit_spec(rng)
        h, seed = build_single_qubit(spec)
        basis = lanczos(h, seed)
        times = np.linspace(0, 10, 50)
        np.testing.assert_allclose(
            single_qubit_complexity_lanczos_form(basis.a[0], basis.a[1], basis.b[1], times),
            single_qubit_complexity_closed(spec, times),
            atol=1e-10,
        )

    def test_seed_complement_symmetry(self, rng):
        """Test the orthogonal complement spreads identically over the complementary basis."""
        for _ in range(20):
            spec = _random_qubit_spec(rng)
            complement = SingleQubitSpec(spec.omega, -np.conj(spec.beta), np.conj(spec.alpha))
            h, seed = build_single_qubit(spec)
            _, seed_perp = build_single_qubit(complement)
            assert abs(np.vdot(seed.amplitudes, seed_perp.amplitudes)) < 1e-15

            basis = lanczos(h, seed)
            basis_perp = lanczos(h, seed_perp)
            assert abs(np.vdot(basis_perp.vectors[1].amplitudes, seed.amplitudes)) == pytest.approx(1.0)
            np.testing.assert_allclose(basis_perp.a, basis.a[::-1], atol=1e-12)

            times = np.linspace(0, 4 * np.pi / spec.omega, 200)
            np.testing.assert_allclose(
                krylov_complexity(h, seed_perp, times).complexity,
                krylov_complexity(h, seed, times).complexity,
                atol=1e-10,
            )

    def test_from_angles(self):
        """Test the equatorial seed has amplitude one."""
        spec = SingleQubitSpec.from_angles(1.0, np.pi / 2, 0.3)
        assert spec.amplitude == pytest.approx(1.0)

    def test_rejects_unnormalized(self):
        """Test alpha and beta must be normalized."""
        with pytest.raises(InvalidSpecError):
            SingleQubitSpec(1.0, 1.0, 1.0)

    def test_lanczos_form_degenerate(self):
        """Test a vanishing rate gives zero complexity."""
        np.testing.assert_array_equal(single_qubit_complexity_lanczos_form(0, 0, 0, [1.0, 2.0]), 0)


class TestTwoLevelAtom:
    """Tests for the driven atom."""

    def test_closed_form_matches_pipeline(self, rng):
        """Test the detuned Rabi formula for both seeds."""
        for _ in range(20):
            spec = TwoLevelAtomSpec(rng.uniform(0.1, 3.0), rng.uniform(-3.0, 3.0))
            h, seeds = build_two_level_atom(spec)
            rabi = np.hypot(spec.Omega, spec.Delta)
            times = np.linspace(0, 4 * np.pi / rabi, 400)
            closed = two_level_atom_complexity(spec, times)
            for label in ("g", "e"):
                numeric = krylov_complexity(h, seeds[label], times).complexity
                np.testing.assert_allclose(numeric, closed, atol=1e-8)

    def test_seed_complement_symmetry(self, rng):
        """Test g and e swap roles: K(e) = {e, g} and identical traces."""
        for _ in range(10):
            spec = TwoLevelAtomSpec(rng.uniform(0.1, 3.0), rng.uniform(-3.0, 3.0))
            h, seeds = build_two_level_atom(spec)
            basis_g = lanczos(h, seeds["g"])
            basis_e = lanczos(h, seeds["e"])
            assert abs(np.vdot(basis_g.vectors[1].amplitudes, seeds["e"].amplitudes)) == pytest.approx(1.0)
            assert abs(np.vdot(basis_e.vectors[1].amplitudes, seeds["g"].amplitudes)) == pytest.approx(1.0)
            np.testing.assert_allclose(basis_e.a, basis_g.a[::-1], atol=1e-12)

            times = np.linspace(0, 10, 300)
            np.testing.assert_allclose(
                krylov_complexity(h, seeds["e"], times).complexity,
                krylov_complexity(h, seeds["g"], times).complexity,
                atol=1e-10,
            )

    def test_negative_rabi_frequency(self):
        """Test Omega must be nonnegative."""
        with pytest.raises(InvalidSpecError):
            TwoLevelAtomSpec(-1.0)


class TestNonInteractingPair:
    """Tests for two free qubits."""

    def test_closed_form_matches_pipeline(self, rng):
        """Test C1 + C2 + F against numeric Lanczos of the product seed."""
        for _ in range(20):
            spec = PairSpec(
                omega1=rng.uniform(0.2, 3.0),
                omega2=rng.uniform(0.2, 3.0),
                theta1=rng.uniform(0.05, np.pi - 0.05),
                theta2=rng.uniform(0.05, np.pi - 0.05),
                phi1=rng.uniform(0, 2 * np.pi),
                phi2=rng.uniform(0, 2 * np.pi),
            )
            h, seed = build_pair(spec)
            times = np.linspace(0, 4 * np.pi / min(spec.omega1, spec.omega2), 400)
            result = noninteracting_pair_complexity(spec, times)
            numeric = krylov_complexity(h, seed, times).complexity
            np.testing.assert_allclose(numeric, result.total, atol=1e-8)
            assert np.all(result.f >= -1e-12)
            assert np.all(result.total >= result.c1 + result.c2 - 1e-12)

    def test_cross_term_equal_gaps(self):
        """Test F = sin^4(t/2)/2 for theta = (pi/4, 3pi/4) and equal gaps."""
        spec = PairSpec(1.0, 1.0, np.pi / 4, 3 * np.pi / 4)
        times = np.linspace(0, 4 * np.pi, 401)
        result = noninteracting_pair_complexity(spec, times)
        np.testing.assert_allclose(result.f, 0.5 * np.sin(times / 2) ** 4, atol=1e-12)
        assert np.max(result.f) == pytest.approx(0.5, abs=1e-6)

    def test_seed_complement_symmetry(self, rng):
        """Test complementing both factors reflects the chain (a -> -a, b fixed) and keeps C_K."""
        for _ in range(10):
            spec = PairSpec(
                omega1=rng.uniform(0.2, 1.5),
                omega2=rng.uniform(1.6, 3.0),
                theta1=rng.uniform(0.2, np.pi - 0.2),
                theta2=rng.uniform(0.2, np.pi - 0.2),
                phi1=rng.uniform(0, np.pi),
                phi2=rng.uniform(0, np.pi),
            )
            complement = PairSpec(
                spec.omega1,
                spec.omega2,
                np.pi - spec.theta1,
                np.pi - spec.theta2,
                spec.phi1 + np.pi,
                spec.phi2 + np.pi,
            )
            h, seed = build_pair(spec)
            _, seed_perp = build_pair(complement)

            basis = lanczos(h, seed)
            basis_perp = lanczos(h, seed_perp)
            assert basis_perp.dim == basis.dim
            np.testing.assert_allclose(basis_perp.a, -basis.a, atol=1e-10)
            np.testing.assert_allclose(basis_perp.b, basis.b, atol=1e-10)

            times = np.linspace(0, 4 * np.pi / spec.omega1, 300)
            np.testing.assert_allclose(
                krylov_complexity(h, seed_perp, times).complexity,
                krylov_complexity(h, seed, times).complexity,
                atol=1e-10,
            )
            np.testing.assert_allclose(
                noninteracting_pair_complexity(complement, times).total,
                noninteracting_pair_complexity(spec, times).total,
                atol=1e-12,
            )

    def test_degenerate_seed(self):
        """Test both factors stationary gives zero complexity."""
        result = noninteracting_pair_complexity(PairSpec(1.0, 2.0, 0.0, 0.0), np.linspace(0, 1, 5))
        assert result.degenerate
        np.testing.assert_array_equal(result.total, 0.0)

    def test_angle_ranges(self):
        """Test theta and phi range checks."""
        with pytest.raises(InvalidSpecError):
            PairSpec(1.0, 1.0, 4.0, 0.0)
        with pytest.raises(InvalidSpecError):
            PairSpec(1.0, 1.0, 0.0, 0.0, phi1=7.0)


class TestRydbergPair:
    """Tests for the interacting atom pair."""

    def test_global_drive_closed_forms(self, rng):
        """Test the non-interacting global-drive formulas for every seed."""
        for _ in range(20):
            omega, delta = rng.uniform(0.2, 3.0), rng.uniform(-3.0, 3.0)
            h = build_rydberg_pair(RydbergPairSpec.global_drive(omega, delta))
            times = np.linspace(0, 4 * np.pi / np.hypot(omega, delta), 400)
            for label in ("gg", "ge", "eg", "ee", "plus"):
                numeric = krylov_complexity(h, pair_state(label), times).complexity
                closed = global_drive_pair_complexity_closed(omega, delta, label, times)
                np.testing.assert_allclose(numeric, closed, atol=1e-8, err_msg=label)

    def test_unknown_seed_label(self):
        """Test unsupported labels raise."""
        with pytest.raises(UnknownSeedLabelError):
            pair_state("xx")
        with pytest.raises(UnknownSeedLabelError):
            global_drive_pair_complexity_closed(1.0, 0.0, "minus", 1.0)

    @pytest.mark.parametrize("label", ["gg", "plus", "ge"])
    def test_blockade_reference_lanczos(self, label):
        """Test analytic blockade coefficients and vectors against numeric Lanczos."""
        omega, v0 = 1.0, 100.0
        reference = blockade_reference_lanczos(label, omega, v0)
        basis = lanczos(build_rydberg_pair(RydbergPairSpec.global_drive(omega, V0=v0)), pair_state(label))

        assert basis.dim == len(reference.a)
        np.testing.assert_allclose(basis.a, reference.a, atol=1e-8 * v0)
        np.testing.assert_allclose(basis.b, reference.b, atol=1e-8 * v0)
        for numeric, expected in zip(basis.vectors, reference.vectors):
            assert abs(np.vdot(expected, numeric.amplitudes)) == pytest.approx(1.0, abs=1e-8)

    def test_blockade_ge_a2(self):
        """Test a2 = V0^3 / (2 Omega_V^2) for seed ge."""
        reference = blockade_reference_lanczos("ge", 1.0, 100.0)
        assert reference.a[2] == pytest.approx(100.0**3 / (2 * (2 + 100.0**2)))

    @pytest.mark.parametrize("label", ["gg", "ge"])
    @pytest.mark.parametrize("omega1, omega2, v0", [(0.1, 1.0, 100.0), (0.7, 1.9, 4.0), (1.5, 0.4, 6.0)])
    def test_biased_freezing_reference(self, label, omega1, omega2, v0):
        """Test unequal-drive coefficients against numeric Lanczos."""
        reference = biased_freezing_reference(label, omega1, omega2, v0)
        spec = RydbergPairSpec(omega1, omega2, V0=v0)
        basis = lanczos(build_rydberg_pair(spec), pair_state(label))

        assert basis.dim == len(reference.a)
        np.testing.assert_allclose(basis.a, reference.a, atol=1e-8 * v0)
        np.testing.assert_allclose(basis.b, reference.b, atol=1e-8 * v0)
        for numeric, expected in zip(basis.vectors, reference.vectors):
            assert abs(np.vdot(expected, numeric.amplitudes)) == pytest.approx(1.0, abs=1e-8)

    def test_biased_freezing_reduces_to_blockade(self):
        """Test equal drives reproduce the blockade b3 of seed ge."""
        omega, v0 = 1.0, 100.0
        biased = biased_freezing_reference("ge", omega, omega, v0)
        blockade = blockade_reference_lanczos("ge", omega, v0)
        np.testing.assert_allclose(biased.b, blockade.b, atol=1e-12)

    @pytest.mark.parametrize("label", ["gg", "ge"])
    def test_biased_freezing_regime(self, label):
        """Test atom 1 freezes at V0 = 100 Omega1, Omega2 = 25 Omega1: unit amplitude at Omega2."""
        omega1, omega2, v0 = 1.0, 25.0, 100.0
        reference = biased_freezing_reference(label, omega1, omega2, v0)
        assert reference.in_regime
        assert reference.b[1] == pytest.approx(np.hypot(omega1, omega2) / 2)

        times = np.linspace(0, 2.0, 2001)
        spec = RydbergPairSpec(omega1, omega2, V0=v0)
        numeric = krylov_complexity(build_rydberg_pair(spec), pair_state(label), times).complexity
        assert np.max(numeric) == pytest.approx(1.0, abs=0.05)
        assert oscillation_frequency(times, numeric) == pytest.approx(omega2, rel=0.02)
        assert np.max(np.abs(numeric - reference.approx_complexity(times))) < 0.05

    def test_biased_freezing_regime_flag(self):
        """Test comparable drives fall outside the frozen-atom regime."""
        assert not biased_freezing_reference("gg", 0.7, 1.9, 4.0).in_regime

    def test_blockade_gg_closed_form(self):
        """Test gg tracks sin^2(Omega t / sqrt 2) in the blockade."""
        times = np.linspace(0, 20, 2001)
        h = build_rydberg_pair(RydbergPairSpec.global_drive(1.0, V0=100.0))
        numeric = krylov_complexity(h, pair_state("gg"), times).complexity
        assert np.max(np.abs(numeric - blockade_gg_complexity_closed(1.0, times))) < 0.02

    def test_effective_ge_spread(self):
        """Test ge in the effective Krylov basis: amplitude 2 and closed form."""
        times = np.linspace(0, 20, 2001)
        h = build_rydberg_pair(RydbergPairSpec.global_drive(1.0, V0=100.0))
        k_a = lanczos(effective_blockade_hamiltonian(1.0), pair_state("ge"))
        assert k_a.dim == 3
        states = evolve_many(h, pair_state("ge"), times)
        trace = spread_complexity(
            states, k_a.to_ordered_basis(), times, LeakPolicy.WARN, support_tolerance=np.inf
        )
        assert trace.amplitude == pytest.approx(2.0, abs=0.05)
        assert np.max(np.abs(trace.complexity - effective_ge_complexity_closed(1.0, times))) < 2e-2

    def test_blockade_partition(self):
        """Test A = (gg, ge, eg) and B = (ee) with H_A equal to the blockade effective H."""
        spec = RydbergPairSpec.global_drive(1.0, V0=100.0)
        partition = blockade_partition(spec)
        assert partition.full_labels == PAIR_LABELS
        np.testing.assert_allclose(
            partition.effective_hamiltonian().matrix,
            effective_blockade_hamiltonian(1.0).matrix,
            atol=1e-15,
        )
        np.testing.assert_allclose(partition.assemble().matrix, build_rydberg_pair(spec).matrix)


class TestBuildModel:
    """Tests for scenario-level model construction."""

    def test_single_qubit(self):
        """Test seeds and oracles of the single-qubit model."""
        instance = build_model("single_qubit", {"omega": 1.0, "theta": np.pi / 3})
        assert set(instance.seeds) == {"psi0", "+", "-"}
        assert instance.hamiltonian.dim == 2
        assert "psi0" in instance.closed_forms

    def test_rydberg_blockade_oracles(self):
        """Test resonant interacting pairs expose blockade oracles."""
        instance = build_model("rydberg_pair", {"Omega": 1.0, "V0": 100.0})
        assert set(instance.closed_forms) == {"gg"}
        assert set(instance.effective_closed_forms) == {"ge", "eg"}
        assert instance.partition is not None

    def test_rydberg_free_oracles(self):
        """Test non-interacting global drive exposes all pair oracles."""
        instance = build_model("rydberg_pair", {"Omega": 1.0, "Delta": 0.4})
        assert set(instance.closed_forms) == {"gg", "ge", "eg", "ee", "plus"}

    def test_partitioned_random(self, rng):
        """Test random partitions expose the uniform A seed."""
        instance = build_model(
            "partitioned_custom", {"n_A": 3.0, "n_B": 2.0, "gap": 10.0, "ratio": 0.01}, rng
        )
        assert instance.hamiltonian.dim == 5
        assert instance.partition.b_weight(instance.seed("uniform_A").amplitudes) == 0.0

    def test_unknown_model(self):
        """Test unknown model names raise."""
        with pytest.raises(InvalidSpecError) as excinfo:
            build_model("three_qubits", {})
        assert excinfo.value.field == "model"

    def test_unknown_parameter(self):
        """Test foreign parameters raise with their name."""
        with pytest.raises(InvalidSpecError) as excinfo:
            build_model("two_level_atom", {"Omega": 1.0, "V0": 3.0})
        assert excinfo.value.field == "V0"

    def test_missing_parameter(self):
        """Test required parameters are enforced."""
        with pytest.raises(InvalidSpecError):
            build_model("pair_noninteracting", {"omega1": 1.0})

    def test_unknown_seed(self):
        """Test ModelInstance.seed lists known labels."""
        instance = build_model("two_level_atom", {"Omega": 1.0})
        with pytest.raises(UnknownSeedLabelError, match="known"):
            instance.seed("x")
