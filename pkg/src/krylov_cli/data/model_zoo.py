"""Model Hamiltonians, seed states and closed-form complexity oracles.

Conventions:
    - Single qubit in its energy basis (+, -), H = (omega/2) sigma_z.
    - Single atom in the bare basis (g, e), H = -Delta sigma_ee + (Omega/2) sigma_x.
    - Pairs use the tensor order (gg, ge, eg, ee); atom 1 is the first letter.
    - Non-interacting qubit pairs use the energy basis (++, +-, -+, --).
    - plus/minus are the pair states (|ge> +/- |eg>)/sqrt(2).
"""

import logging
from dataclasses import dataclass, field
from functools import partial
from typing import Any, Callable, Mapping

import numpy as np

from .errors import InvalidSpecError, UnknownSeedLabelError
from .models import NORM_TOLERANCE, HermitianOperator, StateVector
from .subspace_analysis import PartitionedHamiltonian, random_partition

logger = logging.getLogger(__name__)

QUBIT_LABELS = ("+", "-")
ATOM_LABELS = ("g", "e")
PAIR_LABELS = ("gg", "ge", "eg", "ee")
QUBIT_PAIR_LABELS = ("++", "+-", "-+", "--")

# Regime flags for the biased-freezing reference
STRONG_RATIO = 4.0

SIGMA_X = np.array([[0, 1], [1, 0]], dtype=np.complex128)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=np.complex128)
SIGMA_GG = np.diag([1.0, 0.0]).astype(np.complex128)
SIGMA_EE = np.diag([0.0, 1.0]).astype(np.complex128)
IDENTITY = np.eye(2, dtype=np.complex128)

ClosedForm = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True)
class SingleQubitSpec:
    """Gap omega and seed amplitudes alpha|+> + beta|->."""

    omega: float
    alpha: complex
    beta: complex

    def __post_init__(self) -> None:
        norm = abs(self.alpha) ** 2 + abs(self.beta) ** 2
        if abs(norm - 1.0) > NORM_TOLERANCE:
            raise InvalidSpecError("alpha", f"|alpha|^2 + |beta|^2 = {norm:.15g}, expected 1")

    @classmethod
    def from_angles(cls, omega: float, theta: float, phi: float = 0.0) -> "SingleQubitSpec":
        """Seed cos(theta/2)|+> + sin(theta/2) e^{i phi}|->."""
        return cls(omega, complex(np.cos(theta / 2)), complex(np.sin(theta / 2) * np.exp(1j * phi)))

    @property
    def amplitude(self) -> float:
        return 4 * abs(self.alpha) ** 2 * abs(self.beta) ** 2


@dataclass(frozen=True)
class TwoLevelAtomSpec:
    Omega: float
    Delta: float = 0.0

    def __post_init__(self) -> None:
        if self.Omega < 0:
            raise InvalidSpecError("Omega", "Rabi frequency must be nonnegative")


@dataclass(frozen=True)
class PairSpec:
    """Two non-interacting qubits with product seed given by Bloch angles."""

    omega1: float
    omega2: float
    theta1: float
    theta2: float
    phi1: float = 0.0
    phi2: float = 0.0

    def __post_init__(self) -> None:
        for name in ("theta1", "theta2"):
            value = getattr(self, name)
            if not 0.0 <= value <= np.pi + 1e-12:
                raise InvalidSpecError(name, f"{value} outside [0, pi]")
        for name in ("phi1", "phi2"):
            value = getattr(self, name)
            if not 0.0 <= value < 2 * np.pi:
                raise InvalidSpecError(name, f"{value} outside [0, 2pi)")


@dataclass(frozen=True)
class RydbergPairSpec:
    """Two driven atoms with van der Waals interaction V0 on |ee>."""

    Omega1: float
    Omega2: float
    Delta1: float = 0.0
    Delta2: float = 0.0
    V0: float = 0.0

    def __post_init__(self) -> None:
        if self.V0 < 0:
            raise InvalidSpecError("V0", "interaction strength must be nonnegative")

    @classmethod
    def global_drive(cls, Omega: float, Delta: float = 0.0, V0: float = 0.0) -> "RydbergPairSpec":
        return cls(Omega, Omega, Delta, Delta, V0)

    @property
    def is_global(self) -> bool:
        return self.Omega1 == self.Omega2 and self.Delta1 == self.Delta2


def _qubit_factor(theta: float, phi: float) -> np.ndarray:
    return np.array([np.cos(theta / 2), np.sin(theta / 2) * np.exp(1j * phi)])


# Single qubit


def build_single_qubit(spec: SingleQubitSpec) -> tuple[HermitianOperator, StateVector]:
    h = HermitianOperator(spec.omega / 2 * SIGMA_Z, QUBIT_LABELS)
    seed = StateVector([spec.alpha, spec.beta], QUBIT_LABELS)
    return h, seed


def single_qubit_complexity_closed(spec: SingleQubitSpec, t: float | np.ndarray) -> np.ndarray:
    """4|alpha|^2|beta|^2 sin^2(omega t / 2)."""
    return spec.amplitude * np.sin(spec.omega * np.asarray(t) / 2) ** 2


def single_qubit_complexity_lanczos_form(
    a0: float, a1: float, b1: float, t: float | np.ndarray
) -> np.ndarray:
    """Two-vector Krylov chain complexity in terms of (a0, a1, b1)."""
    t = np.asarray(t, dtype=np.float64)
    rate_sq = 4 * b1**2 + (a0 - a1) ** 2
    if rate_sq == 0:
        return np.zeros_like(t)
    return 4 * b1**2 / rate_sq * np.sin(t * np.sqrt(rate_sq) / 2) ** 2


# Two-level atom


def build_two_level_atom(spec: TwoLevelAtomSpec) -> tuple[HermitianOperator, dict[str, StateVector]]:
    h = HermitianOperator(-spec.Delta * SIGMA_EE + spec.Omega / 2 * SIGMA_X, ATOM_LABELS)
    seeds = {label: StateVector.basis_state(label, ATOM_LABELS) for label in ATOM_LABELS}
    return h, seeds


def two_level_atom_complexity(spec: TwoLevelAtomSpec, t: float | np.ndarray) -> np.ndarray:
    """Omega^2/(Delta^2+Omega^2) sin^2(sqrt(Delta^2+Omega^2) t / 2), for seed g or e."""
    t = np.asarray(t, dtype=np.float64)
    rabi_sq = spec.Delta**2 + spec.Omega**2
    if rabi_sq == 0:
        return np.zeros_like(t)
    return spec.Omega**2 / rabi_sq * np.sin(np.sqrt(rabi_sq) * t / 2) ** 2


# Non-interacting qubit pair


def build_pair(spec: PairSpec) -> tuple[HermitianOperator, StateVector]:
    """H_1 + H_2 in the energy basis and the product seed."""
    h1 = spec.omega1 / 2 * SIGMA_Z
    h2 = spec.omega2 / 2 * SIGMA_Z
    h = np.kron(h1, IDENTITY) + np.kron(IDENTITY, h2)
    seed = np.kron(_qubit_factor(spec.theta1, spec.phi1), _qubit_factor(spec.theta2, spec.phi2))
    return HermitianOperator(h, QUBIT_PAIR_LABELS), StateVector.normalized(seed, QUBIT_PAIR_LABELS)


@dataclass
class PairComplexity:
    """C_K = C1 + C2 + F for a product seed of two independent qubits."""

    c1: np.ndarray
    c2: np.ndarray
    f: np.ndarray
    total: np.ndarray
    degenerate: bool = False

    def to_dict(self) -> dict:
        """Convert to dictionary for JSON output."""
        return {
            "max_C1": float(np.max(self.c1)),
            "max_C2": float(np.max(self.c2)),
            "max_F": float(np.max(self.f)),
            "max_total": float(np.max(self.total)),
            "degenerate": self.degenerate,
        }


def noninteracting_pair_complexity(spec: PairSpec, t: float | np.ndarray) -> PairComplexity:
    """Closed-form pair complexity with the cross term F(t) >= 0."""
    t = np.asarray(t, dtype=np.float64)
    w1, w2 = spec.omega1, spec.omega2
    s1, s2 = np.sin(spec.theta1), np.sin(spec.theta2)
    k1, k2 = np.cos(spec.theta1), np.cos(spec.theta2)

    if abs(s1) < 1e-15 and abs(s2) < 1e-15:
        logger.warning("Both pair factors are stationary; complexity vanishes")
        zeros = np.zeros_like(t)
        return PairComplexity(zeros, zeros, zeros, zeros, degenerate=True)

    c1 = s1**2 * np.sin(w1 * t / 2) ** 2
    c2 = s2**2 * np.sin(w2 * t / 2) ** 2

    spread = w1**2 * s1**2 + w2**2 * s2**2
    detuning = (w1 * k1 - w2 * k2) ** 2
    if spread == 0:
        # both gaps vanish: H = 0
        zeros = np.zeros_like(t)
        return PairComplexity(c1, c2, zeros, c1 + c2)

    w_plus, w_minus = w1 + w2, w1 - w2
    beat = (w_minus / 2 * np.sin(w_plus * t / 2) - w_plus / 2 * np.sin(w_minus * t / 2)) ** 2
    cross_denominator = (w1**2 + w2**2 - 2 * w1 * w2 * k1 * k2) * spread
    cross = s1**2 * s2**2 * (detuning + 2 * spread) / cross_denominator

    f = detuning / spread * c1 * c2 + cross * beat
    return PairComplexity(c1, c2, f, c1 + c2 + f)


# Interacting Rydberg pair


def pair_state(label: str) -> StateVector:
    """Named pair state: gg, ge, eg, ee, plus or minus."""
    if label in PAIR_LABELS:
        return StateVector.basis_state(label, PAIR_LABELS)
    if label == "plus":
        return StateVector.normalized([0, 1, 1, 0], PAIR_LABELS)
    if label == "minus":
        return StateVector.normalized([0, 1, -1, 0], PAIR_LABELS)
    raise UnknownSeedLabelError(label, PAIR_LABELS + ("plus", "minus"))


def build_rydberg_pair(spec: RydbergPairSpec) -> HermitianOperator:
    """Driven pair with interaction V0 sigma_ee^1 sigma_ee^2 in (gg, ge, eg, ee)."""
    h1 = -spec.Delta1 * SIGMA_EE + spec.Omega1 / 2 * SIGMA_X
    h2 = -spec.Delta2 * SIGMA_EE + spec.Omega2 / 2 * SIGMA_X
    h = np.kron(h1, IDENTITY) + np.kron(IDENTITY, h2) + spec.V0 * np.kron(SIGMA_EE, SIGMA_EE)
    return HermitianOperator(h, PAIR_LABELS)


def global_drive_pair_complexity_closed(
    Omega: float, Delta: float, seed_label: str, t: float | np.ndarray
) -> np.ndarray:
    """Krylov complexity of a non-interacting, globally driven atom pair."""
    t = np.asarray(t, dtype=np.float64)
    rabi_sq = Delta**2 + Omega**2
    if seed_label not in ("gg", "ee", "ge", "eg", "plus"):
        raise UnknownSeedLabelError(seed_label, ("gg", "ge", "eg", "ee", "plus"))
    if rabi_sq == 0:
        return np.zeros_like(t)

    rabi = np.sqrt(rabi_sq)
    half = np.sin(rabi * t / 2) ** 2
    detuned = Delta**2 * Omega**2 / rabi_sq**2
    if seed_label in ("gg", "ee"):
        return 2 * Omega**2 / rabi_sq * half
    if seed_label in ("ge", "eg"):
        return 2 * Omega**2 / rabi_sq * half + 2 * detuned * half**2
    return Omega**2 / rabi_sq * np.sin(rabi * t) ** 2 + 8 * detuned * half**2


def effective_blockade_hamiltonian(Omega: float) -> HermitianOperator:
    """(Omega/2)(sigma_gg^1 sigma_x^2 + sigma_x^1 sigma_gg^2); |ee> decouples."""
    if Omega < 0:
        raise InvalidSpecError("Omega", "Rabi frequency must be nonnegative")
    h = Omega / 2 * (np.kron(SIGMA_GG, SIGMA_X) + np.kron(SIGMA_X, SIGMA_GG))
    return HermitianOperator(h, PAIR_LABELS)


def blockade_partition(spec: RydbergPairSpec) -> PartitionedHamiltonian:
    """A = {gg, ge, eg}, B = {ee}; H_A reduces to the blockade effective H under global drive."""
    h = build_rydberg_pair(spec).matrix
    return PartitionedHamiltonian(
        labels_A=PAIR_LABELS[:3],
        labels_B=PAIR_LABELS[3:],
        c_A=h[:3, :3],
        c_B=h[3:, 3:],
        d=h[:3, 3:],
    )


def blockade_gg_complexity_closed(Omega: float, t: float | np.ndarray) -> np.ndarray:
    """Blockaded gg <-> plus oscillation at the enhanced Rabi frequency sqrt(2) Omega."""
    return np.sin(Omega * np.asarray(t) / np.sqrt(2)) ** 2


def effective_ge_complexity_closed(Omega: float, t: float | np.ndarray) -> np.ndarray:
    """ge seed in the effective-Hamiltonian Krylov basis {ge, gg, eg}."""
    return 2 * np.sin(Omega * np.asarray(t) / (2 * np.sqrt(2))) ** 2


@dataclass
class LanczosReference:
    """Analytic Lanczos coefficients and Krylov vectors for a seed.

    ``b`` follows KrylovBasis: ``b[0] = 0``.
    """

    seed_label: str
    a: list[float]
    b: list[float]
    vectors: list[np.ndarray]
    derived_vectors: dict[str, np.ndarray] = field(default_factory=dict)

    def to_dict(self) -> dict:
        """Convert to dictionary for JSON output."""
        return {"seed": self.seed_label, "a": self.a, "b": self.b}


def _vec(**amps: float) -> np.ndarray:
    out = np.zeros(4, dtype=np.complex128)
    for label, value in amps.items():
        out[PAIR_LABELS.index(label)] = value
    return out


def blockade_reference_lanczos(seed_label: str, Omega: float, V0: float) -> LanczosReference:
    """Lanczos data of the globally driven, resonant interacting pair."""
    if Omega <= 0 or V0 <= 0:
        raise InvalidSpecError("Omega" if Omega <= 0 else "V0", "must be positive")
    r2 = np.sqrt(2)

    if seed_label == "gg":
        return LanczosReference(
            seed_label,
            a=[0.0, 0.0, V0],
            b=[0.0, Omega / r2, Omega / r2],
            vectors=[_vec(gg=1), _vec(ge=1 / r2, eg=1 / r2), _vec(ee=1)],
        )
    if seed_label == "plus":
        return LanczosReference(
            seed_label,
            a=[0.0, V0 / 2, V0 / 2],
            b=[0.0, Omega, V0 / 2],
            vectors=[
                _vec(ge=1 / r2, eg=1 / r2),
                _vec(gg=1 / r2, ee=1 / r2),
                _vec(gg=-1 / r2, ee=1 / r2),
            ],
        )
    if seed_label == "ge":
        omega_v = np.sqrt(2 * Omega**2 + V0**2)
        return LanczosReference(
            seed_label,
            a=[0.0, V0 / 2, V0**3 / (2 * omega_v**2), V0 * Omega**2 / omega_v**2],
            b=[0.0, Omega / r2, omega_v / 2, V0**2 * Omega / (r2 * omega_v**2)],
            vectors=[
                _vec(ge=1),
                _vec(gg=1 / r2, ee=1 / r2),
                _vec(gg=-V0, eg=2 * Omega, ee=V0) / (r2 * omega_v),
                _vec(gg=-Omega, eg=-V0, ee=Omega) / omega_v,
            ],
        )
    raise UnknownSeedLabelError(seed_label, ("gg", "plus", "ge"))


@dataclass
class BiasedFreezingReference(LanczosReference):
    """Lanczos data for V0 >> Omega2 >> Omega1, plus the frozen-atom approximation."""

    omega2: float = 0.0
    in_regime: bool = False
    limit_labels: tuple[str, ...] = ()

    def approx_complexity(self, t: float | np.ndarray) -> np.ndarray:
        """sin^2(Omega2 t / 2): atom 1 frozen, atom 2 Rabi-oscillating."""
        return np.sin(self.omega2 * np.asarray(t) / 2) ** 2

    def to_dict(self) -> dict:
        """Convert to dictionary for JSON output."""
        data = super().to_dict()
        data["in_regime"] = self.in_regime
        data["limit_labels"] = list(self.limit_labels)
        return data


def biased_freezing_reference(
    seed_label: str, Omega1: float, Omega2: float, V0: float
) -> BiasedFreezingReference:
    """Resonant pair with unequal drives; b's past the last nonzero one are dropped."""
    bar = np.sqrt(Omega1**2 + Omega2**2)
    in_regime = V0 >= STRONG_RATIO * Omega2 and Omega2 >= STRONG_RATIO * Omega1
    if bar == 0:
        raise InvalidSpecError("Omega2", "at least one drive must be nonzero")

    if seed_label == "gg":
        a = [0.0, 0.0, V0, 0.0]
        b = [0.0, bar / 2, Omega1 * Omega2 / bar, abs(Omega2**2 - Omega1**2) / (2 * bar)]
        sign = 1.0 if Omega2 >= Omega1 else -1.0
        vectors = [
            _vec(gg=1),
            _vec(ge=Omega2, eg=Omega1) / bar,
            _vec(ee=1),
            sign * _vec(ge=-Omega1, eg=Omega2) / bar,
        ]
        limit_labels = ("gg", "ge", "ee", "eg")
        derived: dict[str, np.ndarray] = {}
    elif seed_label == "ge":
        omega_v = np.sqrt(Omega1**2 + Omega2**2 + V0**2)
        a = [
            0.0,
            V0 * Omega1**2 / bar**2,
            V0 * (Omega2**2 * omega_v**2 - Omega1**2 * bar**2) / (omega_v**2 * bar**2),
            V0 * Omega1**2 / omega_v**2,
        ]
        b3 = bar * (V0**2 + Omega2**2 - Omega1**2) / (2 * omega_v**2)
        b = [0.0, bar / 2, Omega1 * Omega2 * omega_v / bar**2, abs(b3)]
        k2 = _vec(gg=-V0 * Omega1, eg=bar**2, ee=V0 * Omega2) / (bar * omega_v)
        vectors = [
            _vec(ge=1),
            _vec(gg=Omega2, ee=Omega1) / bar,
            k2,
            np.sign(b3 or 1.0) * _vec(gg=-Omega1, eg=-V0, ee=Omega2) / omega_v,
        ]
        limit_labels = ("ge", "gg", "ee", "eg")
        derived = {"K2_printed": k2}
    else:
        raise UnknownSeedLabelError(seed_label, ("gg", "ge"))

    # truncate where the chain terminates
    n = len(b)
    for i in range(1, len(b)):
        if b[i] == 0:
            n = i
            break

    return BiasedFreezingReference(
        seed_label,
        a=a[:n],
        b=b[:n],
        vectors=vectors[:n],
        derived_vectors=derived,
        omega2=Omega2,
        in_regime=in_regime,
        limit_labels=limit_labels,
    )


# Scenario-level model construction


@dataclass
class ModelInstance:
    """A built model: Hamiltonian, named seeds and optional analytic oracles."""

    name: str
    hamiltonian: HermitianOperator
    seeds: dict[str, StateVector]
    partition: PartitionedHamiltonian | None = None
    closed_forms: dict[str, ClosedForm] = field(default_factory=dict)
    effective_closed_forms: dict[str, ClosedForm] = field(default_factory=dict)
    pair_spec: PairSpec | None = None
    qubit_spec: SingleQubitSpec | None = None

    @property
    def basis_labels(self) -> tuple[str, ...]:
        return self.hamiltonian.basis_labels

    def seed(self, label: str) -> StateVector:
        if label in self.seeds:
            return self.seeds[label]
        raise UnknownSeedLabelError(label, tuple(self.seeds))


def _stationary(t: np.ndarray) -> np.ndarray:
    return np.zeros_like(np.asarray(t, dtype=np.float64))


def _number(params: Mapping[str, Any], name: str, default: float | None = None) -> float:
    if name not in params:
        if default is None:
            raise InvalidSpecError(name, "missing required parameter")
        return default
    value = params[name]
    if isinstance(value, complex):
        raise InvalidSpecError(name, "expected a real number")
    try:
        return float(value)
    except (TypeError, ValueError):
        raise InvalidSpecError(name, f"expected a number, got {value!r}") from None


def _complex_number(params: Mapping[str, Any], name: str) -> complex:
    value = params[name]
    try:
        return complex(value)
    except (TypeError, ValueError):
        raise InvalidSpecError(name, f"expected a complex number, got {value!r}") from None


def _matrix(params: Mapping[str, Any], name: str) -> np.ndarray:
    try:
        return np.array(params[name], dtype=np.complex128)
    except (TypeError, ValueError):
        raise InvalidSpecError(name, "expected a matrix of numbers") from None


def _build_single_qubit_model(params: Mapping[str, Any], rng: np.random.Generator) -> ModelInstance:
    omega = _number(params, "omega")
    if "alpha" in params or "beta" in params:
        spec = SingleQubitSpec(omega, _complex_number(params, "alpha"), _complex_number(params, "beta"))
    else:
        spec = SingleQubitSpec.from_angles(omega, _number(params, "theta"), _number(params, "phi", 0.0))
    h, seed = build_single_qubit(spec)
    seeds = {"psi0": seed}
    seeds.update({label: StateVector.basis_state(label, QUBIT_LABELS) for label in QUBIT_LABELS})
    return ModelInstance(
        name="single_qubit",
        hamiltonian=h,
        seeds=seeds,
        closed_forms={
            "psi0": partial(single_qubit_complexity_closed, spec),
            "+": _stationary,
            "-": _stationary,
        },
        qubit_spec=spec,
    )


def _build_two_level_atom_model(params: Mapping[str, Any], rng: np.random.Generator) -> ModelInstance:
    spec = TwoLevelAtomSpec(_number(params, "Omega"), _number(params, "Delta", 0.0))
    h, seeds = build_two_level_atom(spec)
    oracle = partial(two_level_atom_complexity, spec)
    return ModelInstance(
        name="two_level_atom",
        hamiltonian=h,
        seeds=seeds,
        closed_forms={"g": oracle, "e": oracle},
    )


def _pair_total(spec: PairSpec, t: np.ndarray) -> np.ndarray:
    return noninteracting_pair_complexity(spec, t).total


def _build_pair_model(params: Mapping[str, Any], rng: np.random.Generator) -> ModelInstance:
    spec = PairSpec(
        omega1=_number(params, "omega1"),
        omega2=_number(params, "omega2"),
        theta1=_number(params, "theta1"),
        theta2=_number(params, "theta2"),
        phi1=_number(params, "phi1", 0.0),
        phi2=_number(params, "phi2", 0.0),
    )
    h, seed = build_pair(spec)
    seeds = {"psi0": seed}
    seeds.update({label: StateVector.basis_state(label, QUBIT_PAIR_LABELS) for label in QUBIT_PAIR_LABELS})
    return ModelInstance(
        name="pair_noninteracting",
        hamiltonian=h,
        seeds=seeds,
        closed_forms={"psi0": partial(_pair_total, spec)},
        pair_spec=spec,
    )


def _build_rydberg_model(params: Mapping[str, Any], rng: np.random.Generator) -> ModelInstance:
    omega = _number(params, "Omega", 0.0)
    delta = _number(params, "Delta", 0.0)
    spec = RydbergPairSpec(
        Omega1=_number(params, "Omega1", omega),
        Omega2=_number(params, "Omega2", omega),
        Delta1=_number(params, "Delta1", delta),
        Delta2=_number(params, "Delta2", delta),
        V0=_number(params, "V0", 0.0),
    )
    for name in ("Omega1", "Omega2"):
        if getattr(spec, name) < 0:
            raise InvalidSpecError(name, "Rabi frequency must be nonnegative")

    seeds = {label: pair_state(label) for label in PAIR_LABELS + ("plus", "minus")}
    closed: dict[str, ClosedForm] = {}
    effective: dict[str, ClosedForm] = {}
    if spec.is_global and spec.V0 == 0:
        for label in ("gg", "ge", "eg", "ee", "plus"):
            closed[label] = partial(
                global_drive_pair_complexity_closed, spec.Omega1, spec.Delta1, label
            )
    if spec.is_global and spec.Delta1 == 0 and spec.V0 > 0:
        closed["gg"] = partial(blockade_gg_complexity_closed, spec.Omega1)
        effective["ge"] = partial(effective_ge_complexity_closed, spec.Omega1)
        effective["eg"] = effective["ge"]

    return ModelInstance(
        name="rydberg_pair",
        hamiltonian=build_rydberg_pair(spec),
        seeds=seeds,
        partition=blockade_partition(spec),
        closed_forms=closed,
        effective_closed_forms=effective,
    )


def _build_partitioned_model(params: Mapping[str, Any], rng: np.random.Generator) -> ModelInstance:
    if "c_A" in params:
        for name in ("c_B", "d"):
            if name not in params:
                raise InvalidSpecError(name, "missing required parameter")
        c_a, c_b, d = _matrix(params, "c_A"), _matrix(params, "c_B"), _matrix(params, "d")
        labels_a = params.get("labels_A") or [f"a{i}" for i in range(c_a.shape[0])]
        labels_b = params.get("labels_B") or [f"b{j}" for j in range(c_b.shape[0])]
        partition = PartitionedHamiltonian(tuple(labels_a), tuple(labels_b), c_a, c_b, d)
    else:
        n_a = int(_number(params, "n_A"))
        n_b = int(_number(params, "n_B"))
        partition = random_partition(
            rng, n_a, n_b, _number(params, "gap"), _number(params, "ratio")
        )

    seeds = {label: StateVector.basis_state(label, partition.full_labels) for label in partition.full_labels}
    # uniform superposition over A
    seeds["uniform_A"] = partition.embed(np.ones(partition.n_A))
    return ModelInstance(
        name="partitioned_custom",
        hamiltonian=partition.assemble(),
        seeds=seeds,
        partition=partition,
    )


MODEL_BUILDERS: dict[str, Callable[[Mapping[str, Any], np.random.Generator], ModelInstance]] = {
    "single_qubit": _build_single_qubit_model,
    "two_level_atom": _build_two_level_atom_model,
    "pair_noninteracting": _build_pair_model,
    "rydberg_pair": _build_rydberg_model,
    "partitioned_custom": _build_partitioned_model,
}

# Accepted parameter names per model
MODEL_PARAMETERS: dict[str, frozenset[str]] = {
    "single_qubit": frozenset({"omega", "alpha", "beta", "theta", "phi"}),
    "two_level_atom": frozenset({"Omega", "Delta"}),
    "pair_noninteracting": frozenset({"omega1", "omega2", "theta1", "theta2", "phi1", "phi2"}),
    "rydberg_pair": frozenset({"Omega", "Delta", "Omega1", "Omega2", "Delta1", "Delta2", "V0"}),
    "partitioned_custom": frozenset(
        {"c_A", "c_B", "d", "labels_A", "labels_B", "n_A", "n_B", "gap", "ratio"}
    ),
}


def build_model(
    model: str, params: Mapping[str, Any], rng: np.random.Generator | None = None
) -> ModelInstance:
    """Build a named model from scenario parameters."""
    if model not in MODEL_BUILDERS:
        raise InvalidSpecError("model", f"unknown model '{model}'")
    unknown = set(params) - MODEL_PARAMETERS[model]
    if unknown:
        raise InvalidSpecError(sorted(unknown)[0], f"not a parameter of model '{model}'")
    return MODEL_BUILDERS[model](params, rng if rng is not None else np.random.default_rng())
