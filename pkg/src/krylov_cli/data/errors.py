"""Exceptions raised by the Krylov computation layer."""


class KrylovError(Exception):
    """Base class for all errors raised by krylov_cli."""


class NonHermitianError(KrylovError):
    """Operator is not Hermitian within tolerance."""

    def __init__(self, residual: float, tolerance: float):
        self.residual = residual
        self.tolerance = tolerance
        super().__init__(
            f"Operator is not Hermitian: residual {residual:.3e} exceeds {tolerance:.3e}"
        )


class DimensionMismatchError(KrylovError):
    """Operands have incompatible dimensions."""

    def __init__(self, expected: int, actual: int, what: str = "dimension"):
        self.expected = expected
        self.actual = actual
        super().__init__(f"{what} mismatch: expected {expected}, got {actual}")


class UnnormalizedSeedError(KrylovError):
    """Seed state handed to the Lanczos recursion is not normalized."""

    def __init__(self, norm: float):
        self.norm = norm
        super().__init__(f"Seed state is not normalized (norm = {norm:.15g})")


class SupportLeakError(KrylovError):
    """Evolving state has weight outside the span of the ordered basis."""

    def __init__(self, amount: float, time: float | None = None):
        self.amount = amount
        self.time = time
        where = f" at t = {time:.6g}" if time is not None else ""
        super().__init__(
            f"Basis does not span the dynamics: leaked probability {amount:.3e}{where}"
        )


class InvalidDistributionError(KrylovError):
    """Population vector is not a probability distribution."""


class UnknownSeedLabelError(KrylovError):
    """Seed label is not defined for the model."""

    def __init__(self, label: str, known: list[str] | tuple[str, ...] = ()):
        self.label = label
        self.known = tuple(known)
        hint = f" (known: {', '.join(self.known)})" if self.known else ""
        super().__init__(f"Unknown seed label '{label}'{hint}")


class InvalidSpecError(KrylovError):
    """Model parameters are out of range or inconsistent."""

    def __init__(self, field: str, message: str):
        self.field = field
        self.message = message
        super().__init__(f"{field}: {message}")


class BlockShapeMismatchError(KrylovError):
    """Blocks of a partitioned Hamiltonian have inconsistent shapes."""


class PrefixMismatchError(KrylovError):
    """Fewer leading Krylov vectors are shared than requested."""

    def __init__(self, m_actual: int, m_requested: int):
        self.m_actual = m_actual
        self.m_requested = m_requested
        super().__init__(
            f"Only {m_actual} leading Krylov vectors are shared, {m_requested} requested"
        )


class SeedNotInSubspaceError(KrylovError):
    """Seed state has weight outside the A subspace."""

    def __init__(self, weight: float):
        self.weight = weight
        super().__init__(f"Seed has weight {weight:.3e} outside subspace A")


class ScenarioError(KrylovError):
    """Scenario file cannot be read or parsed."""


class ScenarioValidationError(ScenarioError):
    """Scenario file parsed but a field is invalid."""

    def __init__(self, field: str, message: str):
        self.field = field
        self.message = message
        super().__init__(f"{field}: {message}")
