"""Exception types shared across the package.

Everything user-input related derives from ``ValidationError`` so the CLI can
map it to exit code 2; anything else escaping is an internal error (exit 1).
"""


class ValidationError(ValueError):
    """Invalid user input or violated precondition."""


class DimensionTooSmallError(ValidationError):
    """Lattice axis shorter than the boundary condition allows."""


class UnsupportedKindError(ValidationError):
    """Unknown lattice kind."""


class UnsupportedModelError(ValidationError):
    """Unknown or out-of-scope Hamiltonian model."""


class StateOutsideSectorError(ValidationError):
    """Basis state does not belong to the requested Hilbert sector."""


class SectorMismatchError(ValidationError):
    """State vector and Hamiltonian live in different sectors."""


class DimensionOverflowError(ValidationError):
    """Sector dimension exceeds what the requested operation supports."""


class ZeroVectorError(ValidationError):
    """Operation requires a vector with nonzero norm."""


class DegenerateZeroPointError(ValidationError):
    """Energy coincides with the zero-point energy; score undefined."""


class DegenerateDenominatorError(ValidationError):
    """A ratio denominator vanished (e.g. zero-point equals ground energy)."""


class InsufficientPointsError(ValidationError):
    """Too few data points for a fit."""


class NonPositivePointError(ValidationError):
    """Log-log fit requires strictly positive coordinates."""


class IncompatibleMoveError(ValidationError):
    """Sampler move kind incompatible with the model's conserved quantities."""


class NodeEvaluationError(ValidationError):
    """Wave-function amplitude underflowed at the requested configuration."""


class ParameterLengthMismatchError(ValidationError):
    """Circuit parameter vector has the wrong length."""


class SchemaViolationError(ValidationError):
    """A record file line violates the record schema."""

    def __init__(self, message: str, line_number: int | None = None):
        if line_number is not None:
            message = f"line {line_number}: {message}"
        super().__init__(message)
        self.line_number = line_number


class EmptyInputError(ValidationError):
    """Operation requires at least one input record."""
