from typing import Optional, Sequence


class CartanDressError(Exception):
    """Base exception for the conformal Cartan verification engine."""
    pass


class ScenarioError(CartanDressError):
    """Raised when a scenario file is missing, malformed or holds an invalid expression."""
    pass


class ConfigurationError(CartanDressError):
    """Raised when run configuration is invalid."""
    pass


class DataSourceError(CartanDressError):
    """Raised when reading or writing scenarios/reports fails."""
    pass


class AlgebraError(CartanDressError):
    """Raised when a matrix does not belong to the group or algebra it claims to."""
    pass


class FormError(CartanDressError):
    """Raised on degree overflow or incompatible value shapes of differential forms."""
    pass


class LagrangianError(CartanDressError):
    """Raised when Lagrangian parameters are outside their admissible range."""
    pass


class UnsupportedResidualLawError(CartanDressError):
    """Raised for stage/subgroup pairs without a residual transformation law."""
    pass


class VerificationError(CartanDressError):
    """Raised when a verification suite fails to execute."""
    pass


class DegenerateFieldError(CartanDressError):
    """Raised when a field degenerates at a sample point (singular tetrad, σ = 0, ...)."""

    def __init__(self, message: str, point: Optional[Sequence[float]] = None):
        self.message = message
        self.point = None if point is None else [float(v) for v in point]
        super().__init__(self.__str__())

    def __str__(self) -> str:
        if self.point is None:
            return self.message
        return f"{self.message} at x = {self.point}"

    def __reduce__(self):
        return (self.__class__, (self.message, self.point))
