"""
Error hierarchy shared by every qprobe app.

Input problems derive from ValueError, numerical failures from RuntimeError.
The study commands map the first family to exit code 2 and the second to
exit code 3.
"""
from typing import Optional


class QProbeError(Exception):
    """Base class for all qprobe errors."""


# =============================================================================
# INPUT ERRORS
# =============================================================================

class InvalidStateError(QProbeError, ValueError):
    """Raised when a density matrix is not Hermitian, normalized and positive."""


class InvalidOperatorError(QProbeError, ValueError):
    """Raised when a 2x2 operator has non-finite entries or is not Hermitian."""


class DomainError(QProbeError, ValueError):
    """Raised when an argument lies outside the domain of a formula."""


class GridError(QProbeError, ValueError):
    """Raised when a time grid or trajectory is malformed."""


class ValidationError(QProbeError, ValueError):
    """Raised when reservoir parameters break a diluteness or confinement bound."""


class SizeError(QProbeError, ValueError):
    """Raised when a dense exact diagonalization would be too large."""


# =============================================================================
# NUMERICAL FAILURES
# =============================================================================

class NumericalError(QProbeError, RuntimeError):
    """Base class for failures of a numerical procedure."""


class QuadratureError(NumericalError):
    """Raised when adaptive quadrature does not reach the requested tolerance."""

    def __init__(self, message: str, estimate: float, abserr: float):
        super().__init__(message)
        self.estimate = estimate
        self.abserr = abserr


class GammaPoleError(NumericalError):
    """Raised when a closed-form rate hits a pole of the Euler gamma function."""


class FitError(NumericalError):
    """Raised when a power-law fit has too few or non-positive samples."""


class AmbiguousIntervalError(NumericalError):
    """Raised when the modified measure sees more than one decreasing interval."""


class NotBracketedError(NumericalError):
    """Raised when a crossover scan finds no zero/positive measure boundary."""

    def __init__(self, message: str, low_measure: Optional[float] = None,
                 high_measure: Optional[float] = None):
        super().__init__(message)
        self.low_measure = low_measure
        self.high_measure = high_measure


class StepSizeError(NumericalError):
    """Raised when a time step is too coarse for the integrator or unraveling."""
