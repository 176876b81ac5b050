"""Exception hierarchy used across the package."""


class GaugeBenchError(Exception):
    """Base class for all package errors."""


class ValidationError(GaugeBenchError):
    """Invalid input: dimensions, non-Hermitian operators, bad parameters."""


class ConvergenceError(GaugeBenchError):
    """A numerical result failed its convergence criterion.

    Attributes carry the competing values so callers can inspect how far
    apart the two resolutions were.
    """

    def __init__(self, message, value_coarse=None, value_fine=None, trajectory=None):
        super().__init__(message)
        self.value_coarse = value_coarse
        self.value_fine = value_fine
        self.trajectory = trajectory or []


class CutoffLeakageError(GaugeBenchError):
    """State embedding lost more norm to the Fock cutoff than allowed."""

    def __init__(self, message, leakage=None):
        super().__init__(message)
        self.leakage = leakage


class SingularDenominatorError(GaugeBenchError):
    """A perturbative energy denominator hit an exact resonance."""

    def __init__(self, message, level_pair=None):
        super().__init__(message)
        self.level_pair = level_pair


class UnsupportedInstantiationError(GaugeBenchError):
    """Operation requested for a system family it is not defined for."""
