"""Exception types raised across the package."""


class QEntropyError(Exception):
    """Base class for all package errors."""


class ValidationError(QEntropyError, ValueError):
    """Input failed a structural or numerical validity check."""


class DimensionMismatch(ValidationError):
    pass


class NotHermitian(ValidationError):
    pass


class NotPositive(ValidationError):
    pass


class NotDensity(ValidationError):
    pass


class DomainError(ValidationError):
    pass


class WeightError(ValidationError):
    pass


class SupportViolation(ValidationError):
    pass


class StatesEqual(ValidationError):
    pass


class MalformedSpec(ValidationError):
    pass


class MapNotTracePreservingOnRho(ValidationError):
    pass


class StencilOutOfWindow(ValidationError):
    pass


class NumericalError(QEntropyError, ArithmeticError):
    """A numerical routine failed to produce a trustworthy result."""


class ConvergenceFailure(NumericalError):
    pass


class NonFiniteIntegrand(NumericalError):
    pass


class QuadNotConverged(NumericalError):
    """Adaptive quadrature hit its subdivision limit.

    The partial result is kept on ``self.partial`` so callers can decide
    whether the estimate is still usable.
    """

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial
