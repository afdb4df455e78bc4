"""Semantic exception hierarchy shared across the package."""


class GiniCorrError(Exception):
    """Base class for all package errors."""


class DomainError(GiniCorrError, ValueError):
    """An argument is outside its mathematical domain."""


class MomentError(GiniCorrError):
    """A required moment is infinite in the given parameter regime."""


class DegenerateSampleError(GiniCorrError):
    """A sample statistic is undefined (constant margin, zero denominator)."""


class ConvergenceError(GiniCorrError):
    """A series or iteration cannot converge for the given parameters."""


class SeriesCapError(ConvergenceError):
    """Series hit the term cap before converging.

    Carries the partial sum and the last term for diagnostics.
    """

    def __init__(self, message, partial_sum, last_term, terms):
        super().__init__(message)
        self.partial_sum = partial_sum
        self.last_term = last_term
        self.terms = terms


class QuadratureError(GiniCorrError):
    """Adaptive quadrature failed to reach the requested tolerance.

    Carries the achieved estimate and the integrator's error report.
    """

    def __init__(self, message, estimate=None, error_estimate=None):
        super().__init__(message)
        self.estimate = estimate
        self.error_estimate = error_estimate


class UnsupportedPairError(GiniCorrError):
    """No closed form for this (family, weight) pair.

    `suggestion` names the nearest supported route.
    """

    def __init__(self, message, suggestion=None):
        super().__init__(message)
        self.suggestion = suggestion


class NoLinearRegressionError(GiniCorrError):
    """The family has no linear regression function of X on Y."""
