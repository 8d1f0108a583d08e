"""Exception types raised by the toolkit."""


class GCHSError(Exception):
    """Base class for all toolkit errors."""


class SingularMetric(GCHSError):
    """The metric determinant fell below the singularity floor."""


class OutOfChart(GCHSError):
    """A coordinate point failed the chart's domain guard.

    ``last_state`` carries the last valid state when raised mid-integration.
    """

    def __init__(self, message, last_state=None):
        super().__init__(message)
        self.last_state = last_state


class DimensionMismatch(GCHSError, ValueError):
    """A field or vector does not match the dimension of the system."""


class NoCanonicalSplit(GCHSError):
    """A momentum-dependent quantity was requested from a system without a (q, p) split."""


class StepSizeError(GCHSError, ValueError):
    """Invalid integration window or step."""


class BlowUp(GCHSError):
    """The integrated state became non-finite or exceeded the magnitude cap."""

    def __init__(self, message, last_state=None, partial=None):
        super().__init__(message)
        self.last_state = last_state
        self.partial = partial


class ExpressionError(GCHSError, ValueError):
    """A text definition or expression could not be parsed."""
