class NumericalError(ArithmeticError):
    """A quadrature or root-finding step failed to reach its tolerance."""


class QuadratureError(NumericalError):
    def __init__(self, message, estimate=None, error=None):
        super().__init__(message)
        self.estimate = estimate
        self.error = error


class RootFindingError(NumericalError):
    pass


class InfeasibleCriterionError(ValueError):
    """No false-alarm rate in the search bracket satisfies the criterion."""

    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}


class RunLengthCapError(RuntimeError):
    """A simulated run exceeded the point cap without signalling."""
