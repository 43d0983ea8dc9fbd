"""Exception types shared by the package."""


class DomainError(ValueError):
    """An argument lies outside the domain where an operation is defined."""


class ToleranceNotMet(ArithmeticError):
    """Adaptive refinement stopped before the requested tolerance was reached.

    The best available estimate is attached so callers can still use it.
    """

    def __init__(self, message, value=float("nan"), error_estimate=float("inf")):
        super().__init__(message)
        self.value = value
        self.error_estimate = error_estimate
