"""Exception types shared across the package."""


class DomainError(ValueError):
    """Argument outside the real domain of an operation."""


class ParseError(ValueError):
    """Malformed decimal text."""


class NonConvergence(RuntimeError):
    """Iteration budget exhausted before the stopping rule fired.

    The best estimate reached so far is attached as ``estimate``.
    """

    def __init__(self, message, estimate=None):
        super().__init__(message)
        self.estimate = estimate
