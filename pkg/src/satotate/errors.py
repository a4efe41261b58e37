"""Exceptions shared across modules."""


class Refusal(RuntimeError):
    """A computation declined to return a value it could not certify."""


class BudgetExceeded(Refusal):
    """An enumeration would exceed its declared budget; nothing was approximated."""


class ConvergenceError(Refusal):
    """A quadrature or limiting count did not reach its tolerance.

    ``partial`` holds whatever diagnostic values were reached.
    """

    def __init__(self, message: str, partial=None):
        super().__init__(message)
        self.partial = partial
