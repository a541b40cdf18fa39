"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the domain an operation is defined on."""


class NumericError(ArithmeticError):
    """A numerical routine could not reach its tolerance.

    Attributes
    ----------
    estimate : float
        The error estimate the routine achieved before giving up.
    """

    def __init__(self, message: str, estimate: float = float("nan")) -> None:
        super().__init__(message)
        self.estimate = estimate
