"""Exception types raised by the library."""


class KratzelDomainError(ValueError):
    """Input outside the domain where the requested quantity is defined."""


class EvaluationError(ArithmeticError):
    """An integrand produced a non-finite value at some abscissa."""

    def __init__(self, message, abscissa=None):
        super().__init__(message)
        self.abscissa = abscissa
