"""Exception types raised by gaussbound."""


class DomainError(ValueError):
    """A parameter lies outside the domain where a formula is valid."""


class TruncationError(RuntimeError):
    """A Fock-basis truncation lost more probability mass than allowed."""

    def __init__(self, message, tail):
        super().__init__(message)
        self.tail = tail


class QuadratureError(RuntimeError):
    """A quadrature rule failed its self-consistency check."""

    def __init__(self, message, error):
        super().__init__(message)
        self.error = error


class UnsupportedWitness(ValueError):
    """No witness construction is available for the requested bound family."""
