"""Exception hierarchy shared by every fllab module."""


class FLLabError(Exception):
    """Base class for all library errors."""


class PoleError(FLLabError, ValueError):
    """Argument sits on a pole of the function being evaluated."""


class DivergenceError(FLLabError, ValueError):
    """Function diverges at the requested argument (e.g. K(m) for m >= 1)."""


class DomainError(FLLabError, ValueError):
    """Argument outside the documented domain of an operation."""


class ConvergenceError(FLLabError, RuntimeError):
    """Iteration, series or quadrature failed to reach its tolerance.

    ``partial`` carries whatever result object was assembled before giving up.
    """

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial


class SignPatternError(FLLabError, ValueError):
    """Alternating acceleration requested for a series that does not alternate."""


class UnknownIdentityError(FLLabError, KeyError):
    """Identity id not present in the catalog."""

    def __str__(self):
        return f"unknown identity id: {self.args[0]!r}"
