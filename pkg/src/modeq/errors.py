"""Exception hierarchy shared by the library and the CLI."""


class ModeqError(Exception):
    """Base class for all library errors."""


class DomainError(ModeqError, ValueError):
    """An argument lies outside the domain of the operation."""


class ConvergenceError(ModeqError, ArithmeticError):
    """An iterative procedure did not converge."""


class PrecisionExhaustedError(ConvergenceError):
    """The working precision is too low to resolve the requested quantity."""


class FitError(ModeqError, ArithmeticError):
    """Polynomial reconstruction failed."""


class AmbiguousNullspaceError(FitError):
    """The monomial matrix does not have a numerically one-dimensional kernel."""


class RoundingFailureError(FitError):
    """A kernel entry has no small-denominator rational close enough to it."""


class InvariantError(ModeqError, AssertionError):
    """An internal identity that must always hold was violated."""
