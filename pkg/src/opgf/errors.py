"""Exception types shared across the package."""


class OpgfError(Exception):
    """Base class for every error raised by this package."""


class ParameterError(OpgfError, ValueError):
    """A parameter violates a documented constraint."""


class RedirectToFreeMeixner(ParameterError):
    """lambda = 1 was requested for a family that treats it separately.

    The caller should use the free Meixner family instead.
    """


class DomainError(OpgfError, ValueError):
    """An evaluation point lies outside the validity domain."""


class BranchCutError(DomainError):
    """The principal power would be evaluated on its branch cut."""

    def __init__(self, message, z=None, x=None):
        super().__init__(message)
        self.z = z
        self.x = x


class SingularityError(DomainError):
    """Evaluation hit a pole of the expression."""


class NumericalBreakdownError(OpgfError, ArithmeticError):
    """An iterative numerical procedure lost validity (e.g. positivity)."""

    def __init__(self, message, index=None):
        super().__init__(message)
        self.index = index


class InconsistencyError(OpgfError, ArithmeticError):
    """Two independent routes to the same quantity disagree beyond tolerance."""
