"""Exception hierarchy shared by all dnfrac modules."""


class DnfracError(Exception):
    """Base class for every error raised by this package."""


class ValidationError(DnfracError, ValueError):
    """A parameter object violates one of its invariants."""


class DomainError(DnfracError, ValueError):
    """An argument lies outside the domain of the operation."""


class PoleError(DomainError):
    """Gamma evaluated at zero or a negative integer."""


class UnsupportedDomain(DnfracError, ValueError):
    """The closed-form power rule does not cover this exponent."""


class TruncationFailure(DnfracError, ArithmeticError):
    """A series hit ``max_terms`` before its stopping rule fired."""


class ConvergenceFailure(DnfracError, ArithmeticError):
    """Quadrature refinement did not settle within the allowed levels."""


class ConsistencyError(DnfracError, ArithmeticError):
    """Two independent routes to the same quantity disagree."""
