"""Exception types raised across the package."""


class DjcqslError(Exception):
    """Base class for all package errors."""


class InvalidInputError(DjcqslError):
    """Input violates a documented precondition (shape, hermiticity, range)."""


class UnsupportedStateError(InvalidInputError):
    """Operation is only defined for a restricted class of states."""


class NumericalDegeneracyError(DjcqslError):
    """A radicand or denominator degenerated beyond the rounding tolerance."""


class GridResolutionError(DjcqslError):
    """Time grid too coarse: independent quadrature routes disagree."""


class RateSingularityError(DjcqslError):
    """Decay rate undefined near a zero of the propagator."""


class DegeneratePathError(DjcqslError):
    """A path with zero average speed cannot bound a finite distance."""


class InternalConsistencyError(DjcqslError):
    """Two exact representations of the same quantity disagreed."""
