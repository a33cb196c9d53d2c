"""Exception types shared across the package."""


class DomainError(ValueError):
    """Input outside the documented domain of an operation."""


class UnsupportedError(ValueError):
    """Requested combination of options is not provided."""


class SingularityError(ArithmeticError):
    """A density ratio or normaliser degenerates (division by ~0)."""


class ResolutionError(ValueError):
    """Grid too coarse for the requested computation."""


class InvariantViolation(AssertionError):
    """A mathematical guarantee failed at runtime; indicates a bug."""
