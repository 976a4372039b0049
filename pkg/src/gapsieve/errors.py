"""Exception types shared across the package."""


class GapsieveError(Exception):
    """Base class for package-specific errors."""


class ResourceBudgetError(GapsieveError):
    """A requested computation exceeds the configured memory/enumeration budget."""


class MissingCoefficientError(GapsieveError, KeyError):
    """A coefficient source has no value at the requested prime."""


class BadReductionError(GapsieveError, ValueError):
    """Elliptic curve is singular modulo the requested prime."""


class ConstraintError(GapsieveError, ValueError):
    """A parameter-system inequality is violated; the message names it."""


class InconclusiveError(GapsieveError):
    """Precision exhausted with an unresolved near-zero (never a claimed zero)."""
