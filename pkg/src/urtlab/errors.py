"""Exception hierarchy shared across the package."""


class UrtlabError(Exception):
    """Base class for all package-specific errors."""


class DomainError(UrtlabError, ValueError):
    """Input outside an operation's domain (bad vertex, mismatched depths, ...)."""


class TruncationError(DomainError):
    """A requested radius/depth exceeds the radius of validity of a network."""


class MarkError(DomainError):
    """A mark violates the mark-space constraints (NaN, too long, bad tag)."""


class ContractViolation(UrtlabError):
    """A declared contract was broken at runtime (degree bound, mass bound)."""


class DegenerateMeasureError(UrtlabError):
    """A derived measure is degenerate (e.g. degree bias with alpha = 0)."""


class PrecisionError(UrtlabError):
    """Floating-point coordinates can no longer represent the requested object."""


class RetryBudgetError(UrtlabError):
    """A rejection sampler exhausted its retry budget."""


class UsageError(UrtlabError):
    """Bad command-line arguments (unknown fixture, invalid numeric range)."""
