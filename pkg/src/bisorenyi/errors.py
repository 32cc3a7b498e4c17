"""Exception types raised by the library."""


class BisoError(ValueError):
    """Base class for all library errors."""


class DomainError(BisoError):
    """An argument lies outside the mathematical domain of the operation."""


class ValidationError(BisoError):
    """A channel or distribution fails its structural invariants."""


class UsageError(BisoError):
    """Arguments are individually valid but incompatible with each other."""


class UnsupportedAlphaError(BisoError):
    """The requested order is not supported by this operation (typically alpha = 1)."""
