"""Exception types shared across the package.

The CLI maps ``GoldbachValueError`` subclasses to exit status 1 and every
other ``GoldbachError`` to exit status 2.
"""


class GoldbachError(Exception):
    """Base class for all errors raised by goldbach_lab."""


class GoldbachValueError(GoldbachError, ValueError):
    """Bad input supplied by the caller."""


class InvalidArgumentError(GoldbachValueError):
    pass


class DomainError(GoldbachValueError):
    """Argument outside the mathematical domain, e.g. m <= 4 or z >= 1."""


class OutOfRangeError(GoldbachValueError, IndexError):
    """Query beyond what a precomputed table covers."""


class ResourceError(GoldbachError):
    """Requested work exceeds a configured budget or table size."""


class PrecisionError(GoldbachError, ArithmeticError):
    """A floating-point fast path could not certify an exact result."""


class WideIntegerOverflow(GoldbachError, OverflowError):
    pass


class CorruptCacheError(GoldbachError):
    """Cache file failed magic, version, length or checksum validation."""
