"""Exception types shared across the package."""


class SpdcError(Exception):
    """Base class for all package errors."""


class DimensionError(SpdcError, ValueError):
    """Shapes are missing, non-square, or mutually incompatible."""


class NumericError(SpdcError, ArithmeticError):
    """Non-finite input, non-positive eigenvalue, or a failed factorization."""


class UsageError(SpdcError, ValueError):
    """Arguments are valid numbers but violate an operation's preconditions."""


class DegenerateInputError(UsageError):
    """Input carries no usable structure (e.g. an all-zero affinity matrix)."""
