"""Exception types shared across the package."""


class SepcertError(Exception):
    """Base class for all errors raised by this package."""


class ShapeError(SepcertError, ValueError):
    """Matrix or family dimensions are inconsistent with the operation."""


class SizeBudgetError(SepcertError, ValueError):
    """A requested tensor product would exceed the configured size budget."""


class EnumerationCapError(SizeBudgetError):
    """Family is too large for exhaustive subset enumeration without an override."""


class ParameterError(SepcertError, ValueError):
    """A constructor or generator received an invalid parameter."""


class UsageError(SepcertError, ValueError):
    """An operation was called in a way its contract forbids."""


class DegenerateInputError(SepcertError, ValueError):
    """Input is degenerate (e.g. a zero matrix) where a nonzero one is required."""


class NumericError(SepcertError, RuntimeError):
    """A numerical routine failed to produce a usable result."""
