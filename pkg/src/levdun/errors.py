"""Exception hierarchy.

Validation problems (bad input, bad arguments) derive from ``ValueError`` so
callers can catch them generically; numerical failures derive from
``ArithmeticError``.
"""


class LevDunError(Exception):
    """Base class for all package errors."""


class ValidationError(LevDunError, ValueError):
    """Invalid argument or malformed input."""


class SchemaError(ValidationError):
    """A required CSV column is missing."""


class ParseError(ValidationError):
    """A CSV cell could not be parsed.

    ``row`` is the 1-based data-row number (header excluded).
    """

    def __init__(self, message, row=None):
        super().__init__(message)
        self.row = row


class DegenerateGroupError(ValidationError):
    """A group would become empty after trimming."""


class NumericError(LevDunError, ArithmeticError):
    """Generic numerical failure (e.g. indefinite correlation matrix)."""


class DegenerateFitError(NumericError):
    """Pooled standard deviation is zero, so t statistics are undefined."""


class InsufficientDataError(NumericError):
    """Fewer than one residual degree of freedom."""


class ConvergenceError(NumericError):
    """A root search failed to bracket or converge."""
