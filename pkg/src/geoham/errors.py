"""Exception types shared across the package."""


class GeohamError(Exception):
    """Base class for all package errors."""


class ParseError(GeohamError):
    """Syntax error in an expression or system file, with position info."""

    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f" at line {line}" if column is None else f" at line {line}, column {column}"
        elif column is not None:
            where = f" at column {column}"
        super().__init__(message + where)


class UnknownSymbolError(ParseError):
    """Identifier not declared in the chart (coordinate or constant)."""


class ChartMismatchError(GeohamError):
    """Objects living on different charts were combined."""


class PoleError(GeohamError):
    """A rational function was evaluated where its denominator vanishes."""


class ExponentLimitError(GeohamError):
    """A polynomial exponent exceeded the per-variable limit (2**16)."""


class NotDecomposableError(GeohamError):
    """A linear system admits no Poisson-times-symmetric factorization.

    ``reason`` distinguishes a provably empty solution space from an
    exhausted search budget (invertibility may exist outside the budget
    for non-generic inputs).
    """

    def __init__(self, reason):
        self.reason = reason
        super().__init__(reason)


class IntegrationError(GeohamError):
    """Numerical flow integration failed (step underflow, pole, ...)."""


class RootFindError(GeohamError):
    """No phase-space point with the requested energy was found."""
