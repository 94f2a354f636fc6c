"""Exception hierarchy shared by every module of the package."""


class AlphaIneqError(Exception):
    """Base class for all package errors."""


class DomainError(AlphaIneqError, ValueError):
    """Input outside the mathematical domain of an operation."""


class DimensionError(AlphaIneqError, ValueError):
    """Two alpha-type numbers with different fractal dimensions were combined."""


class PoleError(DomainError):
    """Zero raised to a negative exponent."""


class RegimeError(DomainError):
    """Exponent parameters outside the regime an inequality is stated for."""


class ShapeError(AlphaIneqError, ValueError):
    """Vector or matrix shapes do not match."""


class RangeError(AlphaIneqError, OverflowError):
    """Result or input outside the representable floating-point range."""


class UsageError(AlphaIneqError, ValueError):
    """Caller asked for something the API does not offer."""


class IngestionError(AlphaIneqError, ValueError):
    """Malformed instance file; ``line`` is the 1-based line number when known."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
