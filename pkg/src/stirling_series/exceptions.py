"""Exception types raised by the library."""


class StirlingError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(StirlingError, ValueError):
    """Argument outside the domain of the function (e.g. ln of a non-positive number)."""


class InsufficientPrecisionError(StirlingError, ValueError):
    """A value does not carry enough digits for the requested output."""


class AlignmentError(StirlingError, ValueError):
    """Endpoints of an arithmetic progression are not aligned on its step."""


class QuadratureError(StirlingError, ArithmeticError):
    """Adaptive quadrature could not meet its tolerance."""


class RowMismatchError(StirlingError, ValueError):
    """Two tables do not cover the same set of rows."""


class MalformedDigitsError(StirlingError, ValueError):
    """A digit string is not a plain fixed-point decimal."""


class PositionError(StirlingError, IndexError):
    """A digit edit refers to a decimal place that does not exist."""
