"""Exception types raised by the simulation routines."""


class ZalmError(Exception):
    """Base class for all package errors."""


class ChannelRangeError(ZalmError, IndexError):
    """Channel index outside the symmetric DWDM channel set."""


class ShapeError(ZalmError, ValueError):
    """Sample matrix does not match its frequency grids."""


class NormalizationError(ZalmError, ValueError):
    """Wave function cannot be normalized (identically zero)."""


class DegenerateInputError(ZalmError, ArithmeticError):
    """A ratio is undefined because its denominator vanishes."""


class DomainError(ZalmError, ValueError):
    """Parameters outside the physically meaningful domain."""
