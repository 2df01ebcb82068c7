"""Exception hierarchy for circleop."""


class CircleOpError(ValueError):
    """Base class for all errors raised by circleop."""


class SymbolParseError(CircleOpError):
    """Raised when a symbol literal cannot be parsed.

    ``position`` is the 0-based character offset of the offending term.
    """

    def __init__(self, msg, position=0):
        super().__init__(f"{msg} (at position {position})")
        self.position = position


class CurveTouchesPoint(CircleOpError):
    """The symbol curve passes (numerically) through the base point."""


class GridTooCoarse(CircleOpError):
    """Consecutive phase increments are too large to resolve the winding."""


class WindowTooSmall(CircleOpError):
    """A truncation window is too small for the requested computation."""
