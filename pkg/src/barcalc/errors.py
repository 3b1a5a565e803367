"""Exception hierarchy shared by every module."""


class BarcalcError(Exception):
    """Base class for all library errors."""


class InvalidInput(BarcalcError, ValueError):
    """Malformed specs, files or arguments (CLI exit status 2)."""


class ParseError(InvalidInput):
    pass


class InvalidRing(InvalidInput):
    pass


class InvalidAlgebra(InvalidInput):
    pass


class CompositionNotZero(InvalidInput):
    """Raised when a pair of differentials does not compose to zero."""


class TruncationMismatch(InvalidInput):
    pass


class TruncationTooLow(InvalidInput):
    pass


class IndexOutOfRange(InvalidInput, IndexError):
    pass


class ShapeMismatch(InvalidInput):
    pass


class InfiniteLevel(InvalidInput):
    """A set-level enumeration was requested on an infinite level (e.g. over Z)."""


class ResourceBudgetExceeded(BarcalcError):
    """An enumeration would exceed the configured simplex cap (CLI exit status 3)."""

    def __init__(self, what: str, needed: int, cap: int):
        super().__init__(f"{what}: {needed} exceeds the cap of {cap}")
        self.what = what
        self.needed = needed
        self.cap = cap
