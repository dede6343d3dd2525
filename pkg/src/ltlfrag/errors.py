"""Exception types raised across the package."""


class LtlFragError(Exception):
    """Base class for all errors raised by ltlfrag."""


class ParseError(LtlFragError):
    """Malformed formula, trace, or tiling text.

    ``position`` is the 0-based character offset where the problem was
    detected, or ``None`` when it cannot be pinned to one place.
    """

    def __init__(self, message: str, position: int | None = None):
        self.message = message
        self.position = position
        where = f" at position {position}" if position is not None else ""
        super().__init__(f"{message}{where}")


class UnknownAtomError(LtlFragError):
    """An atom that is not part of the declared alphabet."""

    def __init__(self, name: str, position: int | None = None):
        self.name = name
        self.position = position
        where = f" at position {position}" if position is not None else ""
        super().__init__(f"unknown atom {name!r}{where}")


class FragmentError(LtlFragError):
    """The input formula lies outside the fragment an operation requires."""


class UnsupportedFormulaError(LtlFragError):
    """The formula shape is not handled by the requested evaluator."""
