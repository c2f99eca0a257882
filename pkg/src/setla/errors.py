"""Exception hierarchy shared by every module."""

from __future__ import annotations


class SetlaError(Exception):
    """Base class for all library errors."""


class NonAdditiveCarrier(SetlaError):
    pass


class WindowOverflow(SetlaError):
    """A natural-window product or sum left the window."""


class MissingTableEntry(SetlaError):
    pass


class WindowInconclusive(SetlaError):
    pass


class BudgetExceeded(SetlaError):
    """Raised when a search runs past its elementary-check budget.

    ``partial`` carries whatever was found before giving up.
    """

    def __init__(self, message: str = "budget exceeded", partial=None):
        super().__init__(message)
        self.partial = partial


class StructureInvalid(SetlaError):
    pass


class NotASubset(SetlaError):
    pass


class SubscalarsNotClosed(SetlaError):
    pass


class ModeUnsupported(SetlaError):
    pass


class PartNotSubstructure(SetlaError):
    pass


class ScalarMismatch(SetlaError):
    pass


class PartialTable(SetlaError):
    pass


class ChainMismatch(SetlaError):
    pass


class NotBijective(SetlaError):
    pass


class ZeroMissing(SetlaError):
    pass


class ValueOutOfUnit(SetlaError):
    pass


class ParamOutOfRange(SetlaError):
    pass


class NotASubstructure(SetlaError):
    pass


class FamilyMismatch(SetlaError):
    pass


class RoutingInvalid(SetlaError):
    pass


class ParseError(SetlaError):
    def __init__(self, message: str, line: int = 0, column: int = 0):
        loc = f"{line}:{column}: " if line else ""
        super().__init__(f"{loc}{message}")
        self.line = line
        self.column = column


class UnknownName(SetlaError):
    pass


class DuplicateName(SetlaError):
    pass
