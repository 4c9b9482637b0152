"""Exception hierarchy shared by every module of the package."""

from __future__ import annotations


class AbdualError(Exception):
    """Base class for all user-facing errors."""


class ReservedSymbolError(AbdualError):
    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        if line is not None:
            message = f"{line}:{column}: {message}"
        super().__init__(message)
        self.line = line
        self.column = column


class InconsistentScenarioError(AbdualError):
    pass


class FrameworkError(AbdualError):
    """A framework violates one of its structural invariants."""


class ParseError(AbdualError):
    """Syntax error with a source position."""

    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"{line}:{column}: {message}")
        self.message = message
        self.line = line
        self.column = column


class NonGroundError(ParseError):
    pass


class AbducibleHeadError(ParseError):
    pass


class QueryShapeError(ParseError):
    pass


class ShapeError(AbdualError):
    pass


class TooManyAbduciblesError(AbdualError):
    pass


class NotApplicable(AbdualError):
    """Raised by a forest operation whose applicability conditions fail."""


class BugAssertionError(AssertionError):
    """The evaluation exceeded its operation budget; always an engine defect."""
