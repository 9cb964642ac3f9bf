"""Exception hierarchy shared by the kernel and the command line."""
from __future__ import annotations


class CRTypeError(Exception):
    """Base class for all package errors."""


class PreconditionError(CRTypeError, ValueError):
    """An operation was called on input outside its domain."""


class ParseError(CRTypeError, ValueError):
    """Malformed expression text; carries a 1-based line and column."""

    def __init__(self, message: str, line: int = 1, column: int = 1):
        super().__init__(f"{message} (line {line}, column {column})")
        self.message = message
        self.line = line
        self.column = column


class InconclusiveError(CRTypeError):
    """A search budget was exhausted before a certified answer was reached."""

    def __init__(self, message: str, trace=None):
        super().__init__(message)
        self.trace = trace
