"""Exception hierarchy shared across the package.

The command-line front end maps these onto distinct exit codes:
parse errors (2), data errors (3), numerical failures (4).
"""

from __future__ import annotations


class CitenvError(Exception):
    """Base class for every error raised by this package."""


class ParseError(CitenvError):
    """Malformed input text; carries the 1-based line number when known."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


class DuplicateKeyError(ParseError):
    """A key that must be unique (a journal id) appeared twice."""


class DataError(CitenvError):
    """Inputs are well-formed but the requested computation is impossible."""


class UnresolvedReferenceError(DataError):
    """A journal id that is not present in the registry."""

    def __init__(self, journal_id: str, context: str = ""):
        self.journal_id = journal_id
        suffix = f" ({context})" if context else ""
        super().__init__(f"unknown journal id {journal_id!r}{suffix}")


class ValidationError(DataError):
    """A user-supplied value is out of range or inconsistent."""


class NumericalError(CitenvError):
    """A numerical routine produced non-finite values."""


class UndefinedSimilarityError(CitenvError):
    """Cosine similarity is undefined because a vector has no mass."""
