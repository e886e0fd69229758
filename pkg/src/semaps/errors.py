"""Exception hierarchy shared by all semaps modules.

Each exception carries a stable machine code so the HTTP layer can map
module errors onto wire error codes without string matching.
"""

from __future__ import annotations


class SemapsError(Exception):
    """Base class for all errors raised by this package."""

    code = "internal"


class ValidationError(SemapsError):
    """A caller-supplied value violates an invariant or precondition."""

    code = "validation"

    def __init__(self, message: str, field: str | None = None):
        super().__init__(message)
        self.field = field


class ParseError(SemapsError):
    """Syntax error in one of the hand-written grammars (Turtle, SPARQL,
    mapping files, KB files). Line and column are 1-based when known."""

    code = "validation"

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f" at line {line}" + (f", column {column}" if column is not None else "")
        super().__init__(message + where)


class NotFoundError(SemapsError):
    """A referenced entity (concept, map, marker, account, ...) does not exist."""

    code = "not_found"


class ConflictError(SemapsError):
    """The request collides with existing state (duplicate label, repeated vote)."""

    code = "conflict"


class FetchError(SemapsError):
    """A linked-data source could not be queried (timeout, network, bad payload)."""

    code = "upstream"

    def __init__(self, source: str, message: str):
        super().__init__(f"source '{source}': {message}")
        self.source = source
