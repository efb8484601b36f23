"""Exception types with stable machine-readable codes.

Every semantic failure carries a short ``code`` string so the CLI (and
tests) can distinguish failure classes without parsing messages.
"""
from __future__ import annotations


class GraphonlabError(Exception):
    """Base class for all library errors."""

    code = "error"

    def __init__(self, message: str, code: str | None = None):
        super().__init__(message)
        if code is not None:
            self.code = code


class ValidationError(GraphonlabError):
    """A value violates a documented invariant (CLI exit code 1)."""

    code = "validation"


class ParseError(GraphonlabError):
    """A document does not conform to the file format (CLI exit code 2)."""

    code = "parse"
