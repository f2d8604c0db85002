"""Exception types shared across the toolkit."""

from __future__ import annotations


class TgrkitError(Exception):
    """Base class for all toolkit errors."""


class FormatError(TgrkitError):
    """Malformed textual input (words, grammars, patterns, dumps).

    `line` carries a 1-based line number when the source is line-oriented.
    """

    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class CodingDomainError(TgrkitError):
    """A weak coding was applied to a symbol outside its domain."""

    def __init__(self, symbol: str):
        super().__init__(f"symbol {symbol!r} is not in the coding's domain")
        self.symbol = symbol


class ResourceLimitError(TgrkitError):
    """A configured resource cap would be exceeded; reports the required budget."""


class TraceError(TgrkitError):
    """A derivation could not be replayed as a recombination trace."""
