"""Neighbour-sum exceptions."""

from typing import Optional


class NeighsumError(Exception):
    """Base exception for all neighsum errors."""

    pass


class DomainError(NeighsumError, ValueError):
    """Raised when an input violates an operation's precondition.

    Attributes:
        errors: List of violation messages (may contain just one)
    """

    def __init__(self, message: str, errors: Optional[list[str]] = None):
        super().__init__(message)
        self.errors = errors if errors is not None else [message]


class UnsupportedSpecError(NeighsumError):
    """Raised when a board geometry is outside what an operation supports."""

    pass


class InvariantError(NeighsumError):
    """Raised when an internal invariant fails. Always a bug."""

    pass


class ParseError(NeighsumError):
    """Raised when a board, sequence or cross file cannot be parsed."""

    pass


class ConfigError(NeighsumError):
    """Raised when a configuration file is invalid."""

    pass
