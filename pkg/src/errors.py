"""
Exception hierarchy shared by the library, CLI and HTTP API.
"""

from typing import Optional


class CompseqError(Exception):
    """Base class for all toolkit errors."""


class DomainError(CompseqError, ValueError):
    """An operation was called outside its domain (length, parity, pairing...)."""

    def __init__(self, message: str, index: Optional[int] = None):
        super().__init__(message)
        self.index = index


class ParseError(DomainError):
    """Text input does not follow the sequence/matrix grammar."""

    def __init__(self, message: str, line: Optional[int] = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message, index=line)
        self.line = line


class CapabilityError(CompseqError, RuntimeError):
    """An exhaustive operation would exceed its configured bound."""

    def __init__(self, message: str, cap: Optional[int] = None):
        super().__init__(message)
        self.cap = cap
