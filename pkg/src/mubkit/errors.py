"""Exception hierarchy shared by all mubkit modules."""

from __future__ import annotations


class MubkitError(Exception):
    """Base class for every error raised by mubkit."""


class StructuralError(MubkitError, ValueError):
    """Shapes, lengths or presentations do not fit together."""


class DomainError(MubkitError, ValueError):
    """An argument lies outside the domain of the operation."""


class PreconditionError(MubkitError, ValueError):
    """A mathematical hypothesis of the operation does not hold.

    ``witness`` carries whatever evidence the raising function found.
    """

    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness


class UnsupportedDimensionError(DomainError):
    pass


class TooLargeError(MubkitError, RuntimeError):
    """Input exceeds the cap of an exact (exponential-time) solver."""
