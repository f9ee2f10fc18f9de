"""Shared exception types."""


class NumericError(RuntimeError):
    """An iterative routine failed to converge or produced an invalid result."""


class NotAFrameError(ValueError):
    """The measure's support does not span the ambient space."""
