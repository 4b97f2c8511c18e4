"""Shared exception base for the crossrefine package.

Every error raised by this package derives from :class:`CrossRefineError`,
so callers can catch one type at the batch-runner boundary. Specific
exception classes live next to the code that raises them.
"""


class CrossRefineError(Exception):
    """Base class for all errors raised by crossrefine."""


class ConfigError(CrossRefineError):
    """A run configuration is invalid or references missing files."""
