"""Exception types shared across the package.

Everything raised on purpose derives from :class:`WarpwaveError`, so callers
(and the CLI) can distinguish usage mistakes from genuine bugs.
"""

from __future__ import annotations


class WarpwaveError(Exception):
    """Base class for all errors raised deliberately by this package."""


class ConfigError(WarpwaveError):
    """An option or configuration value is not supported."""


class ShapeError(WarpwaveError):
    """An array has the wrong length, dimension, or structure."""


class DomainError(WarpwaveError):
    """A numeric argument lies outside the mathematically valid range."""


class DataError(WarpwaveError):
    """Input data cannot be parsed or fails a content check."""
