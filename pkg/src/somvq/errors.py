"""Exception taxonomy shared across the package.

All library errors derive from SomError so callers can catch broadly;
each subclass also derives from the closest builtin so untyped callers
get sensible behaviour (e.g. ShapeError is a ValueError).
"""


class SomError(Exception):
    """Base class for all errors raised by this package."""


class ConfigurationError(SomError, ValueError):
    """A knob or parameter value is out of its allowed range."""


class ShapeError(SomError, ValueError):
    """Array or vector dimensions do not match what an operation expects."""


class DataError(SomError, ValueError):
    """Input data violates a contract (empty, non-finite, unlabeled, ...)."""


class ParseError(SomError, ValueError):
    """A text input could not be parsed; message names the offending line."""

    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class StateError(SomError, RuntimeError):
    """An operation was invoked on an object in an unusable state."""
