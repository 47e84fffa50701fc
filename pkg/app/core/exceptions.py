"""
Exceptions raised by the benchmark.

Each one subclasses the builtin it specialises, so callers that only
care about ``ValueError`` and friends keep working.
"""


class ConfigurationError(ValueError):
    """Invalid or inconsistent configuration."""


class ParseError(ValueError):
    """A malformed input record in strict mode."""

    def __init__(self, message, line_number=None):
        self.line_number = line_number
        if line_number is not None:
            message = f'line {line_number}: {message}'
        super().__init__(message)


class CorruptIndexError(IndexError):
    """A user or item index outside the model tables."""


class DegenerateUserError(ValueError):
    """A user with no item left to sample as a negative."""


class NonFiniteLossError(ArithmeticError):
    """Training produced a NaN or infinite loss."""


class StaleCacheError(RuntimeError):
    """Cached representations no longer match the model parameters."""


class ArtifactMismatchError(ValueError):
    """Artifacts produced under different configurations."""
