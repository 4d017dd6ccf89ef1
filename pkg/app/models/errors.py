"""Exception types shared by the library and the CLI."""
from typing import Optional


class SnowLabError(Exception):
    """Base class for every error raised on purpose by snowlab."""


class ParameterError(SnowLabError, ValueError):
    """A size, range, hex string or configuration value is invalid."""


class VectorFileError(ParameterError):
    """A vector file could not be parsed."""

    def __init__(self, message: str, line: Optional[int] = None, path: Optional[str] = None):
        self.line = line
        self.path = path
        where = ""
        if path:
            where += f"{path}:"
        if line is not None:
            where += f"{line}:"
        super().__init__(f"{where} {message}" if where else message)


class TableFileError(ParameterError):
    """An S-box or matrix table file is malformed or fails verification."""


class BudgetExhaustedError(SnowLabError):
    """The keystream limit was reached; the key must be changed."""

    def __init__(self, produced: int, limit: int, requested: int = 1):
        self.produced = produced
        self.limit = limit
        self.requested = requested
        super().__init__(
            f"Keystream budget exhausted: {produced} of {limit} words used, "
            f"{requested} more requested; rekey required"
        )


class DomainTooLargeError(ParameterError):
    """An exhaustive computation was asked for a domain above its bound."""


class RankDeficientError(SnowLabError):
    """The linear system does not determine the state."""

    def __init__(self, rank: int, needed: int, detail: str = ""):
        self.rank = rank
        self.needed = needed
        message = f"Rank-deficient system: rank {rank} of {needed}"
        if detail:
            message += f" ({detail})"
        super().__init__(message)


class NoConsistentStateError(SnowLabError):
    """No internal state reproduces the given keystream."""


class FaultError(ParameterError):
    """A fault names an invalid target, bit or time."""


class HookUnavailableError(SnowLabError):
    """Fault hooks were requested while analysis hooks are disabled."""
