"""
Immutable cipher-state snapshots.

The ciphers keep their working state in mutable attributes; these value
objects are what snapshot() returns and what from_state() accepts.
"""
from dataclasses import asdict, dataclass
from typing import Any, Dict, Tuple

from app.models.errors import ParameterError

LFSR_LENGTH = 16


def _check_words(name: str, *values: int) -> None:
    for v in values:
        if not 0 <= v <= 0xFFFFFFFF:
            raise ParameterError(f"{name} holds a value outside 32 bits: {v!r}")


def _check_lfsr(lfsr: Tuple[int, ...]) -> None:
    if len(lfsr) != LFSR_LENGTH:
        raise ParameterError(f"LFSR must hold exactly {LFSR_LENGTH} words, got {len(lfsr)}")
    _check_words("LFSR", *lfsr)


@dataclass(frozen=True)
class Snow1State:
    """SNOW 1.0 state; lfsr[0] is the oldest cell (St_t)."""
    lfsr: Tuple[int, ...]
    r1: int = 0
    r2: int = 0
    clock: int = 0

    def __post_init__(self):
        object.__setattr__(self, "lfsr", tuple(self.lfsr))
        _check_lfsr(self.lfsr)
        _check_words("FSM register", self.r1, self.r2)

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


@dataclass(frozen=True)
class Snow2State:
    """SNOW 2.0 state including the keystream budget counters."""
    lfsr: Tuple[int, ...]
    r1: int = 0
    r2: int = 0
    clock: int = 0
    produced: int = 0
    limit: int = 2 ** 50

    def __post_init__(self):
        object.__setattr__(self, "lfsr", tuple(self.lfsr))
        _check_lfsr(self.lfsr)
        _check_words("FSM register", self.r1, self.r2)
        if not 0 <= self.produced <= self.limit:
            raise ParameterError("produced must lie between 0 and limit")

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


@dataclass(frozen=True)
class Snow3gState:
    """SNOW 3G state; also the opaque snapshot used by the fault harness."""
    lfsr: Tuple[int, ...]
    r1: int = 0
    r2: int = 0
    r3: int = 0
    clock: int = 0

    def __post_init__(self):
        object.__setattr__(self, "lfsr", tuple(self.lfsr))
        _check_lfsr(self.lfsr)
        _check_words("FSM register", self.r1, self.r2, self.r3)

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)
