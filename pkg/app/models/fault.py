"""Fault descriptions for the SNOW 3G injection harness."""
from typing import Any, Dict, List, Optional
from enum import Enum

from app.models.errors import FaultError


class FaultTarget(Enum):
    """Register hit by a fault."""
    LFSR = "lfsr"
    R1 = "r1"
    R2 = "r2"
    R3 = "r3"

    @classmethod
    def values(cls) -> List[str]:
        return [t.value for t in cls]


class FaultKind(Enum):
    """FLIP complements the bit (or word); RESET forces it to zero."""
    FLIP = "flip"
    RESET = "reset"

    @classmethod
    def values(cls) -> List[str]:
        return [k.value for k in cls]


class FaultSpec:
    """
    A transient fault applied just before the cipher produces word `time`.

    Attributes:
        target: Register hit
        time: Clock value at which the fault lands
        bit: Bit position (0 = least significant); None hits the whole word
        cell: LFSR cell index, only meaningful for LFSR faults
        kind: FLIP or RESET
    """

    def __init__(self,
                 target: str,
                 time: int,
                 bit: Optional[int] = None,
                 cell: int = 0,
                 kind: str = "flip"):
        self.target = target.value if isinstance(target, FaultTarget) else target
        self.time = time
        self.bit = bit
        self.cell = cell
        self.kind = kind.value if isinstance(kind, FaultKind) else kind

        self._validate()

    def _validate(self) -> None:
        if self.target not in FaultTarget.values():
            raise FaultError(f"Invalid fault target. Must be one of: {FaultTarget.values()}")
        if self.kind not in FaultKind.values():
            raise FaultError(f"Invalid fault kind. Must be one of: {FaultKind.values()}")
        if self.time < 0:
            raise FaultError("Fault time cannot be negative")
        if self.bit is not None and not 0 <= self.bit < 32:
            raise FaultError("Fault bit must be in 0..31")
        if self.target == FaultTarget.LFSR.value and not 0 <= self.cell < 16:
            raise FaultError("LFSR cell index must be in 0..15")

    @property
    def mask(self) -> int:
        """Bits of the target word the fault touches."""
        return 0xFFFFFFFF if self.bit is None else 1 << self.bit

    def apply(self, value: int) -> int:
        if self.kind == FaultKind.FLIP.value:
            return value ^ self.mask
        return value & ~self.mask & 0xFFFFFFFF

    def label(self) -> str:
        where = f"lfsr[{self.cell}]" if self.target == FaultTarget.LFSR.value else self.target
        bit = "word" if self.bit is None else f"bit {self.bit}"
        return f"{self.kind} {where} {bit} @t={self.time}"

    def to_dict(self) -> Dict[str, Any]:
        return {
            "target": self.target,
            "time": self.time,
            "bit": self.bit,
            "cell": self.cell,
            "kind": self.kind,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "FaultSpec":
        return cls(
            target=data["target"],
            time=int(data["time"]),
            bit=None if data.get("bit") is None else int(data["bit"]),
            cell=int(data.get("cell", 0)),
            kind=data.get("kind", FaultKind.FLIP.value),
        )

    def __eq__(self, other) -> bool:
        return isinstance(other, FaultSpec) and other.to_dict() == self.to_dict()

    def __hash__(self) -> int:
        return hash(tuple(self.to_dict().items()))

    def __repr__(self) -> str:
        return f"FaultSpec({self.label()})"
