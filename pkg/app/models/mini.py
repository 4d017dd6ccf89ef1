"""Mini-SNOW instance parameters and the word field they run over."""
from typing import Any, Dict, List, Optional, Sequence, Tuple
from enum import Enum

from app.models.errors import ParameterError
from app.services.field import gfm_mul, is_irreducible

MAX_WORD_BITS = 8
MAX_LENGTH = 8

# Default degree-m reduction polynomials (full polynomial, top bit included)
DEFAULT_POLYS = {
    1: 0b11,
    2: 0b111,
    3: 0b1011,
    4: 0b10011,
    5: 0b100101,
    6: 0b1000011,
    7: 0b10000011,
    8: 0x1A9,
}


def inversion_table(m: int, poly: int) -> Tuple[int, ...]:
    """a -> a^-1 in F2[x]/poly, with 0 -> 0."""
    size = 1 << m
    low = poly ^ size
    table = [0] * size
    for a in range(1, size):
        # a^(2^m - 2) is the inverse in a field of 2^m elements
        result, base, e = 1, a, size - 2
        while e:
            if e & 1:
                result = gfm_mul(result, base, low, m)
            base = gfm_mul(base, base, low, m)
            e >>= 1
        table[a] = result
    return tuple(table)


class MiniArith(Enum):
    """How the FSM combines words: addition mod 2^m or XOR."""
    ADD = "add"
    XOR = "xor"

    @classmethod
    def values(cls) -> List[str]:
        return [a.value for a in cls]


class MiniParams:
    """
    Parameters of a scaled SNOW-2.0-shaped cipher.

    The LFSR holds n words of m bits. Its feedback is the XOR over taps
    (index, e) of x^e * s[index] in GF(2^m) = F2[x]/poly, so x plays the
    role of alpha. The FSM has registers R1, R2:

        Fm = (s[n-1] + R1) ^ R2,   z = Fm ^ s[0]
        R1' = s[mid] + R2,         R2' = sbox(R1)

    Attributes:
        m: Word size in bits
        n: LFSR length in words
        taps: (index, exponent) pairs
        sbox: Permutation of 0 .. 2^m - 1
        arith: "add" or "xor"
        mid: LFSR cell feeding R1
        poly: Degree-m irreducible polynomial defining the word field
    """

    def __init__(self,
                 m: int,
                 n: int,
                 taps: Sequence[Tuple[int, int]],
                 sbox: Optional[Sequence[int]] = None,
                 arith: str = "add",
                 mid: Optional[int] = None,
                 poly: Optional[int] = None):
        self.m = m
        self.n = n
        self.poly = poly if poly is not None else DEFAULT_POLYS.get(m, 0)
        self._validate_field()

        self.taps = tuple((int(i), int(e)) for i, e in taps)
        self.sbox = tuple(sbox) if sbox is not None else inversion_table(self.m, self.poly)
        self.arith = arith.value if isinstance(arith, MiniArith) else arith
        self.mid = min(1, n - 1) if mid is None else mid

        self._validate()

    def _validate_field(self) -> None:
        if not 1 <= self.m <= MAX_WORD_BITS:
            raise ParameterError(f"Word size m must be in 1..{MAX_WORD_BITS}")
        if not 1 <= self.n <= MAX_LENGTH:
            raise ParameterError(f"LFSR length n must be in 1..{MAX_LENGTH}")
        if self.poly.bit_length() - 1 != self.m or not is_irreducible(self.poly):
            raise ParameterError(f"poly 0x{self.poly:X} is not an irreducible polynomial of degree {self.m}")

    def _validate(self) -> None:
        if not self.taps:
            raise ParameterError("At least one feedback tap is required")
        for index, exponent in self.taps:
            if not 0 <= index < self.n:
                raise ParameterError(f"Tap index {index} out of range 0..{self.n - 1}")
            if exponent < 0:
                raise ParameterError("Tap exponents must be non-negative")
        if len({i for i, _ in self.taps}) != len(self.taps):
            raise ParameterError("Each LFSR cell may appear in at most one tap")
        if sorted(self.sbox) != list(range(1 << self.m)):
            raise ParameterError(f"sbox must be a permutation of 0..{(1 << self.m) - 1}")
        if self.arith not in MiniArith.values():
            raise ParameterError(f"Invalid arith. Must be one of: {MiniArith.values()}")
        if not 0 <= self.mid < self.n:
            raise ParameterError(f"mid must be in 0..{self.n - 1}")

    @property
    def mask(self) -> int:
        return (1 << self.m) - 1

    @property
    def state_words(self) -> int:
        """LFSR words plus R1 and R2."""
        return self.n + 2

    @property
    def state_bits(self) -> int:
        return self.m * self.state_words

    @property
    def lfsr_bits(self) -> int:
        return self.m * self.n

    def with_changes(self, **changes: Any) -> "MiniParams":
        data = dict(m=self.m, n=self.n, taps=self.taps, sbox=self.sbox,
                    arith=self.arith, mid=self.mid, poly=self.poly)
        data.update(changes)
        if "m" in changes and "sbox" not in changes:
            data["sbox"] = None
        if "m" in changes and "poly" not in changes:
            data["poly"] = None
        return MiniParams(**data)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "m": self.m,
            "n": self.n,
            "taps": [list(t) for t in self.taps],
            "sbox": list(self.sbox),
            "arith": self.arith,
            "mid": self.mid,
            "poly": self.poly,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "MiniParams":
        return cls(
            m=int(data["m"]),
            n=int(data["n"]),
            taps=[tuple(t) for t in data["taps"]],
            sbox=data.get("sbox"),
            arith=data.get("arith", MiniArith.ADD.value),
            mid=None if data.get("mid") is None else int(data["mid"]),
            poly=data.get("poly"),
        )

    def __eq__(self, other) -> bool:
        return isinstance(other, MiniParams) and other.to_dict() == self.to_dict()

    def __repr__(self) -> str:
        taps = ", ".join(f"{i}:{e}" for i, e in self.taps)
        return f"MiniParams(m={self.m}, n={self.n}, taps=[{taps}], arith={self.arith}, mid={self.mid}, poly=0x{self.poly:X})"
