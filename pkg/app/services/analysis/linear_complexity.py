"""
Linear complexity.

Berlekamp-Massey over F2 with the connection polynomials kept as Python
ints (bit i = coefficient of x^i) and the recent sequence bits kept in a
sliding int window, so each discrepancy is one AND plus a bit count.
"""
import logging
from typing import Iterable, List, Sequence

import pandas as pd

from app.models.errors import ParameterError

logger = logging.getLogger(__name__)


class LinearComplexityResult:
    """
    Shortest LFSR generating a bit sequence.

    Attributes:
        L: Linear complexity
        connection: C(x) = 1 + c1 x + ... + cL x^L as an int, bit i = c_i;
            the sequence satisfies s_n = c1 s_{n-1} + ... + cL s_{n-L}
        profile: profile[k] = linear complexity of the first k + 1 bits
        length: Number of bits analysed
    """

    def __init__(self, L: int, connection: int, profile: List[int], length: int):
        self.L = L
        self.connection = connection
        self.profile = profile
        self.length = length

    @property
    def taps(self) -> List[int]:
        """Exponents i >= 1 with c_i = 1."""
        return [i for i in range(1, self.connection.bit_length()) if (self.connection >> i) & 1]

    def polynomial(self) -> str:
        terms = []
        for i in range(self.connection.bit_length() - 1, -1, -1):
            if (self.connection >> i) & 1:
                terms.append("1" if i == 0 else ("x" if i == 1 else f"x^{i}"))
        return " + ".join(terms) or "0"

    def regenerate(self, fill: Sequence[int], length: int) -> List[int]:
        return lfsr_sequence(self.connection, fill[:self.L], length)

    def to_dict(self):
        return {
            "L": self.L,
            "connection": f"0x{self.connection:X}",
            "polynomial": self.polynomial(),
            "length": self.length,
        }

    def __repr__(self) -> str:
        return f"LinearComplexityResult(L={self.L}, C(x)={self.polynomial()}, n={self.length})"


def berlekamp_massey(bits: Sequence[int]) -> LinearComplexityResult:
    """
    Berlekamp-Massey over F2.

    Args:
        bits: 0/1 values s_0, s_1, ...

    Returns:
        LinearComplexityResult with the connection polynomial and profile
    """
    if len(bits) == 0:
        raise ParameterError("Berlekamp-Massey needs a nonempty sequence")

    C, B = 1, 1
    L, shift = 0, 1
    window = 0
    profile = []
    for n, s in enumerate(bits):
        window = (window << 1) | (int(s) & 1)
        # bit i of window is s_{n-i}; bit i of C is c_i
        if bin(C & window).count("1") & 1:
            T = C
            C ^= B << shift
            if 2 * L <= n:
                L = n + 1 - L
                B = T
                shift = 1
            else:
                shift += 1
        else:
            shift += 1
        profile.append(L)

    logger.debug("Berlekamp-Massey: %d bits, L=%d", len(bits), L)
    return LinearComplexityResult(L, C, profile, len(bits))


def lfsr_sequence(connection: int, fill: Sequence[int], length: int) -> List[int]:
    """
    Output of the Fibonacci LFSR with connection polynomial C(x).

    Args:
        connection: C(x) as an int with c_0 = 1
        fill: First L bits, L = deg C
        length: Number of bits to produce (including the fill)
    """
    L = connection.bit_length() - 1
    if len(fill) < L:
        raise ParameterError(f"LFSR of degree {L} needs {L} fill bits, got {len(fill)}")
    taps = [i for i in range(1, L + 1) if (connection >> i) & 1]
    out = [int(b) & 1 for b in fill[:L]]
    while len(out) < length:
        n = len(out)
        bit = 0
        for i in taps:
            bit ^= out[n - i]
        out.append(bit)
    return out[:length]


def characteristic_to_connection(poly: int) -> int:
    """Reciprocal polynomial: x^L P(1/x)."""
    L = poly.bit_length() - 1
    return sum(1 << (L - i) for i in range(L + 1) if (poly >> i) & 1)


def words_to_bits(words: Iterable[int], width: int = 32, msb_first: bool = True) -> List[int]:
    """Flatten words into a bit sequence."""
    order = range(width - 1, -1, -1) if msb_first else range(width)
    return [(w >> i) & 1 for w in words for i in order]


def bytes_to_bits(data: bytes, msb_first: bool = True) -> List[int]:
    return words_to_bits(data, 8, msb_first)


def bit_plane(words: Iterable[int], bit: int) -> List[int]:
    """Bit `bit` (0 = least significant) of every word."""
    return [(w >> bit) & 1 for w in words]


def profile_frame(result: LinearComplexityResult) -> pd.DataFrame:
    """Profile next to the n/2 line a random sequence follows."""
    n = list(range(1, result.length + 1))
    return pd.DataFrame({"n": n, "L": result.profile, "n_half": [k / 2 for k in n]})
