"""
Finite-field and word arithmetic.

GF(2^8) under several reduction polynomials, the two GF(2^32) constructions
(SNOW 1.0's degree-32 polynomial and the SNOW 2.0/3G degree-4 extension of
GF(2^8)), the byte-indexed alpha tables, addition modulo 2^32 and rotation.

Words are plain ints in [0, 2^32). Byte 0 of a word is its most
significant byte.
"""
from enum import Enum
from functools import lru_cache
from typing import Iterable, List, Sequence, Tuple

from app.models.errors import ParameterError

WORD_BITS = 32
WORD_MASK = 0xFFFFFFFF

# Exponents of delta that make up alpha's minimal polynomial over GF(2^8):
# g(y) = y^4 + d^23 y^3 + d^245 y^2 + d^48 y + d^239
ALPHA_EXPONENTS = (23, 245, 48, 239)

# f(y) = y^32 + y^29 + y^20 + y^15 + y^10 + y + 1
SNOW1_POLY_TERMS = (32, 29, 20, 15, 10, 1, 0)


def _clmul(a: int, b: int) -> int:
    """Carry-less product of two bit polynomials."""
    result = 0
    while b:
        if b & 1:
            result ^= a
        a <<= 1
        b >>= 1
    return result


def poly_mod(a: int, m: int) -> int:
    """Remainder of bit polynomial a modulo m (m != 0)."""
    dm = m.bit_length() - 1
    while a and a.bit_length() - 1 >= dm:
        a ^= m << (a.bit_length() - 1 - dm)
    return a


def is_irreducible(poly: int) -> bool:
    """Trial division by every polynomial of degree 1 .. deg/2."""
    degree = poly.bit_length() - 1
    if degree < 1:
        return False
    for divisor in range(2, 1 << (degree // 2 + 1)):
        if poly_mod(poly, divisor) == 0:
            return False
    return True


class Gf8Modulus:
    """
    An irreducible degree-8 polynomial, encoded by its low byte.

    Attributes:
        reduction: The degree-<8 terms (0xA9 for y^8+y^7+y^5+y^3+1)
        name: Short label used in logs and table files
    """

    def __init__(self, reduction: int, name: str = ""):
        self.reduction = reduction
        self.name = name or f"0x{reduction:02X}"
        self._validate()

    def _validate(self) -> None:
        if not 0 <= self.reduction <= 0xFF:
            raise ParameterError("Reduction byte must fit in 8 bits")
        if not is_irreducible(self.polynomial):
            raise ParameterError(f"y^8 + 0x{self.reduction:02X} is not irreducible over F2")

    @property
    def polynomial(self) -> int:
        return 0x100 | self.reduction

    def __eq__(self, other) -> bool:
        return isinstance(other, Gf8Modulus) and other.reduction == self.reduction

    def __hash__(self) -> int:
        return hash(self.reduction)

    def __repr__(self) -> str:
        return f"Gf8Modulus(0x{self.reduction:02X}, name='{self.name}')"


SNOW2_FIELD = Gf8Modulus(0xA9, "snow2-delta")   # y^8+y^7+y^5+y^3+1
SNOW1_FIELD = Gf8Modulus(0x2B, "snow1-beta")    # y^8+y^5+y^3+y+1
AES_FIELD = Gf8Modulus(0x1B, "aes")             # y^8+y^4+y^3+y+1
S2_FIELD = Gf8Modulus(0x69, "snow3g-s2")        # y^8+y^6+y^5+y^3+1


def gfm_mul(a: int, b: int, reduction: int, bits: int) -> int:
    """Multiply in GF(2^bits) with the given low-term reduction constant."""
    top = 1 << (bits - 1)
    mask = (1 << bits) - 1
    result = 0
    while b:
        if b & 1:
            result ^= a
        b >>= 1
        carry = a & top
        a = (a << 1) & mask
        if carry:
            a ^= reduction
    return result


def gf8_mul(a: int, b: int, m: Gf8Modulus = SNOW2_FIELD) -> int:
    """Product of a and b in F2[y]/m."""
    return gfm_mul(a, b, m.reduction, 8)


def gf8_pow(a: int, e: int, m: Gf8Modulus = SNOW2_FIELD) -> int:
    """a^e by square-and-multiply; a^0 = 1 (also for a = 0)."""
    if e < 0:
        raise ParameterError("Exponent must be non-negative")
    result = 1
    while e:
        if e & 1:
            result = gf8_mul(result, a, m)
        a = gf8_mul(a, a, m)
        e >>= 1
    return result


def gf8_inverse(a: int, m: Gf8Modulus = SNOW2_FIELD) -> int:
    """Multiplicative inverse; 0 maps to 0."""
    return gf8_pow(a, 254, m)


def mul_x(v: int, m: Gf8Modulus) -> int:
    """Multiply a byte by y (shift left one, conditional reduction)."""
    v <<= 1
    if v & 0x100:
        v ^= m.polynomial
    return v


# ----------------------------------------------------------------------
# Word helpers
# ----------------------------------------------------------------------

def split_word(w: int) -> Tuple[int, int, int, int]:
    """Big-endian bytes (b0 most significant)."""
    return (w >> 24) & 0xFF, (w >> 16) & 0xFF, (w >> 8) & 0xFF, w & 0xFF


def join_bytes(b: Sequence[int]) -> int:
    return (b[0] << 24) | (b[1] << 16) | (b[2] << 8) | b[3]


def words_to_bytes(words: Iterable[int]) -> bytes:
    return b"".join(w.to_bytes(4, "big") for w in words)


def bytes_to_words(data: bytes) -> List[int]:
    if len(data) % 4:
        raise ParameterError("Byte string length must be a multiple of 4")
    return [int.from_bytes(data[i:i + 4], "big") for i in range(0, len(data), 4)]


def add_mod32(a: int, b: int) -> int:
    return (a + b) & WORD_MASK


def sub_mod32(a: int, b: int) -> int:
    return (a - b) & WORD_MASK


def rotl(w: int, r: int) -> int:
    r %= WORD_BITS
    return ((w << r) | (w >> (WORD_BITS - r))) & WORD_MASK


def rotl7(w: int) -> int:
    return ((w << 7) | (w >> 25)) & WORD_MASK


# ----------------------------------------------------------------------
# GF(2^32), SNOW 1.0 construction
# ----------------------------------------------------------------------

SNOW1_REDUCTION = sum(1 << e for e in SNOW1_POLY_TERMS if e < WORD_BITS)


def mul_alpha_snow1(w: int) -> int:
    """w * alpha in F2[y]/f(y)."""
    if w & 0x80000000:
        return ((w << 1) & WORD_MASK) ^ SNOW1_REDUCTION
    return (w << 1) & WORD_MASK


def mul_alpha_inv_snow1(w: int) -> int:
    """w / alpha in F2[y]/f(y); f has a constant term so alpha is invertible."""
    if w & 1:
        return ((w ^ SNOW1_REDUCTION) >> 1) | 0x80000000
    return w >> 1


# ----------------------------------------------------------------------
# GF(2^32), SNOW 2.0 / 3G construction
# ----------------------------------------------------------------------

class AlphaVariant(Enum):
    """Which GF(2^32) construction a table set belongs to."""
    SNOW2_FIELD = "snow2-field"
    SNOW1_FIELD = "snow1-field"

    @classmethod
    def values(cls) -> List[str]:
        return [v.value for v in cls]


class AlphaTables:
    """
    Byte-indexed multiplication tables for alpha and alpha^-1.

    For the snow2-field variant mul_a is indexed by the top byte and
    mul_ainv by the bottom byte. The snow1-field variant holds two entries
    each (indexed by the bit shifted out).
    """

    def __init__(self, mul_a: Sequence[int], mul_ainv: Sequence[int], variant: AlphaVariant):
        self.mul_a = tuple(mul_a)
        self.mul_ainv = tuple(mul_ainv)
        self.variant = variant
        self._validate()

    def _validate(self) -> None:
        size = 256 if self.variant is AlphaVariant.SNOW2_FIELD else 2
        if len(self.mul_a) != size or len(self.mul_ainv) != size:
            raise ParameterError(f"{self.variant.value} tables must have {size} entries")
        if self.mul_a[0] != 0 or self.mul_ainv[0] != 0:
            raise ParameterError("Row 0 of an alpha table must be zero")
        if any(not 0 <= v <= WORD_MASK for v in self.mul_a + self.mul_ainv):
            raise ParameterError("Alpha table entries must be words")

    def __repr__(self) -> str:
        return f"AlphaTables(variant={self.variant.value}, size={len(self.mul_a)})"


def alpha_coefficients() -> Tuple[int, int, int, int]:
    """(c3, c2, c1, c0) with alpha^4 = c3 a^3 + c2 a^2 + c1 a + c0."""
    return tuple(gf8_pow(0x02, e, SNOW2_FIELD) for e in ALPHA_EXPONENTS)


def alpha_inverse_coefficients() -> Tuple[int, int, int, int]:
    """
    Coefficients of alpha^-1 in the basis (a^3, a^2, a, 1).

    From alpha (alpha^3 + c3 alpha^2 + c2 alpha + c1) = c0 it follows that
    alpha^-1 = c0^-1 (alpha^3 + c3 alpha^2 + c2 alpha + c1).
    """
    c3, c2, c1, c0 = alpha_coefficients()
    c0_inv = gf8_inverse(c0, SNOW2_FIELD)
    return (c0_inv,
            gf8_mul(c0_inv, c3, SNOW2_FIELD),
            gf8_mul(c0_inv, c2, SNOW2_FIELD),
            gf8_mul(c0_inv, c1, SNOW2_FIELD))


@lru_cache(maxsize=None)
def build_alpha_tables(variant: AlphaVariant = AlphaVariant.SNOW2_FIELD) -> AlphaTables:
    """Build (and cache) the alpha tables for a construction."""
    if variant is AlphaVariant.SNOW1_FIELD:
        return AlphaTables((0, SNOW1_REDUCTION),
                           (0, (SNOW1_REDUCTION >> 1) | 0x80000000),
                           variant)

    forward = alpha_coefficients()
    backward = alpha_inverse_coefficients()
    mul_a = [join_bytes([gf8_mul(b, c, SNOW2_FIELD) for c in forward]) for b in range(256)]
    mul_ainv = [join_bytes([gf8_mul(b, c, SNOW2_FIELD) for c in backward]) for b in range(256)]
    return AlphaTables(mul_a, mul_ainv, variant)


def _require_snow2(t: AlphaTables) -> None:
    if t.variant is not AlphaVariant.SNOW2_FIELD:
        raise ParameterError("mul_alpha needs snow2-field tables; use mul_alpha_snow1 for SNOW 1.0")


def mul_alpha(w: int, t: AlphaTables = None) -> int:
    """w * alpha: (w << 8) xor Table(w >> 24)."""
    t = t or build_alpha_tables()
    _require_snow2(t)
    return ((w << 8) & WORD_MASK) ^ t.mul_a[w >> 24]


def mul_alpha_inv(w: int, t: AlphaTables = None) -> int:
    """w * alpha^-1: (w >> 8) xor TableInv(w & 0xFF)."""
    t = t or build_alpha_tables()
    _require_snow2(t)
    return (w >> 8) ^ t.mul_ainv[w & 0xFF]


def ext_mul(a: int, b: int) -> int:
    """
    General product in GF(2^8)[alpha]/g(alpha), coefficient by coefficient.

    This is the slow reference path: schoolbook multiplication of two
    degree-3 polynomials followed by reduction with alpha^4.
    """
    a_coef = split_word(a)[::-1]    # index i -> coefficient of alpha^i
    b_coef = split_word(b)[::-1]
    product = [0] * 7
    for i, x in enumerate(a_coef):
        if not x:
            continue
        for j, y in enumerate(b_coef):
            if y:
                product[i + j] ^= gf8_mul(x, y, SNOW2_FIELD)

    c3, c2, c1, c0 = alpha_coefficients()
    for k in range(6, 3, -1):
        top = product[k]
        if top:
            product[k] = 0
            product[k - 1] ^= gf8_mul(top, c3, SNOW2_FIELD)
            product[k - 2] ^= gf8_mul(top, c2, SNOW2_FIELD)
            product[k - 3] ^= gf8_mul(top, c1, SNOW2_FIELD)
            product[k - 4] ^= gf8_mul(top, c0, SNOW2_FIELD)
    return join_bytes(product[3::-1])


ALPHA_WORD = 0x00000100


def mul_alpha_naive(w: int) -> int:
    return ext_mul(w, ALPHA_WORD)


@lru_cache(maxsize=1)
def alpha_inverse_word() -> int:
    return join_bytes(alpha_inverse_coefficients())


def mul_alpha_inv_naive(w: int) -> int:
    return ext_mul(w, alpha_inverse_word())
