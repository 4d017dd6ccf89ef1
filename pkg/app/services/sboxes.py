"""
Substitution layers.

SNOW 1.0's power-map S-box (byte map followed by a bit permutation), and
the S1/S2 word layers of SNOW 2.0/3G: a byte S-box applied to each byte of
a word, then a 4x4 MixColumn matrix over GF(2^8).
"""
import logging
from enum import Enum
from functools import lru_cache
from typing import List, Optional, Sequence, Tuple

from app.models.errors import ParameterError
from app.services.field import (
    AES_FIELD,
    S2_FIELD,
    SNOW1_FIELD,
    SNOW2_FIELD,
    Gf8Modulus,
    gf8_inverse,
    gf8_mul,
    gf8_pow,
    join_bytes,
    split_word,
)

logger = logging.getLogger(__name__)

# Polynomial-basis value of beta^2 + beta + 1
SNOW1_BYTE_CONSTANT = 0x04 ^ 0x02 ^ 0x01

# Dickson polynomial g49 over GF(2^8)/0x69; S2(x) = g49(x) xor 0x25
DICKSON_G49_EXPONENTS = (1, 9, 13, 15, 33, 41, 45, 47, 49)
DICKSON_CONSTANT = 0x25


class ByteSBox:
    """
    A bijective 8-bit S-box.

    Attributes:
        table: 256 output bytes
        name: Identifier written to table files and reports
    """

    def __init__(self, table: Sequence[int], name: str):
        self.table = tuple(table)
        self.name = name
        self._validate()

    def _validate(self) -> None:
        if len(self.table) != 256:
            raise ParameterError(f"S-box '{self.name}' must have 256 entries, got {len(self.table)}")
        if sorted(self.table) != list(range(256)):
            raise ParameterError(f"S-box '{self.name}' is not a permutation of 0..255")

    def __call__(self, b: int) -> int:
        return self.table[b]

    def inverse(self) -> "ByteSBox":
        inv = [0] * 256
        for x, y in enumerate(self.table):
            inv[y] = x
        return ByteSBox(inv, f"{self.name}-inverse")

    @classmethod
    def identity(cls) -> "ByteSBox":
        return cls(range(256), "identity")

    def __eq__(self, other) -> bool:
        return isinstance(other, ByteSBox) and other.table == self.table

    def __hash__(self) -> int:
        return hash(self.table)

    def __repr__(self) -> str:
        return f"ByteSBox(name='{self.name}')"


class ByteSBoxKind(Enum):
    """Byte S-box choices for S1."""
    AES = "aes"
    INVERSION = "inversion"

    @classmethod
    def values(cls) -> List[str]:
        return [k.value for k in cls]


def _affine_aes(b: int) -> int:
    out = 0x63
    for shift in range(5):
        out ^= ((b << shift) | (b >> (8 - shift))) & 0xFF
    return out


@lru_cache(maxsize=None)
def aes_sbox() -> ByteSBox:
    """Rijndael SubBytes: inversion in GF(2^8)/0x1B followed by the affine map."""
    return ByteSBox([_affine_aes(gf8_inverse(x, AES_FIELD)) for x in range(256)], "aes")


@lru_cache(maxsize=None)
def inversion_sbox(modulus: Gf8Modulus = SNOW2_FIELD) -> ByteSBox:
    """Pure inversion (0 -> 0) with no affine layer."""
    return ByteSBox([gf8_inverse(x, modulus) for x in range(256)], f"inversion-{modulus.name}")


def byte_sbox(kind: ByteSBoxKind) -> ByteSBox:
    if kind is ByteSBoxKind.AES:
        return aes_sbox()
    return inversion_sbox(SNOW2_FIELD)


def snow1_byte_map(y: int) -> int:
    """y^7 in GF(2^8)/h(y), plus beta^2 + beta + 1."""
    return gf8_pow(y, 7, SNOW1_FIELD) ^ SNOW1_BYTE_CONSTANT


@lru_cache(maxsize=None)
def snow1_sbox() -> ByteSBox:
    return ByteSBox([snow1_byte_map(y) for y in range(256)], "snow1-power7")


@lru_cache(maxsize=None)
def dickson_s2_sbox() -> ByteSBox:
    """SNOW 3G's S2 byte table, computed from its algebraic definition."""
    table = []
    for x in range(256):
        acc = DICKSON_CONSTANT
        for e in DICKSON_G49_EXPONENTS:
            acc ^= gf8_pow(x, e, S2_FIELD)
        table.append(acc)
    return ByteSBox(table, "snow3g-s2")


# ----------------------------------------------------------------------
# SNOW 1.0 bit permutation
# ----------------------------------------------------------------------

class BitPermutation:
    """
    Permutation of the 32 bit positions of a word.

    Input bit j moves to output bit perm[j], so output bit i carries input
    bit perm^-1(i).
    """

    def __init__(self, perm: Optional[Sequence[int]] = None):
        self.perm = tuple(range(32)) if perm is None else tuple(perm)
        self._validate()
        self.is_identity = self.perm == tuple(range(32))

    def _validate(self) -> None:
        if sorted(self.perm) != list(range(32)):
            raise ParameterError("Bit permutation must be a permutation of 0..31")

    def apply(self, w: int) -> int:
        if self.is_identity:
            return w
        out = 0
        for j, target in enumerate(self.perm):
            if (w >> j) & 1:
                out |= 1 << target
        return out

    def inverse(self) -> "BitPermutation":
        inv = [0] * 32
        for j, target in enumerate(self.perm):
            inv[target] = j
        return BitPermutation(inv)

    def __repr__(self) -> str:
        return "BitPermutation(identity)" if self.is_identity else f"BitPermutation({list(self.perm)})"


def snow1_sbox_word(w: int, perm: Optional[BitPermutation] = None) -> int:
    """Byte map on each of the four bytes, then the bit permutation."""
    sbox = snow1_sbox().table
    out = join_bytes([sbox[b] for b in split_word(w)])
    return perm.apply(out) if perm is not None else out


# ----------------------------------------------------------------------
# MixColumn
# ----------------------------------------------------------------------

class MixOrientation(Enum):
    """
    Row layouts for the MixColumn matrix.

    CIRCULANT completes the printed matrix to (X+1, 1, 1, X) on the last
    row; LITERAL keeps the printed (X+1, X, 1, 1); GPP is the circulant
    matrix with the byte order of the 3GPP algorithm (b0 most significant).
    """
    CIRCULANT = "circulant"
    LITERAL = "literal"
    GPP = "3gpp"

    @classmethod
    def values(cls) -> List[str]:
        return [o.value for o in cls]


_MIX_ROWS = {
    MixOrientation.CIRCULANT: ((2, 3, 1, 1), (1, 2, 3, 1), (1, 1, 2, 3), (3, 1, 1, 2)),
    MixOrientation.LITERAL: ((2, 3, 1, 1), (1, 2, 3, 1), (1, 1, 2, 3), (3, 2, 1, 1)),
    MixOrientation.GPP: ((2, 1, 1, 3), (3, 2, 1, 1), (1, 3, 2, 1), (1, 1, 3, 2)),
}


def _gf8_rank(rows: Sequence[Sequence[int]], modulus: Gf8Modulus) -> int:
    m = [list(r) for r in rows]
    rank = 0
    ncols = len(m[0]) if m else 0
    for col in range(ncols):
        pivot = next((r for r in range(rank, len(m)) if m[r][col]), None)
        if pivot is None:
            continue
        m[rank], m[pivot] = m[pivot], m[rank]
        inv = gf8_inverse(m[rank][col], modulus)
        m[rank] = [gf8_mul(v, inv, modulus) for v in m[rank]]
        for r in range(len(m)):
            if r != rank and m[r][col]:
                factor = m[r][col]
                m[r] = [a ^ gf8_mul(factor, b, modulus) for a, b in zip(m[r], m[rank])]
        rank += 1
    return rank


class MixMatrix:
    """
    4x4 matrix over GF(2^8); entries are small field elements (X = 0x02).

    Attributes:
        rows: Four rows of four bytes
        modulus: Field the entries live in
        name: Identifier
    """

    def __init__(self, rows: Sequence[Sequence[int]], modulus: Gf8Modulus, name: str = "custom"):
        self.rows = tuple(tuple(r) for r in rows)
        self.modulus = modulus
        self.name = name
        self._validate()

    def _validate(self) -> None:
        if len(self.rows) != 4 or any(len(r) != 4 for r in self.rows):
            raise ParameterError("MixColumn matrix must be 4x4")
        if any(not 0 <= v <= 0xFF for r in self.rows for v in r):
            raise ParameterError("MixColumn entries must be bytes")
        if _gf8_rank(self.rows, self.modulus) != 4:
            raise ParameterError(f"MixColumn matrix '{self.name}' is singular over {self.modulus!r}")

    @classmethod
    def from_orientation(cls, orientation: MixOrientation, modulus: Gf8Modulus) -> "MixMatrix":
        return cls(_MIX_ROWS[orientation], modulus, f"{orientation.value}-{modulus.name}")

    def apply(self, column: Sequence[int]) -> Tuple[int, int, int, int]:
        m = self.modulus
        return tuple(
            gf8_mul(r[0], column[0], m) ^ gf8_mul(r[1], column[1], m)
            ^ gf8_mul(r[2], column[2], m) ^ gf8_mul(r[3], column[3], m)
            for r in self.rows
        )

    def column(self, j: int) -> Tuple[int, int, int, int]:
        return tuple(r[j] for r in self.rows)

    def __repr__(self) -> str:
        return f"MixMatrix(name='{self.name}', rows={self.rows})"


class WordSBox:
    """
    Word-level substitution: byte S-box on each byte, then MixColumn.

    Evaluation goes through four 256-entry word tables, one per input byte
    position; naive() does the matrix-vector product directly.
    """

    def __init__(self, sbox: ByteSBox, matrix: MixMatrix, name: str = ""):
        self.sbox = sbox
        self.matrix = matrix
        self.name = name or f"{sbox.name}+{matrix.name}"
        self._tables = self._build_tables()

    def _build_tables(self) -> Tuple[Tuple[int, ...], ...]:
        m = self.matrix.modulus
        tables = []
        for j in range(4):
            col = self.matrix.column(j)
            tables.append(tuple(
                join_bytes([gf8_mul(c, self.sbox.table[b], m) for c in col]) for b in range(256)
            ))
        return tuple(tables)

    def __call__(self, w: int) -> int:
        t0, t1, t2, t3 = self._tables
        return t0[w >> 24] ^ t1[(w >> 16) & 0xFF] ^ t2[(w >> 8) & 0xFF] ^ t3[w & 0xFF]

    def naive(self, w: int) -> int:
        return join_bytes(self.matrix.apply([self.sbox.table[b] for b in split_word(w)]))

    def __repr__(self) -> str:
        return f"WordSBox(name='{self.name}')"


@lru_cache(maxsize=None)
def s1_layer(kind: ByteSBoxKind = ByteSBoxKind.AES,
             orientation: MixOrientation = MixOrientation.CIRCULANT) -> WordSBox:
    """S1 for a given byte S-box and matrix layout; MixColumn is over the AES field."""
    return WordSBox(byte_sbox(kind), MixMatrix.from_orientation(orientation, AES_FIELD), f"s1-{kind.value}-{orientation.value}")


@lru_cache(maxsize=None)
def _s2_layer_cached(orientation: MixOrientation, sbox: ByteSBox) -> WordSBox:
    return WordSBox(sbox, MixMatrix.from_orientation(orientation, S2_FIELD), f"s2-{orientation.value}")


def configured_s2_sbox() -> ByteSBox:
    """The computed S2 table, or the file named by SNOWLAB_S2_TABLE."""
    from app.config import get_settings
    settings = get_settings()
    if settings.s2_table is None:
        return dickson_s2_sbox()
    from app.utils.table_files import load_sbox_file
    logger.info("Loading S2 byte table from %s", settings.s2_table)
    return load_sbox_file(settings.s2_table)


def s2_layer(orientation: MixOrientation = MixOrientation.GPP, sbox: Optional[ByteSBox] = None) -> WordSBox:
    """S2: the S2 byte table followed by MixColumn over GF(2^8)/0x69."""
    return _s2_layer_cached(orientation, sbox or configured_s2_sbox())


def s1_word(w: int, layer: Optional[WordSBox] = None) -> int:
    return (layer or s1_layer())(w)


def s2_word(w: int, layer: Optional[WordSBox] = None) -> int:
    return (layer or s2_layer())(w)
