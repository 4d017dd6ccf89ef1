"""
SNOW 2.0.

LFSR over GF(2^8)[alpha]/g with the recurrence

    s16 = alpha^-1 s11 ^ s2 ^ alpha s0

and a two-register FSM:

    Fm  = (s15 + R1) ^ R2,   z = Fm ^ s0
    R1' = s5 + R2
    R2' = S1(R1)

During the 32 initialization clocks Fm is XORed into the feedback word;
the first keystream word after that is discarded. Keystream output is
capped by a word budget (2^50 by default) after which the key must change.
"""
import logging
from enum import Enum
from typing import List

from app.models.errors import BudgetExhaustedError, ParameterError
from app.models.keys import Snow2Key
from app.models.state import Snow2State
from app.services.field import (
    WORD_MASK,
    build_alpha_tables,
    mul_alpha_inv_naive,
    mul_alpha_naive,
)
from app.services.keystream import CipherVariant, KeystreamGenerator, identity_word, word_adder
from app.services.sboxes import ByteSBoxKind, MixOrientation, s1_layer

logger = logging.getLogger(__name__)

INIT_ROUNDS = 32
DEFAULT_LIMIT = 2 ** 50
ONES = WORD_MASK


class Snow2Arithmetic(Enum):
    """TABLE uses the byte-indexed alpha tables and S1 word tables; NAIVE multiplies coefficient by coefficient."""
    TABLE = "table"
    NAIVE = "naive"

    @classmethod
    def values(cls) -> List[str]:
        return [a.value for a in cls]


def load_key(key: Snow2Key) -> List[int]:
    k = key.key
    iv = key.iv_word
    return [w ^ ONES for w in k] + [
        k[0], k[1] ^ iv(3), k[2] ^ iv(2), k[3],
        k[4] ^ iv(1), k[5], k[6], k[7] ^ iv(0),
    ]


class Snow2(KeystreamGenerator):
    """
    SNOW 2.0 keystream generator.

    Args:
        key: 256-bit key and 128-bit IV
        sbox: Byte S-box inside S1
        orientation: MixColumn layout inside S1
        variant: REAL or LINEARIZED
        arithmetic: TABLE (fast) or NAIVE (reference) evaluation
        limit: Maximum number of keystream words for this key
    """

    CIPHER = "snow2"

    def __init__(self,
                 key: Snow2Key,
                 sbox: ByteSBoxKind = ByteSBoxKind.AES,
                 orientation: MixOrientation = MixOrientation.CIRCULANT,
                 variant: CipherVariant = CipherVariant.REAL,
                 arithmetic: Snow2Arithmetic = Snow2Arithmetic.TABLE,
                 limit: int = DEFAULT_LIMIT):
        self._configure(sbox, orientation, variant, arithmetic, limit)
        self.lfsr = load_key(key)
        self.r1 = 0
        self.r2 = 0
        self.clock = 0
        self.produced = 0
        self._initialize()

    def _configure(self, sbox, orientation, variant, arithmetic, limit) -> None:
        if limit < 0:
            raise ParameterError("Keystream limit must be non-negative")
        self.sbox_kind = sbox
        self.orientation = orientation
        self.variant = variant
        self.arithmetic = arithmetic
        self.limit = limit
        self._add = word_adder(variant)

        if variant is CipherVariant.LINEARIZED:
            self._s1 = identity_word
        elif arithmetic is Snow2Arithmetic.TABLE:
            self._s1 = s1_layer(sbox, orientation)
        else:
            self._s1 = s1_layer(sbox, orientation).naive

        if arithmetic is Snow2Arithmetic.TABLE:
            tables = build_alpha_tables()
            mul_a, mul_ainv = tables.mul_a, tables.mul_ainv
            self._feedback = lambda s: (
                ((s[0] << 8) & WORD_MASK) ^ mul_a[s[0] >> 24] ^ s[2] ^ (s[11] >> 8) ^ mul_ainv[s[11] & 0xFF]
            )
        else:
            self._feedback = lambda s: mul_alpha_naive(s[0]) ^ s[2] ^ mul_alpha_inv_naive(s[11])

    @classmethod
    def from_state(cls,
                   state: Snow2State,
                   sbox: ByteSBoxKind = ByteSBoxKind.AES,
                   orientation: MixOrientation = MixOrientation.CIRCULANT,
                   variant: CipherVariant = CipherVariant.REAL,
                   arithmetic: Snow2Arithmetic = Snow2Arithmetic.TABLE) -> "Snow2":
        cipher = cls.__new__(cls)
        cipher._configure(sbox, orientation, variant, arithmetic, state.limit)
        cipher.lfsr = list(state.lfsr)
        cipher.r1 = state.r1
        cipher.r2 = state.r2
        cipher.clock = state.clock
        cipher.produced = state.produced
        return cipher

    def _initialize(self) -> None:
        for _ in range(INIT_ROUNDS):
            fm = self.fsm_output()
            self.fsm_update()
            self.lfsr_step(fm)
        self._step()
        self.clock = 0
        logger.debug("snow2 initialized (sbox=%s, matrix=%s, variant=%s)",
                     self.sbox_kind.value, self.orientation.value, self.variant.value)

    def fsm_output(self) -> int:
        return self._add(self.lfsr[15], self.r1) ^ self.r2

    def fsm_update(self) -> None:
        r1 = self.r1
        self.r1 = self._add(self.lfsr[5], self.r2)
        self.r2 = self._s1(r1)

    def lfsr_step(self, extra: int = 0) -> None:
        s = self.lfsr
        s.append(self._feedback(s) ^ extra)
        del s[0]

    def _reserve(self, words: int) -> None:
        if self.produced + words > self.limit:
            raise BudgetExhaustedError(self.produced, self.limit, words)
        self.produced += words

    def _step(self) -> int:
        z = self.fsm_output() ^ self.lfsr[0]
        self.fsm_update()
        self.lfsr_step()
        self.clock += 1
        return z

    @property
    def remaining(self) -> int:
        return self.limit - self.produced

    def snapshot(self) -> Snow2State:
        return Snow2State(tuple(self.lfsr), self.r1, self.r2, self.clock, self.produced, self.limit)

    def __repr__(self) -> str:
        return (f"Snow2(clock={self.clock}, produced={self.produced}, limit={self.limit}, "
                f"variant={self.variant.value}, arithmetic={self.arithmetic.value})")


def snow2_init(key: Snow2Key, **options) -> Snow2:
    return Snow2(key, **options)


def snow2_step(cipher: Snow2) -> int:
    return cipher.step()


def snow2_encrypt(cipher: Snow2, data: bytes) -> bytes:
    return cipher.encrypt(data)
