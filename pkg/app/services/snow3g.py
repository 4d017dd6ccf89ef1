"""
SNOW 3G.

The SNOW 2.0 LFSR with a three-register FSM:

    F   = (s15 + R1) ^ R2,   z = F ^ s0
    r   = R2 + (R3 ^ s5)
    R3' = S2(R2)
    R2' = S1(R1)
    R1' = r

Key loading, the FSM wiring, the S2 byte table and the byte order of the
MixColumn matrices follow the 3GPP UEA2/UIA2 algorithm document.
"""
import logging
from typing import List

from app.models.keys import Snow3gKey
from app.models.state import Snow3gState
from app.services.field import WORD_MASK, build_alpha_tables
from app.services.keystream import CipherVariant, KeystreamGenerator, identity_word, word_adder
from app.services.sboxes import ByteSBoxKind, MixOrientation, s1_layer, s2_layer

logger = logging.getLogger(__name__)

INIT_ROUNDS = 32
ONES = WORD_MASK


def load_key(key: Snow3gKey) -> List[int]:
    k = key.k
    iv = key.iv_word
    return [
        k(0) ^ ONES, k(1) ^ ONES, k(2) ^ ONES, k(3) ^ ONES,
        k(0), k(1), k(2), k(3),
        k(0) ^ ONES, k(1) ^ ONES ^ iv(3), k(2) ^ ONES ^ iv(2), k(3) ^ ONES,
        k(0) ^ iv(1), k(1), k(2), k(3) ^ iv(0),
    ]


class Snow3g(KeystreamGenerator):
    """
    SNOW 3G keystream generator.

    Args:
        key: 128-bit key and IV
        orientation: MixColumn layout for both S1 and S2
        variant: REAL or LINEARIZED (addition becomes XOR, S1 and S2 become identity)
    """

    CIPHER = "snow3g"

    def __init__(self,
                 key: Snow3gKey,
                 orientation: MixOrientation = MixOrientation.GPP,
                 variant: CipherVariant = CipherVariant.REAL):
        self._configure(orientation, variant)
        self.lfsr = load_key(key)
        self.r1 = self.r2 = self.r3 = 0
        self.clock = 0
        self._initialize()

    def _configure(self, orientation: MixOrientation, variant: CipherVariant) -> None:
        self.orientation = orientation
        self.variant = variant
        self._add = word_adder(variant)
        if variant is CipherVariant.REAL:
            self._s1 = s1_layer(ByteSBoxKind.AES, orientation)
            self._s2 = s2_layer(orientation)
        else:
            self._s1 = self._s2 = identity_word
        tables = build_alpha_tables()
        self._mul_a = tables.mul_a
        self._mul_ainv = tables.mul_ainv

    @classmethod
    def from_state(cls,
                   state: Snow3gState,
                   orientation: MixOrientation = MixOrientation.GPP,
                   variant: CipherVariant = CipherVariant.REAL) -> "Snow3g":
        cipher = cls.__new__(cls)
        cipher._configure(orientation, variant)
        cipher.lfsr = list(state.lfsr)
        cipher.r1, cipher.r2, cipher.r3 = state.r1, state.r2, state.r3
        cipher.clock = state.clock
        return cipher

    def _initialize(self) -> None:
        for _ in range(INIT_ROUNDS):
            self.lfsr_step(self.clock_fsm())
        # 3GPP keystream mode starts with one FSM clock whose output is dropped.
        self._step()
        self.clock = 0
        logger.debug("snow3g initialized (matrix=%s, variant=%s)", self.orientation.value, self.variant.value)

    def clock_fsm(self) -> int:
        s = self.lfsr
        f = self._add(s[15], self.r1) ^ self.r2
        r = self._add(self.r2, self.r3 ^ s[5])
        self.r3 = self._s2(self.r2)
        self.r2 = self._s1(self.r1)
        self.r1 = r
        return f

    def lfsr_step(self, extra: int = 0) -> None:
        s = self.lfsr
        v = (((s[0] << 8) & WORD_MASK) ^ self._mul_a[s[0] >> 24] ^ s[2]
             ^ (s[11] >> 8) ^ self._mul_ainv[s[11] & 0xFF] ^ extra)
        s.append(v)
        del s[0]

    def _step(self) -> int:
        z = self.clock_fsm() ^ self.lfsr[0]
        self.lfsr_step()
        self.clock += 1
        return z

    def snapshot(self) -> Snow3gState:
        return Snow3gState(tuple(self.lfsr), self.r1, self.r2, self.r3, self.clock)

    def clone(self) -> "Snow3g":
        return snow3g_restore(self.snapshot(), self.orientation, self.variant)

    def __repr__(self) -> str:
        return f"Snow3g(clock={self.clock}, matrix={self.orientation.value}, variant={self.variant.value})"


def snow3g_init(key: Snow3gKey, **options) -> Snow3g:
    return Snow3g(key, **options)


def snow3g_step(cipher: Snow3g) -> int:
    return cipher.step()


def snow3g_snapshot(cipher: Snow3g) -> Snow3gState:
    return cipher.snapshot()


def snow3g_restore(state: Snow3gState,
                   orientation: MixOrientation = MixOrientation.GPP,
                   variant: CipherVariant = CipherVariant.REAL) -> Snow3g:
    return Snow3g.from_state(state, orientation, variant)
