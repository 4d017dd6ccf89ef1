"""
SNOW 1.0.

16-word LFSR over F2[y]/f(y) with feedback alpha(s0 + s3 + s9), and an FSM
of two registers:

    Fm  = (s0 + R1) ^ R2
    R1' = ((Fm + R2) <<< 7) ^ R1
    R2' = S(R1)
    z   = Fm ^ s0
"""
import logging
from enum import Enum
from typing import List, Optional

from app.models.keys import Snow1Key
from app.models.state import Snow1State
from app.services.field import WORD_MASK, mul_alpha_snow1, rotl7
from app.services.keystream import CipherVariant, KeystreamGenerator, identity_word, word_adder
from app.services.sboxes import BitPermutation, snow1_sbox_word

logger = logging.getLogger(__name__)

INIT_ROUNDS = 32
ONES = WORD_MASK  # the all-one word complementing the key halves


class Snow1InitMode(Enum):
    """How the FSM output enters the state during the 32 init clocks."""
    FEEDBACK = "feedback"          # XORed into the incoming feedback word
    WHOLE_STATE = "whole-state"    # XORed into every LFSR cell after the shift

    @classmethod
    def values(cls) -> List[str]:
        return [m.value for m in cls]


def load_key(key: Snow1Key) -> List[int]:
    """Initial LFSR contents before any clocking."""
    k = key.key
    return [k[0] ^ key.iv1, k[1], k[2], k[3] ^ key.iv2, k[4], k[5], k[6], k[7]] + [w ^ ONES for w in k]


class Snow1(KeystreamGenerator):
    """
    SNOW 1.0 keystream generator.

    Args:
        key: 256-bit key and 64-bit IV
        perm: Output bit permutation of the S-box (identity if None)
        init_mode: How Fm is absorbed during initialization
        variant: REAL or LINEARIZED
    """

    CIPHER = "snow1"

    def __init__(self,
                 key: Snow1Key,
                 perm: Optional[BitPermutation] = None,
                 init_mode: Snow1InitMode = Snow1InitMode.FEEDBACK,
                 variant: CipherVariant = CipherVariant.REAL):
        self._configure(perm, variant)
        self.init_mode = init_mode
        self.lfsr = load_key(key)
        self.r1 = 0
        self.r2 = 0
        self.clock = 0
        self._initialize()

    def _configure(self, perm: Optional[BitPermutation], variant: CipherVariant) -> None:
        self.perm = perm or BitPermutation()
        self.variant = variant
        self._add = word_adder(variant)
        if variant is CipherVariant.REAL:
            self._sbox = lambda w: snow1_sbox_word(w, self.perm)
        else:
            self._sbox = identity_word

    @classmethod
    def from_state(cls,
                   state: Snow1State,
                   perm: Optional[BitPermutation] = None,
                   variant: CipherVariant = CipherVariant.REAL) -> "Snow1":
        """Resume from a snapshot without running initialization."""
        cipher = cls.__new__(cls)
        cipher._configure(perm, variant)
        cipher.init_mode = Snow1InitMode.FEEDBACK
        cipher.lfsr = list(state.lfsr)
        cipher.r1 = state.r1
        cipher.r2 = state.r2
        cipher.clock = state.clock
        return cipher

    def _initialize(self) -> None:
        for _ in range(INIT_ROUNDS):
            fm = self.fsm_step()
            if self.init_mode is Snow1InitMode.FEEDBACK:
                self.lfsr_step(fm)
            else:
                self.lfsr_step()
                self.lfsr = [w ^ fm for w in self.lfsr]
        logger.debug("snow1 initialized (%s mode)", self.init_mode.value)

    def fsm_output(self) -> int:
        return self._add(self.lfsr[0], self.r1) ^ self.r2

    def fsm_step(self) -> int:
        """Return Fm and update R1, R2."""
        fm = self.fsm_output()
        r1 = self.r1
        self.r1 = rotl7(self._add(fm, self.r2)) ^ r1
        self.r2 = self._sbox(r1)
        return fm

    def lfsr_step(self, extra: int = 0) -> None:
        """Shift in alpha(s0 ^ s3 ^ s9) ^ extra at the top."""
        s = self.lfsr
        s.append(mul_alpha_snow1(s[0] ^ s[3] ^ s[9]) ^ extra)
        del s[0]

    def _step(self) -> int:
        # fsm_step leaves the LFSR alone, so lfsr[0] is still St_t here
        z = self.fsm_step() ^ self.lfsr[0]
        self.lfsr_step()
        self.clock += 1
        return z

    def snapshot(self) -> Snow1State:
        return Snow1State(tuple(self.lfsr), self.r1, self.r2, self.clock)

    def __repr__(self) -> str:
        return f"Snow1(clock={self.clock}, init_mode={self.init_mode.value}, variant={self.variant.value})"


def snow1_init(key: Snow1Key, **options) -> Snow1:
    return Snow1(key, **options)


def snow1_fsm_step(cipher: Snow1) -> int:
    return cipher.fsm_step()


def snow1_lfsr_step(cipher: Snow1) -> None:
    cipher.lfsr_step()


def snow1_keystream(cipher: Snow1, n: int) -> List[int]:
    return cipher.keystream(n)
