"""Common surface of the word-oriented keystream generators."""
from abc import ABC, abstractmethod
from enum import Enum
from typing import List

from app.models.errors import ParameterError
from app.services.field import add_mod32, words_to_bytes


class CipherVariant(Enum):
    """REAL is the cipher; LINEARIZED replaces addition mod 2^32 by XOR and the S-boxes by identity."""
    REAL = "real"
    LINEARIZED = "linearized"

    @classmethod
    def values(cls) -> List[str]:
        return [v.value for v in cls]


def xor_words(a: int, b: int) -> int:
    return a ^ b


def word_adder(variant: CipherVariant):
    return add_mod32 if variant is CipherVariant.REAL else xor_words


def identity_word(w: int) -> int:
    return w


class KeystreamGenerator(ABC):
    """
    Base class for SNOW ciphers.

    Subclasses implement _step(), which clocks the cipher once and returns
    one keystream word. Public entry points go through _reserve() so a
    budget can refuse work before any state changes.
    """

    CIPHER = ""

    clock: int

    @abstractmethod
    def _step(self) -> int:
        """Produce one word and clock the cipher."""

    def _reserve(self, words: int) -> None:
        """Hook for keystream budgets; unlimited by default."""

    def step(self) -> int:
        self._reserve(1)
        return self._step()

    def keystream(self, n: int) -> List[int]:
        if n < 0:
            raise ParameterError("Word count must be non-negative")
        self._reserve(n)
        step = self._step
        return [step() for _ in range(n)]

    def keystream_bytes(self, nbytes: int) -> bytes:
        if nbytes < 0:
            raise ParameterError("Byte count must be non-negative")
        return words_to_bytes(self.keystream(-(-nbytes // 4)))[:nbytes]

    def encrypt(self, data: bytes) -> bytes:
        """XOR data with keystream words serialized big-endian."""
        if not data:
            return b""
        ks = self.keystream_bytes(len(data))
        return (int.from_bytes(data, "big") ^ int.from_bytes(ks, "big")).to_bytes(len(data), "big")

    decrypt = encrypt
