"""
Key and IV containers.

Hex strings are the only input format. Words are read left to right, so
the first eight hex digits are the first word of the tuple each cipher's
key layout names (k1 for SNOW 1.0, k0 for SNOW 2.0, IV3 for SNOW 2.0 IVs).
"""
import re
from typing import Any, Dict, Sequence, Tuple

from app.models.errors import ParameterError

_HEX_RE = re.compile(r"^[0-9a-fA-F]*$")


def parse_hex_words(text: str, expected_words: int, what: str = "value") -> Tuple[int, ...]:
    """
    Parse a hex string into 32-bit words.

    Args:
        text: Hex digits, optionally prefixed with 0x; spaces and underscores are ignored
        expected_words: Required number of words
        what: Label for error messages

    Returns:
        Tuple of words in string order

    Raises:
        ParameterError: On bad characters or wrong length
    """
    cleaned = text.strip().replace(" ", "").replace("_", "")
    if cleaned[:2].lower() == "0x":
        cleaned = cleaned[2:]
    if not _HEX_RE.match(cleaned):
        raise ParameterError(f"{what} is not a hex string: {text!r}")
    if len(cleaned) != 8 * expected_words:
        raise ParameterError(
            f"{what} must be {8 * expected_words} hex digits ({32 * expected_words} bits), got {len(cleaned)}"
        )
    return tuple(int(cleaned[i:i + 8], 16) for i in range(0, len(cleaned), 8))


def format_hex_words(words: Sequence[int]) -> str:
    return "".join(f"{w:08x}" for w in words)


class CipherKey:
    """
    Base key/IV pair; subclasses fix the sizes.

    Attributes:
        key: Key words in string order
        iv: IV words in string order
    """

    CIPHER = ""
    KEY_WORDS = 0
    IV_WORDS = 0

    def __init__(self, key: Sequence[int], iv: Sequence[int]):
        self.key = tuple(key)
        self.iv = tuple(iv)
        self._validate()

    def _validate(self) -> None:
        if len(self.key) != self.KEY_WORDS:
            raise ParameterError(
                f"{self.CIPHER} key must be {self.KEY_WORDS} words ({32 * self.KEY_WORDS} bits), got {len(self.key)}"
            )
        if len(self.iv) != self.IV_WORDS:
            raise ParameterError(
                f"{self.CIPHER} IV must be {self.IV_WORDS} words ({32 * self.IV_WORDS} bits), got {len(self.iv)}"
            )
        for w in self.key + self.iv:
            if not 0 <= w <= 0xFFFFFFFF:
                raise ParameterError("Key and IV entries must be 32-bit words")

    @classmethod
    def from_hex(cls, key_hex: str, iv_hex: str) -> "CipherKey":
        return cls(parse_hex_words(key_hex, cls.KEY_WORDS, f"{cls.CIPHER} key"),
                   parse_hex_words(iv_hex, cls.IV_WORDS, f"{cls.CIPHER} IV"))

    def to_dict(self) -> Dict[str, Any]:
        return {"cipher": self.CIPHER, "key": format_hex_words(self.key), "iv": format_hex_words(self.iv)}

    def __eq__(self, other) -> bool:
        return type(other) is type(self) and other.key == self.key and other.iv == self.iv

    def __repr__(self) -> str:
        # Key material stays out of reprs and logs.
        return f"{type(self).__name__}(key=<{32 * self.KEY_WORDS} bits>, iv={format_hex_words(self.iv)})"


class Snow1Key(CipherKey):
    """256-bit key (k1..k8) and 64-bit IV given as (IV2, IV1)."""

    CIPHER = "snow1"
    KEY_WORDS = 8
    IV_WORDS = 2

    @property
    def iv1(self) -> int:
        return self.iv[1]

    @property
    def iv2(self) -> int:
        return self.iv[0]


class Snow2Key(CipherKey):
    """256-bit key (k0..k7) and 128-bit IV given as (IV3, IV2, IV1, IV0)."""

    CIPHER = "snow2"
    KEY_WORDS = 8
    IV_WORDS = 4

    def iv_word(self, i: int) -> int:
        """IV_i for i in 0..3."""
        return self.iv[3 - i]


class Snow3gKey(CipherKey):
    """128-bit key given as (k3, k2, k1, k0) and IV given as (IV3, IV2, IV1, IV0)."""

    CIPHER = "snow3g"
    KEY_WORDS = 4
    IV_WORDS = 4

    def k(self, i: int) -> int:
        return self.key[3 - i]

    def iv_word(self, i: int) -> int:
        return self.iv[3 - i]


KEY_TYPES = {cls.CIPHER: cls for cls in (Snow1Key, Snow2Key, Snow3gKey)}
