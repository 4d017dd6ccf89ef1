from typing import Any, Dict, List, Optional, Sequence

from app.models.errors import ParameterError
from app.models.keys import KEY_TYPES, format_hex_words, parse_hex_words


class VectorEntry:
    """
    One known-answer case.

    Attributes:
        cipher: snow1, snow2 or snow3g
        key: Key hex string
        iv: IV hex string
        discard: Keystream words skipped before the expected words
        keystream: Expected words
        line: Source line number, when loaded from a file
    """

    def __init__(self,
                 cipher: str,
                 key: str,
                 iv: str,
                 keystream: Sequence[int],
                 discard: int = 0,
                 line: Optional[int] = None):
        self.cipher = cipher
        self.key = key
        self.iv = iv
        self.keystream = list(keystream)
        self.discard = discard
        self.line = line

        self._validate()

    def _validate(self) -> None:
        if self.cipher not in KEY_TYPES:
            raise ParameterError(f"Unknown cipher '{self.cipher}'. Must be one of: {list(KEY_TYPES)}")
        key_type = KEY_TYPES[self.cipher]
        parse_hex_words(self.key, key_type.KEY_WORDS, f"{self.cipher} key")
        parse_hex_words(self.iv, key_type.IV_WORDS, f"{self.cipher} IV")
        if self.discard < 0:
            raise ParameterError("discard cannot be negative")
        if not self.keystream:
            raise ParameterError("A vector needs at least one expected keystream word")
        if any(not 0 <= w <= 0xFFFFFFFF for w in self.keystream):
            raise ParameterError("Expected keystream entries must be 32-bit words")

    def to_line(self) -> str:
        ks = " ".join(f"{w:08x}" for w in self.keystream)
        return f"cipher={self.cipher} key={self.key} iv={self.iv} discard={self.discard} ks={ks}"

    def to_dict(self) -> Dict[str, Any]:
        return {
            "cipher": self.cipher,
            "iv": self.iv,
            "discard": self.discard,
            "keystream": format_hex_words(self.keystream),
            "line": self.line,
        }

    def __repr__(self) -> str:
        return f"VectorEntry(cipher='{self.cipher}', iv={self.iv}, words={len(self.keystream)}, line={self.line})"


class VectorFile:
    """A parsed vector file: its entries and where they came from."""

    def __init__(self, entries: List[VectorEntry], path: Optional[str] = None):
        self.entries = list(entries)
        self.path = path

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def to_text(self) -> str:
        return "".join(e.to_line() + "\n" for e in self.entries)

    def __repr__(self) -> str:
        return f"VectorFile(path={self.path!r}, entries={len(self.entries)})"
