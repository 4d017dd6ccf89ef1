"""
Cipher registry used by the CLI and the vector runner.

Maps a cipher name to its key class and generator class, and turns
string options ("aes", "circulant", "linearized", ...) into the enums the
constructors take.
"""
from typing import Any, Dict, List, Optional

from app.models.errors import ParameterError
from app.models.keys import KEY_TYPES
from app.services.keystream import CipherVariant, KeystreamGenerator
from app.services.sboxes import ByteSBoxKind, MixOrientation
from app.services.snow1 import Snow1, Snow1InitMode
from app.services.snow2 import Snow2, Snow2Arithmetic
from app.services.snow3g import Snow3g

CIPHERS = {
    Snow1.CIPHER: Snow1,
    Snow2.CIPHER: Snow2,
    Snow3g.CIPHER: Snow3g,
}

# Option name -> (enum, ciphers accepting it, constructor keyword)
_ENUM_OPTIONS = {
    "variant": (CipherVariant, ("snow1", "snow2", "snow3g"), "variant"),
    "init_mode": (Snow1InitMode, ("snow1",), "init_mode"),
    "sbox": (ByteSBoxKind, ("snow2",), "sbox"),
    "matrix": (MixOrientation, ("snow2", "snow3g"), "orientation"),
    "arithmetic": (Snow2Arithmetic, ("snow2",), "arithmetic"),
}


def cipher_names() -> List[str]:
    return list(CIPHERS)


def cipher_accepts(cipher: str, option: str) -> bool:
    if option == "limit":
        return cipher == "snow2"
    return option in _ENUM_OPTIONS and cipher in _ENUM_OPTIONS[option][1]


def _enum_value(enum_cls, value: Any):
    if isinstance(value, enum_cls):
        return value
    try:
        return enum_cls(value)
    except ValueError:
        raise ParameterError(f"Invalid value {value!r}. Must be one of: {enum_cls.values()}") from None


def cipher_options(cipher: str, **options: Optional[Any]) -> Dict[str, Any]:
    """
    Convert loose option values into constructor keywords.

    None values are dropped so callers can pass argparse results straight through.

    Raises:
        ParameterError: Unknown option, an option the cipher does not take, or a bad value
    """
    kwargs: Dict[str, Any] = {}
    for name, value in options.items():
        if value is None:
            continue
        if name == "limit":
            if cipher != "snow2":
                raise ParameterError(f"Option 'limit' does not apply to {cipher}")
            kwargs["limit"] = int(value)
            continue
        if name not in _ENUM_OPTIONS:
            raise ParameterError(f"Unknown cipher option '{name}'")
        enum_cls, allowed, keyword = _ENUM_OPTIONS[name]
        if cipher not in allowed:
            raise ParameterError(f"Option '{name}' does not apply to {cipher}")
        kwargs[keyword] = _enum_value(enum_cls, value)
    return kwargs


def create_cipher(name: str, key_hex: str, iv_hex: str, **options: Optional[Any]) -> KeystreamGenerator:
    """
    Build and initialize a cipher from hex strings.

    Args:
        name: snow1, snow2 or snow3g
        key_hex: Key, first word leftmost
        iv_hex: IV, first word leftmost
        **options: variant, init_mode, sbox, matrix, arithmetic, limit

    Returns:
        An initialized generator positioned at the first keystream word
    """
    if name not in CIPHERS:
        raise ParameterError(f"Unknown cipher '{name}'. Must be one of: {cipher_names()}")
    key = KEY_TYPES[name].from_hex(key_hex, iv_hex)
    return CIPHERS[name](key, **cipher_options(name, **options))
