"""
Mini-SNOW instance files.

    # comment
    m=4
    n=4
    taps=0:1 1:0 2:14
    arith=add
    mid=1
    poly=0x13
    sbox=0 1 9 e d b 7 6 f 2 c 5 a 4 3 8
    sbox_file=mini_sbox.txt

Only m, n and taps are required. sbox holds 2^m hex values inline;
sbox_file names a table file in the S-box table format instead.
"""
import logging
from pathlib import Path
from typing import Dict, List, Tuple, Union

from app.config import DATA_DIR
from app.models.errors import ParameterError
from app.models.mini import MiniParams
from app.utils.table_files import TableFileLoader

logger = logging.getLogger(__name__)

KNOWN_KEYS = ("m", "n", "taps", "arith", "mid", "poly", "sbox", "sbox_file")
DEFAULT_CONFIG = DATA_DIR / "mini_default.cfg"


def parse_taps(text: str) -> List[Tuple[int, int]]:
    """'0:1 1:0 2:14' -> [(0, 1), (1, 0), (2, 14)]"""
    taps = []
    for token in text.replace(",", " ").split():
        try:
            index, exponent = token.split(":")
            taps.append((int(index), int(exponent)))
        except ValueError:
            raise ParameterError(f"Bad tap '{token}'; expected index:exponent")
    return taps


class MiniConfigLoader:
    """Reads mini-SNOW parameter files."""

    def __init__(self, data_dir: Union[str, Path] = DATA_DIR):
        self.data_dir = Path(data_dir)
        self.tables = TableFileLoader(self.data_dir)

    def parse_text(self, text: str, base: Path = None) -> MiniParams:
        fields: Dict[str, str] = {}
        for number, raw in enumerate(text.splitlines(), start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ParameterError(f"line {number}: expected key=value")
            key, value = (part.strip() for part in line.split("=", 1))
            if key not in KNOWN_KEYS:
                raise ParameterError(f"line {number}: unknown key '{key}'")
            fields[key] = value

        missing = [k for k in ("m", "n", "taps") if k not in fields]
        if missing:
            raise ParameterError(f"Mini config is missing: {', '.join(missing)}")

        sbox = None
        try:
            if "sbox" in fields:
                sbox = [int(v, 16) for v in fields["sbox"].split()]
            elif "sbox_file" in fields:
                path = Path(fields["sbox_file"])
                if base is not None and not path.is_absolute() and (base / path).exists():
                    path = base / path
                sbox = self.tables.read_table(path)[1]
            return MiniParams(
                m=int(fields["m"]),
                n=int(fields["n"]),
                taps=parse_taps(fields["taps"]),
                sbox=sbox,
                arith=fields.get("arith", "add"),
                mid=int(fields["mid"]) if "mid" in fields else None,
                poly=int(fields["poly"], 0) if "poly" in fields else None,
            )
        except ValueError as e:
            if isinstance(e, ParameterError):
                raise
            raise ParameterError(f"Bad number in mini config: {e}") from e

    def load(self, path: Union[str, Path] = DEFAULT_CONFIG) -> MiniParams:
        path = Path(path)
        if not path.exists() and (self.data_dir / path).exists():
            path = self.data_dir / path
        params = self.parse_text(path.read_text(encoding="utf-8"), path.parent)
        logger.debug("Loaded %r from %s", params, path)
        return params


def load_mini_config(path: Union[str, Path] = DEFAULT_CONFIG) -> MiniParams:
    return MiniConfigLoader().load(path)
