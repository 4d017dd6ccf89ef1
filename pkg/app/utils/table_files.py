"""
S-box and MixColumn table files.

    # source: where the numbers came from
    name=s2-dickson
    digest=<sha256 of the table bytes>
    63 7c 77 7b f2 6b 6f c5 30 01 67 2b fe d7 ab 76
    ...

S-boxes hold 256 bytes, 16 per line. Matrix files add `modulus=0x..` and
hold four rows of four bytes. Comment lines other than the source header
are ignored; the digest line is optional but checked when present.
"""
import hashlib
import logging
from pathlib import Path
from typing import Dict, List, Tuple, Union

from app.config import DATA_DIR
from app.models.errors import ParameterError, TableFileError
from app.services.field import Gf8Modulus
from app.services.sboxes import ByteSBox, MixMatrix

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]
BYTES_PER_LINE = 16


def table_digest(values: List[int]) -> str:
    return hashlib.sha256(bytes(values)).hexdigest()


class TableFileLoader:
    """Reads and writes table files, resolving bare names against DATA/."""

    def __init__(self, data_dir: PathLike = DATA_DIR):
        self.data_dir = Path(data_dir)

    def resolve(self, path: PathLike) -> Path:
        path = Path(path)
        if not path.is_absolute() and not path.exists() and (self.data_dir / path).exists():
            return self.data_dir / path
        return path

    def read_table(self, path: PathLike) -> Tuple[Dict[str, str], List[int]]:
        """
        Parse a table file into its header fields and byte values.

        Raises:
            TableFileError: Malformed line, bad digest or unreadable file
        """
        path = self.resolve(path)
        try:
            text = path.read_text(encoding="utf-8")
        except OSError as e:
            raise TableFileError(f"Cannot read table file {path}: {e}") from e

        header: Dict[str, str] = {}
        values: List[int] = []
        for number, raw in enumerate(text.splitlines(), start=1):
            line = raw.strip()
            if not line:
                continue
            if line.startswith("#"):
                body = line[1:].strip()
                if body.lower().startswith("source:"):
                    header["source"] = body.split(":", 1)[1].strip()
                continue
            if "=" in line:
                key, value = (part.strip() for part in line.split("=", 1))
                header[key] = value
                continue
            try:
                values.extend(int(tok, 16) for tok in line.split())
            except ValueError:
                raise TableFileError(f"{path}:{number}: expected hex bytes, got '{line}'")
        if any(not 0 <= v <= 0xFF for v in values):
            raise TableFileError(f"{path}: table entries must be bytes")
        if "digest" in header and header["digest"] != table_digest(values):
            raise TableFileError(f"{path}: digest does not match the table contents")
        if "source" not in header:
            logger.warning("Table file %s has no '# source:' header", path)
        return header, values

    def load_sbox(self, path: PathLike) -> ByteSBox:
        header, values = self.read_table(path)
        name = header.get("name", Path(path).stem)
        try:
            sbox = ByteSBox(values, name)
        except ParameterError as e:
            raise TableFileError(f"{path}: {e}") from e
        logger.debug("Loaded S-box '%s' from %s", name, path)
        return sbox

    def load_matrix(self, path: PathLike) -> MixMatrix:
        header, values = self.read_table(path)
        if len(values) != 16:
            raise TableFileError(f"{path}: a MixColumn matrix needs 16 bytes, got {len(values)}")
        try:
            modulus = Gf8Modulus(int(header.get("modulus", "0x1B"), 16))
            return MixMatrix([values[4 * r:4 * r + 4] for r in range(4)], modulus, header.get("name", "custom"))
        except (ParameterError, ValueError) as e:
            raise TableFileError(f"{path}: {e}") from e

    def write_table(self, path: PathLike, name: str, values: List[int], source: str,
                    per_line: int = BYTES_PER_LINE, **fields: str) -> Path:
        lines = [f"# source: {source}", f"name={name}"]
        lines += [f"{k}={v}" for k, v in fields.items()]
        lines.append(f"digest={table_digest(values)}")
        for start in range(0, len(values), per_line):
            lines.append(" ".join(f"{v:02x}" for v in values[start:start + per_line]))
        path = Path(path)
        try:
            path.write_text("\n".join(lines) + "\n", encoding="utf-8")
        except OSError as e:
            raise TableFileError(f"Cannot write table file {path}: {e}") from e
        logger.info("Wrote %s (%d bytes of table)", path, len(values))
        return path


def load_sbox_file(path: PathLike) -> ByteSBox:
    return TableFileLoader().load_sbox(path)


def export_sbox(sbox: ByteSBox, path: PathLike, source: str = "computed by snowlab") -> Path:
    return TableFileLoader().write_table(path, sbox.name, list(sbox.table), source)


def load_matrix_file(path: PathLike) -> MixMatrix:
    return TableFileLoader().load_matrix(path)


def export_matrix(matrix: MixMatrix, path: PathLike, source: str = "computed by snowlab") -> Path:
    values = [v for row in matrix.rows for v in row]
    return TableFileLoader().write_table(path, matrix.name, values, source, per_line=4,
                                         modulus=f"0x{matrix.modulus.reduction:02X}")
