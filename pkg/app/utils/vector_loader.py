"""
Known-answer vector files.

One case per line:

    cipher=snow3g key=<hex> iv=<hex> discard=0 ks=<word> <word> ...

`ks` takes the rest of the line. Blank lines and `#` comments are skipped.
"""
import logging
from pathlib import Path
from typing import Dict, List, Union

from app.models.errors import ParameterError, VectorFileError
from app.models.vector import VectorEntry, VectorFile

logger = logging.getLogger(__name__)

REQUIRED_FIELDS = ("cipher", "key", "iv", "ks")
KNOWN_FIELDS = REQUIRED_FIELDS + ("discard",)


class VectorLoader:
    """Parses vector files into VectorFile objects."""

    def parse_line(self, line: str, number: int, path: str = None) -> VectorEntry:
        fields: Dict[str, str] = {}
        rest = line
        if " ks=" in f" {line}":
            head, _, ks = f" {line}".partition(" ks=")
            rest = head.strip()
            fields["ks"] = ks.strip()
        for token in rest.split():
            if "=" not in token:
                raise VectorFileError(f"Expected key=value, got '{token}'", number, path)
            key, value = token.split("=", 1)
            if key not in KNOWN_FIELDS:
                raise VectorFileError(f"Unknown field '{key}'", number, path)
            if key in fields:
                raise VectorFileError(f"Field '{key}' given twice", number, path)
            fields[key] = value

        missing = [f for f in REQUIRED_FIELDS if f not in fields]
        if missing:
            raise VectorFileError(f"Missing field(s): {', '.join(missing)}", number, path)
        try:
            keystream = [int(w, 16) for w in fields["ks"].split()]
            discard = int(fields.get("discard", "0"))
            return VectorEntry(fields["cipher"], fields["key"], fields["iv"], keystream, discard, number)
        except ParameterError as e:
            raise VectorFileError(str(e), number, path) from e
        except ValueError as e:
            raise VectorFileError(f"Bad number: {e}", number, path) from e

    def parse_text(self, text: str, path: str = None) -> VectorFile:
        entries: List[VectorEntry] = []
        lines = text.splitlines()
        for number, raw in enumerate(lines, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            entries.append(self.parse_line(line, number, path))
        if not entries:
            raise VectorFileError("File contains no vectors", max(1, len(lines)), path)
        return VectorFile(entries, path)

    def load(self, path: Union[str, Path]) -> VectorFile:
        """
        Raises:
            OSError: File cannot be read
            VectorFileError: Parse error, with the line number
        """
        path = Path(path)
        vectors = self.parse_text(path.read_text(encoding="utf-8"), str(path))
        logger.info("Loaded %d vectors from %s", len(vectors), path)
        return vectors

    def save(self, vectors: VectorFile, path: Union[str, Path]) -> Path:
        path = Path(path)
        path.write_text(vectors.to_text(), encoding="utf-8")
        return path


def load_vector_file(path: Union[str, Path]) -> VectorFile:
    return VectorLoader().load(path)
