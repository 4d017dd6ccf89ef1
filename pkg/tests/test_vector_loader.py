import pytest

from app.models.errors import VectorFileError
from app.models.vector import VectorEntry, VectorFile
from app.utils.vector_loader import VectorLoader, load_vector_file

KEY = "0" * 32
IV = "1" * 32


def test_parse_text():
    text = (
        "# known answers\n"
        "\n"
        f"cipher=snow3g key={KEY} iv={IV} ks=00000001 00000002\n"
        f"cipher=snow2 key={'2' * 64} iv={IV} discard=5 ks=deadbeef\n"
    )
    vectors = VectorLoader().parse_text(text, "kat.vec")
    assert len(vectors) == 2
    first, second = vectors.entries
    assert first.keystream == [1, 2]
    assert first.line == 3
    assert second.discard == 5
    assert second.keystream == [0xDEADBEEF]


@pytest.mark.parametrize("line, message", [
    (f"cipher=snow3g key={KEY} iv={IV}", "Missing field"),
    (f"cipher=snow3g key={KEY} iv={IV} mode=x ks=00", "Unknown field"),
    (f"cipher=snow3g key={KEY} key={KEY} iv={IV} ks=00", "twice"),
    (f"cipher=snow3g key={KEY} iv={IV} ks=xyz", "Bad number"),
    (f"cipher=snow3g key=00 iv={IV} ks=00", "hex digits"),
    (f"cipher=snow3g {KEY} iv={IV} ks=00", "key=value"),
])
def test_errors_carry_line_numbers(line, message):
    with pytest.raises(VectorFileError, match=message) as exc:
        VectorLoader().parse_text(f"# header\n{line}\n", "kat.vec")
    assert exc.value.line == 2
    assert str(exc.value).startswith("kat.vec:2:")


def test_empty_file():
    with pytest.raises(VectorFileError, match="no vectors"):
        VectorLoader().parse_text("# nothing here\n")


def test_save_and_load(tmp_path):
    vectors = VectorFile([VectorEntry("snow1", "3" * 64, "4" * 16, [7, 8, 9], discard=2)])
    path = VectorLoader().save(vectors, tmp_path / "out.vec")
    loaded = load_vector_file(path)
    entry = loaded.entries[0]
    assert (entry.cipher, entry.key, entry.iv, entry.keystream, entry.discard) == ("snow1", "3" * 64, "4" * 16,
                                                                                   [7, 8, 9], 2)
    assert loaded.path == str(path)


def test_missing_file_is_os_error(tmp_path):
    with pytest.raises(OSError):
        load_vector_file(tmp_path / "absent.vec")
