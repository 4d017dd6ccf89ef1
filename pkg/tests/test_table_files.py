import logging

import pytest

from app.models.errors import TableFileError
from app.services.field import AES_FIELD, S2_FIELD
from app.services.sboxes import MixMatrix, MixOrientation, aes_sbox, dickson_s2_sbox
from app.utils.table_files import (TableFileLoader, export_matrix, export_sbox, load_matrix_file, load_sbox_file,
                                   table_digest)


def test_sbox_file_round_trip(tmp_path):
    path = export_sbox(dickson_s2_sbox(), tmp_path / "s2.tbl")
    text = path.read_text()
    assert text.startswith("# source: computed by snowlab\n")
    assert f"digest={table_digest(list(dickson_s2_sbox().table))}" in text
    loaded = load_sbox_file(path)
    assert loaded == dickson_s2_sbox()
    assert loaded.name == dickson_s2_sbox().name


def test_matrix_file_round_trip(tmp_path):
    matrix = MixMatrix.from_orientation(MixOrientation.GPP, S2_FIELD)
    path = export_matrix(matrix, tmp_path / "mix.tbl")
    assert "modulus=0x69" in path.read_text()
    loaded = load_matrix_file(path)
    assert loaded.rows == matrix.rows
    assert loaded.modulus == S2_FIELD


def test_digest_mismatch(tmp_path):
    path = export_sbox(aes_sbox(), tmp_path / "aes.tbl")
    lines = path.read_text().splitlines()
    lines[-1] = "00" + lines[-1][2:]
    path.write_text("\n".join(lines) + "\n")
    with pytest.raises(TableFileError, match="digest"):
        load_sbox_file(path)


def test_bad_hex_reports_line(tmp_path):
    path = tmp_path / "bad.tbl"
    path.write_text("# source: test\nname=bad\n00 01 zz\n")
    with pytest.raises(TableFileError, match=":3:"):
        load_sbox_file(path)


def test_non_permutation_rejected(tmp_path):
    path = tmp_path / "flat.tbl"
    path.write_text("# source: test\n" + ("00 " * 256) + "\n")
    with pytest.raises(TableFileError, match="permutation"):
        load_sbox_file(path)


def test_singular_matrix_rejected(tmp_path):
    path = tmp_path / "singular.tbl"
    path.write_text("# source: test\nmodulus=0x1B\n01 01 01 01\n01 01 01 01\n02 03 01 01\n01 02 03 01\n")
    with pytest.raises(TableFileError, match="singular"):
        load_matrix_file(path)
    path.write_text("# source: test\n01 02 03\n")
    with pytest.raises(TableFileError, match="16 bytes"):
        load_matrix_file(path)


def test_missing_source_header_warns(tmp_path, caplog):
    path = tmp_path / "anon.tbl"
    path.write_text(" ".join(f"{v:02x}" for v in range(256)) + "\n")
    with caplog.at_level(logging.WARNING, logger="app.utils.table_files"):
        sbox = load_sbox_file(path)
    assert sbox.name == "anon"
    assert "no '# source:' header" in caplog.text


def test_missing_file():
    with pytest.raises(TableFileError, match="Cannot read"):
        load_sbox_file("/nonexistent/table.tbl")


def test_bare_names_resolve_against_data_dir(tmp_path):
    export_sbox(aes_sbox(), tmp_path / "aes.tbl")
    loader = TableFileLoader(tmp_path)
    assert loader.load_sbox("aes.tbl") == aes_sbox()
    header, values = loader.read_table("aes.tbl")
    assert header["source"] == "computed by snowlab"
    assert len(values) == 256


def test_aes_matrix_modulus_default(tmp_path):
    path = tmp_path / "aes-mix.tbl"
    rows = MixMatrix.from_orientation(MixOrientation.CIRCULANT, AES_FIELD).rows
    path.write_text("# source: test\n" + "\n".join(" ".join(f"{v:02x}" for v in r) for r in rows) + "\n")
    assert load_matrix_file(path).modulus == AES_FIELD
