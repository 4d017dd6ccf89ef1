import pytest

from app.models.errors import ParameterError
from app.utils.mini_config import DEFAULT_CONFIG, MiniConfigLoader, load_mini_config, parse_taps
from app.utils.table_files import TableFileLoader


def test_default_file():
    params = load_mini_config()
    assert DEFAULT_CONFIG.exists()
    assert (params.m, params.n) == (4, 4)
    assert params.taps == ((0, 1), (1, 0), (2, 14))
    assert params.arith == "add"


def test_parse_taps():
    assert parse_taps("0:1 1:0, 2:14") == [(0, 1), (1, 0), (2, 14)]
    with pytest.raises(ParameterError):
        parse_taps("0-1")


def test_inline_sbox_and_options():
    text = "m=4\nn=3\ntaps=0:1 2:3  # comment\narith=xor\nmid=2\npoly=0x19\nsbox=" + " ".join(
        f"{(v * 7) % 16:x}" for v in range(16))
    params = MiniConfigLoader().parse_text(text)
    assert params.sbox == tuple((v * 7) % 16 for v in range(16))
    assert (params.arith, params.mid, params.poly) == ("xor", 2, 0x19)


@pytest.mark.parametrize("text, message", [
    ("m=4\nn=4\n", "missing: taps"),
    ("m=4\nn=4\ntaps=0:1\ncolour=red\n", "unknown key"),
    ("m=4\nn=4\ntaps 0:1\n", "expected key=value"),
    ("m=four\nn=4\ntaps=0:1\n", "Bad number"),
    ("m=4\nn=4\ntaps=0:1\nsbox=0 1 2\n", "permutation"),
])
def test_errors(text, message):
    with pytest.raises(ParameterError, match=message):
        MiniConfigLoader().parse_text(text)


def test_sbox_file_relative_to_config(tmp_path):
    table = [(v * 3) % 16 for v in range(16)]
    TableFileLoader(tmp_path).write_table(tmp_path / "mini_sbox.txt", "mini", table, "test")
    config = tmp_path / "mini.cfg"
    config.write_text("m=4\nn=4\ntaps=0:1\nsbox_file=mini_sbox.txt\n")
    params = MiniConfigLoader(tmp_path).load(config)
    assert params.sbox == tuple(table)
