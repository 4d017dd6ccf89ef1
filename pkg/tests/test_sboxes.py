import pytest

import oracles
from app.models.errors import ParameterError
from app.services.field import AES_FIELD, S2_FIELD, SNOW2_FIELD
from app.services.sboxes import (
    BitPermutation,
    ByteSBox,
    ByteSBoxKind,
    MixMatrix,
    MixOrientation,
    WordSBox,
    aes_sbox,
    configured_s2_sbox,
    dickson_s2_sbox,
    inversion_sbox,
    s1_layer,
    s1_word,
    s2_layer,
    s2_word,
    snow1_sbox,
    snow1_sbox_word,
)
from app.utils.table_files import export_sbox


def test_aes_sbox_known_entries():
    table = aes_sbox().table
    assert table[0x00] == 0x63
    assert table[0x01] == 0x7C
    assert table[0x53] == 0xED
    assert list(table) == oracles.AES_SBOX


def test_inversion_sbox_is_pure_inversion():
    table = inversion_sbox(SNOW2_FIELD).table
    assert table[0] == 0
    assert list(table) == [oracles.ginv(x, 0x1A9) for x in range(256)]


def test_s2_table_from_dickson_polynomial():
    table = dickson_s2_sbox().table
    assert table[:3] == (0x25, 0x24, 0x73)
    assert list(table) == oracles.S2_SBOX


def test_snow1_sbox_matches_power_map():
    assert list(snow1_sbox().table) == oracles.SNOW1_SBOX


def test_byte_sbox_inverse_round_trip():
    sbox = aes_sbox()
    inv = sbox.inverse()
    assert all(inv(sbox(x)) == x for x in range(256))
    assert inv.name == "aes-inverse"


def test_byte_sbox_rejects_non_permutations():
    with pytest.raises(ParameterError):
        ByteSBox([0] * 256, "flat")
    with pytest.raises(ParameterError):
        ByteSBox(range(255), "short")


def test_singular_matrix_rejected():
    with pytest.raises(ParameterError):
        MixMatrix([(1, 1, 1, 1)] * 4, AES_FIELD)
    with pytest.raises(ParameterError):
        MixMatrix([(1, 2, 3)] * 4, AES_FIELD)


@pytest.mark.parametrize("orientation", list(MixOrientation))
def test_every_orientation_is_invertible(orientation):
    MixMatrix.from_orientation(orientation, AES_FIELD)
    MixMatrix.from_orientation(orientation, S2_FIELD)


def test_word_tables_match_naive_evaluation(rng):
    for orientation in MixOrientation:
        layer = s1_layer(ByteSBoxKind.AES, orientation)
        for _ in range(200):
            w = rng.getrandbits(32)
            assert layer(w) == layer.naive(w)


def test_s1_circulant_and_literal_against_oracle(rng):
    circulant = s1_layer(ByteSBoxKind.AES, MixOrientation.CIRCULANT)
    literal = s1_layer(ByteSBoxKind.AES, MixOrientation.LITERAL)
    inversion = s1_layer(ByteSBoxKind.INVERSION, MixOrientation.CIRCULANT)
    inv_table = list(inversion_sbox(SNOW2_FIELD).table)
    for _ in range(200):
        w = rng.getrandbits(32)
        assert circulant(w) == oracles.s1_word(w, oracles.CIRCULANT_ROWS)
        assert literal(w) == oracles.s1_word(w, oracles.LITERAL_ROWS)
        assert inversion(w) == oracles.s1_word(w, oracles.CIRCULANT_ROWS, inv_table)


def test_gpp_layers_match_3gpp_formulas(rng):
    s1 = s1_layer(ByteSBoxKind.AES, MixOrientation.GPP)
    s2 = s2_layer(MixOrientation.GPP)
    for _ in range(200):
        w = rng.getrandbits(32)
        assert s1(w) == oracles.s1_3gpp(w)
        assert s2(w) == oracles.s2_3gpp(w)
        assert s2_word(w) == oracles.s2_3gpp(w)


def test_s1_is_not_linear(rng):
    pairs = [(rng.getrandbits(32), rng.getrandbits(32)) for _ in range(20)]
    assert any(s1_word(a ^ b) != s1_word(a) ^ s1_word(b) for a, b in pairs)


def test_identity_sbox_gives_a_linear_layer(rng):
    layer = WordSBox(ByteSBox.identity(), MixMatrix.from_orientation(MixOrientation.CIRCULANT, AES_FIELD))
    for _ in range(50):
        a, b = rng.getrandbits(32), rng.getrandbits(32)
        assert layer(a ^ b) == layer(a) ^ layer(b)


def test_bit_permutation():
    identity = BitPermutation()
    assert identity.is_identity
    assert identity.apply(0x1234) == 0x1234

    reverse = BitPermutation(list(range(31, -1, -1)))
    assert reverse.apply(1) == 0x80000000
    assert reverse.inverse().apply(reverse.apply(0xCAFEBABE)) == 0xCAFEBABE
    with pytest.raises(ParameterError):
        BitPermutation([0] * 32)


def test_snow1_sbox_word_with_permutation():
    w = 0x01020304
    plain = snow1_sbox_word(w)
    assert plain == oracles.snow1_sbox_word(w)
    swap = BitPermutation([1, 0] + list(range(2, 32)))
    permuted = snow1_sbox_word(w, swap)
    assert swap.inverse().apply(permuted) == plain


def test_s2_table_file_override(tmp_path, monkeypatch):
    path = export_sbox(aes_sbox(), tmp_path / "override.tbl", "test fixture")
    monkeypatch.setenv("SNOWLAB_S2_TABLE", str(path))
    assert configured_s2_sbox() == aes_sbox()
    monkeypatch.delenv("SNOWLAB_S2_TABLE")
    assert configured_s2_sbox() == dickson_s2_sbox()
