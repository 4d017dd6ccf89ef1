import json

import numpy as np
import pytest

import oracles
from app.cli import EXIT_BUDGET, EXIT_FAILED, EXIT_IO, EXIT_OK, EXIT_USAGE
from app.models.vector import VectorEntry, VectorFile
from app.services.analysis.linear_complexity import characteristic_to_connection, lfsr_sequence
from app.services.field import AES_FIELD
from app.services.mini_snow import find_primitive_params
from app.services.sboxes import configured_s2_sbox
from app.utils.table_files import load_matrix_file, load_sbox_file
from app.utils.vector_loader import VectorLoader

KEY3G = "2bd6459f82c5b300952c49104881ff48"
IV3G = "ea024714ad5c4d84df1f9b251c0bf45f"


def oracle_vectors(rng) -> VectorFile:
    entries = []
    for key, iv in oracles.key_iv_pairs(rng, 4, 4, 2):
        entries.append(VectorEntry("snow3g", key, iv, oracles.snow3g_keystream(key, iv, 6)[2:], discard=2))
    for key, iv in oracles.key_iv_pairs(rng, 8, 4, 2):
        entries.append(VectorEntry("snow2", key, iv, oracles.snow2_keystream(key, iv, 4)))
    for key, iv in oracles.key_iv_pairs(rng, 8, 2, 2):
        entries.append(VectorEntry("snow1", key, iv, oracles.snow1_keystream(key, iv, 4)))
    return VectorFile(entries)


def test_keystream_hex(run_cli):
    result = run_cli("keystream", "--cipher", "snow3g", "--key", KEY3G, "--iv", IV3G, "--count", "5")
    assert result.code == EXIT_OK
    assert [int(line, 16) for line in result.out.split()] == oracles.snow3g_keystream(KEY3G, IV3G, 5)


def test_keystream_discard(run_cli):
    result = run_cli("keystream", "--cipher", "snow3g", "--key", KEY3G, "--iv", IV3G, "--count", "2",
                     "--discard", "3")
    assert [int(line, 16) for line in result.out.split()] == oracles.snow3g_keystream(KEY3G, IV3G, 5)[3:]


def test_vectors_pass_and_fail(run_cli, rng, tmp_path):
    vectors = oracle_vectors(rng)
    path = VectorLoader().save(vectors, tmp_path / "kat.vec")
    result = run_cli("vectors", str(path))
    assert result.code == EXIT_OK
    report = result.report
    assert report["op"] == "vectors"
    assert report["pass"] is True
    assert len(report["cases"]) == 6

    vectors.entries[1].keystream[2] ^= 0x100
    path = VectorLoader().save(vectors, tmp_path / "bad.vec")
    result = run_cli("vectors", str(path))
    assert result.code == EXIT_FAILED
    failed = [c for c in result.report["cases"] if not c["pass"]]
    assert len(failed) == 1
    assert failed[0]["line"] == 2
    assert failed[0]["first_mismatch"] == 2


def test_vector_parse_error_is_usage(run_cli, tmp_path):
    path = tmp_path / "broken.vec"
    path.write_text("cipher=snow3g key=00\n")
    result = run_cli("vectors", str(path))
    assert result.code == EXIT_USAGE
    assert "broken.vec:1:" in result.err


def test_encrypt_decrypt_round_trip(run_cli, tmp_path):
    plain = tmp_path / "plain.bin"
    plain.write_bytes(bytes(range(256)) * 5 + b"tail")
    common = ["--cipher", "snow2", "--key", "1" * 64, "--iv", "2" * 32]
    assert run_cli("encrypt", *common, "--in", str(plain), "--out", str(tmp_path / "c.bin")).code == EXIT_OK
    cipher_bytes = (tmp_path / "c.bin").read_bytes()
    assert cipher_bytes != plain.read_bytes()
    assert run_cli("decrypt", *common, "--in", str(tmp_path / "c.bin"), "--out", str(tmp_path / "p.bin")).code == 0
    assert (tmp_path / "p.bin").read_bytes() == plain.read_bytes()


def test_budget_failure_leaves_no_output(run_cli, tmp_path):
    work = tmp_path / "io"
    work.mkdir()
    plain = work / "plain.bin"
    plain.write_bytes(bytes(64))
    out = work / "c.bin"
    result = run_cli("encrypt", "--cipher", "snow2", "--key", "0" * 64, "--iv", "0" * 32, "--limit", "4",
                     "--in", str(plain), "--out", str(out))
    assert result.code == EXIT_BUDGET
    assert not out.exists()
    assert list(work.iterdir()) == [plain]


def test_exit_codes(run_cli, tmp_path):
    assert run_cli("keystream", "--cipher", "snow3g", "--key", "xyz", "--iv", IV3G, "--count", "1").code == EXIT_USAGE
    assert run_cli("keystream", "--cipher", "snow3g", "--key", KEY3G, "--iv", IV3G,
                   "--count", "1", "--limit", "5").code == EXIT_USAGE
    budget = run_cli("keystream", "--cipher", "snow2", "--key", "0" * 64, "--iv", "0" * 32,
                     "--count", "10", "--limit", "4")
    assert budget.code == EXIT_BUDGET
    assert "rekey" in budget.err
    missing = run_cli("encrypt", "--cipher", "snow2", "--key", "0" * 64, "--iv", "0" * 32,
                      "--in", str(tmp_path / "absent"), "--out", str(tmp_path / "out"))
    assert missing.code == EXIT_IO
    assert run_cli("keystream").code == EXIT_USAGE
    assert run_cli("--version").code == EXIT_OK


def test_analyze_relations(run_cli):
    result = run_cli("analyze", "relations", "--sbox", "aes")
    assert result.code == EXIT_OK
    assert result.report["estimate"] == 39.0
    assert result.report["details"]["expected"] == 39


def test_analyze_corr(run_cli):
    result = run_cli("analyze", "corr", "--function", "add8", "--T", "0x2", "--lam", "0x202")
    assert result.code == EXIT_OK
    assert result.report["estimate"] == 0.5
    assert result.report["details"]["spectrum_agrees"] is True


@pytest.mark.parametrize("extra", [[], ["--poly", "0x11D"], ["--mini", "3", "3"]])
def test_analyze_golomb(run_cli, extra):
    result = run_cli("analyze", "golomb", *extra)
    assert result.code == EXIT_OK
    assert result.report["details"]["balancedness"]["pass"] is True


def test_analyze_golomb_plot(run_cli, tmp_path):
    plot = tmp_path / "golomb.html"
    assert run_cli("--plot", str(plot), "analyze", "golomb").code == EXIT_OK
    assert plot.exists()


def test_analyze_bm_input_file(run_cli, tmp_path):
    bits = lfsr_sequence(characteristic_to_connection(0x16801), [1] + [0] * 15, 512)
    path = tmp_path / "bits.bin"
    path.write_bytes(np.packbits(np.array(bits, dtype=np.uint8)).tobytes())
    result = run_cli("analyze", "bm", "--input", str(path), "--max-l", "16")
    assert result.code == EXIT_OK
    assert result.report["estimate"] == 16.0
    assert result.report["details"]["regenerates"] is True


def test_analyze_bm_cipher_bit_plane(run_cli):
    result = run_cli("analyze", "bm", "--cipher", "snow3g", "--key", KEY3G, "--iv", IV3G,
                     "--words", "64", "--bit", "0")
    assert result.code == EXIT_OK
    assert 24 <= result.report["estimate"] <= 40


def test_carry_report_independent_of_workers(run_cli):
    args = ["analyze", "carry", "--i", "1", "2", "--samples", "150000"]
    one = run_cli("--seed", "5", "--workers", "1", *args)
    two = run_cli("--seed", "5", "--workers", "2", *args)
    assert one.code == EXIT_OK
    assert one.out == two.out
    report = one.report
    assert report["seed"] == 5
    assert abs(report["estimate"] - 0.75) < 4 * report["std_error"]


def test_seed_from_environment(run_cli, monkeypatch):
    monkeypatch.setenv("SNOWLAB_SEED", "0x10")
    result = run_cli("analyze", "bias", "--relation", "fair-coin", "--samples", "50000")
    assert result.code == EXIT_OK
    assert result.report["seed"] == 16


def test_record_and_history(run_cli):
    recorded = run_cli("--record", "analyze", "relations", "--sbox", "inversion")
    assert recorded.code == EXIT_OK
    listing = run_cli("history")
    assert "analyze.relations" in listing.out
    shown = run_cli("history", "--show", "1")
    assert json.loads(shown.out) == recorded.report
    assert run_cli("history", "--delete", "1").code == EXIT_OK
    assert run_cli("history", "--show", "1").code == EXIT_USAGE
    assert "No recorded reports" in run_cli("history").out


def test_sbox_export(run_cli, tmp_path):
    out = tmp_path / "s2.tbl"
    assert run_cli("sbox", "export", "s2", "--out", str(out)).code == EXIT_OK
    assert load_sbox_file(out) == configured_s2_sbox()
    out = tmp_path / "s1-mix.tbl"
    assert run_cli("sbox", "export", "--matrix", "s1", "--orientation", "circulant", "--out", str(out)).code == 0
    matrix = load_matrix_file(out)
    assert matrix.rows == oracles.CIRCULANT_ROWS
    assert matrix.modulus == AES_FIELD


def test_bench(run_cli):
    result = run_cli("bench", "--cipher", "snow2", "--megabytes", "0.01")
    assert result.code == EXIT_OK
    assert [(c["cipher"], c["path"]) for c in result.report["cases"]] == [("snow2", "table"), ("snow2", "naive")]
    assert result.report["details"]["snow2_table_speedup"] >= 5


def test_fault_recover(run_cli):
    result = run_cli("--seed", "3", "analyze", "fault-recover", "--trials", "2")
    assert result.code == EXIT_OK
    assert result.report["estimate"] == 1.0
    failed = run_cli("--seed", "3", "analyze", "fault-recover", "--schedule", "single-bit", "--trials", "1")
    assert failed.code == EXIT_FAILED
    assert failed.report["details"]["trials"][0]["rank"] <= 24


def test_gd_mini(run_cli, tmp_path):
    params = find_primitive_params(3, 3)
    config = tmp_path / "mini.cfg"
    config.write_text("m=3\nn=3\ntaps=" + " ".join(f"{i}:{e}" for i, e in params.taps) + "\n")
    result = run_cli("--seed", "12", "analyze", "gd-mini", "--config", str(config))
    assert result.code == EXIT_OK
    details = result.report["details"]
    assert details["state"] == details["planted"]
    assert details["guesses"] <= details["guess_bound"] == 64

    corrupted = run_cli("--seed", "12", "analyze", "gd-mini", "--config", str(config), "--corrupt")
    assert corrupted.code == EXIT_OK
    assert "error" in corrupted.report["details"]


def test_recurrence(run_cli):
    result = run_cli("analyze", "recurrence", "--samples", "200")
    assert result.code == EXIT_OK
    assert result.report["estimate"] == 1.0
