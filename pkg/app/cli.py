"""
snowlab command line.

Reports go to stdout as JSON, diagnostics to stderr. Exit codes:
0 ok, 1 failed check, 2 bad arguments or parse errors, 3 keystream budget
exhausted, 4 I/O errors.
"""
import argparse
import logging
import sqlite3
import sys
import time
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional

import numpy as np
import pandas as pd

from app import __version__
from app.config import enable_analysis_hooks, get_settings
from app.models.errors import (
    BudgetExhaustedError,
    NoConsistentStateError,
    ParameterError,
    RankDeficientError,
    SnowLabError,
)
from app.models.mask import MaskPair
from app.models.report import RunReport
from app.services import plots
from app.services.analysis.bias import (
    BIT_ORDERS,
    TOLERANCE_SIGMAS,
    carry_bias,
    chunk_generator,
    fsm_bias_mc,
    two_round_experiment,
)
from app.services.analysis.correlation import correlation_exhaustive, correlation_spectrum
from app.services.analysis.fault import (
    DEFAULT_WINDOW,
    default_fault_schedule,
    run_fault_experiment,
    single_bit_schedule,
)
from app.services.analysis.golomb import golomb_tests
from app.services.analysis.guess_determine import gd_attack_mini
from app.services.analysis.linear_complexity import (
    berlekamp_massey,
    bit_plane,
    bytes_to_bits,
    characteristic_to_connection,
    lfsr_sequence,
    words_to_bits,
)
from app.services.analysis.recurrence import squared_recurrence_check
from app.services.analysis.relations import sbox_quadratic_relations
from app.services.ciphers import cipher_accepts, cipher_names, create_cipher
from app.services.field import AES_FIELD, S2_FIELD
from app.services.keystream import CipherVariant
from app.services.mini_snow import find_primitive_params, lfsr_words, mini_enumerate, mini_keystream
from app.services.sboxes import (
    ByteSBox,
    ByteSBoxKind,
    MixMatrix,
    MixOrientation,
    aes_sbox,
    configured_s2_sbox,
    inversion_sbox,
    snow1_sbox,
)
from app.services.snow2 import Snow2Arithmetic
from app.utils.mini_config import DEFAULT_CONFIG, MiniConfigLoader
from app.utils.table_files import export_matrix, export_sbox
from app.utils.vector_loader import VectorLoader

logger = logging.getLogger("snowlab")

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2
EXIT_BUDGET = 3
EXIT_IO = 4

CIPHER_OPTIONS = ("variant", "init_mode", "sbox", "matrix", "arithmetic", "limit")
IO_CHUNK = 1 << 20

SBOXES: Dict[str, Callable[[], ByteSBox]] = {
    "aes": aes_sbox,
    "inversion": inversion_sbox,
    "s2": configured_s2_sbox,
    "snow1": snow1_sbox,
    "identity": ByteSBox.identity,
}
# Quadratic relation counts an S-box must reproduce
EXPECTED_RELATIONS = {"aes": 39, "inversion": 39}


class CommandResult:
    """A report to print (and maybe record) plus the exit code it implies."""

    def __init__(self, report: Optional[RunReport] = None, code: Optional[int] = None):
        self.report = report
        self.code = code if code is not None else (EXIT_OK if report is None or report.passed else EXIT_FAILED)


# ----------------------------------------------------------------------
# Helpers
# ----------------------------------------------------------------------

def _cipher_kwargs(args: argparse.Namespace, cipher: str, strict: bool = True) -> Dict[str, Any]:
    """Variant flags from the command line; strict mode lets create_cipher reject ones the cipher lacks."""
    options = {name: getattr(args, name, None) for name in CIPHER_OPTIONS}
    if strict:
        return options
    return {name: value for name, value in options.items() if cipher_accepts(cipher, name)}


def _build_cipher(args: argparse.Namespace):
    cipher = create_cipher(args.cipher, args.key, args.iv, **_cipher_kwargs(args, args.cipher))
    if getattr(args, "discard", 0):
        cipher.keystream(args.discard)
    return cipher


def _seed(args: argparse.Namespace) -> int:
    return args.seed if args.seed is not None else get_settings().seed


def _workers(args: argparse.Namespace) -> int:
    return args.workers if args.workers is not None else get_settings().workers


def _maybe_plot(args: argparse.Namespace, fig) -> None:
    if args.plot:
        plots.write_figure(fig, args.plot)


# ----------------------------------------------------------------------
# keystream / encrypt / decrypt
# ----------------------------------------------------------------------

def cmd_keystream(args: argparse.Namespace) -> CommandResult:
    if args.count < 0:
        raise ParameterError("--count must be non-negative")
    cipher = _build_cipher(args)
    if args.format == "binary":
        out = sys.stdout.buffer
        remaining = args.count
        while remaining:
            n = min(remaining, IO_CHUNK // 4)
            out.write(cipher.keystream_bytes(4 * n))
            remaining -= n
        out.flush()
    else:
        for w in cipher.keystream(args.count):
            sys.stdout.write(f"{w:08x}\n")
    return CommandResult()


def _xor_file(args: argparse.Namespace) -> CommandResult:
    cipher = _build_cipher(args)
    total = 0
    output = Path(args.output)
    partial = output.with_name(output.name + ".part")
    try:
        with open(args.input, "rb") as src, open(partial, "wb") as dst:
            while True:
                # IO_CHUNK is a multiple of 4, so every block starts on a word boundary
                block = src.read(IO_CHUNK)
                if not block:
                    break
                dst.write(cipher.encrypt(block))
                total += len(block)
    except BaseException:
        partial.unlink(missing_ok=True)
        raise
    partial.replace(output)
    logger.info("%s: %d bytes -> %s", args.command, total, args.output)
    return CommandResult()


cmd_encrypt = _xor_file
cmd_decrypt = _xor_file


# ----------------------------------------------------------------------
# vectors
# ----------------------------------------------------------------------

def cmd_vectors(args: argparse.Namespace) -> CommandResult:
    vectors = VectorLoader().load(args.path)
    start = time.perf_counter()
    cases = []
    for entry in vectors:
        case = {"line": entry.line, "cipher": entry.cipher, "iv": entry.iv, "pass": False}
        try:
            options = _cipher_kwargs(args, entry.cipher, strict=False)
            cipher = create_cipher(entry.cipher, entry.key, entry.iv, **options)
            cipher.keystream(entry.discard)
            got = cipher.keystream(len(entry.keystream))
        except BudgetExhaustedError as e:
            case["error"] = str(e)
            cases.append(case)
            continue
        case["pass"] = got == entry.keystream
        if not case["pass"]:
            bad = next(k for k, (a, b) in enumerate(zip(got, entry.keystream)) if a != b)
            case.update(first_mismatch=bad, expected=f"{entry.keystream[bad]:08x}", got=f"{got[bad]:08x}")
        cases.append(case)
    failed = sum(not c["pass"] for c in cases)
    logger.info("vectors: %d of %d passed", len(cases) - failed, len(cases))
    report = RunReport("vectors", {"path": str(args.path)}, cases=cases,
                       timing=round(time.perf_counter() - start, 6))
    return CommandResult(report)


# ----------------------------------------------------------------------
# bench
# ----------------------------------------------------------------------

BENCH_KEYS = {
    "snow1": ("0" * 64, "0" * 16),
    "snow2": ("0" * 64, "0" * 32),
    "snow3g": ("0" * 32, "0" * 32),
}


def _bench_paths(ciphers: List[str]) -> List[Dict[str, Any]]:
    paths = []
    for name in ciphers:
        paths.append({"cipher": name, "path": "table"})
        if name == "snow2":
            paths.append({"cipher": name, "path": "naive"})
    return paths


def cmd_bench(args: argparse.Namespace) -> CommandResult:
    if args.megabytes < 0:
        raise ParameterError("--megabytes must be non-negative")
    nbytes = int(args.megabytes * (1 << 20))
    words = -(-nbytes // 4)
    rows = []
    for case in _bench_paths(args.cipher or cipher_names()):
        key, iv = BENCH_KEYS[case["cipher"]]
        options = {"arithmetic": case["path"]} if case["cipher"] == "snow2" else {}
        cipher = create_cipher(case["cipher"], key, iv, **options)
        start = time.perf_counter()
        cipher.keystream(words)
        elapsed = time.perf_counter() - start
        rate = (4 * words / (1 << 20)) / elapsed if words and elapsed > 0 else 0.0
        rows.append({**case, "words": words, "seconds": round(elapsed, 6), "mb_per_s": round(rate, 4)})
    table = pd.DataFrame(rows)
    logger.info("bench results:\n%s", table.to_string(index=False))
    details: Dict[str, Any] = {}
    table_rate = table.loc[(table["cipher"] == "snow2") & (table["path"] == "table"), "mb_per_s"]
    naive_rate = table.loc[(table["cipher"] == "snow2") & (table["path"] == "naive"), "mb_per_s"]
    if len(table_rate) and len(naive_rate) and naive_rate.iloc[0] > 0:
        details["snow2_table_speedup"] = round(float(table_rate.iloc[0] / naive_rate.iloc[0]), 3)
    report = RunReport("bench", {"megabytes": args.megabytes, "ciphers": args.cipher or cipher_names()},
                       cases=[{**r, "pass": True} for r in rows], details=details,
                       timing=round(float(table["seconds"].sum()), 6))
    return CommandResult(report)


# ----------------------------------------------------------------------
# analyze
# ----------------------------------------------------------------------

def _analysis_bits(args: argparse.Namespace) -> List[int]:
    if args.input:
        return bytes_to_bits(Path(args.input).read_bytes())
    if args.cipher:
        if not args.key or not args.iv:
            raise ParameterError("--key and --iv are required with --cipher")
        words = _build_cipher(args).keystream(args.words)
        return bit_plane(words, args.bit) if args.bit is not None else words_to_bits(words)
    raise ParameterError("Give --input FILE or --cipher with --key/--iv")


def analyze_bm(args: argparse.Namespace) -> CommandResult:
    bits = _analysis_bits(args)
    result = berlekamp_massey(bits)
    regenerates = result.regenerate(bits, len(bits)) == list(bits)
    within = args.max_l is None or result.L <= args.max_l
    params = {"input": args.input, "cipher": args.cipher, "words": args.words if args.cipher else None,
              "bit": args.bit, "variant": args.variant, "max_l": args.max_l}
    report = RunReport("analyze.bm", params, regenerates and within,
                       estimate=float(result.L), details={**result.to_dict(), "regenerates": regenerates})
    _maybe_plot(args, plots.profile_figure(result))
    return CommandResult(report)


def analyze_golomb(args: argparse.Namespace) -> CommandResult:
    if args.input:
        bits = bytes_to_bits(Path(args.input).read_bytes())
        source = {"input": args.input}
    elif args.mini:
        m, n = args.mini
        mini = find_primitive_params(m, n)
        period = (1 << (m * n)) - 1
        start = [1] + [0] * (n - 1)
        bits = [w & 1 for w in lfsr_words(mini, start, period)]
        source = {"mini": [m, n], "taps": [list(t) for t in mini.taps]}
    else:
        poly = int(args.poly, 0)
        degree = poly.bit_length() - 1
        if degree < 1:
            raise ParameterError("--poly must have degree at least 1")
        bits = lfsr_sequence(characteristic_to_connection(poly), [1] + [0] * (degree - 1), (1 << degree) - 1)
        source = {"poly": f"0x{poly:X}"}
    report_data = golomb_tests(bits, args.period)
    report = RunReport("analyze.golomb", {**source, "period": args.period}, report_data.passed,
                       details=report_data.to_dict())
    _maybe_plot(args, plots.golomb_figure(report_data))
    return CommandResult(report)


def analyze_carry(args: argparse.Namespace) -> CommandResult:
    seed = _seed(args)
    results = [carry_bias(i, args.samples, seed, _workers(args)) for i in args.i]
    cases = [{**r.to_dict(), "pass": r.passed} for r in results]
    first = results[0]
    # estimate is Pr[c_i = 0]; the correlation form is kept in details
    report = RunReport("analyze.carry", {"i": args.i, "samples": args.samples}, seed=seed,
                       samples=args.samples, estimate=first.into.probability,
                       std_error=first.into.std_error / 2, cases=cases,
                       details={"correlation": first.into.estimate, "correlation_std_error": first.into.std_error,
                                "convention": "carry into bit i", "tolerance_sigmas": TOLERANCE_SIGMAS})
    _maybe_plot(args, plots.carry_figure(results))
    return CommandResult(report)


def _correlation_function(name: str):
    """(F, width) for the functions `analyze corr` knows."""
    if name in SBOXES:
        return list(SBOXES[name]().table), 8
    if name == "add8":
        # 16-bit input (a, b) -> a + b mod 2^8
        return [((x >> 8) + (x & 0xFF)) & 0xFF for x in range(1 << 16)], 16
    raise ParameterError(f"Unknown function '{name}'")


def analyze_corr(args: argparse.Namespace) -> CommandResult:
    table, width = _correlation_function(args.function)
    T = int(args.T, 0)
    lam = int(args.lam, 0)
    mask = MaskPair(T, lam, width)
    value = correlation_exhaustive(table, mask)
    spectrum = correlation_spectrum(table, T, width)
    best = int(np.argmax(np.abs(spectrum)))
    details = {"mask": mask.to_dict(), "best_lambda": f"0x{best:X}", "best_correlation": float(spectrum[best]),
               "spectrum_agrees": bool(np.isclose(spectrum[lam], value))}
    report = RunReport("analyze.corr", {"function": args.function, "T": args.T, "lambda": args.lam},
                       details["spectrum_agrees"], estimate=value, details=details)
    return CommandResult(report)


def analyze_bias(args: argparse.Namespace) -> CommandResult:
    seed = _seed(args)
    workers = _workers(args)
    params = {"relation": args.relation, "order": args.order, "samples": args.samples}
    if args.relation == "fair-coin":
        bias = fsm_bias_mc("fair-coin", args.samples, seed, workers)
        return CommandResult(RunReport.from_bias("analyze.bias", bias, params, bias.within(0.0, TOLERANCE_SIGMAS)))
    if args.order != "both":
        bias = fsm_bias_mc(args.relation, args.samples, seed, workers, args.order)
        passed = abs(bias.z_score()) > 5
        return CommandResult(RunReport.from_bias("analyze.bias", bias, params, passed))

    experiment = two_round_experiment(args.samples, seed, workers)
    logger.info("bit-order comparison:\n%s", experiment.table().to_string(index=False))
    strongest = experiment.strongest
    report = RunReport.from_bias("analyze.bias", strongest, params, not experiment.discrepancy,
                                 details=experiment.to_dict())
    return CommandResult(report)


def analyze_relations(args: argparse.Namespace) -> CommandResult:
    result = sbox_quadratic_relations(SBOXES[args.sbox]())
    expected = EXPECTED_RELATIONS.get(args.sbox)
    passed = expected is None or result.count == expected
    report = RunReport("analyze.relations", {"sbox": args.sbox}, passed, estimate=float(result.count),
                       details={**result.to_dict(), "expected": expected})
    return CommandResult(report)


def analyze_fault_recover(args: argparse.Namespace) -> CommandResult:
    enable_analysis_hooks()
    seed = _seed(args)
    faults = default_fault_schedule() if args.schedule == "default" else single_bit_schedule(args.faults)
    cases = []
    for trial in range(args.trials):
        case: Dict[str, Any] = {"trial": trial}
        try:
            planted, result = run_fault_experiment(seed, faults, trial, args.window)
            case.update(rank=result.rank, equations=result.equations, verified=result.verified,
                        recovered=result.state.lfsr == planted.lfsr)
        except RankDeficientError as e:
            case.update(rank=e.rank, recovered=False, error=str(e))
        except NoConsistentStateError as e:
            case.update(recovered=False, error=str(e))
        case["pass"] = case["recovered"]
        cases.append(case)
    successes = sum(c["recovered"] for c in cases)
    rate = successes / args.trials
    report = RunReport("analyze.fault-recover",
                       {"schedule": args.schedule, "faults": len(faults), "trials": args.trials, "window": args.window},
                       seed=seed, samples=args.trials, estimate=rate,
                       details={"successes": successes, "fault_list": [f.label() for f in faults],
                                "trials": cases})
    report.passed = rate >= args.min_success
    return CommandResult(report)


def analyze_gd_mini(args: argparse.Namespace) -> CommandResult:
    params = MiniConfigLoader().load(args.config)
    seed = _seed(args)
    if args.state:
        planted = tuple(int(w, 16) for w in args.state.replace(",", " ").split())
    else:
        rng = chunk_generator(seed, 0)
        planted = tuple(int(w) for w in rng.integers(0, 1 << params.m, size=params.state_words))
    keystream = mini_keystream(params, planted, args.words)
    if args.corrupt:
        keystream[-1] ^= 1
    details: Dict[str, Any] = {"planted": list(planted), "keystream": keystream, "params": params.to_dict()}
    run_params = {"config": str(args.config), "words": args.words, "corrupt": args.corrupt,
                  "exhaustive": args.exhaustive, "cross_check": args.cross_check}
    try:
        result = gd_attack_mini(params, keystream, exhaustive=args.exhaustive)
    except NoConsistentStateError as e:
        details["error"] = str(e)
        # a corrupted keystream is expected to have no preimage
        return CommandResult(RunReport("analyze.gd-mini", run_params, bool(args.corrupt), seed=seed,
                                       details=details))
    details.update(result.to_dict())
    bound = 1 << (2 * params.m)
    passed = result.state == planted and result.guesses <= bound and not args.corrupt
    if args.cross_check:
        states = mini_enumerate(params, keystream)
        details["enumeration"] = [list(s) for s in states]
        passed = passed and states == [planted]
    report = RunReport("analyze.gd-mini", run_params, passed, seed=seed, estimate=float(result.guesses),
                       details={**details, "guess_bound": bound})
    return CommandResult(report)


def analyze_recurrence(args: argparse.Namespace) -> CommandResult:
    seed = _seed(args)
    check = squared_recurrence_check(args.samples, seed, _workers(args))
    report = RunReport("analyze.recurrence", {"samples": args.samples}, check.passed, seed=seed,
                       samples=args.samples, estimate=check.holds / check.total, details=check.to_dict())
    return CommandResult(report)


ANALYZERS = {
    "bm": analyze_bm,
    "golomb": analyze_golomb,
    "carry": analyze_carry,
    "corr": analyze_corr,
    "bias": analyze_bias,
    "relations": analyze_relations,
    "fault-recover": analyze_fault_recover,
    "gd-mini": analyze_gd_mini,
    "recurrence": analyze_recurrence,
}


def cmd_analyze(args: argparse.Namespace) -> CommandResult:
    return ANALYZERS[args.analysis](args)


# ----------------------------------------------------------------------
# history / sbox
# ----------------------------------------------------------------------

def cmd_history(args: argparse.Namespace) -> CommandResult:
    from app.data import reports

    if args.delete is not None:
        if not reports.delete_report(args.delete):
            raise ParameterError(f"No report with id {args.delete}")
        logger.info("Deleted report %d", args.delete)
        return CommandResult()
    if args.show is not None:
        row = reports.get_report(args.show)
        if row is None:
            raise ParameterError(f"No report with id {args.show}")
        sys.stdout.write(row["payload"] + "\n")
        return CommandResult()

    rows = reports.list_reports(args.filter)
    df = pd.DataFrame([dict(r) for r in rows], columns=["id", "command", "passed", "seed", "created_at"])
    if args.limit:
        df = df.head(args.limit)
    if df.empty:
        sys.stdout.write("No recorded reports.\n")
    else:
        df["passed"] = df["passed"].astype(bool)
        sys.stdout.write(df.to_string(index=False) + "\n")
    return CommandResult()


def cmd_sbox(args: argparse.Namespace) -> CommandResult:
    if args.matrix:
        modulus = AES_FIELD if args.matrix == "s1" else S2_FIELD
        matrix = MixMatrix.from_orientation(MixOrientation(args.orientation), modulus)
        export_matrix(matrix, args.output)
    else:
        export_sbox(SBOXES[args.name](), args.output)
    return CommandResult()


COMMANDS = {
    "keystream": cmd_keystream,
    "encrypt": cmd_encrypt,
    "decrypt": cmd_decrypt,
    "vectors": cmd_vectors,
    "analyze": cmd_analyze,
    "bench": cmd_bench,
    "history": cmd_history,
    "sbox": cmd_sbox,
}


# ----------------------------------------------------------------------
# Argument parsing
# ----------------------------------------------------------------------

def _add_cipher_options(p: argparse.ArgumentParser, required: bool = True) -> None:
    p.add_argument("--cipher", choices=cipher_names(), required=required)
    p.add_argument("--key", required=required, help="key hex, first word leftmost")
    p.add_argument("--iv", required=required, help="IV hex, first word leftmost")
    _add_variant_options(p)
    p.add_argument("--discard", type=int, default=0, help="keystream words to skip first")


def _add_variant_options(p: argparse.ArgumentParser) -> None:
    p.add_argument("--variant", choices=CipherVariant.values())
    p.add_argument("--init-mode", dest="init_mode", choices=["feedback", "whole-state"])
    p.add_argument("--sbox", choices=ByteSBoxKind.values(), help="snow2 S1 byte S-box")
    p.add_argument("--matrix", choices=MixOrientation.values(), help="MixColumn layout")
    p.add_argument("--arithmetic", choices=Snow2Arithmetic.values())
    p.add_argument("--limit", type=int, help="snow2 keystream budget in words")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="snowlab", description="SNOW 1.0 / 2.0 / 3G suite and analysis lab")
    parser.add_argument("--version", action="version", version=f"snowlab {__version__}")
    verbosity = parser.add_mutually_exclusive_group()
    verbosity.add_argument("--debug", action="store_true")
    verbosity.add_argument("--quiet", action="store_true")
    parser.add_argument("--record", action="store_true", help="store the report in the archive")
    parser.add_argument("--workers", type=int, help="threads for Monte Carlo (default SNOWLAB_WORKERS)")
    parser.add_argument("--seed", type=lambda s: int(s, 0), help="64-bit seed (default SNOWLAB_SEED)")
    parser.add_argument("--plot", metavar="FILE.html", help="write a figure (bm, golomb, carry)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("keystream", help="emit keystream words")
    _add_cipher_options(p)
    p.add_argument("--count", type=int, required=True)
    p.add_argument("--format", choices=["hex", "binary"], default="hex")

    for name in ("encrypt", "decrypt"):
        p = sub.add_parser(name, help=f"{name} a file with the keystream")
        _add_cipher_options(p)
        p.add_argument("--in", dest="input", required=True)
        p.add_argument("--out", dest="output", required=True)

    p = sub.add_parser("vectors", help="run a known-answer vector file")
    p.add_argument("path")
    _add_variant_options(p)

    p = sub.add_parser("bench", help="keystream throughput")
    p.add_argument("--cipher", action="append", choices=cipher_names())
    p.add_argument("--megabytes", type=float, default=1.0)

    analyze = sub.add_parser("analyze", help="run an analysis experiment")
    asub = analyze.add_subparsers(dest="analysis", required=True)

    a = asub.add_parser("bm", help="Berlekamp-Massey linear complexity")
    a.add_argument("--input", help="binary file, bits taken MSB first")
    _add_cipher_options(a, required=False)
    a.add_argument("--words", type=int, default=64)
    a.add_argument("--bit", type=int, help="analyse one bit plane of the words")
    a.add_argument("--max-l", dest="max_l", type=int, help="fail if L exceeds this bound")

    a = asub.add_parser("golomb", help="Golomb randomness postulates")
    a.add_argument("--input")
    a.add_argument("--poly", default="0x25", help="binary characteristic polynomial of an LFSR")
    a.add_argument("--mini", nargs=2, type=int, metavar=("M", "N"),
                   help="bit 0 of a primitive mini-SNOW LFSR with n words of m bits")
    a.add_argument("--period", type=int)

    a = asub.add_parser("carry", help="carry-bit probabilities of addition mod 2^32")
    a.add_argument("--i", type=int, nargs="+", default=[1])
    a.add_argument("--samples", type=int, default=1 << 20)

    a = asub.add_parser("corr", help="exact linear correlation")
    a.add_argument("--function", default="aes", choices=list(SBOXES) + ["add8"])
    a.add_argument("--T", default="0x1")
    a.add_argument("--lam", default="0x1")

    a = asub.add_parser("bias", help="Monte Carlo FSM relation bias")
    a.add_argument("--relation", default="snow1-two-round", choices=["snow1-two-round", "fair-coin"])
    a.add_argument("--order", default="both", choices=list(BIT_ORDERS) + ["both"])
    a.add_argument("--samples", type=int, default=1 << 24)

    a = asub.add_parser("relations", help="quadratic relations of an S-box")
    a.add_argument("--sbox", default="aes", choices=list(SBOXES))

    a = asub.add_parser("fault-recover", help="fault attack on linearized SNOW 3G")
    a.add_argument("--schedule", default="default", choices=["default", "single-bit"])
    a.add_argument("--faults", type=int, default=24, help="fault count for the single-bit schedule")
    a.add_argument("--trials", type=int, default=10)
    a.add_argument("--window", type=int, default=DEFAULT_WINDOW)
    a.add_argument("--min-success", dest="min_success", type=float, default=0.95)

    a = asub.add_parser("gd-mini", help="guess-and-determine on mini-SNOW")
    a.add_argument("--config", default=str(DEFAULT_CONFIG))
    a.add_argument("--words", type=int, default=12)
    a.add_argument("--state", help="planted state as hex words (default: random from the seed)")
    a.add_argument("--corrupt", action="store_true", help="flip a bit of the last keystream word")
    a.add_argument("--exhaustive", action="store_true")
    a.add_argument("--cross-check", dest="cross_check", action="store_true",
                   help="compare against exhaustive enumeration")

    a = asub.add_parser("recurrence", help="squared SNOW 1.0 LFSR recurrence")
    a.add_argument("--samples", type=int, default=1 << 12)

    p = sub.add_parser("history", help="list recorded reports")
    p.add_argument("--filter", help="only this command")
    p.add_argument("--limit", type=int)
    p.add_argument("--show", type=int, metavar="ID")
    p.add_argument("--delete", type=int, metavar="ID")

    p = sub.add_parser("sbox", help="S-box and matrix tables")
    ssub = p.add_subparsers(dest="sbox_command", required=True)
    e = ssub.add_parser("export", help="write a table file")
    e.add_argument("name", nargs="?", default="s2", choices=list(SBOXES))
    e.add_argument("--matrix", choices=["s1", "s2"], help="export a MixColumn matrix instead")
    e.add_argument("--orientation", default=MixOrientation.GPP.value, choices=MixOrientation.values())
    e.add_argument("--out", dest="output", required=True)
    return parser


def _setup_logging(args: argparse.Namespace) -> None:
    level = logging.DEBUG if args.debug else logging.WARNING if args.quiet else logging.INFO
    logging.basicConfig(level=level, stream=sys.stderr,
                        format="%(asctime)s %(levelname)s %(name)s: %(message)s", force=True)


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code in (0, None) else EXIT_USAGE
    _setup_logging(args)

    try:
        result = COMMANDS[args.command](args)
    except BudgetExhaustedError as e:
        logger.error("%s", e)
        return EXIT_BUDGET
    except (ParameterError, ValueError) as e:
        logger.error("%s", e)
        return EXIT_USAGE
    except OSError as e:
        logger.error("I/O error: %s", e)
        return EXIT_IO
    except SnowLabError as e:
        logger.error("%s", e)
        return EXIT_FAILED

    if result.report is not None:
        sys.stdout.write(result.report.to_json() + "\n")
        if args.record:
            from app.data.reports import save_report
            try:
                report_id = save_report(result.report)
                logger.info("Recorded report %d", report_id)
            except (OSError, sqlite3.Error) as e:
                logger.error("Could not record report: %s", e)
                return EXIT_IO
    return result.code
