"""
Golomb's randomness postulates over one period of a binary sequence:
balancedness, the run distribution (with the span-n property when the
period is 2^n - 1) and two-level autocorrelation.
"""
import logging
from collections import Counter
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from app.models.errors import ParameterError

logger = logging.getLogger(__name__)


class GolombReport:
    """
    Per-criterion results.

    Attributes:
        period: Number of bits tested
        ones / zeros: Bit counts over the period
        runs: {(bit, length): count} for the cyclic runs
        span_n: n if period = 2^n - 1, else None
        span_ok: Every nonzero n-tuple seen exactly once (None if not applicable)
        autocorrelation: Out-of-phase values C(1) .. C(period - 1), normalised by period
    """

    def __init__(self,
                 period: int,
                 ones: int,
                 zeros: int,
                 runs: Dict[Tuple[int, int], int],
                 runs_ok: bool,
                 span_n: Optional[int],
                 span_ok: Optional[bool],
                 autocorrelation: np.ndarray):
        self.period = period
        self.ones = ones
        self.zeros = zeros
        self.runs = runs
        self.runs_ok = runs_ok
        self.span_n = span_n
        self.span_ok = span_ok
        self.autocorrelation = autocorrelation

    @property
    def balanced(self) -> bool:
        return abs(self.ones - self.zeros) <= 1

    @property
    def run_distribution(self) -> bool:
        return self.runs_ok and self.span_ok is not False

    @property
    def two_level(self) -> bool:
        if self.period < 2:
            return True
        counts = np.rint(self.autocorrelation * self.period)
        return bool(np.all(counts == counts[0]))

    @property
    def passed(self) -> bool:
        return self.balanced and self.run_distribution and self.two_level

    def runs_frame(self) -> pd.DataFrame:
        rows = [{"bit": bit, "length": length, "count": count} for (bit, length), count in sorted(self.runs.items())]
        return pd.DataFrame(rows, columns=["bit", "length", "count"])

    def to_dict(self) -> Dict[str, Any]:
        off_peak = sorted(set(np.rint(self.autocorrelation * self.period).astype(int).tolist()))
        return {
            "period": self.period,
            "balancedness": {"ones": self.ones, "zeros": self.zeros, "pass": self.balanced},
            "runs": {
                "total": sum(self.runs.values()),
                "by_length": {f"{bit}x{length}": c for (bit, length), c in sorted(self.runs.items())},
                "span_n": self.span_n,
                "span_ok": self.span_ok,
                "pass": self.run_distribution,
            },
            "autocorrelation": {"out_of_phase_counts": off_peak[:16], "pass": self.two_level},
            "pass": self.passed,
        }

    def __repr__(self) -> str:
        return (f"GolombReport(period={self.period}, balanced={self.balanced}, "
                f"runs={self.run_distribution}, two_level={self.two_level})")


def cyclic_runs(seq: Sequence[int]) -> Dict[Tuple[int, int], int]:
    """Runs of the cyclic sequence, counted once each."""
    bits = [int(b) & 1 for b in seq]
    n = len(bits)
    if n == 0:
        return {}
    if all(b == bits[0] for b in bits):
        return {(bits[0], n): 1}
    # rotate so the sequence starts at a run boundary
    start = next(i for i in range(n) if bits[i] != bits[i - 1])
    rotated = bits[start:] + bits[:start]
    counts: Counter = Counter()
    length = 1
    for prev, cur in zip(rotated, rotated[1:]):
        if cur == prev:
            length += 1
        else:
            counts[(prev, length)] += 1
            length = 1
    counts[(rotated[-1], length)] += 1
    return dict(counts)


def _runs_ok(runs: Dict[Tuple[int, int], int]) -> bool:
    """Half the runs have length 1, a quarter length 2, ...; gaps and blocks equally often."""
    total = sum(runs.values())
    k = 1
    while total >> (k + 1) >= 1:
        expected = total >> k
        zeros = runs.get((0, k), 0)
        ones = runs.get((1, k), 0)
        if zeros + ones != expected or zeros != ones:
            return False
        k += 1
    return True


def _span(bits: np.ndarray, n: int) -> bool:
    period = bits.size
    ext = np.concatenate([bits, bits[:n - 1]]).astype(np.int64)
    values = np.zeros(period, dtype=np.int64)
    for i in range(n):
        values = (values << 1) | ext[i:i + period]
    return bool(np.all(np.bincount(values, minlength=1 << n)[1:] == 1))


def autocorrelation(seq: Sequence[int]) -> np.ndarray:
    """Normalised periodic autocorrelation C(tau) for tau = 0 .. period - 1."""
    x = 1.0 - 2.0 * np.asarray(seq, dtype=np.float64)
    spectrum = np.fft.rfft(x)
    corr = np.fft.irfft(spectrum * np.conj(spectrum), n=x.size)
    return corr / x.size


def golomb_tests(seq: Sequence[int], period: Optional[int] = None) -> GolombReport:
    """
    Run Golomb's three postulates on the first period of seq.

    Args:
        seq: Bits
        period: Period to test (defaults to len(seq))

    Raises:
        ParameterError: period longer than the data, or not positive
    """
    period = len(seq) if period is None else period
    if period <= 0:
        raise ParameterError("Period must be positive")
    if period > len(seq):
        raise ParameterError(f"Period {period} is longer than the {len(seq)} bits supplied")

    bits = np.asarray(seq[:period], dtype=np.uint8) & 1
    ones = int(bits.sum())
    runs = cyclic_runs(bits.tolist())

    span_n = None
    span_ok = None
    if (period + 1) & period == 0 and period > 1:
        span_n = (period + 1).bit_length() - 1
        span_ok = _span(bits, span_n)

    corr = autocorrelation(bits)[1:]
    report = GolombReport(period, ones, period - ones, runs, _runs_ok(runs), span_n, span_ok, corr)
    logger.info("Golomb tests on %d bits: %s", period, "pass" if report.passed else "fail")
    return report
