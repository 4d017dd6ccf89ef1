"""
Squared LFSR recurrence of SNOW 1.0.

The SNOW 1.0 LFSR obeys s_{t+16} = alpha (s_t ^ s_{t+3} ^ s_{t+9}). Its
feedback polynomial squared (Frobenius on the coefficients) gives a second
recurrence with the same solutions:

    s_{t+32} = alpha^2 (s_t ^ s_{t+6} ^ s_{t+18})
"""
import logging
from typing import Any, Dict

import numpy as np

from app.services.analysis.bias import WORD, random_words, run_chunked
from app.services.field import SNOW1_REDUCTION

logger = logging.getLogger(__name__)

SPAN = 32
DEFAULT_CHECKS = 16


def _mul_alpha_vec(w: np.ndarray) -> np.ndarray:
    top = (w >> np.uint64(31)) & np.uint64(1)
    return ((w << np.uint64(1)) & WORD) ^ (top * np.uint64(SNOW1_REDUCTION))


def snow1_lfsr_words(state: np.ndarray, count: int) -> np.ndarray:
    """
    Extend rows of 16 LFSR words to count words with the SNOW 1.0 feedback.

    Args:
        state: (k, 16) uint64 array, column 0 the oldest cell
        count: Total words per row (at least 16)
    """
    out = np.zeros((state.shape[0], count), dtype=np.uint64)
    out[:, :16] = state
    for t in range(16, count):
        out[:, t] = _mul_alpha_vec(out[:, t - 16] ^ out[:, t - 13] ^ out[:, t - 7])
    return out


class RecurrenceCheck:
    """
    Attributes:
        samples: Random LFSR states tried
        checks: Positions t tested per state
        holds: Positions where the squared recurrence held
        seed: Seed used
    """

    def __init__(self, samples: int, checks: int, holds: int, seed: int):
        self.samples = samples
        self.checks = checks
        self.holds = holds
        self.seed = seed

    @property
    def total(self) -> int:
        return self.samples * self.checks

    @property
    def passed(self) -> bool:
        return self.holds == self.total

    def to_dict(self) -> Dict[str, Any]:
        return {
            "relation": "s[t+32] = alpha^2 (s[t] ^ s[t+6] ^ s[t+18])",
            "samples": self.samples,
            "checks_per_state": self.checks,
            "holds": self.holds,
            "total": self.total,
        }

    def __repr__(self) -> str:
        return f"RecurrenceCheck(holds={self.holds}/{self.total})"


def squared_recurrence_check(samples: int, seed: int, workers: int = 1,
                             checks: int = DEFAULT_CHECKS) -> RecurrenceCheck:
    """Run random SNOW 1.0 LFSR states forward and count where the squared recurrence holds."""

    def kernel(rng: np.random.Generator, n: int) -> int:
        words = snow1_lfsr_words(random_words(rng, 16 * n).reshape(n, 16), SPAN + checks)
        held = 0
        for t in range(checks):
            rhs = _mul_alpha_vec(_mul_alpha_vec(words[:, t] ^ words[:, t + 6] ^ words[:, t + 18]))
            held += int(np.count_nonzero(words[:, t + SPAN] == rhs))
        return held

    holds = run_chunked(kernel, samples, seed, workers)
    result = RecurrenceCheck(samples, checks, holds, seed)
    logger.info("Squared recurrence held at %d of %d positions", result.holds, result.total)
    return result
