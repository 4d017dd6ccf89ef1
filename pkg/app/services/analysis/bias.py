"""
Monte-Carlo bias estimation.

Samples are drawn in fixed-size chunks. Chunk k uses its own Philox stream
seeded from SeedSequence([seed, k]), and chunk counts are summed in chunk
order, so a (seed, samples) pair gives the same estimate for any worker
count.
"""
import itertools
import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
import pandas as pd

from app.models.errors import ParameterError
from app.models.report import BiasReport
from app.services.sboxes import BitPermutation, snow1_sbox

logger = logging.getLogger(__name__)

DEFAULT_CHUNK = 1 << 16
WORD = np.uint64(0xFFFFFFFF)
SIGNIFICANCE_SIGMAS = 5.0
TOLERANCE_SIGMAS = 4.0

Term = Tuple[str, int]

# (St_t)15 + (St_t)16 + (St_t+1)22 + (St_t+1)23 + (Fm_t)15 + (Fm_t+1)23
TWO_ROUND_TERMS: Tuple[Term, ...] = (("st0", 15), ("st0", 16), ("st1", 22), ("st1", 23), ("fm0", 15), ("fm1", 23))
BIT_ORDERS = ("lsb", "msb")


def chunk_generator(seed: int, chunk: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([seed, chunk])))


def chunk_sizes(samples: int, chunk_size: int = DEFAULT_CHUNK) -> List[int]:
    full, rest = divmod(samples, chunk_size)
    return [chunk_size] * full + ([rest] if rest else [])


def run_chunked(kernel: Callable[[np.random.Generator, int], Any],
                samples: int,
                seed: int,
                workers: int = 1,
                chunk_size: int = DEFAULT_CHUNK):
    """
    Evaluate kernel(rng, n) on every chunk and sum the results in chunk order.

    Args:
        kernel: Returns a count (int or numpy array) for n samples
        samples: Total sample count
        seed: 64-bit seed
        workers: Thread count
        chunk_size: Samples per chunk; part of the reproducibility contract

    Returns:
        Sum of the kernel results
    """
    if samples <= 0:
        raise ParameterError("Sample count must be positive")
    if workers < 1:
        raise ParameterError("Worker count must be at least 1")
    sizes = chunk_sizes(samples, chunk_size)

    def job(k: int):
        return kernel(chunk_generator(seed, k), sizes[k])

    if workers > 1 and len(sizes) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(job, range(len(sizes))))
    else:
        results = [job(k) for k in range(len(sizes))]

    total = results[0]
    for r in results[1:]:
        total = total + r
    logger.debug("Monte Carlo: %d samples in %d chunks, %d workers", samples, len(sizes), workers)
    return total


def random_words(rng: np.random.Generator, n: int) -> np.ndarray:
    return rng.integers(0, 1 << 32, size=n, dtype=np.uint64)


# ----------------------------------------------------------------------
# Carry bits of addition mod 2^32
# ----------------------------------------------------------------------

class CarryBiasResult:
    """
    Pr[c_i = 0] for X + Y under both readings of c_i.

    Attributes:
        i: Bit index
        into: Report for the carry into bit i
        out_of: Report for the carry out of bit i
        expected: 1/2 + 1/2^(i+1)
        matching: Conventions whose estimate is within 4 standard errors of expected
    """

    def __init__(self, i: int, into: BiasReport, out_of: BiasReport):
        self.i = i
        self.into = into
        self.out_of = out_of
        self.expected = carry_formula(i)
        target = 2 * self.expected - 1
        self.matching = [name for name, rep in (("into", into), ("out", out_of))
                         if rep.within(target, TOLERANCE_SIGMAS)]

    @property
    def passed(self) -> bool:
        return "into" in self.matching

    def to_dict(self) -> Dict[str, Any]:
        return {
            "i": self.i,
            "expected_probability": self.expected,
            "into": {"probability": self.into.probability, **self.into.to_dict()},
            "out": {"probability": self.out_of.probability, **self.out_of.to_dict()},
            "matching": self.matching,
        }

    def __repr__(self) -> str:
        return f"CarryBiasResult(i={self.i}, p_into={self.into.probability:.5f}, expected={self.expected:.5f})"


def carry_formula(i: int) -> float:
    return 0.5 + 2.0 ** -(i + 1)


def carry_bias(i: int, samples: int, seed: int, workers: int = 1) -> CarryBiasResult:
    """
    Estimate Pr[c_i = 0] for uniform X, Y.

    Raises:
        ParameterError: i outside 0..31 or samples = 0
    """
    if not 0 <= i < 32:
        raise ParameterError("Carry bit index must be in 0..31")
    if samples <= 0:
        raise ParameterError("Sample count must be positive")

    def kernel(rng: np.random.Generator, n: int) -> np.ndarray:
        x = random_words(rng, n)
        y = random_words(rng, n)
        carries = (x + y) ^ x ^ y      # bit j = carry into bit j; bit 32 = final carry
        into = (carries >> np.uint64(i)) & np.uint64(1)
        out = (carries >> np.uint64(i + 1)) & np.uint64(1)
        return np.array([n - int(into.sum()), n - int(out.sum())], dtype=np.int64)

    zeros = run_chunked(kernel, samples, seed, workers)
    result = CarryBiasResult(
        i,
        BiasReport.from_count(f"carry-into-{i}", int(zeros[0]), samples, seed),
        BiasReport.from_count(f"carry-out-{i}", int(zeros[1]), samples, seed),
    )
    logger.info("carry_bias i=%d: Pr[c=0] into=%.6f out=%.6f expected=%.6f",
                i, result.into.probability, result.out_of.probability, result.expected)
    return result


def carry_table(results: Sequence[CarryBiasResult]) -> pd.DataFrame:
    return pd.DataFrame([{
        "i": r.i,
        "expected": r.expected,
        "into": r.into.probability,
        "out": r.out_of.probability,
        "std_error": r.into.std_error / 2,
        "matching": ",".join(r.matching),
    } for r in results])


# ----------------------------------------------------------------------
# SNOW 1.0 FSM relations
# ----------------------------------------------------------------------

def _snow1_sbox_vec(w: np.ndarray, perm: Optional[BitPermutation]) -> np.ndarray:
    table = np.asarray(snow1_sbox().table, dtype=np.uint64)
    out = np.zeros_like(w)
    for shift in (24, 16, 8, 0):
        out |= table[(w >> np.uint64(shift)) & np.uint64(0xFF)] << np.uint64(shift)
    if perm is None or perm.is_identity:
        return out
    permuted = np.zeros_like(out)
    for j, target in enumerate(perm.perm):
        permuted |= ((out >> np.uint64(j)) & np.uint64(1)) << np.uint64(target)
    return permuted


def _rotl7_vec(w: np.ndarray) -> np.ndarray:
    return ((w << np.uint64(7)) | (w >> np.uint64(25))) & WORD


def snow1_fsm_rounds(rng: np.random.Generator, n: int,
                     perm: Optional[BitPermutation] = None) -> Dict[str, np.ndarray]:
    """
    Two FSM rounds of SNOW 1.0 on uniform St_t, St_t+1, R1, R2.

    Returns:
        Arrays st0, st1, fm0, fm1
    """
    st0 = random_words(rng, n)
    st1 = random_words(rng, n)
    r1 = random_words(rng, n)
    r2 = random_words(rng, n)
    fm0 = ((st0 + r1) & WORD) ^ r2
    r1_next = _rotl7_vec((fm0 + r2) & WORD) ^ r1
    r2_next = _snow1_sbox_vec(r1, perm)
    fm1 = ((st1 + r1_next) & WORD) ^ r2_next
    return {"st0": st0, "st1": st1, "fm0": fm0, "fm1": fm1}


def _bit(words: Dict[str, np.ndarray], term: Term, order: str) -> np.ndarray:
    name, index = term
    position = index if order == "lsb" else 31 - index
    return ((words[name] >> np.uint64(position)) & np.uint64(1)).astype(np.uint8)


def relation_label(terms: Sequence[Term], order: str) -> str:
    return f"{order}:" + "+".join(f"{name}[{index}]" for name, index in terms)


RelationArg = Union[str, Sequence[Term]]


def fsm_bias_mc(relation: RelationArg,
                samples: int,
                seed: int,
                workers: int = 1,
                order: str = "lsb",
                perm: Optional[BitPermutation] = None) -> BiasReport:
    """
    Estimate the correlation of a bit relation over two SNOW 1.0 FSM rounds.

    Args:
        relation: "snow1-two-round", "fair-coin", or a sequence of (word, bit) terms
            with word in st0, st1, fm0, fm1
        samples: Sample count
        seed: 64-bit seed
        workers: Thread count
        order: "lsb" (bit 0 least significant) or "msb"
        perm: SNOW 1.0 S-box output permutation

    Returns:
        BiasReport whose estimate is 2 Pr[relation = 0] - 1
    """
    if order not in BIT_ORDERS:
        raise ParameterError(f"Bit order must be one of {BIT_ORDERS}")
    if samples <= 0:
        raise ParameterError("Sample count must be positive")

    if relation == "fair-coin":
        def kernel(rng: np.random.Generator, n: int) -> int:
            return n - int(rng.integers(0, 2, size=n, dtype=np.uint8).sum())
        zeros = run_chunked(kernel, samples, seed, workers)
        return BiasReport.from_count("fair-coin", zeros, samples, seed)

    terms = TWO_ROUND_TERMS if relation == "snow1-two-round" else tuple((str(w), int(i)) for w, i in relation)
    for name, index in terms:
        if name not in ("st0", "st1", "fm0", "fm1") or not 0 <= index < 32:
            raise ParameterError(f"Bad relation term {name}[{index}]")

    def kernel(rng: np.random.Generator, n: int) -> int:
        words = snow1_fsm_rounds(rng, n, perm)
        value = np.zeros(n, dtype=np.uint8)
        for term in terms:
            value ^= _bit(words, term, order)
        return n - int(value.sum())

    zeros = run_chunked(kernel, samples, seed, workers)
    return BiasReport.from_count(relation_label(terms, order), zeros, samples, seed)


class TwoRoundExperiment:
    """
    The SNOW 1.0 linear approximation under both bit orders, plus a
    neighbourhood search when neither order shows a significant bias.

    Attributes:
        reports: {order: BiasReport} for the relation as written
        significant: Orders whose |z| exceeds 5
        best: Strongest relation found by the search (None if not run)
        discrepancy: True if the relation as written is not significant in either order
    """

    def __init__(self, reports: Dict[str, BiasReport], best: Optional[BiasReport]):
        self.reports = reports
        self.significant = [o for o, r in reports.items() if abs(r.z_score()) > SIGNIFICANCE_SIGMAS]
        self.best = best
        self.discrepancy = not self.significant

    @property
    def strongest(self) -> BiasReport:
        return max(self.reports.values(), key=lambda r: abs(r.z_score()))

    def table(self) -> pd.DataFrame:
        rows = [{"relation": r.relation_id, "estimate": r.estimate, "bias": r.bias,
                 "log2_abs_bias": float(np.log2(abs(r.bias))) if r.bias else None,
                 "std_error": r.std_error, "z": r.z_score()}
                for r in list(self.reports.values()) + ([self.best] if self.best else [])]
        return pd.DataFrame(rows)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "orders": {o: r.to_dict() for o, r in self.reports.items()},
            "significant": self.significant,
            "best_neighbour": self.best.to_dict() if self.best else None,
            "discrepancy": self.discrepancy,
        }


def _neighbour_search(samples: int, seed: int, workers: int,
                      perm: Optional[BitPermutation]) -> BiasReport:
    shifts = (-1, 0, 1)
    # split the six terms in two halves and combine the partial parities
    half_a, half_b = TWO_ROUND_TERMS[:3], TWO_ROUND_TERMS[3:]
    combos_a = list(itertools.product(shifts, repeat=3))
    combos_b = list(itertools.product(shifts, repeat=3))
    candidates = []
    for order in BIT_ORDERS:
        for sa in combos_a:
            for sb in combos_b:
                terms_a = tuple((w, min(31, max(0, i + d))) for (w, i), d in zip(half_a, sa))
                terms_b = tuple((w, min(31, max(0, i + d))) for (w, i), d in zip(half_b, sb))
                candidates.append((order, terms_a, terms_b))

    def partial(words, terms, order) -> np.ndarray:
        v = np.zeros(words["st0"].shape[0], dtype=np.uint8)
        for term in terms:
            v ^= _bit(words, term, order)
        return v

    def kernel(rng: np.random.Generator, n: int) -> np.ndarray:
        words = snow1_fsm_rounds(rng, n, perm)
        cache: Dict[Tuple[str, Tuple[Term, ...]], np.ndarray] = {}
        zeros = np.zeros(len(candidates), dtype=np.int64)
        for k, (order, ta, tb) in enumerate(candidates):
            a = cache.get((order, ta))
            if a is None:
                a = cache[(order, ta)] = partial(words, ta, order)
            b = cache.get((order, tb))
            if b is None:
                b = cache[(order, tb)] = partial(words, tb, order)
            zeros[k] = n - int((a ^ b).sum())
        return zeros

    zeros = run_chunked(kernel, samples, seed, workers)
    estimates = (2 * zeros - samples) / samples
    k = int(np.argmax(np.abs(estimates)))
    order, ta, tb = candidates[k]
    return BiasReport.from_count(relation_label(ta + tb, order), int(zeros[k]), samples, seed)


def two_round_experiment(samples: int,
                         seed: int,
                         workers: int = 1,
                         search_samples: Optional[int] = None,
                         perm: Optional[BitPermutation] = None) -> TwoRoundExperiment:
    """
    Measure the SNOW 1.0 approximation under both bit orders.

    If neither order is significant at 5 standard errors, every relation
    obtained by moving each index by -1, 0 or +1 is measured on
    search_samples samples and the strongest one is reported.
    """
    reports = {order: fsm_bias_mc("snow1-two-round", samples, seed, workers, order, perm) for order in BIT_ORDERS}
    experiment = TwoRoundExperiment(reports, None)
    if experiment.discrepancy:
        logger.info("Relation not significant in either bit order; searching neighbouring indices")
        experiment.best = _neighbour_search(search_samples or min(samples, 1 << 20), seed, workers, perm)
    for order, r in reports.items():
        logger.info("two-round %s: estimate=%.3g z=%.2f", order, r.estimate, r.z_score())
    return experiment
