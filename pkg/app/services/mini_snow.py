"""
Scaled-down SNOW 2.0.

Words of m bits, an n-word LFSR over GF(2^m) and the two-register FSM of
SNOW 2.0. Small enough that every state can be enumerated, which gives
exact answers for the attacks run against it.

A mini state is the tuple (s0, ..., s_{n-1}, R1, R2). As an integer index
word i sits at bits m*i .. m*i + m - 1.
"""
import itertools
import logging
from concurrent.futures import ThreadPoolExecutor
from functools import lru_cache
from typing import Iterator, List, Optional, Sequence, Tuple

import numpy as np

from app.models.errors import DomainTooLargeError, ParameterError
from app.models.mini import MiniArith, MiniParams
from app.services.field import gfm_mul

logger = logging.getLogger(__name__)

MAX_ENUMERATION_BITS = 24
MAX_PERIOD_BITS = 24
MAX_PRIMITIVE_BITS = 32
ENUM_CHUNK = 1 << 18

MiniState = Tuple[int, ...]


@lru_cache(maxsize=None)
def power_table(m: int, poly: int, e: int) -> Tuple[int, ...]:
    """v -> x^e * v in F2[x]/poly for every m-bit v."""
    low = poly ^ (1 << m)
    xe = 1
    for _ in range(e):
        xe = gfm_mul(xe, 2 if m > 1 else 1, low, m)
    return tuple(gfm_mul(v, xe, low, m) for v in range(1 << m))


def _tap_tables(p: MiniParams) -> List[Tuple[int, Tuple[int, ...]]]:
    return [(index, power_table(p.m, p.poly, e)) for index, e in p.taps]


class MiniCipher:
    """
    One mini-SNOW instance.

    The key is the whole initial state; there is no initialization phase.
    """

    def __init__(self, params: MiniParams, state: Sequence[int]):
        self.params = params
        state = tuple(state)
        if len(state) != params.state_words:
            raise ParameterError(
                f"Mini state needs {params.state_words} words (n={params.n} LFSR words + R1 + R2), got {len(state)}"
            )
        if any(not 0 <= w <= params.mask for w in state):
            raise ParameterError(f"Mini state words must fit in {params.m} bits")
        self.lfsr = list(state[:params.n])
        self.r1, self.r2 = state[params.n], state[params.n + 1]
        self.clock = 0
        self._taps = _tap_tables(params)
        self._mask = params.mask
        self._xor = params.arith == MiniArith.XOR.value

    def _add(self, a: int, b: int) -> int:
        return a ^ b if self._xor else (a + b) & self._mask

    def feedback(self) -> int:
        v = 0
        for index, table in self._taps:
            v ^= table[self.lfsr[index]]
        return v

    def lfsr_step(self) -> None:
        self.lfsr.append(self.feedback())
        del self.lfsr[0]

    def step(self) -> int:
        p = self.params
        s = self.lfsr
        fm = self._add(s[p.n - 1], self.r1) ^ self.r2
        z = fm ^ s[0]
        r1 = self.r1
        self.r1 = self._add(s[p.mid], self.r2)
        self.r2 = p.sbox[r1]
        self.lfsr_step()
        self.clock += 1
        return z

    def keystream(self, count: int) -> List[int]:
        if count < 0:
            raise ParameterError("Word count must be non-negative")
        return [self.step() for _ in range(count)]

    def snapshot(self) -> MiniState:
        return tuple(self.lfsr) + (self.r1, self.r2)

    def __repr__(self) -> str:
        return f"MiniCipher(m={self.params.m}, n={self.params.n}, clock={self.clock})"


def mini_new(params: MiniParams, state: Sequence[int]) -> MiniCipher:
    return MiniCipher(params, state)


def mini_keystream(params: MiniParams, state: Sequence[int], count: int) -> List[int]:
    return MiniCipher(params, state).keystream(count)


# ----------------------------------------------------------------------
# Vectorised evaluation
# ----------------------------------------------------------------------

class _Batch:
    """Column-wise mini states for numpy evaluation."""

    def __init__(self, params: MiniParams, states: np.ndarray):
        states = np.asarray(states, dtype=np.int64)
        if states.ndim != 2 or states.shape[1] != params.state_words:
            raise ParameterError(f"Batch states must have shape (k, {params.state_words})")
        self.p = params
        self.s = states[:, :params.n].copy()
        self.r1 = states[:, params.n].copy()
        self.r2 = states[:, params.n + 1].copy()
        self.sbox = np.asarray(params.sbox, dtype=np.int64)
        self.taps = [(i, np.asarray(t, dtype=np.int64)) for i, t in _tap_tables(params)]
        self.xor = params.arith == MiniArith.XOR.value

    def _add(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        return a ^ b if self.xor else (a + b) & self.p.mask

    def step(self) -> np.ndarray:
        p = self.p
        fm = self._add(self.s[:, p.n - 1], self.r1) ^ self.r2
        z = fm ^ self.s[:, 0]
        r1 = self.r1
        self.r1 = self._add(self.s[:, p.mid], self.r2)
        self.r2 = self.sbox[r1]

        fb = np.zeros_like(z)
        for index, table in self.taps:
            fb ^= table[self.s[:, index]]
        self.s = np.concatenate([self.s[:, 1:], fb[:, None]], axis=1)
        return z

    def select(self, rows: np.ndarray) -> None:
        self.s, self.r1, self.r2 = self.s[rows], self.r1[rows], self.r2[rows]


def mini_keystream_batch(params: MiniParams, states: np.ndarray, count: int) -> np.ndarray:
    """
    Keystream for many initial states at once.

    Args:
        params: Cipher parameters
        states: Array of shape (k, n + 2)
        count: Words per state

    Returns:
        Array of shape (k, count)
    """
    batch = _Batch(params, states)
    out = np.zeros((batch.s.shape[0], count), dtype=np.int64)
    for t in range(count):
        out[:, t] = batch.step()
    return out


def decode_states(params: MiniParams, indices: np.ndarray) -> np.ndarray:
    """State indices -> array of shape (k, n + 2)."""
    shifts = params.m * np.arange(params.state_words, dtype=np.int64)
    return (np.asarray(indices, dtype=np.int64)[:, None] >> shifts) & params.mask


def encode_state(params: MiniParams, state: Sequence[int]) -> int:
    return sum(int(w) << (params.m * i) for i, w in enumerate(state))


def all_states(params: MiniParams) -> np.ndarray:
    if params.state_bits > MAX_ENUMERATION_BITS:
        raise DomainTooLargeError(f"{params.state_bits} state bits exceeds the enumeration bound of {MAX_ENUMERATION_BITS}")
    return decode_states(params, np.arange(1 << params.state_bits, dtype=np.int64))


def _enumerate_range(params: MiniParams, prefix: Sequence[int], start: int, stop: int) -> np.ndarray:
    indices = np.arange(start, stop, dtype=np.int64)
    batch = _Batch(params, decode_states(params, indices))
    for target in prefix:
        hit = batch.step() == target
        indices = indices[hit]
        batch.select(hit)
        if not indices.size:
            break
    return indices


def mini_enumerate(params: MiniParams, prefix: Sequence[int], workers: int = 1) -> List[MiniState]:
    """
    Every initial state whose keystream starts with prefix.

    The state space is cut into fixed index ranges; results are merged in
    range order, so the output does not depend on the worker count.
    """
    if params.state_bits > MAX_ENUMERATION_BITS:
        raise DomainTooLargeError(f"{params.state_bits} state bits exceeds the enumeration bound of {MAX_ENUMERATION_BITS}")
    if any(not 0 <= w <= params.mask for w in prefix):
        raise ParameterError(f"Keystream words must fit in {params.m} bits")

    total = 1 << params.state_bits
    ranges = [(lo, min(lo + ENUM_CHUNK, total)) for lo in range(0, total, ENUM_CHUNK)]
    logger.debug("Enumerating %d states in %d ranges with %d workers", total, len(ranges), workers)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(lambda r: _enumerate_range(params, prefix, *r), ranges))
    else:
        parts = [_enumerate_range(params, prefix, lo, hi) for lo, hi in ranges]

    found = np.concatenate(parts) if parts else np.zeros(0, dtype=np.int64)
    states = [tuple(int(w) for w in row) for row in decode_states(params, found)]
    logger.info("mini_enumerate: %d of %d states match a %d-word prefix", len(states), total, len(prefix))
    return states


# ----------------------------------------------------------------------
# Pure LFSR mode
# ----------------------------------------------------------------------

def lfsr_words(params: MiniParams, start: Sequence[int], count: int) -> Iterator[int]:
    """Yield s0 of the bare LFSR for count clocks."""
    s = list(start)
    taps = _tap_tables(params)
    for _ in range(count):
        yield s[0]
        v = 0
        for index, table in taps:
            v ^= table[s[index]]
        s.append(v)
        del s[0]


def mini_period(params: MiniParams, start: Optional[Sequence[int]] = None) -> int:
    """
    Cycle length of the bare LFSR through start (default (1, 0, ..., 0)).

    Raises:
        DomainTooLargeError: m * n above the iteration bound
        ParameterError: All-zero start, or a start that never returns (singular feedback)
    """
    if params.lfsr_bits > MAX_PERIOD_BITS:
        raise DomainTooLargeError(f"{params.lfsr_bits} LFSR bits exceeds the period bound of {MAX_PERIOD_BITS}")
    start = tuple(start) if start is not None else (1,) + (0,) * (params.n - 1)
    if len(start) != params.n:
        raise ParameterError(f"Start state needs {params.n} words")
    if not any(start):
        raise ParameterError("The all-zero state is a fixed point; period needs a nonzero start")

    m, n = params.m, params.n
    top = m * (n - 1)
    taps = [(m * i, table) for i, table in _tap_tables(params)]
    mask = params.mask
    origin = encode_state(params, start)
    state = origin
    for period in range(1, 1 << params.lfsr_bits):
        v = 0
        for shift, table in taps:
            v ^= table[(state >> shift) & mask]
        state = (state >> m) | (v << top)
        if state == origin:
            return period
    # a singular feedback map can fall into a cycle that misses the start
    raise ParameterError("Start state is not on a cycle (feedback map is singular)")


def _transition_columns(params: MiniParams) -> List[int]:
    """Images of the unit vectors under one LFSR clock, as packed ints."""
    cols = []
    for bit in range(params.lfsr_bits):
        word, offset = divmod(bit, params.m)
        start = [0] * params.n
        start[word] = 1 << offset
        s = start[1:] + [0]
        v = 0
        for index, table in _tap_tables(params):
            v ^= table[start[index]]
        s[-1] = v
        cols.append(encode_state(params, s))
    return cols


def _apply(cols: Sequence[int], v: int) -> int:
    out = 0
    j = 0
    while v:
        if v & 1:
            out ^= cols[j]
        v >>= 1
        j += 1
    return out


def _compose(a: Sequence[int], b: Sequence[int]) -> List[int]:
    return [_apply(a, c) for c in b]


def _power(cols: Sequence[int], e: int) -> List[int]:
    result = [1 << j for j in range(len(cols))]
    base = list(cols)
    while e:
        if e & 1:
            result = _compose(base, result)
        base = _compose(base, base)
        e >>= 1
    return result


def _prime_factors(n: int) -> List[int]:
    factors = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            factors.append(d)
            while n % d == 0:
                n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        factors.append(n)
    return factors


def is_primitive(params: MiniParams) -> bool:
    """True if the LFSR transition matrix has order 2^(mn) - 1."""
    bits = params.lfsr_bits
    if bits > MAX_PRIMITIVE_BITS:
        raise DomainTooLargeError(f"Primitivity test is limited to {MAX_PRIMITIVE_BITS} LFSR bits")
    cols = _transition_columns(params)
    identity = [1 << j for j in range(bits)]
    order = (1 << bits) - 1
    if _power(cols, order) != identity:
        return False
    return all(_power(cols, order // q) != identity for q in _prime_factors(order))


def _candidate_taps(m: int, n: int) -> Iterator[Tuple[Tuple[int, int], ...]]:
    exponents = range((1 << m) - 1)
    for extra in range(0, n):
        for cells in itertools.combinations(range(1, n), extra):
            for exps in itertools.product(exponents, repeat=extra + 1):
                yield tuple(zip((0,) + cells, exps))


def find_primitive_params(m: int, n: int, mid: Optional[int] = None, **options) -> MiniParams:
    """
    First tap configuration, in a fixed search order, whose LFSR is maximal.

    Candidates always tap cell 0 (so the feedback is invertible) and use as
    few further cells as possible.

    Raises:
        DomainTooLargeError: m * n above the primitivity-test bound
        ParameterError: No configuration found
    """
    if m * n > MAX_PRIMITIVE_BITS:
        raise DomainTooLargeError(f"Primitivity test is limited to {MAX_PRIMITIVE_BITS} LFSR bits")
    tried = 0
    for taps in _candidate_taps(m, n):
        params = MiniParams(m, n, taps, mid=mid, **options)
        tried += 1
        if is_primitive(params):
            logger.info("Primitive configuration for m=%d, n=%d after %d candidates: %s", m, n, tried, taps)
            return params
    raise ParameterError(f"No primitive tap configuration found for m={m}, n={n}")
