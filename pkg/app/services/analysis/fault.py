"""
Fault injection on SNOW 3G and state recovery on its linearized variant.

The harness restores a snapshot, runs it to the fault time, changes a
register through a FaultHook and keeps going. FaultHook is only available
when analysis hooks are enabled (SNOWLAB_ANALYSIS_HOOKS or
app.config.enable_analysis_hooks()).

With addition replaced by XOR and S1, S2 by the identity, SNOW 3G started
from zero FSM registers outputs a keystream that is linear in the 512 LFSR
bits. A reset fault makes the keystream difference a linear function of
those bits as well, so every faulty run adds equations. A flip does not:
its difference is the same for every state.
"""
import logging
from functools import lru_cache
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from app.config import get_settings
from app.models.errors import (
    FaultError,
    HookUnavailableError,
    NoConsistentStateError,
    RankDeficientError,
)
from app.models.fault import FaultKind, FaultSpec, FaultTarget
from app.models.state import Snow3gState
from app.services.analysis.bias import chunk_generator
from app.services.analysis.f2 import F2System, SolveStatus, gaussian_solve, int_from_bits, rank
from app.services.field import build_alpha_tables
from app.services.keystream import CipherVariant
from app.services.sboxes import MixOrientation
from app.services.snow3g import Snow3g, snow3g_restore

logger = logging.getLogger(__name__)

STATE_BITS = 512
DEFAULT_WINDOW = 2


class FaultHook:
    """
    Read/write access to a running SNOW 3G instance.

    Raises:
        HookUnavailableError: Analysis hooks are disabled
    """

    def __init__(self, cipher: Snow3g):
        if not get_settings().analysis_hooks:
            raise HookUnavailableError(
                "Fault hooks are disabled; set SNOWLAB_ANALYSIS_HOOKS=1 or call enable_analysis_hooks()"
            )
        self.cipher = cipher

    def read(self, target: str, cell: int = 0) -> int:
        if target == FaultTarget.LFSR.value:
            return self.cipher.lfsr[cell]
        return getattr(self.cipher, target)

    def write(self, target: str, value: int, cell: int = 0) -> None:
        if target == FaultTarget.LFSR.value:
            self.cipher.lfsr[cell] = value
        else:
            setattr(self.cipher, target, value)

    def apply(self, fault: FaultSpec) -> None:
        if fault.time != self.cipher.clock:
            raise FaultError(f"Fault scheduled for t={fault.time} but the cipher is at t={self.cipher.clock}")
        self.write(fault.target, fault.apply(self.read(fault.target, fault.cell)), fault.cell)
        logger.debug("Injected %s", fault.label())


class KeystreamRun:
    """
    Keystream observed from a snapshot.

    Attributes:
        start: Snapshot the run started from
        words: Keystream words z_start .. z_start+len-1
        variant: Cipher variant used
        orientation: MixColumn layout used
        fault: The fault applied, None for a clean run
    """

    def __init__(self, start: Snow3gState, words: List[int], variant: CipherVariant,
                 orientation: MixOrientation, fault: Optional[FaultSpec] = None):
        self.start = start
        self.words = words
        self.variant = variant
        self.orientation = orientation
        self.fault = fault

    @property
    def clock(self) -> int:
        return self.start.clock

    def __repr__(self) -> str:
        tag = self.fault.label() if self.fault else "clean"
        return f"KeystreamRun({tag}, t0={self.clock}, words={len(self.words)})"


FaultyRun = KeystreamRun


def inject_fault(snapshot: Snow3gState, fault: FaultSpec,
                 orientation: MixOrientation = MixOrientation.GPP,
                 variant: CipherVariant = CipherVariant.REAL) -> Snow3gState:
    """Return a copy of snapshot with the fault applied; snapshot.clock must equal fault.time."""
    if snapshot.clock != fault.time:
        raise FaultError(f"Snapshot is at t={snapshot.clock}, fault is for t={fault.time}")
    cipher = snow3g_restore(snapshot, orientation, variant)
    FaultHook(cipher).apply(fault)
    return cipher.snapshot()


def clean_run(snapshot: Snow3gState, words: int,
              variant: CipherVariant = CipherVariant.LINEARIZED,
              orientation: MixOrientation = MixOrientation.GPP) -> KeystreamRun:
    cipher = snow3g_restore(snapshot, orientation, variant)
    return KeystreamRun(snapshot, cipher.keystream(words), variant, orientation)


def faulty_run(snapshot: Snow3gState, fault: FaultSpec, words: int,
               variant: CipherVariant = CipherVariant.LINEARIZED,
               orientation: MixOrientation = MixOrientation.GPP) -> KeystreamRun:
    """
    Reset to snapshot, run to fault.time, apply the fault, run on.

    Raises:
        FaultError: The fault time lies outside the run
    """
    if not snapshot.clock <= fault.time < snapshot.clock + words:
        raise FaultError(
            f"Fault at t={fault.time} is outside the run t={snapshot.clock}..{snapshot.clock + words - 1}"
        )
    cipher = snow3g_restore(snapshot, orientation, variant)
    hook = FaultHook(cipher)
    out = []
    for _ in range(words):
        if cipher.clock == fault.time:
            hook.apply(fault)
        out.append(cipher.step())
    return KeystreamRun(snapshot, out, variant, orientation, fault)


# ----------------------------------------------------------------------
# Linear response of the linearized cipher
# ----------------------------------------------------------------------

def _apply_batch(values: np.ndarray, fault: FaultSpec) -> np.ndarray:
    mask = np.uint32(fault.mask)
    if fault.kind == FaultKind.FLIP.value:
        return values ^ mask
    return values & ~mask


def _simulate_linearized(lfsr: np.ndarray, steps: int,
                         fault: Optional[FaultSpec] = None) -> np.ndarray:
    """
    Keystream of the linearized cipher for many LFSR fills at once.

    FSM registers start at zero; fault.time is relative to the start.

    Returns:
        (lanes, steps) uint32
    """
    tables = build_alpha_tables()
    mul_a = np.asarray(tables.mul_a, dtype=np.uint32)
    mul_ainv = np.asarray(tables.mul_ainv, dtype=np.uint32)
    s = lfsr.astype(np.uint32).copy()
    lanes = s.shape[0]
    r1 = np.zeros(lanes, dtype=np.uint32)
    r2 = np.zeros(lanes, dtype=np.uint32)
    r3 = np.zeros(lanes, dtype=np.uint32)
    out = np.zeros((lanes, steps), dtype=np.uint32)
    for t in range(steps):
        if fault is not None and fault.time == t:
            if fault.target == FaultTarget.LFSR.value:
                s[:, fault.cell] = _apply_batch(s[:, fault.cell], fault)
            elif fault.target == FaultTarget.R1.value:
                r1 = _apply_batch(r1, fault)
            elif fault.target == FaultTarget.R2.value:
                r2 = _apply_batch(r2, fault)
            else:
                r3 = _apply_batch(r3, fault)
        f = s[:, 15] ^ r1 ^ r2
        r = r2 ^ r3 ^ s[:, 5]
        r3, r2, r1 = r2, r1, r
        out[:, t] = f ^ s[:, 0]
        v = ((s[:, 0] << np.uint32(8)) ^ mul_a[s[:, 0] >> np.uint32(24)] ^ s[:, 2]
             ^ (s[:, 11] >> np.uint32(8)) ^ mul_ainv[s[:, 11] & np.uint32(0xFF)])
        s = np.concatenate([s[:, 1:], v[:, None]], axis=1)
    return out


@lru_cache(maxsize=1)
def _unit_fills() -> np.ndarray:
    """Row 0 is the zero fill, row 1 + j has only LFSR bit j set."""
    fills = np.zeros((STATE_BITS + 1, 16), dtype=np.uint32)
    for j in range(STATE_BITS):
        fills[1 + j, j // 32] = np.uint32(1 << (j % 32))
    return fills


def _word_bits(words: np.ndarray) -> np.ndarray:
    """(k,) uint32 -> (32, k) bit matrix, row b = bit b."""
    return ((words[None, :] >> np.arange(32, dtype=np.uint32)[:, None]) & 1).astype(np.uint8)


@lru_cache(maxsize=256)
def fault_response(target: str, cell: int, bit: Optional[int], kind: str,
                   time: int, window: int) -> Tuple[np.ndarray, np.ndarray]:
    """
    Equations contributed by one fault.

    Args:
        target, cell, bit, kind: The fault
        time: Fault time relative to the start of the run
        window: Keystream words used from the fault time on

    Returns:
        (rows, constant): rows is (32 * window, 512); bit b of word k of the
        keystream difference equals rows[32k + b] . x ^ bit b of constant[k]
    """
    fault = FaultSpec(target, time, bit, cell, kind)
    steps = time + window
    fills = _unit_fills()
    diff = _simulate_linearized(fills, steps) ^ _simulate_linearized(fills, steps, fault)
    constant = diff[0, time:steps]
    linear = diff[1:, time:steps] ^ constant[None, :]
    rows = np.vstack([_word_bits(linear[:, k]) for k in range(window)])
    return rows, constant


class RecoveryResult:
    """
    Outcome of recover_state_linearized.

    Attributes:
        state: Recovered snapshot (FSM registers zero)
        rank: Rank of the system
        equations: Number of equations
        fault_ranks: Rank contributed by each fault on its own
        verified: Recovered state regenerates the clean keystream
    """

    def __init__(self, state: Snow3gState, rank: int, equations: int,
                 fault_ranks: List[Tuple[str, int]], verified: bool):
        self.state = state
        self.rank = rank
        self.equations = equations
        self.fault_ranks = fault_ranks
        self.verified = verified

    def to_dict(self) -> Dict[str, Any]:
        return {
            "rank": self.rank,
            "equations": self.equations,
            "faults": len(self.fault_ranks),
            "fault_ranks": [{"fault": f, "rank": r} for f, r in self.fault_ranks],
            "verified": self.verified,
            "lfsr": [f"{w:08x}" for w in self.state.lfsr],
        }

    def __repr__(self) -> str:
        return f"RecoveryResult(rank={self.rank}, equations={self.equations}, verified={self.verified})"


def build_fault_system(clean: KeystreamRun, faulty: Sequence[KeystreamRun],
                       window: int = DEFAULT_WINDOW) -> Tuple[F2System, List[Tuple[str, int]]]:
    """Stack the equations of every faulty run against the clean run."""
    system = F2System.empty(STATE_BITS)
    fault_ranks = []
    for run in faulty:
        fault = run.fault
        if fault is None:
            raise FaultError("Faulty run carries no fault description")
        if run.clock != clean.clock:
            raise FaultError("Faulty runs must start from the clean run's snapshot")
        rel = fault.time - clean.clock
        w = min(window, len(clean.words) - rel, len(run.words) - rel)
        if w <= 0:
            raise FaultError(f"No keystream observed after {fault.label()}")
        rows, constant = fault_response(fault.target, fault.cell, fault.bit, fault.kind, rel, w)
        observed = np.array([clean.words[rel + k] ^ run.words[rel + k] for k in range(w)], dtype=np.uint32)
        rhs = _word_bits(observed ^ constant).T.reshape(-1)
        system = system.extend(rows, rhs)
        fault_ranks.append((fault.label(), rank(rows)))
    return system, fault_ranks


def recover_state_linearized(clean: KeystreamRun, faulty: Sequence[KeystreamRun],
                             window: int = DEFAULT_WINDOW) -> RecoveryResult:
    """
    Solve for the 512 LFSR bits at the start of the clean run.

    The run must come from the linearized cipher with zero FSM registers at
    its start. Only keystream words and fault descriptions are used.

    Raises:
        FaultError: Wrong cipher variant
        RankDeficientError: The faults do not determine the state
        NoConsistentStateError: The observations contradict each other
    """
    if clean.variant is not CipherVariant.LINEARIZED:
        raise FaultError("State recovery works on the linearized cipher only")
    if clean.start.r1 or clean.start.r2 or clean.start.r3:
        raise FaultError("State recovery expects zero FSM registers at the start of the run")
    if not faulty:
        raise RankDeficientError(0, STATE_BITS, "no faulty runs")

    system, fault_ranks = build_fault_system(clean, faulty, window)
    solution = gaussian_solve(system)
    if solution.status is SolveStatus.INCONSISTENT:
        raise NoConsistentStateError("Fault equations are inconsistent with the linearized cipher")
    if solution.rank < STATE_BITS:
        raise RankDeficientError(solution.rank, STATE_BITS, f"{len(faulty)} faulty runs")

    bits = solution.solution
    lfsr = tuple(int_from_bits(bits[32 * i:32 * (i + 1)]) for i in range(16))
    state = Snow3gState(lfsr, 0, 0, 0, clean.clock)
    regenerated = snow3g_restore(state, clean.orientation, CipherVariant.LINEARIZED).keystream(len(clean.words))
    result = RecoveryResult(state, solution.rank, system.nrows, fault_ranks, regenerated == clean.words)
    logger.info("Recovered LFSR from %d faults: rank %d, %d equations, verified=%s",
                len(faulty), result.rank, result.equations, result.verified)
    return result


def default_fault_schedule(start: int = 0) -> List[FaultSpec]:
    """LFSR cell 0 reset at 16 consecutive clocks, then four R1 and four R2 resets."""
    schedule = [FaultSpec(FaultTarget.LFSR.value, start + t, None, 0, FaultKind.RESET.value) for t in range(16)]
    schedule += [FaultSpec(FaultTarget.R1.value, start + 16 + k, None, 0, FaultKind.RESET.value) for k in range(4)]
    schedule += [FaultSpec(FaultTarget.R2.value, start + 20 + k, None, 0, FaultKind.RESET.value) for k in range(4)]
    return schedule


def single_bit_schedule(count: int = 24, start: int = 0, kind: str = FaultKind.RESET.value) -> List[FaultSpec]:
    """count single-bit faults spread over cells, bits and clocks."""
    return [FaultSpec(FaultTarget.LFSR.value, start + k, (11 * k) % 32, k % 16, kind) for k in range(count)]


def random_planted_state(seed: int, trial: int = 0) -> Snow3gState:
    rng = chunk_generator(seed, trial)
    lfsr = tuple(int(w) for w in rng.integers(0, 1 << 32, size=16, dtype=np.uint64))
    return Snow3gState(lfsr, 0, 0, 0, 0)


def run_fault_experiment(seed: int,
                         faults: Optional[Sequence[FaultSpec]] = None,
                         trial: int = 0,
                         window: int = DEFAULT_WINDOW) -> Tuple[Snow3gState, RecoveryResult]:
    """Plant a random LFSR, run the fault schedule and recover the state."""
    faults = list(faults) if faults is not None else default_fault_schedule()
    planted = random_planted_state(seed, trial)
    words = max(f.time for f in faults) + window + 1 if faults else window
    clean = clean_run(planted, words)
    runs = [faulty_run(planted, f, words) for f in faults]
    return planted, recover_state_linearized(clean, runs, window)
