"""
Guess-and-determine attack on mini-SNOW.

Write u_k for the LFSR sequence, so cell i at time t holds u_{t+i}. Each
keystream word ties two LFSR words to the FSM registers,

    z_t = ((u_{t+n-1} + R1_t) ^ R2_t) ^ u_t,

and the registers move on with R1_{t+1} = u_{t+mid} + R2_t and
R2_{t+1} = S(R1_t). Guessing (R1_0, R2_0) fixes the registers at every
later clock once the words feeding R1 are known; the keystream then
determines one of each pair (u_t, u_{t+n-1}) from the other, and the LFSR
recurrence fills in any word whose equation has a single unknown. Words
that nothing determines are branched on.
"""
import itertools
import logging
from typing import Any, Dict, List, Sequence

from app.models.errors import DomainTooLargeError, NoConsistentStateError, ParameterError
from app.models.mini import MiniArith, MiniParams
from app.services.mini_snow import MAX_ENUMERATION_BITS, MiniCipher, MiniState, power_table

logger = logging.getLogger(__name__)


class GDResult:
    """
    Attributes:
        state: The recovered initial state (first candidate found)
        guesses: (R1_0, R2_0) guesses tried
        branches: Search nodes visited over all guesses
        candidates: Every state that reproduces the keystream (all of them
            in exhaustive mode, otherwise just the first)
    """

    def __init__(self, state: MiniState, guesses: int, branches: int, candidates: List[MiniState]):
        self.state = state
        self.guesses = guesses
        self.branches = branches
        self.candidates = candidates

    @property
    def unique(self) -> bool:
        return len(self.candidates) == 1

    def to_dict(self) -> Dict[str, Any]:
        return {
            "state": list(self.state),
            "guesses": self.guesses,
            "branches": self.branches,
            "candidates": [list(c) for c in self.candidates],
        }

    def __repr__(self) -> str:
        return f"GDResult(state={self.state}, guesses={self.guesses}, candidates={len(self.candidates)})"


class _Search:
    """Depth-first determination of the LFSR words for one keystream."""

    def __init__(self, params: MiniParams, keystream: Sequence[int]):
        self.p = params
        self.z = list(keystream)
        self.size = 1 << params.m
        self.mask = params.mask
        self.xor = params.arith == MiniArith.XOR.value
        self.horizon = len(self.z) + params.n
        self.taps = []
        for index, e in params.taps:
            table = power_table(params.m, params.poly, e)
            inverse = [0] * self.size
            for v, w in enumerate(table):
                inverse[w] = v
            self.taps.append((index, table, inverse))
        self.branches = 0
        self.found: List[MiniState] = []
        self.guess = (0, 0)

    def _add(self, a: int, b: int) -> int:
        return a ^ b if self.xor else (a + b) & self.mask

    def _sub(self, a: int, b: int) -> int:
        return a ^ b if self.xor else (a - b) & self.mask

    def _propagate(self, known: Dict[int, int]) -> bool:
        """Apply u_k = sum x^e u_{k-n+i} wherever one word is missing; False on contradiction."""
        n = self.p.n
        changed = True
        while changed:
            changed = False
            # equations past max(known) + n have at least two unknowns
            top = min(self.horizon, max(known, default=-1) + n + 1)
            for k in range(n, top):
                acc = known.get(k)
                missing = None if acc is not None else (k, None)
                acc = acc or 0
                blocked = False
                for index, table, inverse in self.taps:
                    c = k - n + index
                    v = known.get(c)
                    if v is not None:
                        acc ^= table[v]
                    elif missing is None:
                        missing = (c, inverse)
                    else:
                        blocked = True
                        break
                if blocked:
                    continue
                if missing is None:
                    if acc:
                        return False
                    continue
                cell, inverse = missing
                known[cell] = acc if inverse is None else inverse[acc]
                changed = True
        return True

    def _verify(self, state: MiniState) -> bool:
        cipher = MiniCipher(self.p, state)
        return all(cipher.step() == z for z in self.z)

    def try_guess(self, r1: int, r2: int, stop: bool) -> None:
        self.guess = (r1, r2)
        self._run(0, r1, r2, {}, stop)

    def _run(self, t: int, r1: int, r2: int, known: Dict[int, int], stop: bool) -> None:
        self.branches += 1
        n = self.p.n
        if all(i in known for i in range(n)):
            state = tuple(known[i] for i in range(n)) + self.guess
            if state not in self.found and self._verify(state):
                self.found.append(state)
            return

        low, high = t, t + n - 1
        options = [known[low]] if low in known else range(self.size)
        for u_low in options:
            trial = dict(known)
            trial[low] = u_low
            if high in trial:
                if ((self._add(trial[high], r1) ^ r2) ^ u_low) != self.z[t]:
                    continue
            else:
                trial[high] = self._sub(self.z[t] ^ u_low ^ r2, r1)
            if not self._propagate(trial):
                continue

            feed = t + self.p.mid
            feeds = [trial[feed]] if feed in trial else range(self.size)
            for u_feed in feeds:
                branch = dict(trial)
                branch[feed] = u_feed
                if not self._propagate(branch):
                    continue
                self._run(t + 1, self._add(u_feed, r2), self.p.sbox[r1], branch, stop)
                if stop and self.found:
                    return


def gd_attack_mini(params: MiniParams,
                   keystream: Sequence[int],
                   exhaustive: bool = False) -> GDResult:
    """
    Recover a mini-SNOW initial state from its keystream.

    Args:
        params: Cipher parameters
        keystream: Observed words z_0, z_1, ... (at least n of them)
        exhaustive: Try every guess and collect all consistent states

    Returns:
        GDResult; guesses never exceeds 2^(2m)

    Raises:
        DomainTooLargeError: More than 24 state bits
        NoConsistentStateError: No state reproduces the keystream
    """
    if params.state_bits > MAX_ENUMERATION_BITS:
        raise DomainTooLargeError(f"{params.state_bits} state bits exceeds the bound of {MAX_ENUMERATION_BITS}")
    if len(keystream) < params.n:
        raise ParameterError(f"Need at least n={params.n} keystream words, got {len(keystream)}")
    if any(not 0 <= w <= params.mask for w in keystream):
        raise ParameterError(f"Keystream words must fit in {params.m} bits")

    search = _Search(params, keystream)
    guesses = 0
    for r1, r2 in itertools.product(range(1 << params.m), repeat=2):
        guesses += 1
        search.try_guess(r1, r2, stop=not exhaustive)
        if search.found and not exhaustive:
            break
        if guesses % (1 << params.m) == 0:
            logger.debug("gd-mini: %d guesses, %d branches", guesses, search.branches)

    if not search.found:
        raise NoConsistentStateError(
            f"No mini-SNOW state with these parameters reproduces the {len(keystream)}-word keystream"
        )
    result = GDResult(search.found[0], guesses, search.branches, list(search.found))
    logger.info("gd-mini recovered %s after %d guesses (%d branches, %d candidates)",
                result.state, guesses, result.branches, len(result.candidates))
    return result

