"""
Linear algebra over F2.

Matrices are numpy uint8 arrays holding 0/1. Elimination XORs the pivot
row into every other row with a 1 in the pivot column in one vectorised
step.
"""
import logging
from enum import Enum
from typing import List, Optional, Sequence, Tuple

import numpy as np

from app.models.errors import ParameterError

logger = logging.getLogger(__name__)


class SolveStatus(Enum):
    UNIQUE = "unique"
    UNDERDETERMINED = "underdetermined"
    INCONSISTENT = "inconsistent"

    @classmethod
    def values(cls) -> List[str]:
        return [s.value for s in cls]


class F2System:
    """
    A linear system rows * x = rhs over F2.

    Attributes:
        rows: (r, ncols) uint8 matrix
        rhs: length-r uint8 vector
        ncols: Number of variables
    """

    def __init__(self, rows, rhs, ncols: Optional[int] = None):
        rows = np.asarray(rows, dtype=np.uint8)
        self.rows = (rows.reshape(-1, ncols) if ncols is not None else rows) & 1
        self.rhs = np.asarray(rhs, dtype=np.uint8).reshape(-1) & 1
        self.ncols = self.rows.shape[1] if ncols is None else ncols

        self._validate()

    def _validate(self) -> None:
        if self.rows.shape[1] != self.ncols:
            raise ParameterError(f"Row width {self.rows.shape[1]} does not match {self.ncols} variables")
        if self.rows.shape[0] != self.rhs.shape[0]:
            raise ParameterError("rows and rhs must have the same length")

    @classmethod
    def empty(cls, ncols: int) -> "F2System":
        return cls(np.zeros((0, ncols), dtype=np.uint8), np.zeros(0, dtype=np.uint8), ncols)

    def extend(self, rows, rhs) -> "F2System":
        return F2System(np.vstack([self.rows, np.asarray(rows, dtype=np.uint8).reshape(-1, self.ncols)]),
                        np.concatenate([self.rhs, np.asarray(rhs, dtype=np.uint8).reshape(-1)]),
                        self.ncols)

    @property
    def nrows(self) -> int:
        return self.rows.shape[0]

    def __repr__(self) -> str:
        return f"F2System(rows={self.nrows}, ncols={self.ncols})"


class F2Solution:
    """
    Result of gaussian_solve.

    Attributes:
        status: UNIQUE, UNDERDETERMINED or INCONSISTENT
        rank: Rank of the coefficient matrix
        solution: A particular solution (None when inconsistent)
        nullspace: Basis of the homogeneous solutions
    """

    def __init__(self, status: SolveStatus, rank: int, solution: Optional[np.ndarray], nullspace: List[np.ndarray]):
        self.status = status
        self.rank = rank
        self.solution = solution
        self.nullspace = nullspace

    @property
    def unique(self) -> bool:
        return self.status is SolveStatus.UNIQUE

    def __repr__(self) -> str:
        return f"F2Solution(status={self.status.value}, rank={self.rank}, nullity={len(self.nullspace)})"


def rref(matrix) -> Tuple[np.ndarray, List[int]]:
    """
    Reduced row echelon form over F2.

    Returns:
        (R, pivot_cols)
    """
    R = (np.asarray(matrix, dtype=np.uint8) & 1).copy()
    nrows, ncols = R.shape
    pivots: List[int] = []
    row = 0
    for col in range(ncols):
        if row == nrows:
            break
        candidates = np.nonzero(R[row:, col])[0]
        if not candidates.size:
            continue
        found = row + candidates[0]
        if found != row:
            R[[row, found]] = R[[found, row]]
        hits = R[:, col].astype(bool)
        hits[row] = False
        R[hits] ^= R[row]
        pivots.append(col)
        row += 1
    return R, pivots


def rank(matrix) -> int:
    return len(rref(matrix)[1])


def gaussian_solve(system: F2System) -> F2Solution:
    """
    Solve rows * x = rhs.

    Returns:
        F2Solution; for UNDERDETERMINED systems the particular solution
        sets every free variable to 0.
    """
    n = system.ncols
    augmented = np.hstack([system.rows, system.rhs[:, None]])
    R, pivots = rref(augmented)
    if n in pivots:
        rank_a = len(pivots) - 1
        logger.debug("F2 system inconsistent (rank %d of %d)", rank_a, n)
        return F2Solution(SolveStatus.INCONSISTENT, rank_a, None, [])

    solution = np.zeros(n, dtype=np.uint8)
    for r, col in enumerate(pivots):
        solution[col] = R[r, n]

    pivot_set = set(pivots)
    free = [c for c in range(n) if c not in pivot_set]
    nullspace = []
    for f in free:
        v = np.zeros(n, dtype=np.uint8)
        v[f] = 1
        for r, col in enumerate(pivots):
            v[col] = R[r, f]
        nullspace.append(v)

    status = SolveStatus.UNIQUE if not free else SolveStatus.UNDERDETERMINED
    logger.debug("F2 system %s (rank %d of %d)", status.value, len(pivots), n)
    return F2Solution(status, len(pivots), solution, nullspace)


def bits_from_int(value: int, width: int) -> np.ndarray:
    """Little-endian bit vector of an int: entry i is bit i."""
    return np.array([(value >> i) & 1 for i in range(width)], dtype=np.uint8)


def int_from_bits(bits: Sequence[int]) -> int:
    return sum(int(b) << i for i, b in enumerate(bits))
