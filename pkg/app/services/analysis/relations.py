"""
Quadratic relations of an S-box.

Every polynomial of degree at most 2 in the input bits x and output bits y
that vanishes on all pairs (x, S(x)) is a relation. They form the null
space of the evaluation matrix whose rows are the pairs and whose columns
are the monomials 1, x_i, y_i, and all products of two distinct variables.
"""
import itertools
import logging
from typing import Any, Dict, List, Sequence, Tuple, Union

import numpy as np

from app.models.errors import ParameterError
from app.services.analysis.f2 import F2System, gaussian_solve, rank
from app.services.sboxes import ByteSBox

logger = logging.getLogger(__name__)

Monomial = Tuple[str, ...]


class QuadraticRelations:
    """
    Attributes:
        count: Number of linearly independent relations
        rank: Rank of the evaluation matrix
        monomials: Column labels
        basis: One 0/1 vector per relation, over the monomials
    """

    def __init__(self, count: int, rank: int, monomials: List[Monomial], basis: List[np.ndarray]):
        self.count = count
        self.rank = rank
        self.monomials = monomials
        self.basis = basis

    def relation_text(self, k: int) -> str:
        terms = ["*".join(m) if m else "1" for m, bit in zip(self.monomials, self.basis[k]) if bit]
        return " + ".join(terms) + " = 0"

    def to_dict(self, examples: int = 3) -> Dict[str, Any]:
        return {
            "count": self.count,
            "rank": self.rank,
            "monomials": len(self.monomials),
            "examples": [self.relation_text(k) for k in range(min(examples, self.count))],
        }

    def __repr__(self) -> str:
        return f"QuadraticRelations(count={self.count}, rank={self.rank}, monomials={len(self.monomials)})"


def quadratic_monomials(in_bits: int, out_bits: int) -> List[Monomial]:
    names = [f"x{i}" for i in range(in_bits)] + [f"y{i}" for i in range(out_bits)]
    return [()] + [(v,) for v in names] + list(itertools.combinations(names, 2))


def evaluation_matrix(table: Sequence[int], in_bits: int, out_bits: int) -> np.ndarray:
    """Rows: inputs x; columns: monomials evaluated at (x, S(x))."""
    xs = np.arange(len(table), dtype=np.int64)
    ys = np.asarray(table, dtype=np.int64)
    variables = [(xs >> i) & 1 for i in range(in_bits)] + [(ys >> i) & 1 for i in range(out_bits)]
    columns = [np.ones(len(table), dtype=np.int64)]
    columns += variables
    columns += [a & b for a, b in itertools.combinations(variables, 2)]
    return np.stack(columns, axis=1).astype(np.uint8)


def sbox_quadratic_relations(sbox: Union[ByteSBox, Sequence[int]], out_bits: int = None) -> QuadraticRelations:
    """
    Count the quadratic relations of an S-box.

    Args:
        sbox: ByteSBox or a table of 2^k outputs
        out_bits: Output width (defaults to the input width)
    """
    table = sbox.table if isinstance(sbox, ByteSBox) else tuple(sbox)
    in_bits = len(table).bit_length() - 1
    if len(table) != 1 << in_bits:
        raise ParameterError("S-box table length must be a power of two")
    out_bits = in_bits if out_bits is None else out_bits

    matrix = evaluation_matrix(table, in_bits, out_bits)
    monomials = quadratic_monomials(in_bits, out_bits)
    solution = gaussian_solve(F2System(matrix, np.zeros(matrix.shape[0], dtype=np.uint8)))
    result = QuadraticRelations(len(solution.nullspace), solution.rank, monomials, solution.nullspace)
    name = getattr(sbox, "name", "table")
    logger.info("S-box %s: %d quadratic relations over %d monomials", name, result.count, len(monomials))
    return result


def relation_holds(table: Sequence[int], relation: np.ndarray, in_bits: int, out_bits: int) -> bool:
    """True if the relation vanishes on every pair."""
    values = evaluation_matrix(table, in_bits, out_bits) @ relation.astype(np.int64)
    return bool(np.all(values % 2 == 0))


def matrix_rank(table: Sequence[int], in_bits: int, out_bits: int) -> int:
    return rank(evaluation_matrix(table, in_bits, out_bits))
