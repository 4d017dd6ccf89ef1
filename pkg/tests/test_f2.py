import numpy as np
import pytest

from app.models.errors import ParameterError
from app.services.analysis.f2 import (F2System, SolveStatus, bits_from_int, gaussian_solve, int_from_bits, rank,
                                      rref)


def mat_vec(rows, x):
    return (np.asarray(rows, dtype=np.int64) @ np.asarray(x, dtype=np.int64)) % 2


def test_rref_small():
    R, pivots = rref([[0, 1, 1], [1, 1, 0], [1, 0, 1]])
    assert pivots == [0, 1]
    assert R.tolist() == [[1, 0, 1], [0, 1, 1], [0, 0, 0]]


def test_rank():
    assert rank(np.eye(7, dtype=np.uint8)) == 7
    assert rank([[1, 1], [1, 1]]) == 1
    assert rank(np.zeros((3, 4), dtype=np.uint8)) == 0


def test_unique_solution():
    gen = np.random.default_rng(7)
    x = gen.integers(0, 2, 40, dtype=np.uint8)
    rows = gen.integers(0, 2, (80, 40), dtype=np.uint8)
    result = gaussian_solve(F2System(rows, mat_vec(rows, x)))
    assert result.status is SolveStatus.UNIQUE
    assert result.unique
    assert result.rank == 40
    assert result.solution.tolist() == x.tolist()
    assert result.nullspace == []


def test_underdetermined_solution_space():
    gen = np.random.default_rng(11)
    rows = gen.integers(0, 2, (6, 12), dtype=np.uint8)
    rhs = mat_vec(rows, gen.integers(0, 2, 12))
    result = gaussian_solve(F2System(rows, rhs))
    assert result.status is SolveStatus.UNDERDETERMINED
    assert len(result.nullspace) == 12 - result.rank
    assert mat_vec(rows, result.solution).tolist() == rhs.tolist()
    for v in result.nullspace:
        assert not mat_vec(rows, v).any()


def test_inconsistent():
    result = gaussian_solve(F2System([[1, 0], [1, 0]], [0, 1]))
    assert result.status is SolveStatus.INCONSISTENT
    assert result.solution is None
    assert result.rank == 1


def test_system_shape_checks_and_extend():
    with pytest.raises(ParameterError):
        F2System([[1, 0]], [1, 0])
    with pytest.raises(ValueError):
        F2System(np.zeros((1, 3)), [0], ncols=4)
    system = F2System.empty(3).extend([[1, 0, 0]], [1]).extend([[0, 1, 0], [0, 0, 1]], [0, 1])
    assert system.nrows == 3
    assert gaussian_solve(system).solution.tolist() == [1, 0, 1]


def test_bit_helpers():
    assert bits_from_int(0b1011, 6).tolist() == [1, 1, 0, 1, 0, 0]
    assert int_from_bits([1, 1, 0, 1, 0, 0]) == 0b1011
    assert int_from_bits(bits_from_int(0xDEADBEEF, 32)) == 0xDEADBEEF
