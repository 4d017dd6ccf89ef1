"""
Exact linear correlations of small functions.

correlation(T, lambda) = (#{x : T.F(x) = lambda.x} - #{x : T.F(x) != lambda.x}) / 2^m
"""
import logging
from typing import Callable, Sequence, Union

import numpy as np

from app.models.errors import DomainTooLargeError, ParameterError
from app.models.mask import MaskPair

logger = logging.getLogger(__name__)

MAX_DOMAIN_BITS = 16

FunctionLike = Union[Callable[[int], int], Sequence[int]]


def parity(values: np.ndarray) -> np.ndarray:
    """Parity of each entry, by folding halves together."""
    v = np.asarray(values, dtype=np.uint64).copy()
    for shift in (32, 16, 8, 4, 2, 1):
        v ^= v >> np.uint64(shift)
    return (v & np.uint64(1)).astype(np.uint8)


def function_table(F: FunctionLike, width: int) -> np.ndarray:
    """All outputs of F over the m-bit domain."""
    if width > MAX_DOMAIN_BITS:
        raise DomainTooLargeError(f"Exhaustive correlation is limited to {MAX_DOMAIN_BITS}-bit inputs, got {width}")
    size = 1 << width
    if callable(F):
        table = np.fromiter((F(x) for x in range(size)), dtype=np.uint64, count=size)
    else:
        table = np.asarray(F, dtype=np.uint64)
        if table.shape != (size,):
            raise ParameterError(f"Function table must have {size} entries")
    return table


def correlation_exhaustive(F: FunctionLike, mask: MaskPair) -> float:
    """
    Exact correlation between T.F(x) and lambda.x over every x.

    Raises:
        DomainTooLargeError: mask.width > 16
    """
    table = function_table(F, mask.width)
    x = np.arange(1 << mask.width, dtype=np.uint64)
    agree = parity((table & np.uint64(mask.T)) ^ (x & np.uint64(mask.lam))) == 0
    agreements = int(agree.sum())
    return (2 * agreements - table.size) / table.size


def walsh_hadamard(values: np.ndarray) -> np.ndarray:
    """Unnormalised fast Walsh-Hadamard transform of a length-2^m vector."""
    a = np.asarray(values, dtype=np.int64).copy()
    n = a.size
    if n & (n - 1):
        raise ParameterError("Walsh-Hadamard transform needs a power-of-two length")
    h = 1
    while h < n:
        a = a.reshape(-1, 2 * h)
        left = a[:, :h].copy()
        right = a[:, h:]
        a[:, :h] = left + right
        a[:, h:] = left - right
        a = a.reshape(-1)
        h *= 2
    return a


def correlation_spectrum(F: FunctionLike, T: int, width: int) -> np.ndarray:
    """
    Correlation of T.F(x) with every input mask at once.

    Returns:
        Array c with c[lam] = correlation_exhaustive(F, MaskPair(T, lam, width))
    """
    table = function_table(F, width)
    signs = 1 - 2 * parity(table & np.uint64(T)).astype(np.int64)
    spectrum = walsh_hadamard(signs) / table.size
    logger.debug("Correlation spectrum for T=0x%X: max |c| = %.4f", T, float(np.abs(spectrum).max()))
    return spectrum


def linear_approximation_table(sbox: Sequence[int]) -> np.ndarray:
    """Correlations for every (T, lambda) pair; rows indexed by T."""
    size = len(sbox)
    width = size.bit_length() - 1
    if size != 1 << width:
        raise ParameterError("S-box length must be a power of two")
    return np.vstack([correlation_spectrum(sbox, T, width) for T in range(size)])
