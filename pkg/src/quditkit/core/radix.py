"""Mixed-radix index arithmetic.

The first qudit is the most significant digit, so the basis state
``|2>_3 |0>_2`` sits at index 4 of the 6-dimensional space.
"""

from __future__ import annotations

from math import prod
from typing import Sequence

import numpy as np


class DimensionError(ValueError):
    """A digit, level or total dimension is out of range."""


def total_dim(dims: Sequence[int]) -> int:
    return prod(int(d) for d in dims)


def strides(dims: Sequence[int]) -> list[int]:
    out = [1] * len(dims)
    for i in range(len(dims) - 2, -1, -1):
        out[i] = out[i + 1] * int(dims[i + 1])
    return out


def radix_index(digits: Sequence[int], dims: Sequence[int]) -> int:
    """Return the basis index of ``digits`` under per-qudit radices ``dims``."""
    if len(digits) != len(dims):
        raise DimensionError(f"got {len(digits)} digits for {len(dims)} qudits")
    index = 0
    for q, (v, d) in enumerate(zip(digits, dims)):
        if not 0 <= v < d:
            raise DimensionError(f"digit {v} out of range for qudit {q} of dimension {d}")
        index = index * d + int(v)
    return index


def index_to_digits(index: int, dims: Sequence[int]) -> list[int]:
    D = total_dim(dims)
    if not 0 <= index < D:
        raise DimensionError(f"index {index} out of range for total dimension {D}")
    digits = [0] * len(dims)
    for q in range(len(dims) - 1, -1, -1):
        index, digits[q] = divmod(index, int(dims[q]))
    return digits


def digit_table(dims: Sequence[int]) -> np.ndarray:
    """All basis digit strings as a ``(D, n)`` integer array, in index order."""
    if not dims:
        return np.zeros((1, 0), dtype=np.int64)
    grids = np.indices(tuple(dims)).reshape(len(dims), -1)
    return grids.T.astype(np.int64)


def format_digits(digits: Sequence[int]) -> str:
    # digits may exceed 9, hence the separator
    return ",".join(str(int(v)) for v in digits)


def parse_digits(key: str) -> list[int]:
    return [int(tok) for tok in key.split(",")] if key else []
