"""Kernel selection: the compiled extension when importable, numpy otherwise.

Set ``QUDITKIT_PURE_PYTHON=1`` to force the fallback. Even when compiled,
matrices with many nonzeros per row go to the numpy path: its batched
BLAS product beats the scalar loop there (see benchmarks/bench_kernels.py).
"""

import os

import numpy as np

from . import _kernels_py

# above this many nonzeros per matrix row, batched BLAS is faster
DENSE_ROW_CUTOFF = 6

if os.environ.get("QUDITKIT_PURE_PYTHON", "") not in ("", "0"):
    _impl = _kernels_py
else:
    try:
        from . import _kernels as _impl
    except ImportError:  # extension not built
        _impl = _kernels_py

COMPILED = _impl is not _kernels_py
BACKEND = "cython" if COMPILED else "numpy"


def prefers_compiled(mat: np.ndarray) -> bool:
    return COMPILED and np.count_nonzero(mat) <= DENSE_ROW_CUTOFF * mat.shape[0]


def apply_fibers(state, mat, bases, offsets):
    impl = _impl if prefers_compiled(mat) else _kernels_py
    impl.apply_fibers(state, mat, bases, offsets)


apply_diagonal = _impl.apply_diagonal

__all__ = ["BACKEND", "COMPILED", "DENSE_ROW_CUTOFF", "apply_diagonal", "apply_fibers", "prefers_compiled"]
