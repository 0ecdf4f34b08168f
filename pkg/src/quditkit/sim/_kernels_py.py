"""Numpy fallback for the compiled fiber kernels; same contracts."""

import numpy as np


def apply_fibers(state, mat, bases, offsets):
    idx = bases[:, None] + offsets[None, :]
    state[idx] = state[idx] @ mat.T


def apply_diagonal(state, diag, bases, offsets):
    idx = bases[:, None] + offsets[None, :]
    state[idx] *= diag
