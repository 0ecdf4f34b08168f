"""Prepare an arbitrary mixed-radix state from |0...0> with controlled rotations."""

from __future__ import annotations

import math
from itertools import product
from typing import Sequence

import numpy as np

from ..core.circuit import Circuit
from ..core.gates import ControlSpec, GateSpec
from ..core.radix import total_dim
from .rotations import ANGLE_TOL, givens_eliminate

NORM_TOL = 1e-8
MASS_FLOOR = 1e-30


class StatePrepError(ValueError):
    pass


def tree_size(dims: Sequence[int]) -> int:
    """Number of rotation-tree nodes: sum over k of prod(dims[:k])."""
    size, width = 0, 1
    for d in dims:
        size += width
        width *= d
    return size


def cascade(v: np.ndarray) -> list[tuple[str, tuple]]:
    """Gate (name, params) list sending |0> to the unit vector ``v`` exactly.

    Adjacent rotations null ``v`` down to c|0>; the leading z rotation puts
    the phase c in place and the inverse rotations rebuild ``v``.
    """
    v = np.asarray(v, dtype=complex).ravel()
    d = v.shape[0]
    # only column 0 matters: the other columns are zero and stay zero
    padded = np.zeros((d, d), dtype=complex)
    padded[:, 0] = v
    steps, phases = givens_eliminate(padded)
    gates = []
    c = phases[0]
    if abs(c) > ANGLE_TOL:
        gates.append(("rz", (0, 1, -2.0 * c)))
    for i, j, theta, phi in reversed(steps):
        gates.append(("rxy", (i, j, -theta, phi)))
    return gates


def prune(amps: np.ndarray, dims: Sequence[int], eps: float) -> np.ndarray:
    """Zero every amplitude below a tree node of mass < eps/B, B the tree size.

    Dropped subtrees are disjoint and there are at most B of them, so the
    discarded probability stays below ``eps``.
    """
    if eps <= 0:
        return amps
    threshold = eps / tree_size(dims)
    prob = (np.abs(amps) ** 2).reshape(dims)
    keep = np.ones(prob.shape, dtype=bool)
    n = len(dims)
    for k in range(1, n + 1):
        mass = prob.sum(axis=tuple(range(k, n))) if k < n else prob
        drop = (mass < threshold).reshape(tuple(dims[:k]) + (1,) * (n - k))
        keep &= ~drop
    out = np.where(keep.ravel(), amps, 0)
    return out


def prepare_state(target, eps: float = 0.0, dims: Sequence[int] | None = None) -> Circuit:
    """Circuit taking |0...0> to ``target`` (a StateVector or amplitude array).

    With ``eps > 0`` low-weight branches are pruned first, so the prepared
    state has fidelity at least ``1 - eps`` with the target.
    """
    if dims is None:
        dims = getattr(target, "dims", None)
        if dims is None:
            raise StatePrepError("dims are required for a plain amplitude array")
    dims = tuple(int(d) for d in dims)
    amps = np.asarray(getattr(target, "amps", target), dtype=complex).ravel()
    if amps.shape[0] != total_dim(dims):
        raise StatePrepError(f"state has {amps.shape[0]} amplitudes, dims {dims} need {total_dim(dims)}")
    norm2 = float(np.vdot(amps, amps).real)
    if abs(norm2 - 1) > NORM_TOL:
        raise StatePrepError(f"target state is not normalized (norm^2 = {norm2:.3g})")
    if not 0 <= eps < 1:
        raise StatePrepError(f"eps must lie in [0, 1), got {eps}")
    amps = prune(amps, dims, eps)
    amps = amps / np.linalg.norm(amps)

    circuit = Circuit.from_dims(dims)
    n = len(dims)
    for k in range(n):
        width = math.prod(dims[:k])
        block = amps.reshape(width, dims[k], -1)
        for p, prefix in enumerate(product(*(range(d) for d in dims[:k]))):
            sub = block[p]
            mass = float(np.vdot(sub, sub).real)
            if mass < MASS_FLOOR:
                continue
            if k < n - 1:
                v = np.sqrt(np.sum(np.abs(sub) ** 2, axis=1) / mass)
            else:
                v = sub[:, 0] / math.sqrt(mass)
            control = ControlSpec(tuple(zip(range(k), prefix))) if k else None
            for name, params in cascade(v):
                circuit.add_gate(GateSpec(name, params, (k,), control))
    return circuit
