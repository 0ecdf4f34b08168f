"""Two-qudit unitaries as controlled rotations and pair swaps."""

from __future__ import annotations

from typing import Sequence

import numpy as np

from ..core.radix import index_to_digits
from .graph import EnergyLevelGraph
from .rotations import RotationOp, check_unitary, givens_eliminate, path_edges, phase_rotations
from .routing import route_rotation


def _two_level_op(i: int, j: int, theta: float, phi: float, dims: tuple[int, int]) -> RotationOp:
    a = index_to_digits(i, dims)
    b = index_to_digits(j, dims)
    if a[0] == b[0]:
        # same control digit: a rotation on qudit 1 conditioned on qudit 0
        return RotationOp("crot", (a[1], b[1]), theta, phi, target=1, control=(0, a[0]))
    if a[1] == b[1]:
        return RotationOp("crot", (a[0], b[0]), theta, phi, target=0, control=(1, a[1]))
    return RotationOp("pswap", (0, 1), theta, phi, pair=(tuple(a), tuple(b)))


def _diagonal_ops(phases: np.ndarray, dims: tuple[int, int],
                  edges: tuple[list, list]) -> list[RotationOp]:
    """Controlled z rotations realizing a diagonal on two qudits up to global phase.

    Within each block of qudit 0 the relative phases go onto qudit 1,
    controlled by that block's level. The block-average phases then go onto
    qudit 0, once per level of qudit 1, so no uncontrolled op is needed.
    """
    d0, d1 = dims
    grid = np.asarray(phases, dtype=float).reshape(d0, d1)
    ops = []
    for x in range(d0):
        for a, b, t in phase_rotations(grid[x], edges[1]):
            ops.append(RotationOp("crot", (a, b), t, target=1, control=(0, x), axis="z"))
    means = grid.mean(axis=1)
    block_ops = phase_rotations(means, edges[0])
    for y in range(d1):
        for a, b, t in block_ops:
            ops.append(RotationOp("crot", (a, b), t, target=0, control=(1, y), axis="z"))
    return ops


def decompose_entangling_qr(u: np.ndarray, dims: Sequence[int],
                            graphs: Sequence[EnergyLevelGraph] | None = None) -> list[RotationOp]:
    """Rotations on operands (0, 1) whose product equals ``u`` up to global phase.

    Eliminations between composite states that share a digit become
    ``crot`` ops, the rest ``pswap``. When ``graphs`` are given, controlled
    rotations are routed onto their level graphs with uncontrolled swaps.
    """
    dims = tuple(int(d) for d in dims)
    if len(dims) != 2:
        raise ValueError(f"expected two operand dimensions, got {dims}")
    u = check_unitary(u, dims[0] * dims[1])
    if graphs is not None:
        graphs = tuple(graphs)
        for g, d in zip(graphs, dims):
            if g.dim != d:
                raise ValueError(f"graph has {g.dim} levels, operand has {d}")
        edges = (graphs[0].tree_edges(), graphs[1].tree_edges())
    else:
        edges = (path_edges(dims[0]), path_edges(dims[1]))
    steps, phases = givens_eliminate(u)
    ops = _diagonal_ops(phases, dims, edges)
    ops += [_two_level_op(i, j, -theta, phi, dims) for i, j, theta, phi in reversed(steps)]
    if graphs is None:
        return ops
    out = []
    for op in ops:
        out.extend(route_rotation(op, graphs[op.target]) if op.kind != "pswap" else [op])
    return out
