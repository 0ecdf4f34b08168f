"""Rewrite rotations on missing level edges into swaps along the best path."""

from __future__ import annotations

import math
from typing import Iterable

from .graph import EnergyLevelGraph
from .rotations import RotationOp, wrap_angle


def _swap(op: RotationOp, a: int, b: int, theta: float) -> RotationOp:
    # rxy(pi, 0) on (a, b) sends |a> -> -i|b> and |b> -> -i|a>
    return RotationOp("rxy", (min(a, b), max(a, b)), theta, 0.0, op.target)


def route_rotation(op: RotationOp, graph: EnergyLevelGraph) -> list[RotationOp]:
    """Equivalent ops that only use edges of ``graph`` on the target qudit.

    Level ``l2`` is carried next to ``l1`` with swaps V along the
    highest-fidelity path, the rotation is applied on the final edge and V is
    undone. The swaps are uncontrolled even for a ``crot``: V commutes with
    the control projector, so conjugating the controlled rotation by V is
    the same as controlling the conjugated one.
    """
    if op.kind == "pswap":
        return [op]
    i, j = op.levels
    if graph.has_edge(i, j):
        return [op]
    path = graph.best_path(i, j)
    k = len(path) - 1
    p = path[1]
    # V = S(p_{k-1}, p_k) ... S(p_1, p_2) maps |j> -> c |p>, with c = (-i)^(k-1)
    forward = [_swap(op, path[m - 1], path[m], math.pi) for m in range(k, 1, -1)]
    back = [_swap(op, s.levels[0], s.levels[1], -math.pi) for s in reversed(forward)]
    arg_c = -math.pi / 2 * (k - 1)
    if op.axis == "z":
        theta = op.theta if i < p else -op.theta
        phi = 0.0
    else:
        # <j|W|i> = conj(c) <p|R'|i>, so the new rotation must carry c on that entry
        if i < p:
            phi = op.phi + arg_c
            theta = op.theta
        else:
            phi = -op.phi - arg_c
            theta = op.theta
        phi = wrap_angle(phi, 2 * math.pi)
    inner = RotationOp(op.kind, (min(i, p), max(i, p)), theta, phi, op.target, op.control, op.axis)
    return forward + [inner] + back


def route_physical(ops: Iterable[RotationOp], graph: EnergyLevelGraph) -> list[RotationOp]:
    """Route every rotation in ``ops``; all ops are taken to act on one qudit."""
    out = []
    for op in ops:
        out.extend(route_rotation(op, graph))
    return out
