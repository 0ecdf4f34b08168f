"""Single-qudit unitaries as sequences of two-level rotations."""

from __future__ import annotations

import numpy as np

from .graph import EnergyLevelGraph
from .rotations import RotationOp, check_unitary, givens_eliminate, path_edges, phase_rotations


def decompose_local_qr(u: np.ndarray, graph: EnergyLevelGraph | None = None) -> list[RotationOp]:
    """Rotations whose product equals ``u`` up to global phase.

    The xy rotations always act on adjacent levels (i, i+1); route them with
    :func:`route_physical` if the hardware graph lacks those edges. The final
    z rotations sit on a spanning tree of ``graph`` (a path when omitted).
    At most d(d-1)/2 xy rotations and d-1 z rotations are produced.
    """
    u = check_unitary(u)
    d = u.shape[0]
    if graph is not None and graph.dim != d:
        raise ValueError(f"graph has {graph.dim} levels, matrix is {d}-dimensional")
    steps, phases = givens_eliminate(u)
    edges = graph.tree_edges() if graph is not None else path_edges(d)
    # u = G_1^-1 ... G_m^-1 diag(phases): the diagonal runs first
    ops = [RotationOp("rz", (a, b), t) for a, b, t in phase_rotations(phases, edges)]
    ops += [RotationOp("rxy", (i, j), -theta, phi) for i, j, theta, phi in reversed(steps)]
    return ops
