"""Whole-circuit unitaries and summary statistics."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .circuit import Circuit, CircuitError
from .gates import full_matrix
from .radix import DimensionError

DEFAULT_UNITARY_CAP = 4096


def apply_operator(tensor: np.ndarray, op: np.ndarray, lines: Sequence[int], dims: Sequence[int]) -> np.ndarray:
    """Apply ``op`` (ordered as ``lines``) to the leading axes of ``tensor``.

    ``tensor`` has shape ``(*dims, ...)``; trailing axes are carried along.
    """
    n = len(dims)
    k = len(lines)
    op_t = op.reshape([dims[q] for q in lines] * 2)
    # contract op's input axes with the tensor's operand axes
    out = np.tensordot(op_t, tensor, axes=(list(range(k, 2 * k)), list(lines)))
    # tensordot puts the op output axes first; move them back into place
    rest = [q for q in range(n) if q not in lines]
    order = list(lines) + rest
    inverse = np.argsort(order)
    extra = list(range(n, out.ndim))
    return np.transpose(out, list(inverse) + extra)


def embed(op: np.ndarray, lines: Sequence[int], dims: Sequence[int]) -> np.ndarray:
    """Full-space matrix of ``op`` acting on ``lines``."""
    D = int(np.prod(dims))
    eye = np.eye(D, dtype=complex).reshape(list(dims) + [D])
    return apply_operator(eye, op, lines, dims).reshape(D, D)


def circuit_unitary(circuit: Circuit, cap: int = DEFAULT_UNITARY_CAP) -> np.ndarray:
    """Product of all gate matrices, later gates multiplying from the left."""
    if circuit.measurements:
        raise CircuitError("circuit_unitary requires a circuit without measurements")
    dims = circuit.dims
    D = circuit.total_dim
    if D > cap:
        raise DimensionError(f"total dimension {D} exceeds unitary cap {cap}")
    u = np.eye(D, dtype=complex).reshape(list(dims) + [D])
    for g in circuit.gates:
        u = apply_operator(u, full_matrix(g, dims), g.operand_lines, dims)
    return u.reshape(D, D)


@dataclass
class CircuitStats:
    gate_counts: dict[str, int] = field(default_factory=dict)
    num_gates: int = 0
    entangling: int = 0
    measurements: int = 0
    depth: int = 0
    num_qudits: int = 0
    total_dim: int = 0

    def as_rows(self) -> list[tuple[str, object]]:
        rows = [
            ("qudits", self.num_qudits),
            ("total_dim", self.total_dim),
            ("gates", self.num_gates),
            ("entangling", self.entangling),
            ("measurements", self.measurements),
            ("depth", self.depth),
        ]
        rows += [(f"gate.{k}", v) for k, v in sorted(self.gate_counts.items())]
        return rows


def circuit_stats(circuit: Circuit) -> CircuitStats:
    counts: Counter[str] = Counter()
    entangling = 0
    level = [0] * circuit.num_qudits
    for g in circuit.gates:
        counts[g.name] += 1
        lines = g.operand_lines
        if len(lines) > 1:
            entangling += 1
        top = max(level[q] for q in lines) + 1
        for q in lines:
            level[q] = top
    return CircuitStats(
        gate_counts=dict(counts),
        num_gates=sum(counts.values()),
        entangling=entangling,
        measurements=len(circuit.measurements),
        depth=max(level, default=0),
        num_qudits=circuit.num_qudits,
        total_dim=circuit.total_dim if circuit.qregs else 0,
    )
