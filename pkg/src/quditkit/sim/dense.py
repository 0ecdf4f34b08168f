"""Dense mixed-radix statevector backend."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Sequence

import numpy as np

from ..core.circuit import Circuit
from ..core.gates import GateSpec, base_matrix, is_diagonal_gate
from ..core.radix import DimensionError, format_digits, index_to_digits, strides, total_dim
from . import kernels
from .rng import map_shots, shot_uniform

# 2**26 amplitudes is 1 GiB of complex128
MAX_DENSE_DIM = 1 << 26
NORM_TOL = 1e-6
DUMP_CUTOFF = 0.0  # list every amplitude by default


class SimulationError(ValueError):
    pass


@dataclass
class StateVector:
    dims: tuple[int, ...]
    amps: np.ndarray

    def __post_init__(self):
        self.dims = tuple(int(d) for d in self.dims)
        self.amps = np.asarray(self.amps, dtype=complex).ravel()
        if self.amps.shape[0] != total_dim(self.dims):
            raise DimensionError(f"state has {self.amps.shape[0]} amplitudes, dims {self.dims} need {total_dim(self.dims)}")

    @classmethod
    def zero(cls, dims: Sequence[int], max_dim: int = MAX_DENSE_DIM) -> "StateVector":
        D = check_dense_dim(dims, max_dim)
        amps = np.zeros(D, dtype=complex)
        amps[0] = 1
        return cls(tuple(dims), amps)

    @classmethod
    def basis(cls, digits: Sequence[int], dims: Sequence[int]) -> "StateVector":
        from ..core.radix import radix_index

        amps = np.zeros(total_dim(dims), dtype=complex)
        amps[radix_index(digits, dims)] = 1
        return cls(tuple(dims), amps)

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.amps))

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amps) ** 2

    def copy(self) -> "StateVector":
        return StateVector(self.dims, self.amps.copy())


@dataclass
class Counts:
    counts: dict[str, int] = field(default_factory=dict)
    shots: int = 0

    def __getitem__(self, key: str) -> int:
        return self.counts.get(key, 0)

    def __eq__(self, other):
        if not isinstance(other, Counts):
            return NotImplemented
        return self.shots == other.shots and self.counts == other.counts

    def keys(self):
        return self.counts.keys()

    def items(self):
        return self.counts.items()

    def frequency(self, key: str) -> float:
        return self.counts.get(key, 0) / self.shots if self.shots else 0.0

    def to_tsv(self) -> str:
        rows = sorted(self.counts.items(), key=lambda kv: [int(t) for t in kv[0].split(",") if t])
        return "".join(f"{k}\t{v}\n" for k, v in rows)

    @classmethod
    def from_indices(cls, indices: Sequence[int], dims: Sequence[int]) -> "Counts":
        tally = Counter(int(i) for i in indices)
        counts = {format_digits(index_to_digits(i, dims)): n for i, n in sorted(tally.items())}
        return cls(counts, len(indices))


def check_dense_dim(dims: Sequence[int], max_dim: int = MAX_DENSE_DIM) -> int:
    D = total_dim(dims)
    if D > max_dim:
        raise DimensionError(f"dense state of dimension {D} exceeds the limit {max_dim}")
    return D


@lru_cache(maxsize=2048)
def fiber_layout(dims: tuple[int, ...], targets: tuple[int, ...],
                 controls: tuple[tuple[int, int], ...] = ()) -> tuple[np.ndarray, np.ndarray]:
    """Base indices of every fiber along ``targets`` and the in-fiber offsets.

    Fibers where a control does not hold its level are left out, so a
    controlled gate touches only the matching subspace. Offsets follow the
    operand order of ``targets`` (first target most significant).
    """
    st = strides(dims)
    offsets = np.zeros(1, dtype=np.intp)
    for q in targets:
        offsets = (offsets[:, None] + np.arange(dims[q], dtype=np.intp) * st[q]).ravel()
    fixed = {q for q in targets} | {q for q, _ in controls}
    start = sum(lv * st[q] for q, lv in controls)
    bases = np.array([start], dtype=np.intp)
    for q in range(len(dims)):
        if q not in fixed:
            bases = (bases[:, None] + np.arange(dims[q], dtype=np.intp) * st[q]).ravel()
    bases.setflags(write=False)
    offsets.setflags(write=False)
    return np.sort(bases), offsets


def apply_gate_inplace(amps: np.ndarray, dims: tuple[int, ...], gate: GateSpec) -> None:
    n = len(dims)
    for q in gate.operand_lines:
        if not 0 <= q < n:
            raise SimulationError(f"gate '{gate.name}' references line {q}, state has {n} qudits")
    mat = base_matrix(gate, [dims[q] for q in gate.lines])
    controls = gate.control.controls if gate.control else ()
    for q, lv in controls:
        if lv >= dims[q]:
            raise SimulationError(f"control level {lv} >= dimension {dims[q]}")
    bases, offsets = fiber_layout(dims, gate.lines, controls)
    if is_diagonal_gate(gate):
        kernels.apply_diagonal(amps, np.ascontiguousarray(np.diagonal(mat)), bases, offsets)
    else:
        kernels.apply_fibers(amps, np.ascontiguousarray(mat, dtype=complex), bases, offsets)


def apply_gate(state: StateVector, gate: GateSpec) -> StateVector:
    out = state.copy()
    apply_gate_inplace(out.amps, out.dims, gate)
    return out


def initial_state(circuit: Circuit, max_dim: int = MAX_DENSE_DIM) -> StateVector:
    dims = tuple(circuit.dims)
    if circuit.initial_state is not None:
        check_dense_dim(dims, max_dim)
        return StateVector(dims, np.array(circuit.initial_state, dtype=complex))
    return StateVector.zero(dims, max_dim)


def simulate(circuit: Circuit, max_dim: int = MAX_DENSE_DIM) -> StateVector:
    """Final state of ``circuit``; measurements are ignored."""
    state = initial_state(circuit, max_dim)
    for g in circuit.gates:
        apply_gate_inplace(state.amps, state.dims, g)
    return state


def check_normalized(state: StateVector, tol: float = NORM_TOL) -> None:
    n2 = float(np.vdot(state.amps, state.amps).real)
    if abs(n2 - 1) > tol:
        raise SimulationError(f"state is not normalized (norm^2 = {n2:.3g})")


def outcome_index(cdf: np.ndarray, u: float) -> int:
    """Inverse-CDF lookup in basis-index order."""
    return min(int(np.searchsorted(cdf, u * cdf[-1], side="right")), cdf.shape[0] - 1)


def sample(state: StateVector, shots: int, seed: int = 0, workers: int = 1) -> Counts:
    if shots < 1:
        raise SimulationError("shots must be >= 1")
    check_normalized(state)
    cdf = np.cumsum(state.probabilities())

    def run(rng_range: range) -> list[int]:
        return [outcome_index(cdf, shot_uniform(seed, s)) for s in rng_range]

    indices = [i for part in map_shots(run, shots, workers) for i in part]
    return Counts.from_indices(indices, state.dims)


def fidelity(a: StateVector, b: StateVector) -> float:
    if a.dims != b.dims:
        raise DimensionError(f"dims mismatch {a.dims} vs {b.dims}")
    f = abs(np.vdot(a.amps, b.amps)) ** 2
    return float(min(max(f, 0.0), 1.0))


def dump_state(state: StateVector, cutoff: float = DUMP_CUTOFF) -> str:
    lines = []
    for i in np.flatnonzero(np.abs(state.amps) >= cutoff):
        a = state.amps[i]
        lines.append(f"{format_digits(index_to_digits(int(i), state.dims))}\t{float(a.real)!r}\t{float(a.imag)!r}\n")
    return "".join(lines)
