"""Gate descriptions and their dimension-aware matrix realizations."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from math import prod
from typing import Sequence

import numpy as np

from .radix import DimensionError, radix_index

# name -> (number of params, number of operand lines); None means variable
GATE_ARITY: dict[str, tuple[int | None, int | None]] = {
    "x": (0, 1),
    "z": (0, 1),
    "s": (0, 1),
    "h": (0, 1),
    "rxy": (4, 1),
    "rz": (3, 1),
    "csum": (0, 2),
    "ms": (1, 2),
    "ls": (1, 2),
    "pswap": (6, 2),
    "cu": (None, None),
}
GATE_NAMES = frozenset(GATE_ARITY)
SUBSPACE_GATES = frozenset({"rxy", "rz"})
# parameter positions that hold level indices rather than angles
LEVEL_PARAMS = {"rxy": (0, 1), "rz": (0, 1), "pswap": (0, 1, 2, 3)}

UNITARY_TOL = 1e-10


class GateError(ValueError):
    """Malformed gate: unknown name, wrong arity, bad levels, non-unitary matrix."""


@dataclass(frozen=True)
class ControlSpec:
    """Control lines and the level each must hold for the gate to fire."""

    controls: tuple[tuple[int, int], ...]

    def __post_init__(self):
        object.__setattr__(self, "controls", tuple((int(q), int(v)) for q, v in self.controls))
        lines = [q for q, _ in self.controls]
        if len(set(lines)) != len(lines):
            raise GateError(f"duplicate control lines {lines}")
        if any(v < 0 for _, v in self.controls):
            raise GateError("control levels must be non-negative")

    @classmethod
    def of(cls, lines: Sequence[int], levels: Sequence[int]) -> "ControlSpec":
        if len(lines) != len(levels):
            raise GateError(f"{len(lines)} control lines but {len(levels)} control levels")
        return cls(tuple(zip(lines, levels)))

    @property
    def lines(self) -> tuple[int, ...]:
        return tuple(q for q, _ in self.controls)

    @property
    def levels(self) -> tuple[int, ...]:
        return tuple(v for _, v in self.controls)


@dataclass(frozen=True, eq=False)
class GateSpec:
    name: str
    params: tuple[float, ...] = ()
    lines: tuple[int, ...] = ()
    control: ControlSpec | None = None
    matrix: np.ndarray | None = field(default=None, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "params", tuple(float(p) for p in self.params))
        object.__setattr__(self, "lines", tuple(int(q) for q in self.lines))
        if self.name not in GATE_ARITY:
            raise GateError(f"unknown gate '{self.name}'")
        n_params, n_lines = GATE_ARITY[self.name]
        if n_params is not None and len(self.params) != n_params:
            raise GateError(f"gate '{self.name}' takes {n_params} parameters, got {len(self.params)}")
        if n_lines is not None and len(self.lines) != n_lines:
            raise GateError(f"gate '{self.name}' acts on {n_lines} qudits, got {len(self.lines)}")
        if not self.lines:
            raise GateError(f"gate '{self.name}' has no operands")
        if len(set(self.lines)) != len(self.lines):
            raise GateError(f"gate '{self.name}' repeats an operand line")
        if self.control is not None:
            if set(self.control.lines) & set(self.lines):
                raise GateError("control lines overlap target lines")
            if not self.control.controls:
                object.__setattr__(self, "control", None)
        for pos in LEVEL_PARAMS.get(self.name, ()):
            p = self.params[pos]
            if p != int(p) or p < 0:
                raise GateError(f"gate '{self.name}' level parameter {p} is not a non-negative integer")
        if self.name in SUBSPACE_GATES and not self.params[0] < self.params[1]:
            raise GateError(f"subspace levels must satisfy l1 < l2, got ({self.levels[0]}, {self.levels[1]})")
        if self.name == "cu":
            if self.matrix is None:
                raise GateError("cu requires a matrix")
            m = np.array(self.matrix, dtype=complex)
            if m.ndim != 2 or m.shape[0] != m.shape[1]:
                raise GateError("cu matrix must be square")
            if not is_unitary(m, UNITARY_TOL):
                raise GateError("cu matrix is not unitary")
            m.setflags(write=False)
            object.__setattr__(self, "matrix", m)
        elif self.matrix is not None:
            raise GateError(f"only cu carries an explicit matrix, not '{self.name}'")

    @property
    def levels(self) -> tuple[int, ...]:
        return tuple(int(self.params[i]) for i in LEVEL_PARAMS.get(self.name, ()))

    @property
    def control_lines(self) -> tuple[int, ...]:
        return self.control.lines if self.control else ()

    @property
    def operand_lines(self) -> tuple[int, ...]:
        """Controls first, then targets: the order of :func:`full_matrix`."""
        return self.control_lines + self.lines

    @property
    def num_qudits(self) -> int:
        return len(self.operand_lines)

    def with_lines(self, mapping: dict[int, int] | Sequence[int]) -> "GateSpec":
        m = mapping.__getitem__
        control = None
        if self.control:
            control = ControlSpec(tuple((m(q), v) for q, v in self.control.controls))
        return GateSpec(self.name, self.params, tuple(m(q) for q in self.lines), control, self.matrix)

    def key(self) -> tuple:
        """Hashable structural identity (matrix entries included for cu)."""
        mat = None if self.matrix is None else tuple(np.asarray(self.matrix).ravel().tolist())
        return (self.name, self.params, self.lines, self.control, mat)

    def __eq__(self, other):
        if not isinstance(other, GateSpec):
            return NotImplemented
        return self.key() == other.key()

    def __hash__(self):
        return hash(self.key())


def is_unitary(m: np.ndarray, tol: float = 1e-12) -> bool:
    m = np.asarray(m)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        return False
    return float(np.max(np.abs(m.conj().T @ m - np.eye(m.shape[0])), initial=0.0)) <= tol


def shift(d: int) -> np.ndarray:
    """Generalized Pauli X: |j> -> |j+1 mod d>."""
    return np.roll(np.eye(d, dtype=complex), 1, axis=0)


def clock(d: int) -> np.ndarray:
    """Generalized Pauli Z: diag(w^j), w = exp(2 pi i / d)."""
    return np.diag(np.exp(2j * np.pi * np.arange(d) / d))


def fourier(d: int) -> np.ndarray:
    j = np.arange(d)
    return np.exp(2j * np.pi * np.outer(j, j) / d) / np.sqrt(d)


def s_phase(d: int) -> np.ndarray:
    j = np.arange(d)
    return np.diag(np.exp(2j * np.pi * j * j / (2 * d)))


def rxy_block(theta: float, phi: float) -> np.ndarray:
    c, s = np.cos(theta / 2), np.sin(theta / 2)
    return np.array(
        [[c, -1j * np.exp(-1j * phi) * s], [-1j * np.exp(1j * phi) * s, c]], dtype=complex
    )


def embed_two_level(d: int, i: int, j: int, block: np.ndarray) -> np.ndarray:
    m = np.eye(d, dtype=complex)
    m[np.ix_([i, j], [i, j])] = block
    return m


def rxy(d: int, l1: int, l2: int, theta: float, phi: float) -> np.ndarray:
    return embed_two_level(d, l1, l2, rxy_block(theta, phi))


def rz(d: int, l1: int, l2: int, theta: float) -> np.ndarray:
    m = np.eye(d, dtype=complex)
    m[l1, l1] = np.exp(-0.5j * theta)
    m[l2, l2] = np.exp(0.5j * theta)
    return m


def subspace_x(d: int, l1: int, l2: int) -> np.ndarray:
    return embed_two_level(d, l1, l2, np.array([[0, 1], [1, 0]], dtype=complex))


def subspace_z(d: int, l1: int, l2: int) -> np.ndarray:
    return embed_two_level(d, l1, l2, np.array([[1, 0], [0, -1]], dtype=complex))


def csum(dc: int, dt: int) -> np.ndarray:
    D = dc * dt
    m = np.zeros((D, D), dtype=complex)
    for c in range(dc):
        for t in range(dt):
            m[c * dt + (t + c) % dt, c * dt + t] = 1
    return m


def spin_x(d: int) -> np.ndarray:
    off = np.sqrt([(j + 1) * (d - 1 - j) for j in range(d - 1)])
    return np.diag(off, 1) + np.diag(off, -1)


def spin_z(d: int) -> np.ndarray:
    return np.diag((d - 1) / 2 - np.arange(d))


def ms(d1: int, d2: int, theta: float) -> np.ndarray:
    gen = np.kron(spin_x(d1), np.eye(d2)) + np.kron(np.eye(d1), spin_x(d2))
    w, v = np.linalg.eigh(gen @ gen)
    return (v * np.exp(-0.25j * theta * w)) @ v.conj().T


def ls(d1: int, d2: int, theta: float) -> np.ndarray:
    return np.diag(np.exp(-1j * theta * np.kron(np.diag(spin_z(d1)), np.diag(spin_z(d2)))))


def pswap(d1: int, d2: int, a: tuple[int, int], b: tuple[int, int], theta: float, phi: float) -> np.ndarray:
    i = radix_index(a, (d1, d2))
    j = radix_index(b, (d1, d2))
    if i >= j:
        raise GateError(f"pswap pair {a}, {b} must be in increasing index order")
    return embed_two_level(d1 * d2, i, j, rxy_block(theta, phi))


def _check_level(name: str, level: int, d: int):
    if level >= d:
        raise GateError(f"{name}: subspace level {level} >= dimension {d}")


@lru_cache(maxsize=4096)
def _cached_base(name: str, params: tuple[float, ...], dims: tuple[int, ...]) -> np.ndarray:
    if name == "x":
        m = shift(dims[0])
    elif name == "z":
        m = clock(dims[0])
    elif name == "s":
        m = s_phase(dims[0])
    elif name == "h":
        m = fourier(dims[0])
    elif name == "rxy":
        l1, l2, theta, phi = params
        _check_level(name, int(l2), dims[0])
        m = rxy(dims[0], int(l1), int(l2), theta, phi)
    elif name == "rz":
        l1, l2, theta = params
        _check_level(name, int(l2), dims[0])
        m = rz(dims[0], int(l1), int(l2), theta)
    elif name == "csum":
        m = csum(*dims)
    elif name == "ms":
        m = ms(dims[0], dims[1], params[0])
    elif name == "ls":
        m = ls(dims[0], dims[1], params[0])
    elif name == "pswap":
        a1, a2, b1, b2, theta, phi = params
        for lv, d in ((a1, dims[0]), (b1, dims[0]), (a2, dims[1]), (b2, dims[1])):
            _check_level(name, int(lv), d)
        m = pswap(dims[0], dims[1], (int(a1), int(a2)), (int(b1), int(b2)), theta, phi)
    else:
        raise GateError(f"unknown gate '{name}'")
    m.setflags(write=False)
    return m


def base_matrix(gate: GateSpec, dims: Sequence[int]) -> np.ndarray:
    """Matrix of ``gate`` on its target lines only, ignoring controls."""
    dims = tuple(int(d) for d in dims)
    if len(dims) != len(gate.lines):
        raise DimensionError(f"gate '{gate.name}' on {len(gate.lines)} lines given {len(dims)} dims")
    if gate.name == "cu":
        if gate.matrix.shape[0] != prod(dims):
            raise GateError(f"cu matrix is {gate.matrix.shape[0]}-dimensional, operands span {prod(dims)}")
        return gate.matrix
    return _cached_base(gate.name, gate.params, dims)


def controlled_matrix(
    base: np.ndarray, levels: Sequence[int], control_dims: Sequence[int], target_dims: Sequence[int]
) -> np.ndarray:
    """Act as ``base`` where each control holds its level, identity elsewhere.

    The result is ordered controls first, then targets.
    """
    k = prod(target_dims)
    if base.shape != (k, k):
        raise DimensionError(f"base matrix shape {base.shape} does not fit target dims {tuple(target_dims)}")
    for lv, d in zip(levels, control_dims):
        if not 0 <= lv < d:
            raise GateError(f"control level {lv} >= control dimension {d}")
    nc = prod(control_dims)
    out = np.eye(nc * k, dtype=complex)
    block = radix_index(levels, control_dims)
    out[block * k:(block + 1) * k, block * k:(block + 1) * k] = base
    return out


def full_matrix(gate: GateSpec, dims: Sequence[int]) -> np.ndarray:
    """Matrix on ``gate.operand_lines`` (controls then targets) given all circuit dims."""
    target_dims = [dims[q] for q in gate.lines]
    base = base_matrix(gate, target_dims)
    if gate.control is None:
        return np.array(base)
    control_dims = [dims[q] for q in gate.control.lines]
    return controlled_matrix(base, gate.control.levels, control_dims, target_dims)


def gate_matrix(gate: GateSpec, dims: Sequence[int]) -> np.ndarray:
    """Unitary of ``gate`` given the dimension of each of its operand lines.

    ``dims`` lists the dimensions of ``gate.operand_lines`` in order.
    """
    dims = list(dims)
    if len(dims) != gate.num_qudits:
        raise DimensionError(f"gate '{gate.name}' has {gate.num_qudits} operands, got {len(dims)} dims")
    local = gate.with_lines({q: i for i, q in enumerate(gate.operand_lines)})
    return full_matrix(local, dims)


def is_diagonal_gate(gate: GateSpec) -> bool:
    return gate.name in ("z", "s", "rz", "ls")


def inverse(gate: GateSpec, dims: Sequence[int]) -> GateSpec:
    """Exact inverse as a gate; parametric rotations flip their angle."""
    if gate.name == "rxy":
        l1, l2, theta, phi = gate.params
        return GateSpec("rxy", (l1, l2, -theta, phi), gate.lines, gate.control)
    if gate.name == "rz":
        l1, l2, theta = gate.params
        return GateSpec("rz", (l1, l2, -theta), gate.lines, gate.control)
    if gate.name == "pswap":
        *lv, theta, phi = gate.params
        return GateSpec("pswap", (*lv, -theta, phi), gate.lines, gate.control)
    if gate.name in ("ms", "ls"):
        return GateSpec(gate.name, (-gate.params[0],), gate.lines, gate.control)
    base = base_matrix(gate, [dims[q] for q in gate.lines])
    return GateSpec("cu", (), gate.lines, gate.control, base.conj().T)


def phase_aligned(a: np.ndarray, b: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Strip global phase from both arrays.

    Both are divided by their phase at the position of ``a``'s
    largest-magnitude entry, so ties in magnitude cannot pick different
    reference entries.
    """
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    if a.shape != b.shape:
        raise DimensionError(f"shape mismatch {a.shape} vs {b.shape}")
    k = int(np.argmax(np.abs(a)))
    pa, pb = a.flat[k], b.flat[k]
    pa = pa / abs(pa) if abs(pa) > 0 else 1.0
    pb = pb / abs(pb) if abs(pb) > 0 else 1.0
    return a / pa, b / pb


def phase_distance(a: np.ndarray, b: np.ndarray) -> float:
    a, b = phase_aligned(a, b)
    return float(np.max(np.abs(a - b), initial=0.0))


def equal_up_to_phase(a: np.ndarray, b: np.ndarray, tol: float = 1e-9) -> bool:
    return phase_distance(a, b) <= tol
