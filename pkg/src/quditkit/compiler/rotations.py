"""Rotation ops emitted by the decompositions, and the Givens nulling step."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from ..core.gates import ControlSpec, GateSpec, full_matrix, is_unitary
from ..core.radix import total_dim
from ..core.unitary import embed

KINDS = ("rxy", "rz", "crot", "pswap")
ANGLE_TOL = 1e-12
UNITARY_CHECK_TOL = 1e-8


class DecompositionError(ValueError):
    pass


@dataclass(frozen=True)
class RotationOp:
    """One native rotation, addressed by operand position rather than circuit line.

    ``crot`` is a rotation on ``target`` conditioned on the qudit at
    ``control[0]`` holding level ``control[1]``; ``axis`` picks between the
    xy-plane rotation and the z rotation. ``pswap`` rotates between two
    composite basis states ``pair[0]`` and ``pair[1]`` of operands (0, 1).
    """

    kind: str
    levels: tuple[int, int] = (0, 1)
    theta: float = 0.0
    phi: float = 0.0
    target: int = 0
    control: tuple[int, int] | None = None
    axis: str = "xy"
    pair: tuple[tuple[int, int], tuple[int, int]] | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise DecompositionError(f"unknown rotation kind '{self.kind}'")
        if self.kind == "rz":
            object.__setattr__(self, "axis", "z")
        if self.kind == "crot" and self.control is None:
            raise DecompositionError("crot needs a control")
        if self.kind == "pswap" and self.pair is None:
            raise DecompositionError("pswap needs a level pair")

    def to_gate(self, lines: Sequence[int]) -> GateSpec:
        if self.kind == "pswap":
            (a1, a2), (b1, b2) = self.pair
            return GateSpec("pswap", (a1, a2, b1, b2, self.theta, self.phi), (lines[0], lines[1]))
        control = None
        if self.control is not None:
            control = ControlSpec(((lines[self.control[0]], self.control[1]),))
        l1, l2 = self.levels
        if self.axis == "z":
            return GateSpec("rz", (l1, l2, self.theta), (lines[self.target],), control)
        return GateSpec("rxy", (l1, l2, self.theta, self.phi), (lines[self.target],), control)


def ops_unitary(ops: Iterable[RotationOp], dims: Sequence[int]) -> np.ndarray:
    """Product of ``ops`` on operands ``0..len(dims)-1``, first op rightmost."""
    dims = list(dims)
    lines = list(range(len(dims)))
    u = np.eye(total_dim(dims), dtype=complex)
    for op in ops:
        g = op.to_gate(lines)
        u = embed(full_matrix(g, dims), g.operand_lines, dims) @ u
    return u


def nulling_angles(a: complex, b: complex) -> tuple[float, float]:
    """(theta, phi) of the two-level rotation that sends (a, b) to (r, 0)."""
    theta = 2.0 * math.atan2(abs(b), abs(a))
    arg_a = math.atan2(a.imag, a.real) if abs(a) > 0 else 0.0
    phi = math.atan2(b.imag, b.real) - arg_a - math.pi / 2
    return theta, wrap_angle(phi, 2 * math.pi)


def wrap_angle(x: float, period: float) -> float:
    """Map ``x`` into (-period/2, period/2]."""
    y = math.fmod(x, period)
    if y > period / 2:
        y -= period
    elif y <= -period / 2:
        y += period
    return y


def rotate_rows(m: np.ndarray, i: int, j: int, theta: float, phi: float) -> None:
    """In place: rows (i, j) of ``m`` <- rxy block @ rows (i, j)."""
    c, s = math.cos(theta / 2), math.sin(theta / 2)
    ri, rj = m[i].copy(), m[j].copy()
    m[i] = c * ri - 1j * np.exp(-1j * phi) * s * rj
    m[j] = -1j * np.exp(1j * phi) * s * ri + c * rj


def givens_eliminate(u: np.ndarray, tol: float = ANGLE_TOL) -> tuple[list[tuple[int, int, float, float]], np.ndarray]:
    """Null the strict lower triangle of ``u`` with adjacent-row rotations.

    Columns are cleared left to right, each from the bottom up. Returns the
    rotations in application order and the remaining diagonal phases, so that
    ``G_m ... G_1 u = diag(exp(1j * phases))``.
    """
    a = np.array(u, dtype=complex)
    n = a.shape[0]
    steps = []
    for c in range(n - 1):
        for r in range(n - 1, c, -1):
            b = a[r, c]
            if abs(b) < tol:
                continue
            theta, phi = nulling_angles(a[r - 1, c], b)
            rotate_rows(a, r - 1, r, theta, phi)
            a[r, c] = 0
            steps.append((r - 1, r, theta, phi))
    return steps, np.angle(np.diagonal(a))


def phase_rotations(phases: np.ndarray, edges: Sequence[tuple[int, int]], tol: float = ANGLE_TOL) -> list[tuple[int, int, float]]:
    """z rotations on tree ``edges`` realizing ``diag(exp(1j*phases))`` up to global phase.

    Each edge (a, b) with angle t adds -t/2 to level a and +t/2 to level b.
    Angles are kept modulo 4*pi: a 2*pi shift flips the sign of two levels
    only, which is not a global phase for more than two levels.
    """
    phases = np.asarray(phases, dtype=float)
    d = phases.shape[0]
    if len(edges) != d - 1:
        raise DecompositionError(f"need a spanning tree with {d - 1} edges, got {len(edges)}")
    target = phases - phases.mean()
    A = np.zeros((d, d - 1))
    for k, (a, b) in enumerate(edges):
        A[a, k] = -0.5
        A[b, k] = 0.5
    sol, *_ = np.linalg.lstsq(A, target, rcond=None)
    out = []
    for (a, b), t in zip(edges, sol):
        t = wrap_angle(float(t), 4 * math.pi)
        if abs(t) > tol:
            out.append((a, b, t))
    return out


def path_edges(d: int) -> list[tuple[int, int]]:
    return [(i, i + 1) for i in range(d - 1)]


def check_unitary(u: np.ndarray, expected_dim: int | None = None) -> np.ndarray:
    u = np.asarray(u, dtype=complex)
    if u.ndim != 2 or u.shape[0] != u.shape[1]:
        raise DecompositionError(f"expected a square matrix, got shape {u.shape}")
    if expected_dim is not None and u.shape[0] != expected_dim:
        raise DecompositionError(f"matrix is {u.shape[0]}-dimensional, expected {expected_dim}")
    if not is_unitary(u, UNITARY_CHECK_TOL):
        raise DecompositionError("matrix is not unitary")
    return u
