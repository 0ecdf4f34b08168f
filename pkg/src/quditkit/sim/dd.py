"""Mixed-dimensional decision-diagram state backend.

A state is a rooted DAG: the node at level ``q`` has one weighted edge per
basis level of qudit ``q``. Nodes are normalized so that the first nonzero
edge weight is real-positive and the largest weight has magnitude one;
the factor taken out moves up to the parent edge. Together with the unique
table this makes the diagram canonical.

Gates are turned into matrix diagrams and multiplied into the state. A
matrix edge that points at the matrix terminal stands for the (scaled)
identity on every remaining level, so the untouched tail of the state is
never visited.
"""

from __future__ import annotations

import sys
import threading
import weakref
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ..core.circuit import Circuit
from ..core.gates import GateSpec, base_matrix
from ..core.radix import DimensionError, format_digits
from .dense import MAX_DENSE_DIM, Counts, SimulationError, StateVector, check_dense_dim
from .rng import map_shots, shot_uniform

WEIGHT_TOL = 1e-12
ZERO_TOL = 1e-14
NORM_TOL = 1e-8


class VNode:
    __slots__ = ("level", "weights", "children", "__weakref__")

    def __init__(self, level: int, weights: tuple[complex, ...], children: tuple["VNode", ...]):
        self.level = level
        self.weights = weights
        self.children = children

    def __repr__(self):
        return f"VNode(level={self.level}, arity={len(self.weights)})"


class MNode:
    __slots__ = ("level", "weights", "children")

    def __init__(self, level, weights, children):
        self.level = level
        self.weights = weights
        self.children = children


TERMINAL = VNode(-1, (), ())
MTERMINAL = MNode(-1, (), ())

Edge = tuple[complex, VNode]
ZERO_EDGE: Edge = (0j, TERMINAL)


def _snap(w: complex) -> complex:
    return w if abs(w) > ZERO_TOL else 0j


class DDPackage:
    """Unique table plus compute tables; confine one package to one thread.

    Nodes are held weakly by the unique table, so a node is reclaimed as
    soon as no diagram references it.
    """

    def __init__(self):
        self._unique: weakref.WeakValueDictionary = weakref.WeakValueDictionary()
        self.allocated = 0
        self._mult: dict = {}
        self._add: dict = {}

    @property
    def unique_size(self) -> int:
        return len(self._unique)

    def make_node(self, level: int, weights: Sequence[complex], children: Sequence[VNode]) -> Edge:
        ws = [_snap(complex(w)) for w in weights]
        mags = [abs(w) for w in ws]
        top = max(mags)
        if top == 0:
            return ZERO_EDGE
        first = next(w for w in ws if w != 0)
        factor = top * first / abs(first)
        normed = tuple(_snap(w / factor) for w in ws)
        ch = tuple(c if w != 0 else TERMINAL for w, c in zip(normed, children))
        key = (level, tuple(map(id, ch)),
               tuple((round(w.real / WEIGHT_TOL), round(w.imag / WEIGHT_TOL)) for w in normed))
        node = self._unique.get(key)
        if node is None:
            node = VNode(level, normed, ch)
            self._unique[key] = node
            self.allocated += 1
        return factor, node

    def clear_caches(self) -> None:
        self._mult.clear()
        self._add.clear()

    # arithmetic

    def add(self, a: Edge, b: Edge) -> Edge:
        wa, na = a
        wb, nb = b
        if wa == 0:
            return b
        if wb == 0:
            return a
        if na is nb:
            w = _snap(wa + wb)
            return (w, na) if w != 0 else ZERO_EDGE
        ratio = wb / wa
        key = (na, nb, round(ratio.real / WEIGHT_TOL), round(ratio.imag / WEIGHT_TOL))
        hit = self._add.get(key)
        if hit is None:
            ws, cs = [], []
            for w1, c1, w2, c2 in zip(na.weights, na.children, nb.weights, nb.children):
                w, c = self.add((w1, c1), (ratio * w2, c2))
                ws.append(w)
                cs.append(c)
            hit = self.make_node(na.level, ws, cs)
            self._add[key] = hit
        return (_snap(wa * hit[0]), hit[1]) if hit[0] != 0 else ZERO_EDGE

    def multiply(self, m: MNode, v: VNode) -> Edge:
        """Unit-weight matrix node times unit-weight vector node."""
        if m is MTERMINAL:
            return (1 + 0j, v)
        key = (m, v)
        hit = self._mult.get(key)
        if hit is not None:
            return hit
        d = len(v.weights)
        ws, cs = [], []
        for i in range(d):
            acc = ZERO_EDGE
            row = i * d
            for j in range(d):
                mw = m.weights[row + j]
                vw = v.weights[j]
                if mw == 0 or vw == 0:
                    continue
                rw, rn = self.multiply(m.children[row + j], v.children[j])
                if rw != 0:
                    acc = self.add(acc, (mw * vw * rw, rn))
            ws.append(acc[0])
            cs.append(acc[1])
        hit = self.make_node(v.level, ws, cs)
        self._mult[key] = hit
        return hit

    # construction

    def gate_diagram(self, gate: GateSpec, dims: Sequence[int]) -> tuple[complex, MNode]:
        targets = gate.lines
        order = sorted(range(len(targets)), key=lambda i: targets[i])
        tdims = [dims[q] for q in targets]
        mat = np.asarray(base_matrix(gate, tdims))
        k = len(targets)
        if order != list(range(k)):
            mat = mat.reshape(tdims * 2).transpose(order + [k + i for i in order])
            mat = mat.reshape(int(np.prod(tdims)), -1)
        target_set = set(targets)
        ctrl = dict(gate.control.controls) if gate.control else {}
        last = max(gate.operand_lines)
        memo: dict = {}

        def build(level: int, row: int, col: int, ok: bool) -> tuple[complex, MNode]:
            if level > last:
                w = complex(mat[row, col]) if ok else (1 + 0j if row == col else 0j)
                return (_snap(w), MTERMINAL)
            key = (level, row, col, ok)
            if key in memo:
                return memo[key]
            d = dims[level]
            ws = [0j] * (d * d)
            cs = [MTERMINAL] * (d * d)
            for i in range(d):
                for j in range(d):
                    if level in target_set:
                        w, c = build(level + 1, row * d + i, col * d + j, ok)
                    elif i != j:
                        continue
                    elif level in ctrl:
                        w, c = build(level + 1, row, col, ok and i == ctrl[level])
                    else:
                        w, c = build(level + 1, row, col, ok)
                    ws[i * d + j] = w
                    cs[i * d + j] = c
            out = (1 + 0j, MNode(level, tuple(ws), tuple(cs))) if any(w != 0 for w in ws) else (0j, MTERMINAL)
            memo[key] = out
            return out

        return build(0, 0, 0, True)


_local = threading.local()


def default_package() -> DDPackage:
    pkg = getattr(_local, "package", None)
    if pkg is None:
        pkg = _local.package = DDPackage()
    return pkg


@dataclass
class DDState:
    dims: tuple[int, ...]
    weight: complex
    root: VNode
    package: DDPackage

    @property
    def node_count(self) -> int:
        return dd_node_count(self)


def _ensure_recursion(n: int) -> None:
    need = 4 * n + 200
    if sys.getrecursionlimit() < need:
        sys.setrecursionlimit(need)


def dd_zero_state(dims: Sequence[int], package: DDPackage | None = None) -> DDState:
    pkg = package or default_package()
    dims = tuple(int(d) for d in dims)
    edge: Edge = (1 + 0j, TERMINAL)
    for level in range(len(dims) - 1, -1, -1):
        d = dims[level]
        w, node = pkg.make_node(level, [edge[0]] + [0j] * (d - 1), [edge[1]] + [TERMINAL] * (d - 1))
        edge = (w, node)
    return DDState(dims, edge[0], edge[1], pkg)


def dd_from_vector(state: StateVector, package: DDPackage | None = None) -> DDState:
    pkg = package or default_package()
    amps = np.asarray(state.amps, dtype=complex)
    n2 = float(np.vdot(amps, amps).real)
    if abs(n2 - 1) > NORM_TOL:
        raise SimulationError(f"state is not normalized (norm^2 = {n2:.3g})")
    dims = state.dims
    n = len(dims)
    _ensure_recursion(n)

    def build(level: int, vec: np.ndarray) -> Edge:
        if level == n:
            w = _snap(complex(vec[0]))
            return (w, TERMINAL) if w != 0 else ZERO_EDGE
        parts = vec.reshape(dims[level], -1)
        edges = [build(level + 1, p) if np.any(p) else ZERO_EDGE for p in parts]
        return pkg.make_node(level, [e[0] for e in edges], [e[1] for e in edges])

    w, root = build(0, amps)
    return DDState(dims, w, root, pkg)


def dd_to_vector(state: DDState, max_dim: int = MAX_DENSE_DIM) -> StateVector:
    dims = state.dims
    check_dense_dim(dims, max_dim)
    n = len(dims)
    cache: dict[int, np.ndarray] = {}
    sizes = [int(np.prod(dims[q:])) for q in range(n + 1)] if n else [1]

    def expand(node: VNode, level: int) -> np.ndarray:
        if level == n:
            return np.ones(1, dtype=complex)
        hit = cache.get(id(node))
        if hit is not None:
            return hit
        sub = sizes[level + 1]
        out = np.zeros(sizes[level], dtype=complex)
        for i, (w, c) in enumerate(zip(node.weights, node.children)):
            if w != 0:
                out[i * sub:(i + 1) * sub] = w * expand(c, level + 1)
        cache[id(node)] = out
        return out

    if state.weight == 0:
        return StateVector(dims, np.zeros(sizes[0], dtype=complex))
    return StateVector(dims, state.weight * expand(state.root, 0))


def dd_node_count(state: DDState) -> int:
    seen: set[int] = set()
    stack = [state.root]
    while stack:
        node = stack.pop()
        if node is TERMINAL or id(node) in seen:
            continue
        seen.add(id(node))
        stack.extend(c for w, c in zip(node.weights, node.children) if w != 0)
    return len(seen)


def _check_gate(gate: GateSpec, dims: Sequence[int]) -> None:
    n = len(dims)
    for q in gate.operand_lines:
        if not 0 <= q < n:
            raise SimulationError(f"gate '{gate.name}' references line {q}, state has {n} qudits")
    if gate.control:
        for q, lv in gate.control.controls:
            if lv >= dims[q]:
                raise SimulationError(f"control level {lv} >= dimension {dims[q]}")


def dd_apply_gate(state: DDState, gate: GateSpec) -> DDState:
    _check_gate(gate, state.dims)
    pkg = state.package
    _ensure_recursion(len(state.dims))
    mw, m = pkg.gate_diagram(gate, state.dims)
    try:
        if mw == 0 or state.weight == 0:
            w, node = ZERO_EDGE
        else:
            w, node = pkg.multiply(m, state.root)
            w = mw * state.weight * w
    finally:
        pkg.clear_caches()
    return DDState(state.dims, w, node, pkg)


def dd_simulate(circuit: Circuit, package: DDPackage | None = None) -> DDState:
    pkg = package or default_package()
    if circuit.initial_state is not None:
        state = dd_from_vector(StateVector(tuple(circuit.dims), circuit.initial_state), pkg)
    else:
        state = dd_zero_state(circuit.dims, pkg)
    for g in circuit.gates:
        state = dd_apply_gate(state, g)
    return state


class _Sampler:
    def __init__(self, state: DDState):
        self.state = state
        self._norms: dict[int, float] = {}

    def norm2(self, node: VNode) -> float:
        if node is TERMINAL:
            return 1.0
        hit = self._norms.get(id(node))
        if hit is None:
            hit = sum(abs(w) ** 2 * self.norm2(c) for w, c in zip(node.weights, node.children) if w != 0)
            self._norms[id(node)] = hit
        return hit

    def draw(self, u: float) -> list[int]:
        """Inverse-CDF descent: same outcome as a dense lookup in index order."""
        digits = []
        node = self.state.root
        while node is not TERMINAL:
            probs = [abs(w) ** 2 * self.norm2(c) if w != 0 else 0.0 for w, c in zip(node.weights, node.children)]
            total = sum(probs)
            target = u * total
            cum = 0.0
            choice = max(i for i, p in enumerate(probs) if p > 0)
            for i, p in enumerate(probs):
                if p > 0 and cum + p > target:
                    choice = i
                    break
                cum += p
            p = probs[choice]
            u = min(max((target - cum) / p, 0.0), np.nextafter(1.0, 0.0))
            digits.append(choice)
            node = node.children[choice]
        return digits


def dd_check_normalized(state: DDState, tol: float = 1e-6) -> None:
    n2 = abs(state.weight) ** 2 * _Sampler(state).norm2(state.root)
    if abs(n2 - 1) > tol:
        raise SimulationError(f"state is not normalized (norm^2 = {n2:.3g})")


def dd_draw(state: DDState, u: float) -> list[int]:
    return _Sampler(state).draw(u)


def dd_sample(state: DDState, shots: int, seed: int = 0, workers: int = 1) -> Counts:
    if shots < 1:
        raise SimulationError("shots must be >= 1")
    if state.weight == 0:
        raise SimulationError("cannot sample the zero vector")
    sampler = _Sampler(state)
    sampler.norm2(state.root)

    def run(rng_range: range) -> list[str]:
        return [format_digits(sampler.draw(shot_uniform(seed, s))) for s in rng_range]

    keys = [k for part in map_shots(run, shots, workers) for k in part]
    tally: dict[str, int] = {}
    for k in keys:
        tally[k] = tally.get(k, 0) + 1
    ordered = dict(sorted(tally.items(), key=lambda kv: [int(t) for t in kv[0].split(",") if t]))
    return Counts(ordered, shots)


def dd_dump(state: DDState) -> str:
    """Adjacency listing for debugging; not a stable format."""
    ids: dict[int, int] = {}
    lines = [f"root weight={state.weight:.6g}"]
    stack = [state.root]
    order = []
    while stack:
        node = stack.pop()
        if node is TERMINAL or id(node) in ids:
            continue
        ids[id(node)] = len(ids)
        order.append(node)
        stack.extend(reversed([c for w, c in zip(node.weights, node.children) if w != 0]))
    for node in order:
        edges = []
        for w, c in zip(node.weights, node.children):
            if w == 0:
                edges.append("0")
            else:
                tgt = "T" if c is TERMINAL else f"n{ids[id(c)]}"
                edges.append(f"{w:.6g}->{tgt}")
        lines.append(f"n{ids[id(node)]} level={node.level}: " + " ".join(edges))
    return "\n".join(lines) + "\n"


__all__ = [
    "DDPackage", "DDState", "DimensionError", "dd_apply_gate", "dd_check_normalized", "dd_draw",
    "dd_dump", "dd_from_vector", "dd_node_count", "dd_sample", "dd_simulate", "dd_to_vector",
    "dd_zero_state", "default_package",
]
