"""Stochastic Pauli-style noise on top of either simulation backend.

After every gate that has a registered :class:`Noise`, each selected qudit
independently receives a shift (X) error with probability ``prob_x`` and a
clock (Z) error with probability ``prob_z``, in that order. Subspace gates
(``rxy``, ``rz``) get the two-level X/Z on their own levels instead of the
full-space operators.

``Noise(a, b)`` reads as ``Noise(prob_x=a, prob_z=b)``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, NamedTuple

import numpy as np

from .core.circuit import Circuit
from .core.gates import GATE_NAMES, SUBSPACE_GATES, GateSpec, subspace_x, subspace_z
from .sim.dd import DDPackage, dd_apply_gate, dd_draw, dd_simulate
from .sim.dense import Counts, SimulationError, apply_gate_inplace, initial_state, outcome_index
from .sim.rng import map_shots, shot_rng

POLICIES = ("all", "target", "controls")
NOISE_SCHEMA_VERSION = 1


class NoiseError(ValueError):
    pass


@dataclass(frozen=True)
class Noise:
    prob_x: float
    prob_z: float

    def __post_init__(self):
        for name in ("prob_x", "prob_z"):
            p = getattr(self, name)
            if not 0.0 <= p <= 1.0:
                raise NoiseError(f"{name} must lie in [0, 1], got {p}")


@dataclass(frozen=True)
class NoiseEntry:
    noise: Noise
    policy: str = "all"


class NoiseModel:
    def __init__(self):
        self.entries: dict[str, NoiseEntry] = {}

    def add_quantum_error_locally(self, noise: Noise, gate_names: Iterable[str],
                                  policy: str = "all") -> "NoiseModel":
        if policy not in POLICIES:
            raise NoiseError(f"unknown policy '{policy}' (expected one of {POLICIES})")
        names = list(gate_names)
        unknown = [n for n in names if n not in GATE_NAMES]
        if unknown:
            raise NoiseError(f"unknown gate name(s) {unknown}")
        for n in names:
            self.entries[n] = NoiseEntry(noise, policy)
        return self

    def get(self, name: str) -> NoiseEntry | None:
        return self.entries.get(name)

    def __len__(self):
        return len(self.entries)

    def __contains__(self, name):
        return name in self.entries

    def __eq__(self, other):
        return isinstance(other, NoiseModel) and self.entries == other.entries

    def to_dict(self) -> dict:
        return {
            "schema_version": NOISE_SCHEMA_VERSION,
            "entries": [
                {"gate": g, "prob_x": e.noise.prob_x, "prob_z": e.noise.prob_z, "policy": e.policy}
                for g, e in self.entries.items()
            ],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "NoiseModel":
        if not isinstance(data, dict) or not isinstance(data.get("entries"), list):
            raise NoiseError("noise model must be an object with an 'entries' list")
        version = data.get("schema_version", NOISE_SCHEMA_VERSION)
        if version != NOISE_SCHEMA_VERSION:
            raise NoiseError(f"unsupported noise schema_version {version}")
        model = cls()
        for i, e in enumerate(data["entries"]):
            try:
                noise = Noise(float(e["prob_x"]), float(e["prob_z"]))
                model.add_quantum_error_locally(noise, [e["gate"]], e.get("policy", "all"))
            except (KeyError, TypeError, ValueError) as exc:
                raise NoiseError(f"noise entry {i}: {exc}") from None
        return model


def load_noise_model(path: str | Path) -> NoiseModel:
    try:
        data = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise NoiseError(f"{path}: invalid JSON ({exc})") from None
    return NoiseModel.from_dict(data)


def save_noise_model(model: NoiseModel, path: str | Path) -> None:
    Path(path).write_text(json.dumps(model.to_dict(), indent=2) + "\n")


class ErrorEvent(NamedTuple):
    position: int  # index into circuit.gates
    qudit: int
    kind: str  # "x" | "z"
    levels: tuple[int, int] | None  # subspace levels, None for full-space errors


def gate_roles(gate: GateSpec) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """(targets, controls) of a gate; csum's first operand is a control."""
    if gate.name == "csum":
        return gate.lines[1:], gate.control_lines + gate.lines[:1]
    return gate.lines, gate.control_lines


def affected_qudits(gate: GateSpec, policy: str) -> tuple[int, ...]:
    targets, controls = gate_roles(gate)
    if policy == "target":
        return targets
    if policy == "controls":
        return controls
    return gate.operand_lines


def _coin_plan(circuit: Circuit, model: NoiseModel) -> list[tuple[int, int, Noise, tuple[int, int] | None]]:
    plan = []
    for pos, g in enumerate(circuit.gates):
        entry = model.get(g.name)
        if entry is None:
            continue
        for q in affected_qudits(g, entry.policy):
            levels = (int(g.params[0]), int(g.params[1])) if g.name in SUBSPACE_GATES and q in g.lines else None
            plan.append((pos, q, entry.noise, levels))
    return plan


def _draw_shot(seed: int, shot: int, plan) -> tuple[float, tuple[ErrorEvent, ...]]:
    # first draw is the measurement uniform, then an (x, z) coin pair per slot
    u = shot_rng(seed, shot).random(1 + 2 * len(plan))
    events = []
    for k, (pos, q, noise, levels) in enumerate(plan):
        if u[1 + 2 * k] < noise.prob_x:
            events.append(ErrorEvent(pos, q, "x", levels))
        if u[2 + 2 * k] < noise.prob_z:
            events.append(ErrorEvent(pos, q, "z", levels))
    return float(u[0]), tuple(events)


def noisy_shot_trace(circuit: Circuit, model: NoiseModel, seed: int, shot_index: int) -> list[ErrorEvent]:
    return list(_draw_shot(seed, shot_index, _coin_plan(circuit, model))[1])


def error_gate(event: ErrorEvent, dims) -> GateSpec:
    q = event.qudit
    if event.levels is None:
        return GateSpec(event.kind, (), (q,))
    l1, l2 = event.levels
    make = subspace_x if event.kind == "x" else subspace_z
    return GateSpec("cu", (), (q,), None, make(dims[q], l1, l2))


def with_errors(circuit: Circuit, events: Iterable[ErrorEvent]) -> Circuit:
    """Copy of ``circuit`` (gates only) with the error gates spliced in."""
    after: dict[int, list[ErrorEvent]] = {}
    for e in events:
        after.setdefault(e.position, []).append(e)
    dims = circuit.dims
    out = circuit.copy_empty()
    for pos, g in enumerate(circuit.gates):
        out.add_gate(g)
        for e in after.get(pos, ()):
            out.add_gate(error_gate(e, dims))
    return out


def _final_sampler(circuit: Circuit, backend: str, package: DDPackage | None):
    if backend == "dense":
        state = initial_state(circuit)
        for g in circuit.gates:
            apply_gate_inplace(state.amps, state.dims, g)
        cdf = np.cumsum(state.probabilities())
        return lambda u: outcome_index(cdf, u)
    if backend == "dd":
        from .core.radix import radix_index

        state = dd_simulate(circuit, package)
        dims = state.dims
        return lambda u: radix_index(dd_draw(state, u), dims)
    raise NoiseError(f"unknown backend '{backend}'")


def run_noisy(circuit: Circuit, model: NoiseModel, shots: int, seed: int = 0,
              backend: str = "dense", workers: int = 1) -> Counts:
    """Sample ``shots`` noisy executions; deterministic for a given seed.

    Shots that draw the same error events share one simulation.
    """
    if shots < 1:
        raise SimulationError("shots must be >= 1")
    unknown = [n for n in model.entries if n not in GATE_NAMES]
    if unknown:
        raise NoiseError(f"noise model references unsupported gate(s) {unknown}")
    plan = _coin_plan(circuit, model)
    base = circuit.without_measurements()

    def run(part: range) -> list[int]:
        package = DDPackage() if backend == "dd" else None
        samplers: dict = {}
        out = []
        for s in part:
            u, events = _draw_shot(seed, s, plan)
            sampler = samplers.get(events)
            if sampler is None:
                sampler = samplers[events] = _final_sampler(with_errors(base, events), backend, package)
            out.append(sampler(u))
        return out

    indices = [i for part in map_shots(run, shots, workers) for i in part]
    return Counts.from_indices(indices, circuit.dims)
