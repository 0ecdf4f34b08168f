"""Compilation passes over circuits and the compile driver."""

from __future__ import annotations

import math
from collections import Counter
from enum import Enum
from typing import Iterable, Sequence

from ..core.circuit import Circuit, Instruction
from ..core.gates import GateSpec, base_matrix, full_matrix
from .entangling import decompose_entangling_qr
from .graph import EnergyLevelGraph
from .local import decompose_local_qr
from .routing import route_rotation
from .rotations import RotationOp
from .stateprep import prepare_state


class CompileError(ValueError):
    pass


class UnsupportedGateError(CompileError):
    pass


class PassName(str, Enum):
    LogLocQRPass = "LogLocQRPass"
    PhyLocQRPass = "PhyLocQRPass"
    LogEntQRPass = "LogEntQRPass"
    PhyEntQRPass = "PhyEntQRPass"
    StatePrepPass = "StatePrepPass"

    @property
    def physical(self) -> bool:
        return self.value.startswith("Phy")


def parse_passes(passes: Iterable[str | PassName]) -> list[PassName]:
    out = []
    for p in passes:
        try:
            out.append(PassName(p))
        except ValueError:
            names = ", ".join(n.value for n in PassName)
            raise CompileError(f"unknown pass '{p}' (expected one of {names})") from None
    return out


def _as_op(gate: GateSpec, lines: Sequence[int]) -> RotationOp:
    """RotationOp view of an rxy/rz gate (with at most one control)."""
    pos = {q: i for i, q in enumerate(lines)}
    axis = "z" if gate.name == "rz" else "xy"
    theta = gate.params[2]
    phi = gate.params[3] if gate.name == "rxy" else 0.0
    target = pos[gate.lines[0]]
    if gate.control is None:
        return RotationOp(gate.name, gate.levels, theta, phi, target)
    (cq, lv), = gate.control.controls
    return RotationOp("crot", gate.levels, theta, phi, target, (pos[cq], lv), axis)


def _is_crot(gate: GateSpec) -> bool:
    return gate.name in ("rxy", "rz") and gate.control is not None and len(gate.control.controls) == 1


class _Context:
    def __init__(self, circuit: Circuit, device, physical: bool):
        self.dims = circuit.dims
        self.device = device
        self.physical = physical
        self._graphs: dict[int, EnergyLevelGraph] = {}

    def graph(self, q: int) -> EnergyLevelGraph | None:
        if not self.physical:
            return None
        if q not in self._graphs:
            g = self.device.graph_for(q, self.dims[q])
            if not g.is_connected():
                raise CompileError(f"level graph of qudit {q} is disconnected on its {self.dims[q]} used levels")
            self._graphs[q] = g
        return self._graphs[q]


def _check_arity(gate: GateSpec, pass_name: PassName) -> None:
    if gate.num_qudits > 2:
        raise UnsupportedGateError(
            f"{pass_name.value}: gate '{gate.name}' acts on {gate.num_qudits} qudits; only 1- and 2-qudit gates are supported")


def _local(gate: GateSpec, ctx: _Context) -> list[GateSpec]:
    q = gate.lines[0]
    graph = ctx.graph(q)
    if gate.name in ("rxy", "rz"):
        op = _as_op(gate, (q,))
        if graph is None or graph.has_edge(*op.levels):
            return [gate]
        return [o.to_gate((q,)) for o in route_rotation(op, graph)]
    u = base_matrix(gate, [ctx.dims[q]])
    ops = decompose_local_qr(u, graph)
    if graph is not None:
        ops = [r for o in ops for r in route_rotation(o, graph)]
    return [o.to_gate((q,)) for o in ops]


def _entangling(gate: GateSpec, ctx: _Context) -> list[GateSpec]:
    lines = gate.operand_lines
    if ctx.physical and not ctx.device.coupled(*lines):
        raise CompileError(f"gate '{gate.name}' on uncoupled qudits {lines[0]} and {lines[1]}")
    if gate.name == "pswap" and gate.control is None:
        return [gate]
    if _is_crot(gate):
        op = _as_op(gate, lines)
        graph = ctx.graph(gate.lines[0])
        if graph is None or graph.has_edge(*op.levels):
            return [gate]
        return [o.to_gate(lines) for o in route_rotation(op, graph)]
    dims = [ctx.dims[q] for q in lines]
    u = full_matrix(gate, ctx.dims)
    graphs = (ctx.graph(lines[0]), ctx.graph(lines[1])) if ctx.physical else None
    return [o.to_gate(lines) for o in decompose_entangling_qr(u, dims, graphs)]


def _rewrite(circuit: Circuit, pass_name: PassName, ctx: _Context, arity: int) -> Circuit:
    out = circuit.copy_empty()
    for ins in circuit.instructions:
        if ins.kind != "gate":
            out.instructions.append(ins)
            continue
        g = ins.gate
        _check_arity(g, pass_name)
        if g.num_qudits != arity:
            out.instructions.append(ins)
            continue
        new = _local(g, ctx) if arity == 1 else _entangling(g, ctx)
        out.instructions.extend(Instruction.of_gate(n) for n in new)
    return out


def _state_prep(circuit: Circuit) -> Circuit:
    if circuit.initial_state is None:
        return circuit.copy()
    prep = prepare_state(circuit.initial_state, dims=circuit.dims)
    out = circuit.copy_empty()
    out.initial_state = None
    out.instructions = [Instruction.of_gate(g) for g in prep.gates] + list(circuit.instructions)
    return out


def _check_device(circuit: Circuit, device) -> None:
    if device is None:
        raise CompileError("physical passes need a device")
    dims = circuit.dims
    if len(dims) > device.num_qudits:
        raise CompileError(f"circuit has {len(dims)} qudits, device '{device.name}' has {device.num_qudits}")
    for q, d in enumerate(dims):
        if d > device.dims[q]:
            raise CompileError(f"line {q} has dimension {d}, device qudit {q} has {device.dims[q]}")


def compile(circuit: Circuit, device=None, passes: Iterable[str | PassName] = ()) -> Circuit:
    """Run ``passes`` in order and return a new circuit.

    Measurements stay where they were. Physical passes map circuit line i
    onto device qudit i.
    """
    names = parse_passes(passes)
    if any(p.physical for p in names):
        _check_device(circuit, device)
    out = circuit.copy()
    for p in names:
        if p is PassName.StatePrepPass:
            out = _state_prep(out)
            continue
        ctx = _Context(out, device, p.physical)
        arity = 1 if p in (PassName.LogLocQRPass, PassName.PhyLocQRPass) else 2
        out = _rewrite(out, p, ctx, arity)
    return out


def gate_log_fidelity(gate: GateSpec, dims: Sequence[int], device) -> float | None:
    """log-fidelity of one native op on ``device``, None if it has no cost entry."""
    if gate.num_qudits == 2:
        a, b = gate.operand_lines
        return math.log(device.coupling_fidelity(a, b)) if device.coupled(a, b) else None
    if gate.num_qudits == 1 and gate.name in ("rxy", "rz"):
        q = gate.lines[0]
        graph = device.graph_for(q, dims[q])
        return math.log(graph.fidelity(*gate.levels)) if graph.has_edge(*gate.levels) else None
    return None


def compile_report(before: Circuit, after: Circuit, device=None) -> dict:
    """Gate counts before and after, plus the summed log-fidelity on ``device``."""
    def counts(c: Circuit) -> dict[str, int]:
        return dict(sorted(Counter(g.name for g in c.gates).items()))

    report = {
        "gates_before": len(before.gates),
        "gates_after": len(after.gates),
        "counts_before": counts(before),
        "counts_after": counts(after),
        "entangling_after": sum(1 for g in after.gates if g.num_qudits > 1),
    }
    if device is not None:
        total, uncosted = 0.0, 0
        for g in after.gates:
            f = gate_log_fidelity(g, after.dims, device)
            if f is None:
                uncosted += 1
            else:
                total += f
        report["log_fidelity"] = total
        report["expected_fidelity"] = math.exp(total)
        report["uncosted_ops"] = uncosted
    return report
