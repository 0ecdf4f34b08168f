"""Canonical DITQASM 2.0 printer."""

from __future__ import annotations

from ..core.circuit import Circuit
from ..core.gates import LEVEL_PARAMS, GateSpec


def format_angle(x: float) -> str:
    # 17 significant digits round-trip every double exactly
    return "%.17g" % (x + 0.0)  # + 0.0 turns -0.0 into 0.0


def _param_list(gate: GateSpec) -> list[str]:
    if gate.name == "cu":
        out = []
        for z in gate.matrix.ravel():
            out += [format_angle(z.real), format_angle(z.imag)]
        return out
    levels = set(LEVEL_PARAMS.get(gate.name, ()))
    return [str(int(p)) if i in levels else format_angle(p) for i, p in enumerate(gate.params)]


def emit_gate(circuit: Circuit, gate: GateSpec) -> str:
    def ref(q: int) -> str:
        r, i = circuit.locate(q)
        return f"{r}[{i}]"

    text = gate.name
    params = _param_list(gate)
    if params:
        text += " (" + ", ".join(params) + ")"
    text += " " + ", ".join(ref(q) for q in gate.lines)
    if gate.control:
        text += " ctl " + " ".join(ref(q) for q in gate.control.lines)
        text += " [" + ", ".join(str(v) for v in gate.control.levels) + "]"
    return text + ";"


def emit(circuit: Circuit) -> str:
    lines = ["DITQASM 2.0;"]
    for r in circuit.qregs:
        lines.append(f"qreg {r.name} [{r.size}][{', '.join(str(d) for d in r.dims)}];")
    for r in circuit.cregs:
        lines.append(f"creg {r.name}[{r.size}];")
    for ins in circuit.instructions:
        if ins.kind == "gate":
            lines.append(emit_gate(circuit, ins.gate))
        else:
            r, i = circuit.locate(ins.qudit)
            lines.append(f"measure {r}[{i}] -> {ins.clbit.register}[{ins.clbit.index}];")
    return "\n".join(lines) + "\n"
