"""Device descriptions: per-qudit level graphs, couplings, native gates, noise."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Sequence

from .compiler.graph import EnergyLevelGraph, GraphError
from .core.circuit import Circuit
from .core.gates import GateSpec
from .noise import NoiseError, NoiseModel

DEVICE_SCHEMA_VERSION = 1
NATIVE_KINDS = ("rxy", "rz", "crot", "crz", "pswap")


class DeviceError(ValueError):
    pass


@dataclass(frozen=True)
class Device:
    name: str
    graphs: tuple[EnergyLevelGraph, ...]
    couplings: dict[tuple[int, int], float] = field(default_factory=dict)
    native_gates: tuple[str, ...] = NATIVE_KINDS
    noise: NoiseModel | None = None

    def __post_init__(self):
        n = len(self.graphs)
        clean = {}
        for (a, b), f in self.couplings.items():
            if a == b or not (0 <= a < n and 0 <= b < n):
                raise DeviceError(f"coupling ({a}, {b}) invalid for {n} qudits")
            if not 0 < f <= 1:
                raise DeviceError(f"coupling ({a}, {b}) fidelity {f} not in (0, 1]")
            clean[(min(a, b), max(a, b))] = float(f)
        object.__setattr__(self, "couplings", clean)

    @property
    def dims(self) -> tuple[int, ...]:
        return tuple(g.dim for g in self.graphs)

    @property
    def num_qudits(self) -> int:
        return len(self.graphs)

    def coupled(self, a: int, b: int) -> bool:
        return (min(a, b), max(a, b)) in self.couplings

    def coupling_fidelity(self, a: int, b: int) -> float:
        return self.couplings[(min(a, b), max(a, b))]

    def graph_for(self, qudit: int, dim: int) -> EnergyLevelGraph:
        """Level graph of ``qudit`` restricted to the ``dim`` levels a circuit uses."""
        return self.graphs[qudit].restricted(dim)

    def to_dict(self) -> dict:
        return {
            "schema_version": DEVICE_SCHEMA_VERSION,
            "name": self.name,
            "qudits": [{"dim": g.dim, "level_edges": g.to_list()} for g in self.graphs],
            "couplings": [[a, b, f] for (a, b), f in sorted(self.couplings.items())],
            "native_gates": list(self.native_gates),
            "noise": self.noise.to_dict() if self.noise is not None else None,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "Device":
        if not isinstance(data, dict):
            raise DeviceError("device description must be a JSON object")
        version = data.get("schema_version", DEVICE_SCHEMA_VERSION)
        if version != DEVICE_SCHEMA_VERSION:
            raise DeviceError(f"unsupported device schema_version {version}")
        try:
            graphs = tuple(EnergyLevelGraph.from_list(q["dim"], q.get("level_edges", ()))
                           for q in data["qudits"])
            couplings = {(int(a), int(b)): float(f) for a, b, f in data.get("couplings", ())}
            native = tuple(data.get("native_gates", NATIVE_KINDS))
            noise = NoiseModel.from_dict(data["noise"]) if data.get("noise") else None
            return cls(str(data.get("name", "device")), graphs, couplings, native, noise)
        except (KeyError, TypeError, ValueError, GraphError, NoiseError) as exc:
            if isinstance(exc, DeviceError):
                raise
            raise DeviceError(f"malformed device description: {exc}") from None


def bundled_devices() -> list[str]:
    root = resources.files("quditkit") / "devices"
    return sorted(p.name[:-5] for p in root.iterdir() if p.name.endswith(".json"))


def load_device(source: str | Path) -> Device:
    """Load a device from a JSON file, or by name from the bundled devices."""
    path = Path(source)
    if path.suffix == ".json" or path.exists():
        try:
            text = path.read_text()
        except OSError as exc:
            raise DeviceError(f"cannot read device file {source}: {exc.strerror}") from None
    else:
        res = resources.files("quditkit") / "devices" / f"{source}.json"
        if not res.is_file():
            raise DeviceError(f"unknown device '{source}' (bundled: {', '.join(bundled_devices())})")
        text = res.read_text()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DeviceError(f"{source}: invalid JSON ({exc})") from None
    return Device.from_dict(data)


def save_device(device: Device, path: str | Path) -> None:
    Path(path).write_text(json.dumps(device.to_dict(), indent=2) + "\n")


@dataclass(frozen=True)
class Violation:
    kind: str  # "size" | "dimension" | "coupling" | "native" | "level_edge"
    position: int | None  # gate index, None for whole-circuit problems
    message: str

    def __str__(self):
        where = f"gate {self.position}: " if self.position is not None else ""
        return f"{self.kind}: {where}{self.message}"


def native_kind(gate: GateSpec) -> str:
    """Hardware name of a gate: a singly controlled rxy is a crot, rz a crz."""
    if gate.name in ("rxy", "rz") and gate.control is not None and len(gate.control.controls) == 1:
        return "crot" if gate.name == "rxy" else "crz"
    return gate.name


def validate_circuit(circuit: Circuit, device: Device) -> list[Violation]:
    """Everything that keeps ``circuit`` from running as-is on ``device``.

    Circuit line i runs on device qudit i; a qudit may use fewer levels than
    the hardware offers.
    """
    out: list[Violation] = []
    dims = circuit.dims
    if len(dims) > device.num_qudits:
        out.append(Violation("size", None, f"circuit has {len(dims)} qudits, device has {device.num_qudits}"))
        return out
    for q, d in enumerate(dims):
        if d > device.dims[q]:
            out.append(Violation("dimension", None, f"line {q} has dimension {d}, device qudit has {device.dims[q]}"))
    if out:
        return out
    graphs = [device.graph_for(q, d) for q, d in enumerate(dims)]
    for pos, g in enumerate(circuit.gates):
        kind = native_kind(g)
        if kind not in device.native_gates:
            out.append(Violation("native", pos, f"'{kind}' is not a native gate"))
        ops = g.operand_lines
        for i in range(len(ops)):
            for j in range(i + 1, len(ops)):
                if not device.coupled(ops[i], ops[j]):
                    out.append(Violation("coupling", pos, f"qudits {ops[i]} and {ops[j]} are not coupled"))
        if g.name in ("rxy", "rz"):
            l1, l2 = g.levels
            q = g.lines[0]
            if not graphs[q].has_edge(l1, l2):
                out.append(Violation("level_edge", pos, f"levels ({l1}, {l2}) are not an edge on qudit {q}"))
    return out


def default_graphs(dims: Sequence[int]) -> tuple[EnergyLevelGraph, ...]:
    return tuple(EnergyLevelGraph.path(d) for d in dims)
