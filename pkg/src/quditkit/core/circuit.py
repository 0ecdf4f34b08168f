"""Registers, instructions and the circuit container."""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, NamedTuple, Sequence, Union

import numpy as np

from .gates import ControlSpec, GateError, GateSpec, base_matrix
from .radix import DimensionError, total_dim

_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")


class CircuitError(ValueError):
    """Instruction does not type-check against the circuit's registers."""


class Qudit(NamedTuple):
    register: str
    index: int


class Clbit(NamedTuple):
    register: str
    index: int


Line = Union[int, Qudit]


@dataclass(frozen=True)
class QuantumRegister:
    name: str
    size: int
    dims: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "dims", tuple(int(d) for d in self.dims))
        if not _IDENT.match(self.name):
            raise CircuitError(f"invalid register name {self.name!r}")
        if self.size < 1:
            raise CircuitError(f"register {self.name} must hold at least one qudit")
        if len(self.dims) != self.size:
            raise CircuitError(f"register {self.name}: {self.size} qudits but {len(self.dims)} dimensions")
        bad = [d for d in self.dims if d < 2]
        if bad:
            raise CircuitError(f"register {self.name}: qudit dimensions must be >= 2, got {bad}")

    def __getitem__(self, i: int) -> Qudit:
        if not 0 <= i < self.size:
            raise IndexError(f"{self.name}[{i}] out of range (size {self.size})")
        return Qudit(self.name, i)

    def __len__(self):
        return self.size


@dataclass(frozen=True)
class ClassicRegister:
    name: str
    size: int

    def __post_init__(self):
        if not _IDENT.match(self.name):
            raise CircuitError(f"invalid register name {self.name!r}")
        if self.size < 1:
            raise CircuitError(f"classical register {self.name} must hold at least one cell")

    def __getitem__(self, i: int) -> Clbit:
        if not 0 <= i < self.size:
            raise IndexError(f"{self.name}[{i}] out of range (size {self.size})")
        return Clbit(self.name, i)

    def __len__(self):
        return self.size


@dataclass(frozen=True)
class Instruction:
    kind: str  # "gate" | "measure"
    gate: GateSpec | None = None
    qudit: int | None = None
    clbit: Clbit | None = None

    @classmethod
    def of_gate(cls, gate: GateSpec) -> "Instruction":
        return cls("gate", gate=gate)

    @classmethod
    def of_measure(cls, qudit: int, clbit: Clbit) -> "Instruction":
        return cls("measure", qudit=int(qudit), clbit=Clbit(*clbit))

    @property
    def lines(self) -> tuple[int, ...]:
        return self.gate.operand_lines if self.kind == "gate" else (self.qudit,)


def validate_gate(gate: GateSpec, dims: Sequence[int]) -> None:
    """Raise if ``gate`` cannot be realized on qudits of ``dims``."""
    n = len(dims)
    for q in gate.operand_lines:
        if not 0 <= q < n:
            raise CircuitError(f"gate '{gate.name}' references line {q}, circuit has {n} qudits")
    base_matrix(gate, [dims[q] for q in gate.lines])
    if gate.control:
        for q, lv in gate.control.controls:
            if lv >= dims[q]:
                raise GateError(f"control level {lv} >= dimension {dims[q]} of control line {q}")


@dataclass
class Circuit:
    """Ordered instructions over named mixed-dimensional registers.

    Lines are global qudit indices: registers are concatenated in
    declaration order, so the first qudit of the first register is line 0
    and the most significant digit of every basis index.
    """

    qregs: list[QuantumRegister] = field(default_factory=list)
    cregs: list[ClassicRegister] = field(default_factory=list)
    instructions: list[Instruction] = field(default_factory=list)
    initial_state: np.ndarray | None = None

    @classmethod
    def from_dims(cls, dims: Sequence[int], name: str = "q") -> "Circuit":
        c = cls()
        c.append(QuantumRegister(name, len(dims), tuple(dims)))
        return c

    # registers

    def append(self, reg: QuantumRegister) -> QuantumRegister:
        if self.instructions:
            raise CircuitError("registers must be declared before instructions")
        if any(r.name == reg.name for r in (*self.qregs, *self.cregs)):
            raise CircuitError(f"register '{reg.name}' already declared")
        self.qregs.append(reg)
        self.initial_state = None
        return reg

    def append_classic(self, reg: ClassicRegister) -> ClassicRegister:
        if any(r.name == reg.name for r in (*self.qregs, *self.cregs)):
            raise CircuitError(f"register '{reg.name}' already declared")
        self.cregs.append(reg)
        return reg

    @property
    def dims(self) -> list[int]:
        return [d for r in self.qregs for d in r.dims]

    @property
    def num_qudits(self) -> int:
        return sum(r.size for r in self.qregs)

    @property
    def total_dim(self) -> int:
        return total_dim(self.dims)

    def qreg(self, name: str) -> QuantumRegister:
        for r in self.qregs:
            if r.name == name:
                return r
        raise CircuitError(f"no quantum register named '{name}'")

    def creg(self, name: str) -> ClassicRegister:
        for r in self.cregs:
            if r.name == name:
                return r
        raise CircuitError(f"no classical register named '{name}'")

    def line(self, q: Line) -> int:
        if isinstance(q, tuple):
            offset = 0
            for r in self.qregs:
                if r.name == q[0]:
                    if not 0 <= q[1] < r.size:
                        raise CircuitError(f"{q[0]}[{q[1]}] out of range (size {r.size})")
                    return offset + q[1]
                offset += r.size
            raise CircuitError(f"no quantum register named '{q[0]}'")
        q = int(q)
        if not 0 <= q < self.num_qudits:
            raise CircuitError(f"line {q} out of range ({self.num_qudits} qudits)")
        return q

    def locate(self, line: int) -> Qudit:
        offset = 0
        for r in self.qregs:
            if line < offset + r.size:
                return Qudit(r.name, line - offset)
            offset += r.size
        raise CircuitError(f"line {line} out of range ({self.num_qudits} qudits)")

    # instructions

    def measured_lines(self) -> set[int]:
        return {ins.qudit for ins in self.instructions if ins.kind == "measure"}

    def add_gate(self, gate: GateSpec) -> "Circuit":
        validate_gate(gate, self.dims)
        measured = self.measured_lines() & set(gate.operand_lines)
        if measured:
            raise CircuitError(f"gate '{gate.name}' after measurement of line(s) {sorted(measured)}")
        self.instructions.append(Instruction.of_gate(gate))
        return self

    def measure(self, qudit: Line, clbit: Clbit | tuple[str, int]) -> "Circuit":
        line = self.line(qudit)
        reg = self.creg(clbit[0])
        if not 0 <= clbit[1] < reg.size:
            raise CircuitError(f"{clbit[0]}[{clbit[1]}] out of range (size {reg.size})")
        self.instructions.append(Instruction.of_measure(line, Clbit(*clbit)))
        return self

    def measure_all(self, creg_name: str = "meas") -> "Circuit":
        n = self.num_qudits
        if not any(r.name == creg_name for r in self.cregs):
            self.append_classic(ClassicRegister(creg_name, n))
        for q in range(n):
            self.measure(q, (creg_name, q))
        return self

    def gate(self, name: str, lines: Iterable[Line], params: Sequence[float] = (),
             controls: Sequence[Line] = (), levels: Sequence[int] = (), matrix=None) -> "Circuit":
        control = None
        if controls:
            control = ControlSpec.of([self.line(q) for q in controls], levels)
        g = GateSpec(name, tuple(params), tuple(self.line(q) for q in lines), control, matrix)
        return self.add_gate(g)

    def x(self, q: Line, **ctl):
        return self.gate("x", [q], **ctl)

    def z(self, q: Line, **ctl):
        return self.gate("z", [q], **ctl)

    def s(self, q: Line, **ctl):
        return self.gate("s", [q], **ctl)

    def h(self, q: Line, **ctl):
        return self.gate("h", [q], **ctl)

    def rxy(self, q: Line, l1: int, l2: int, theta: float, phi: float, **ctl):
        return self.gate("rxy", [q], (l1, l2, theta, phi), **ctl)

    def rz(self, q: Line, l1: int, l2: int, theta: float, **ctl):
        return self.gate("rz", [q], (l1, l2, theta), **ctl)

    def csum(self, control: Line, target: Line, **ctl):
        return self.gate("csum", [control, target], **ctl)

    def ms(self, a: Line, b: Line, theta: float, **ctl):
        return self.gate("ms", [a, b], (theta,), **ctl)

    def ls(self, a: Line, b: Line, theta: float, **ctl):
        return self.gate("ls", [a, b], (theta,), **ctl)

    def cu(self, lines: Sequence[Line], matrix, **ctl):
        return self.gate("cu", lines, matrix=matrix, **ctl)

    def pswap(self, a: Line, b: Line, pair_a: tuple[int, int], pair_b: tuple[int, int],
              theta: float, phi: float, **ctl):
        return self.gate("pswap", [a, b], (*pair_a, *pair_b, theta, phi), **ctl)

    def set_initial_state(self, state) -> "Circuit":
        v = np.asarray(getattr(state, "amps", state), dtype=complex).ravel()
        if v.shape[0] != self.total_dim:
            raise DimensionError(f"initial state has length {v.shape[0]}, circuit dimension is {self.total_dim}")
        if abs(np.vdot(v, v).real - 1) > 1e-10:
            raise DimensionError("initial state is not normalized")
        v = v.copy()
        v.setflags(write=False)
        self.initial_state = v
        return self

    @property
    def gates(self) -> list[GateSpec]:
        return [ins.gate for ins in self.instructions if ins.kind == "gate"]

    @property
    def measurements(self) -> list[Instruction]:
        return [ins for ins in self.instructions if ins.kind == "measure"]

    def copy_empty(self) -> "Circuit":
        c = Circuit(list(self.qregs), list(self.cregs))
        c.initial_state = self.initial_state
        return c

    def copy(self) -> "Circuit":
        c = self.copy_empty()
        c.instructions = list(self.instructions)
        return c

    def without_measurements(self) -> "Circuit":
        c = self.copy_empty()
        c.instructions = [ins for ins in self.instructions if ins.kind == "gate"]
        return c

    def __eq__(self, other):
        if not isinstance(other, Circuit):
            return NotImplemented
        if (self.initial_state is None) != (other.initial_state is None):
            return False
        if self.initial_state is not None and not np.array_equal(self.initial_state, other.initial_state):
            return False
        return (self.qregs == other.qregs and self.cregs == other.cregs
                and self.instructions == other.instructions)
