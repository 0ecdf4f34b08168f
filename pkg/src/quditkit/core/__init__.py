"""Mixed-radix arithmetic, circuit IR and gate matrices."""

from .circuit import (
    Circuit,
    CircuitError,
    ClassicRegister,
    Clbit,
    Instruction,
    QuantumRegister,
    Qudit,
    validate_gate,
)
from .gates import (
    GATE_NAMES,
    ControlSpec,
    GateError,
    GateSpec,
    base_matrix,
    clock,
    controlled_matrix,
    equal_up_to_phase,
    fourier,
    full_matrix,
    gate_matrix,
    inverse,
    is_unitary,
    phase_distance,
    shift,
    subspace_x,
    subspace_z,
)
from .radix import DimensionError, digit_table, index_to_digits, radix_index, strides, total_dim
from .unitary import CircuitStats, circuit_stats, circuit_unitary, embed

__all__ = [
    "GATE_NAMES", "Circuit", "CircuitError", "CircuitStats", "ClassicRegister", "Clbit",
    "ControlSpec", "DimensionError", "GateError", "GateSpec", "Instruction", "QuantumRegister",
    "Qudit", "base_matrix", "circuit_stats", "circuit_unitary", "clock", "controlled_matrix",
    "digit_table", "embed", "equal_up_to_phase", "fourier", "full_matrix", "gate_matrix",
    "index_to_digits", "inverse", "is_unitary", "phase_distance", "radix_index", "shift",
    "strides", "subspace_x", "subspace_z", "total_dim", "validate_gate",
]
