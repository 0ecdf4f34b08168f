"""Toolchain for mixed-dimensional qudit circuits."""

from .core import (
    Circuit,
    ClassicRegister,
    ControlSpec,
    GateSpec,
    QuantumRegister,
    circuit_stats,
    circuit_unitary,
    gate_matrix,
    radix_index,
)
from .sim import Counts, StateVector, simulate_state

__version__ = "0.1.0"

__all__ = [
    "Circuit", "ClassicRegister", "ControlSpec", "Counts", "GateSpec", "QuantumRegister",
    "StateVector", "circuit_stats", "circuit_unitary", "gate_matrix", "radix_index",
    "simulate_state",
]
