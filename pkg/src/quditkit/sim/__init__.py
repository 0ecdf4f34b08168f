"""Dense and decision-diagram simulation backends."""

from .dd import (
    DDPackage,
    DDState,
    dd_apply_gate,
    dd_from_vector,
    dd_node_count,
    dd_sample,
    dd_simulate,
    dd_to_vector,
    dd_zero_state,
)
from .dense import (
    MAX_DENSE_DIM,
    Counts,
    SimulationError,
    StateVector,
    apply_gate,
    dump_state,
    fidelity,
    sample,
    simulate,
)
from .kernels import BACKEND as KERNEL_BACKEND

BACKENDS = ("dense", "dd")


def simulate_state(circuit, backend: str = "dense") -> StateVector:
    """Final state as a dense vector from either backend."""
    if backend == "dense":
        return simulate(circuit)
    if backend == "dd":
        return dd_to_vector(dd_simulate(circuit))
    raise ValueError(f"unknown backend '{backend}' (expected one of {BACKENDS})")


__all__ = [
    "BACKENDS", "KERNEL_BACKEND", "MAX_DENSE_DIM", "Counts", "DDPackage", "DDState",
    "SimulationError", "StateVector", "apply_gate", "dd_apply_gate", "dd_from_vector",
    "dd_node_count", "dd_sample", "dd_simulate", "dd_to_vector", "dd_zero_state", "dump_state",
    "fidelity", "sample", "simulate", "simulate_state",
]
