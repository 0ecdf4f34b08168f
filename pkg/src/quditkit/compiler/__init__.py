"""Decompositions into native rotations, level routing and compilation passes."""

from .entangling import decompose_entangling_qr
from .graph import EnergyLevelGraph, GraphError
from .local import decompose_local_qr
from .passes import (
    CompileError,
    PassName,
    UnsupportedGateError,
    compile,
    compile_report,
    parse_passes,
)
from .rotations import DecompositionError, RotationOp, ops_unitary
from .routing import route_physical, route_rotation
from .stateprep import StatePrepError, prepare_state, tree_size

__all__ = [
    "CompileError", "DecompositionError", "EnergyLevelGraph", "GraphError", "PassName",
    "RotationOp", "StatePrepError", "UnsupportedGateError", "compile", "compile_report",
    "decompose_entangling_qr", "decompose_local_qr", "ops_unitary", "parse_passes",
    "prepare_state", "route_physical", "route_rotation", "tree_size",
]
