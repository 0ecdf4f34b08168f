"""DITQASM 2.0 reading and writing."""

from .emitter import emit, emit_gate, format_angle
from .parser import ParseDiagnostic, QasmError, SourceSpan, parse, parse_expr, parse_with_diagnostics

__all__ = [
    "ParseDiagnostic", "QasmError", "SourceSpan", "emit", "emit_gate", "format_angle", "parse",
    "parse_expr", "parse_with_diagnostics",
]
