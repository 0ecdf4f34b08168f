import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import MIXED_PROGRAM, random_circuit
from quditkit.core import ControlSpec, GateSpec
from quditkit.qasm import QasmError, emit, parse, parse_expr, parse_with_diagnostics


def test_mixed_program_structure():
    c = parse(MIXED_PROGRAM)
    assert [(r.name, list(r.dims)) for r in c.qregs] == [("reg_1", [2, 3]), ("reg_2", [4, 7])]
    assert [(r.name, r.size) for r in c.cregs] == [("meas", 4)]
    assert c.gates == [
        GateSpec("h", (), (2,), ControlSpec(((0, 0), (1, 0)))),
        GateSpec("csum", (), (2, 0)),
        GateSpec("rxy", (0, 2, math.pi, math.pi / 2), (1,)),
        GateSpec("rxy", (0, 1, math.pi, math.pi / 2), (3,)),
    ]
    assert [(m.qudit, m.clbit.index) for m in c.measurements] == [(0, 0), (1, 1), (2, 2), (3, 3)]
    assert c.total_dim == 168


def test_mixed_program_roundtrip():
    c = parse(MIXED_PROGRAM)
    text = emit(c)
    assert parse(text) == c
    assert emit(parse(text)) == text


def test_emit_is_canonical():
    text = emit(parse(MIXED_PROGRAM))
    assert "rxy (0, 2, 3.1415926535897931, 1.5707963267948966) reg_1[1];" in text
    assert "h reg_2[0] ctl reg_1[0] reg_1[1] [0, 0];" in text


@pytest.mark.parametrize("src,value", [
    ("3*pi/4 + 0.5", 2.856194490192345),
    ("-pi", -math.pi),
    ("2*(1+3)/4", 2.0),
    ("1e-3", 1e-3),
    ("--1", 1.0),
])
def test_parse_expr(src, value):
    assert parse_expr(src) == pytest.approx(value, abs=1e-15)


def test_division_by_zero_is_diagnosed():
    with pytest.raises(QasmError):
        parse_expr("1/0")


def _errors(src: str) -> list[str]:
    _, diags = parse_with_diagnostics(src)
    return [d.message for d in diags]


def test_empty_file():
    assert any("missing DITQASM header" in m for m in _errors(""))


def test_wrong_version():
    assert _errors("DITQASM 3.0;\nqreg q [1][3];\n")


def test_all_errors_reported_in_order():
    src = "DITQASM 2.0;\nqreg q [2][3, 2];\nfoo q[0];\nx q[5];\nrxy (0, 3, pi, 0) q[0];\nx q[1];\n"
    c, diags = parse_with_diagnostics(src)
    assert c is None
    lines = [d.span.line for d in diags]
    assert lines == sorted(lines)
    assert lines[:3] == [3, 4, 5]


def test_error_spans_point_at_source():
    src = "DITQASM 2.0;\nqreg q [1][3];\nx r[0];\n"
    (d,) = parse_with_diagnostics(src)[1]
    assert (d.span.line, d.span.column) == (3, 3)
    assert src[d.span.start:d.span.end] == "r"


def test_register_dims_mismatch():
    assert _errors("DITQASM 2.0;\nqreg q [2][3];\n")


def test_comments_and_whitespace():
    src = "// header comment\nDITQASM 2.0; // version\nqreg q [1][3];\n\n  x   q[0] ;\n"
    assert parse(src).gates == [GateSpec("x", (), (0,))]


def test_cu_roundtrip():
    from scipy.stats import unitary_group

    u = unitary_group.rvs(3, random_state=2)
    from quditkit.core import Circuit

    c = Circuit.from_dims([3, 2])
    c.cu([0], u, controls=[1], levels=[1])
    back = parse(emit(c))
    assert back == c
    assert np.array_equal(back.gates[0].matrix, c.gates[0].matrix)


def test_measure_then_gate_is_error():
    src = "DITQASM 2.0;\nqreg q [1][3];\ncreg m[1];\nmeasure q[0] -> m[0];\nx q[0];\n"
    assert _errors(src)


def test_deep_nesting_is_diagnosed_not_crash():
    src = "DITQASM 2.0;\nqreg q [1][3];\nrz (0, 1, " + "(" * 5000 + "1" + ")" * 5000 + ") q[0];\n"
    assert _errors(src)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 100_000))
def test_random_roundtrip(seed):
    c = random_circuit(np.random.default_rng(seed), 3, 4, 12)
    assert parse(emit(c)) == c


@settings(max_examples=300, deadline=None)
@given(st.text(alphabet="DITQASM2.0;qreg[]()ctl,->measure xhzs 0123456789\n/*+-pi", max_size=120))
def test_fuzz_never_crashes(text):
    c, diags = parse_with_diagnostics("DITQASM 2.0;\n" + text)
    assert (c is None) == bool(diags)


@settings(max_examples=200, deadline=None)
@given(st.binary(max_size=200))
def test_fuzz_bytes(data):
    parse_with_diagnostics(data)
