import json
import subprocess
import sys

import numpy as np
import pytest

from conftest import QUTRIT_QUBIT_AMPS, MIXED_PROGRAM
from quditkit.cli import main
from quditkit.core import circuit_unitary, phase_distance
from quditkit.qasm import parse

EX1 = "DITQASM 2.0;\nqreg q [2][3, 2];\nh q[0];\ncsum q[0], q[1];\n"


@pytest.fixture
def files(tmp_path):
    (tmp_path / "mixed.qasm").write_text(MIXED_PROGRAM)
    (tmp_path / "ex1.qasm").write_text(EX1)
    (tmp_path / "empty.qasm").write_text("")
    (tmp_path / "zero.qasm").write_text("DITQASM 2.0;\nqreg q [2][3, 3];\n")
    (tmp_path / "slice.qasm").write_text(
        "DITQASM 2.0;\nqreg q [2][3, 7];\nrxy (0, 2, pi, pi/2) q[0];\nrxy (0, 1, pi, pi/2) q[1];\n")
    return tmp_path


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def test_parse_mixed_program(files, capsys):
    code, out, _ = run(capsys, "parse", files / "mixed.qasm")
    assert code == 0
    assert parse(out) == parse(MIXED_PROGRAM)


def test_parse_empty(files, capsys):
    code, _, err = run(capsys, "parse", files / "empty.qasm")
    assert code == 1
    assert "missing DITQASM header" in err


def test_parse_missing_file(files, capsys):
    code, _, _ = run(capsys, "parse", files / "nope.qasm")
    assert code == 2


def test_dump_state(files, capsys):
    code, out, _ = run(capsys, "simulate", files / "ex1.qasm", "--shots", 0, "--dump-state")
    assert code == 0
    rows = [r.split("\t") for r in out.splitlines()]
    assert len(rows) == 6
    amps = np.array([float(r[1]) + 1j * float(r[2]) for r in rows])
    assert np.max(np.abs(amps - QUTRIT_QUBIT_AMPS)) <= 1e-12


@pytest.mark.parametrize("backend", ["dense", "dd"])
def test_counts_deterministic_state(files, capsys, backend):
    code, out, _ = run(capsys, "simulate", files / "zero.qasm", "--shots", 100, "--backend", backend)
    assert code == 0
    assert out == "0,0\t100\n"


def test_same_seed_same_output(files, capsys):
    a = run(capsys, "simulate", files / "ex1.qasm", "--shots", 500, "--seed", 3)[1]
    b = run(capsys, "simulate", files / "ex1.qasm", "--shots", 500, "--seed", 3, "--backend", "dd", "--workers", 2)[1]
    assert a == b and a


def test_noise_file(files, capsys):
    (files / "x.qasm").write_text("DITQASM 2.0;\nqreg q [1][3];\nx q[0];\n")
    (files / "n.json").write_text(json.dumps({"entries": [{"gate": "x", "prob_x": 1, "prob_z": 0}]}))
    code, out, _ = run(capsys, "simulate", files / "x.qasm", "--shots", 10, "--noise", files / "n.json")
    assert code == 0 and out == "2\t10\n"


def test_bad_noise_file(files, capsys):
    (files / "n.json").write_text("{")
    code, _, _ = run(capsys, "simulate", files / "ex1.qasm", "--noise", files / "n.json")
    assert code == 2


def test_dense_overflow_is_domain_error(files, capsys):
    (files / "big.qasm").write_text("DITQASM 2.0;\nqreg q [40][" + ", ".join(["3"] * 40) + "];\nh q[0];\n")
    code, _, err = run(capsys, "simulate", files / "big.qasm", "--shots", 5)
    assert code == 1 and "exceeds" in err
    code, out, _ = run(capsys, "simulate", files / "big.qasm", "--shots", 5, "--backend", "dd")
    assert code == 0


def test_stats(files, capsys):
    code, out, _ = run(capsys, "stats", files / "mixed.qasm")
    rows = dict(r.split("\t") for r in out.splitlines())
    assert code == 0
    assert rows["gates"] == "4" and rows["total_dim"] == "168" and rows["measurements"] == "4"


def test_compile_log_slice(files, capsys):
    out_path = files / "out.qasm"
    code, report, _ = run(capsys, "compile", files / "slice.qasm", "--passes", "LogLocQRPass,LogEntQRPass",
                          "-o", out_path)
    assert code == 0
    before = parse((files / "slice.qasm").read_text())
    after = parse(out_path.read_text())
    assert phase_distance(circuit_unitary(after), circuit_unitary(before)) < 1e-8
    assert "gates_after" in report


def test_compile_device_stdout_is_program(files, capsys):
    code, out, err = run(capsys, "compile", files / "ex1.qasm", "--device", "faketraps2six")
    assert code == 0
    parse(out)
    assert "log_fidelity" in err


def test_compile_bad_pass(files, capsys):
    code, _, _ = run(capsys, "compile", files / "ex1.qasm", "--passes", "NoSuchPass")
    assert code == 2


def test_compile_phy_without_device(files, capsys):
    code, _, _ = run(capsys, "compile", files / "ex1.qasm", "--passes", "PhyLocQRPass")
    assert code == 2


def test_compile_multi_qudit_gate(files, capsys):
    code, _, err = run(capsys, "compile", files / "mixed.qasm", "--passes", "LogLocQRPass")
    assert code == 1 and "'h'" in err


def test_compile_empty_circuit(files, capsys):
    code, out, err = run(capsys, "compile", files / "zero.qasm", "--passes", "LogLocQRPass")
    assert code == 0
    assert parse(out).gates == []
    assert "gates_after\t0" in err


def test_usage_error_exit_code(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["simulate"])
    assert exc.value.code == 2


def test_module_entry_point(files):
    proc = subprocess.run([sys.executable, "-m", "quditkit", "parse", str(files / "ex1.qasm")],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert proc.stdout.startswith("DITQASM 2.0;")
