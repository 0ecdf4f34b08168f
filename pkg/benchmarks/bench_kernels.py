"""Compiled vs numpy fiber kernels on dense gate application.

    python benchmarks/bench_kernels.py [--repeat N]

Prints one row per case: state dimension, gate, time per call for each
kernel, the speedup, and which kernel the dispatcher in ``kernels`` picks
for that matrix. The two kernels are also checked for agreement.
"""

import argparse
import sys
import timeit

import numpy as np

from quditkit.core import ControlSpec, GateSpec
from quditkit.core.gates import base_matrix, is_diagonal_gate
from quditkit.sim import _kernels_py, kernels
from quditkit.sim.dense import fiber_layout

CASES = [
    # (dims, gate)
    ((3,) * 10, GateSpec("h", (), (4,))),
    ((3,) * 10, GateSpec("rxy", (0, 2, 0.7, 0.3), (9,))),
    ((3,) * 10, GateSpec("rz", (0, 1, 0.7), (0,))),
    ((3,) * 10, GateSpec("csum", (), (2, 7))),
    ((4, 4, 4, 4, 4, 4, 4, 4), GateSpec("ms", (0.4,), (1, 6))),
    ((2, 3, 4, 5, 6, 7, 2), GateSpec("x", (), (3,), ControlSpec(((0, 1), (5, 4))))),
    ((2,) * 18, GateSpec("h", (), (17,))),
    ((6,) * 6, GateSpec("ls", (0.2,), (0, 5))),
    ((5,) * 7, GateSpec("pswap", (0, 1, 3, 4, 0.3, 0.1), (2, 3))),
]


def run_case(impl, state, dims, gate):
    mat = np.ascontiguousarray(base_matrix(gate, [dims[q] for q in gate.lines]), dtype=complex)
    ctl = gate.control.controls if gate.control else ()
    bases, offsets = fiber_layout(dims, gate.lines, ctl)
    if is_diagonal_gate(gate):
        diag = np.ascontiguousarray(np.diagonal(mat))
        return lambda: impl.apply_diagonal(state, diag, bases, offsets)
    return lambda: impl.apply_fibers(state, mat, bases, offsets)


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)
    if not kernels.COMPILED:
        print("compiled kernel not available; build with `pip install -e .`", file=sys.stderr)
        return 1
    from quditkit.sim import _kernels

    rng = np.random.default_rng(0)
    print(f"{'D':>9}  {'gate':<22}{'cython ms':>11}{'numpy ms':>11}{'speedup':>9}  picked")
    for dims, gate in CASES:
        D = int(np.prod(dims))
        psi = rng.normal(size=D) + 1j * rng.normal(size=D)
        psi /= np.linalg.norm(psi)
        a, b = psi.copy(), psi.copy()
        run_case(_kernels, a, dims, gate)()
        run_case(_kernels_py, b, dims, gate)()
        if not np.allclose(a, b, atol=1e-12):
            print(f"kernels disagree on {gate.name}", file=sys.stderr)
            return 1
        times = {}
        for name, impl in (("cython", _kernels), ("numpy", _kernels_py)):
            fn = run_case(impl, psi.copy(), dims, gate)
            times[name] = min(timeit.repeat(fn, number=1, repeat=args.repeat)) * 1e3
        label = gate.name + ("+ctl" if gate.control else "") + str(list(gate.lines))
        mat = base_matrix(gate, [dims[q] for q in gate.lines])
        picked = "cython" if kernels.prefers_compiled(mat) else "numpy"
        print(f"{D:>9}  {label:<22}{times['cython']:>11.3f}{times['numpy']:>11.3f}"
              f"{times['numpy'] / times['cython']:>8.1f}x  {picked}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
