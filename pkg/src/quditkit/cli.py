"""Command-line interface: ``quditkit {parse,simulate,compile,stats} FILE``.

stdout carries only machine-readable output; diagnostics and logs go to
stderr. Exit codes: 0 success, 1 domain error, 2 usage or I/O error.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from . import __version__
from .compiler import CompileError, PassName, compile, compile_report, parse_passes
from .compiler.graph import GraphError
from .compiler.rotations import DecompositionError
from .core.circuit import CircuitError
from .core.gates import GateError
from .core.radix import DimensionError
from .core.unitary import circuit_stats
from .device import DeviceError, load_device
from .noise import NoiseError, load_noise_model, run_noisy
from .qasm import QasmError, emit, parse_with_diagnostics
from .sim import BACKENDS, KERNEL_BACKEND
from .sim.dd import dd_sample, dd_simulate, dd_to_vector
from .sim.dense import SimulationError, dump_state, sample, simulate

EXIT_OK, EXIT_DOMAIN, EXIT_USAGE = 0, 1, 2
DEFAULT_SHOTS = 1024
DEFAULT_SEED = 0

log = logging.getLogger("quditkit")

DOMAIN_ERRORS = (QasmError, SimulationError, DimensionError, CompileError, DecompositionError,
                 GateError, CircuitError, GraphError)


class UsageError(Exception):
    pass


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8", errors="replace")
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror or exc}") from None


def _write(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
        return
    try:
        Path(out).write_text(text)
    except OSError as exc:
        raise UsageError(f"cannot write {out}: {exc.strerror or exc}") from None


def _load_circuit(path: str):
    circuit, diags = parse_with_diagnostics(_read(path))
    if diags:
        for d in diags:
            print(f"{path}:{d}", file=sys.stderr)
        raise QasmError(diags)
    return circuit


def _load_device(path: str | None):
    if path is None:
        return None
    try:
        return load_device(path)
    except DeviceError as exc:
        raise UsageError(str(exc)) from None


def cmd_parse(args) -> int:
    circuit = _load_circuit(args.input)
    _write(emit(circuit), args.output)
    return EXIT_OK


def cmd_stats(args) -> int:
    stats = circuit_stats(_load_circuit(args.input))
    _write("".join(f"{k}\t{v}\n" for k, v in stats.as_rows()), args.output)
    return EXIT_OK


def cmd_simulate(args) -> int:
    if args.shots < 0:
        raise UsageError("--shots must be >= 0")
    circuit = _load_circuit(args.input)
    device = _load_device(args.device)
    model = None
    if args.noise is not None:
        try:
            model = load_noise_model(args.noise)
        except OSError as exc:
            raise UsageError(f"cannot read {args.noise}: {exc.strerror or exc}") from None
        except NoiseError as exc:
            raise UsageError(str(exc)) from None
    elif device is not None:
        model = device.noise

    log.info("backend=%s kernels=%s shots=%d seed=%d noise=%s", args.backend, KERNEL_BACKEND,
             args.shots, args.seed, "on" if model is not None and len(model) else "off")
    sections = []
    if args.dump_state:
        if args.backend == "dd":
            state = dd_to_vector(dd_simulate(circuit))
        else:
            state = simulate(circuit)
        sections.append(("state", dump_state(state)))
    if args.shots > 0:
        if model is not None and len(model):
            counts = run_noisy(circuit, model, args.shots, args.seed, args.backend, args.workers)
        elif args.backend == "dd":
            counts = dd_sample(dd_simulate(circuit), args.shots, args.seed, args.workers)
        else:
            counts = sample(simulate(circuit), args.shots, args.seed, args.workers)
        sections.append(("counts", counts.to_tsv()))
    if len(sections) == 1:
        text = sections[0][1]
    else:
        text = "".join(f"# {name}\n{body}" for name, body in sections)
    _write(text, args.output)
    return EXIT_OK


def cmd_compile(args) -> int:
    device = _load_device(args.device)
    if args.passes is None:
        names = ["PhyLocQRPass", "PhyEntQRPass"] if device else ["LogLocQRPass", "LogEntQRPass"]
    else:
        names = [p.strip() for p in args.passes.split(",") if p.strip()]
    try:
        passes = parse_passes(names)
    except CompileError as exc:
        raise UsageError(str(exc)) from None
    if device is None and any(p.physical for p in passes):
        raise UsageError("physical passes need --device")
    circuit = _load_circuit(args.input)
    log.info("passes=%s device=%s", ",".join(p.value for p in passes), device.name if device else "none")
    compiled = compile(circuit, device, passes)
    report = compile_report(circuit, compiled, device)
    rows = "".join(f"{k}\t{v}\n" for k, v in _flatten(report))
    _write(emit(compiled), args.output)
    # keep stdout a valid program when the program itself goes there
    if args.output is None:
        sys.stderr.write(rows)
    else:
        sys.stdout.write(rows)
    return EXIT_OK


def _flatten(report: dict):
    for k, v in report.items():
        if isinstance(v, dict):
            for name, n in v.items():
                yield f"{k}.{name}", n
        else:
            yield k, v


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="quditkit", description="Mixed-dimensional qudit circuit toolchain.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    p.add_argument("-v", "--verbose", action="store_true", help="log to stderr")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("input", help="DITQASM source file")
        sp.add_argument("-o", "--output", help="write the result here instead of stdout")

    sp = sub.add_parser("parse", help="check a program and print it in canonical form")
    common(sp)
    sp.set_defaults(func=cmd_parse)

    sp = sub.add_parser("stats", help="gate counts and depth")
    common(sp)
    sp.set_defaults(func=cmd_stats)

    sp = sub.add_parser("simulate", help="sample measurement counts")
    common(sp)
    sp.add_argument("--backend", choices=BACKENDS, default="dense")
    sp.add_argument("--shots", type=int, default=DEFAULT_SHOTS)
    sp.add_argument("--seed", type=int, default=DEFAULT_SEED)
    sp.add_argument("--workers", type=int, default=1, help="threads for shot sampling")
    sp.add_argument("--noise", help="noise model JSON file")
    sp.add_argument("--device", help="device JSON file or bundled name; supplies default noise")
    sp.add_argument("--dump-state", action="store_true", help="print every final amplitude")
    sp.set_defaults(func=cmd_simulate)

    sp = sub.add_parser("compile", help="rewrite into native rotations")
    common(sp)
    sp.add_argument("--device", help="device JSON file or bundled name")
    sp.add_argument("--passes", help="comma-separated pass names: " + ",".join(n.value for n in PassName))
    sp.set_defaults(func=cmd_compile)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        stream=sys.stderr, format="%(name)s: %(message)s")
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"quditkit: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except QasmError as exc:
        if not exc.diagnostics:
            print(f"quditkit: error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except DOMAIN_ERRORS as exc:
        print(f"quditkit: error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
