"""DITQASM 2.0 reader.

Statements are semicolon terminated::

    DITQASM 2.0;
    qreg reg_1 [2][2, 3];
    creg meas[4];
    h reg_2[0] ctl reg_1[0] reg_1[1] [0,0];
    rxy (0, 2, pi, pi/2) reg_1[1];
    measure reg_1[0] -> meas[0];

The parser recovers at the next ``;`` after an error so one run reports
every broken statement. Any error aborts circuit construction.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from ..core.circuit import Circuit, CircuitError, ClassicRegister, QuantumRegister
from ..core.gates import GATE_ARITY, LEVEL_PARAMS, ControlSpec, GateError, GateSpec
from ..core.radix import DimensionError

SUPPORTED_VERSIONS = ("2.0",)
MAX_NESTING = 100


@dataclass(frozen=True)
class SourceSpan:
    line: int
    column: int
    start: int
    end: int


@dataclass(frozen=True)
class ParseDiagnostic:
    severity: str
    message: str
    span: SourceSpan
    hint: str | None = None

    def __str__(self):
        out = f"{self.span.line}:{self.span.column}: {self.severity}: {self.message}"
        return f"{out} ({self.hint})" if self.hint else out


class QasmError(ValueError):
    def __init__(self, diagnostics: list[ParseDiagnostic]):
        self.diagnostics = diagnostics
        super().__init__("\n".join(str(d) for d in diagnostics))


@dataclass(frozen=True)
class Token:
    kind: str  # ident, number, sym, eof
    text: str
    start: int
    end: int


_TOKEN = re.compile(
    r"""
    (?P<ws>\s+|//[^\n]*)
  | (?P<number>(?:\d+\.\d*|\.\d+|\d+)(?:[eE][+-]?\d+)?)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<sym>->|[;,\[\]()+\-*/])
    """,
    re.VERBOSE | re.ASCII,
)


class _Abort(Exception):
    """Unwind the current statement after a diagnostic was recorded."""


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.diags: list[ParseDiagnostic] = []
        self.tokens = list(self._lex())
        self.pos = 0
        self.circuit = Circuit()
        self.names: set[str] = set()
        self.depth = 0

    # lexing

    def _lex(self) -> Iterator[Token]:
        i, n = 0, len(self.text)
        while i < n:
            m = _TOKEN.match(self.text, i)
            if m is None:
                self.error(f"unexpected character {self.text[i]!r}", i, i + 1)
                i += 1
                continue
            kind = m.lastgroup
            if kind != "ws":
                yield Token(kind, m.group(), m.start(), m.end())
            i = m.end()
        yield Token("eof", "", n, n)

    # diagnostics

    def span(self, start: int, end: int) -> SourceSpan:
        start = max(0, min(start, len(self.text)))
        end = max(start, min(end, len(self.text)))
        line = self.text.count("\n", 0, start) + 1
        col = start - (self.text.rfind("\n", 0, start) + 1) + 1
        return SourceSpan(line, col, start, end)

    def error(self, message: str, start: int, end: int, hint: str | None = None) -> None:
        self.diags.append(ParseDiagnostic("error", message, self.span(start, end), hint))

    def fail(self, message: str, tok: Token | None = None, hint: str | None = None):
        tok = tok or self.peek()
        self.error(message, tok.start, tok.end, hint)
        raise _Abort

    # token helpers

    def peek(self) -> Token:
        return self.tokens[self.pos]

    def next(self) -> Token:
        tok = self.tokens[self.pos]
        if tok.kind != "eof":
            self.pos += 1
        return tok

    def at(self, text: str) -> bool:
        tok = self.peek()
        return tok.kind in ("sym", "ident") and tok.text == text

    def expect(self, text: str) -> Token:
        tok = self.peek()
        if not self.at(text):
            found = "end of input" if tok.kind == "eof" else repr(tok.text)
            self.fail(f"expected '{text}', found {found}", tok)
        return self.next()

    def ident(self, what: str) -> Token:
        tok = self.peek()
        if tok.kind != "ident":
            self.fail(f"expected {what}", tok)
        return self.next()

    def integer(self, what: str) -> int:
        tok = self.peek()
        if tok.kind != "number" or not tok.text.isdigit():
            self.fail(f"expected integer {what}", tok)
        self.next()
        return int(tok.text)

    def sync(self, start: int) -> None:
        """Skip past the ``;`` ending the statement that began at token ``start``."""
        if self.pos > start and self.tokens[self.pos - 1].text == ";":
            return
        while self.peek().kind != "eof" and not self.at(";"):
            self.next()
        if self.at(";"):
            self.next()

    # expressions

    def expr(self) -> float:
        value = self.term()
        while self.at("+") or self.at("-"):
            op = self.next().text
            rhs = self.term()
            value = value + rhs if op == "+" else value - rhs
        return value

    def term(self) -> float:
        value = self.unary()
        while self.at("*") or self.at("/"):
            op = self.next()
            rhs = self.unary()
            if op.text == "*":
                value = value * rhs
            else:
                if rhs == 0:
                    self.fail("division by zero", op)
                value = value / rhs
        return value

    def unary(self) -> float:
        sign = 1.0
        while self.at("-") or self.at("+"):
            if self.next().text == "-":
                sign = -sign
        return sign * self.primary()

    def primary(self) -> float:
        tok = self.peek()
        if tok.kind == "number":
            self.next()
            value = float(tok.text)
            if not math.isfinite(value):
                self.fail(f"number {tok.text} is not finite", tok)
            return value
        if tok.kind == "ident" and tok.text == "pi":
            self.next()
            return math.pi
        if self.at("("):
            if self.depth >= MAX_NESTING:
                self.fail("expression nested too deeply", tok)
            self.next()
            self.depth += 1
            value = self.expr()
            self.depth -= 1
            self.expect(")")
            return value
        found = "end of input" if tok.kind == "eof" else repr(tok.text)
        self.fail(f"expected expression, found {found}", tok)

    # statements

    def operand(self) -> tuple[int, Token]:
        name = self.ident("register operand")
        self.expect("[")
        idx_tok = self.peek()
        idx = self.integer("index")
        end = self.expect("]")
        span_tok = Token("operand", "", name.start, end.end)
        for r in self.circuit.qregs:
            if r.name == name.text:
                if idx >= r.size:
                    self.fail(f"index {idx} out of range for register '{r.name}' of size {r.size}", idx_tok)
                return self.circuit.line((r.name, idx)), span_tok
        if any(r.name == name.text for r in self.circuit.cregs):
            self.fail(f"'{name.text}' is a classical register", name)
        self.fail(f"undeclared quantum register '{name.text}'", name)

    def clbit(self) -> tuple[str, int]:
        name = self.ident("classical register")
        self.expect("[")
        idx_tok = self.peek()
        idx = self.integer("index")
        self.expect("]")
        for r in self.circuit.cregs:
            if r.name == name.text:
                if idx >= r.size:
                    self.fail(f"index {idx} out of range for register '{r.name}' of size {r.size}", idx_tok)
                return r.name, idx
        self.fail(f"undeclared classical register '{name.text}'", name)

    def header(self) -> None:
        tok = self.peek()
        if not self.at("DITQASM"):
            self.error("missing DITQASM header", tok.start, tok.end, "start the program with 'DITQASM 2.0;'")
            raise _Abort
        self.next()
        ver = self.peek()
        if ver.kind != "number":
            self.fail("expected version number after DITQASM", ver)
        self.next()
        if ver.text not in SUPPORTED_VERSIONS:
            self.fail(f"unsupported DITQASM version {ver.text}", ver, "only 2.0 is supported")
        self.expect(";")

    def declare(self, name: Token) -> None:
        if name.text in self.names:
            self.fail(f"register '{name.text}' redeclared", name)
        self.names.add(name.text)

    def qreg(self) -> None:
        self.next()
        if self.circuit.instructions:
            self.fail("registers must be declared before instructions")
        name = self.ident("register name")
        self.expect("[")
        size_tok = self.peek()
        size = self.integer("register size")
        self.expect("]")
        self.expect("[")
        dims_start = self.peek()
        dims = [self.integer("dimension")]
        while self.at(","):
            self.next()
            dims.append(self.integer("dimension"))
        close = self.expect("]")
        self.expect(";")
        if size < 1:
            self.fail("register size must be at least 1", size_tok)
        if len(dims) != size:
            self.error(f"register '{name.text}' declares {size} qudits but lists {len(dims)} dimensions",
                       dims_start.start, close.end)
            raise _Abort
        if any(d < 2 for d in dims):
            self.error("qudit dimensions must be >= 2", dims_start.start, close.end)
            raise _Abort
        self.declare(name)
        self.circuit.append(QuantumRegister(name.text, size, tuple(dims)))

    def creg(self) -> None:
        self.next()
        name = self.ident("register name")
        self.expect("[")
        size_tok = self.peek()
        size = self.integer("register size")
        self.expect("]")
        self.expect(";")
        if size < 1:
            self.fail("register size must be at least 1", size_tok)
        self.declare(name)
        self.circuit.append_classic(ClassicRegister(name.text, size))

    def measure(self) -> None:
        first = self.next()
        line, _ = self.operand()
        self.expect("->")
        cell = self.clbit()
        end = self.expect(";")
        try:
            self.circuit.measure(line, cell)
        except (CircuitError, IndexError) as exc:
            self.error(str(exc), first.start, end.end)
            raise _Abort

    def gate(self) -> None:
        name = self.next()
        if name.text not in GATE_ARITY:
            self.fail(f"unknown gate '{name.text}'", name)
        params: list[float] = []
        if self.at("("):
            self.next()
            params.append(self.expr())
            while self.at(","):
                self.next()
                params.append(self.expr())
            self.expect(")")
        lines = [self.operand()]
        while True:
            if self.at(","):
                self.next()
                lines.append(self.operand())
            elif self.peek().kind == "ident" and not self.at("ctl"):
                lines.append(self.operand())
            else:
                break
        controls: list[tuple[int, Token]] = []
        levels: list[tuple[int, Token]] = []
        if self.at("ctl"):
            self.next()
            controls.append(self.operand())
            while self.peek().kind == "ident" or self.at(","):
                if self.at(","):
                    self.next()
                controls.append(self.operand())
            self.expect("[")
            levels.append((self.integer("control level"), self.tokens[self.pos - 1]))
            while self.at(","):
                self.next()
                levels.append((self.integer("control level"), self.tokens[self.pos - 1]))
            self.expect("]")
        end = self.expect(";")
        self.build_gate(name, params, lines, controls, levels, end)

    def build_gate(self, name, params, lines, controls, levels, end) -> None:
        dims = self.circuit.dims
        stmt = (name.start, end.end)
        if len(controls) != len(levels):
            self.error(f"{len(controls)} control qudits but {len(levels)} control levels", *stmt)
            raise _Abort
        for (q, qtok), (lv, ltok) in zip(controls, levels):
            if lv >= dims[q]:
                self.fail(f"control level {lv} >= dimension {dims[q]} of control qudit", ltok)
        matrix = None
        n_params, _ = GATE_ARITY[name.text]
        if name.text == "cu":
            k = int(np.prod([dims[q] for q, _ in lines]))
            if len(params) != 2 * k * k:
                self.error(f"cu on {len(lines)} qudit(s) needs {2 * k * k} parameters "
                           f"(real, imaginary per entry), got {len(params)}", *stmt)
                raise _Abort
            matrix = (np.array(params[0::2]) + 1j * np.array(params[1::2])).reshape(k, k)
            params = []
        elif len(params) != n_params:
            self.error(f"gate '{name.text}' takes {n_params} parameters, got {len(params)}", *stmt)
            raise _Abort
        for i in LEVEL_PARAMS.get(name.text, ()):
            if params[i] != int(params[i]) or params[i] < 0:
                self.error(f"level parameter {params[i]!r} of '{name.text}' is not a non-negative integer", *stmt)
                raise _Abort
        try:
            control = ControlSpec.of([q for q, _ in controls], [lv for lv, _ in levels]) if controls else None
            gate = GateSpec(name.text, tuple(params), tuple(q for q, _ in lines), control, matrix)
            self.circuit.add_gate(gate)
        except (GateError, CircuitError, DimensionError) as exc:
            self.error(str(exc), *stmt)
            raise _Abort

    def statement(self) -> None:
        tok = self.peek()
        if tok.kind != "ident":
            self.fail(f"expected statement, found {tok.text!r}", tok)
        if tok.text == "qreg":
            self.qreg()
        elif tok.text == "creg":
            self.creg()
        elif tok.text == "measure":
            self.measure()
        elif tok.text == "DITQASM":
            self.fail("duplicate DITQASM header", tok)
        else:
            self.gate()

    def run(self) -> Circuit | None:
        start = self.pos
        try:
            self.header()
        except _Abort:
            self.sync(start)
        while self.peek().kind != "eof":
            start = self.pos
            try:
                self.statement()
            except _Abort:
                self.sync(start)
        return None if self.diags else self.circuit


def parse_with_diagnostics(text: str | bytes) -> tuple[Circuit | None, list[ParseDiagnostic]]:
    if isinstance(text, (bytes, bytearray)):
        text = bytes(text).decode("utf-8", errors="replace")
    p = _Parser(text)
    circuit = p.run()
    diags = sorted(p.diags, key=lambda d: (d.span.start, d.span.end))
    return circuit, diags


def parse(text: str | bytes) -> Circuit:
    """Parse DITQASM source, raising :class:`QasmError` with every diagnostic."""
    circuit, diags = parse_with_diagnostics(text)
    if diags or circuit is None:
        raise QasmError(diags)
    return circuit


def parse_expr(text: str) -> float:
    p = _Parser(text)
    if p.diags:
        raise QasmError(p.diags)
    try:
        value = p.expr()
        if p.peek().kind != "eof":
            p.fail(f"unexpected {p.peek().text!r} after expression")
    except _Abort:
        raise QasmError(p.diags) from None
    return value
