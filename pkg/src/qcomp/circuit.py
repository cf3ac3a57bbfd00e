"""Circuits, the line-oriented circuit DSL, execution and inversion.

DSL grammar::

    # comment                      anything after '#' is ignored
    qubits <n>                     first non-comment line
    <name> <target...> [key=value ...]
    c <name> <control> <target...> [key=value ...]

Gate names: h, x, y, z, phase (theta), u (theta, phi, lam), cnot, ccnot,
swap.  The ``c`` prefix may be repeated, each one consuming one control
index.  Angles are radians.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping

import numpy as np

from . import gates
from .errors import DomainError, ParseError, ResourceError
from .qstate import MAX_STATE_QUBITS, StateVector

MAX_UNITARY_QUBITS = 10

# name -> (arity, required params)
GATE_SPECS: dict[str, tuple[int, tuple[str, ...]]] = {
    "h": (1, ()),
    "x": (1, ()),
    "y": (1, ()),
    "z": (1, ()),
    "phase": (1, ("theta",)),
    "u": (1, ("theta", "phi", "lam")),
    "cnot": (2, ()),
    "ccnot": (3, ()),
    "swap": (2, ()),
}


def build_gate(name: str, params: Mapping[str, float] | None = None) -> gates.Gate:
    params = params or {}
    if name == "h":
        return gates.hadamard()
    if name in ("x", "y", "z"):
        return gates.pauli(name)
    if name == "phase":
        return gates.phase(params["theta"])
    if name == "u":
        return gates.single_qubit_u(theta=params["theta"], phi=params["phi"], lam=params["lam"])
    if name == "cnot":
        return gates.cnot()
    if name == "ccnot":
        return gates.toffoli()
    if name == "swap":
        return gates.swap()
    raise DomainError(f"unknown gate {name!r}")


@dataclass(frozen=True)
class CircuitOp:
    name: str
    targets: tuple[int, ...]
    controls: tuple[int, ...] = ()
    params: tuple[tuple[str, float], ...] = ()

    def __post_init__(self):
        if self.name not in GATE_SPECS:
            raise DomainError(f"unknown gate {self.name!r}")
        arity, required = GATE_SPECS[self.name]
        object.__setattr__(self, "targets", tuple(int(t) for t in self.targets))
        object.__setattr__(self, "controls", tuple(int(c) for c in self.controls))
        params = dict(self.params)
        if set(params) != set(required):
            raise DomainError(f"gate {self.name!r} takes params {required}, got {tuple(params)}")
        object.__setattr__(self, "params", tuple((k, float(params[k])) for k in required))
        if len(self.targets) != arity:
            raise DomainError(f"gate {self.name!r} takes {arity} targets, got {len(self.targets)}")
        qubits = self.qubits
        if len(set(qubits)) != len(qubits):
            raise DomainError(f"op {self.name!r} repeats a qubit in {qubits}")

    @property
    def qubits(self) -> tuple[int, ...]:
        """Controls followed by targets; the order the composite matrix expects."""
        return self.controls + self.targets

    def param_dict(self) -> dict[str, float]:
        return dict(self.params)

    def gate(self) -> gates.Gate:
        """The full matrix acting on :attr:`qubits`, controls included."""
        g = build_gate(self.name, self.param_dict())
        if self.controls:
            g = gates.controlled(g, len(self.controls))
        return g

    def inverse(self) -> CircuitOp:
        p = self.param_dict()
        if self.name == "phase":
            p["theta"] = -p["theta"]
        elif self.name == "u":
            # U(t, f, l)^dagger = U(-t, -l, -f)
            p = {"theta": -p["theta"], "phi": -p["lam"], "lam": -p["phi"]}
        return CircuitOp(self.name, self.targets, self.controls, tuple(p.items()))

    def render(self) -> str:
        words = ["c"] * len(self.controls) + [self.name]
        words += [str(q) for q in self.controls + self.targets]
        words += [f"{k}={v!r}" for k, v in self.params]
        return " ".join(words)


def op(name: str, *targets: int, controls: Iterable[int] = (), **params: float) -> CircuitOp:
    """Shorthand constructor: ``op("phase", 2, controls=[0], theta=0.5)``."""
    return CircuitOp(name, tuple(targets), tuple(controls), tuple(params.items()))


@dataclass(frozen=True)
class Circuit:
    num_qubits: int
    ops: tuple[CircuitOp, ...] = field(default=())

    def __post_init__(self):
        if not isinstance(self.num_qubits, int) or not 1 <= self.num_qubits <= MAX_STATE_QUBITS:
            raise DomainError(f"num_qubits must be in 1..{MAX_STATE_QUBITS}, got {self.num_qubits!r}")
        object.__setattr__(self, "ops", tuple(self.ops))
        for o in self.ops:
            for q in o.qubits:
                if not 0 <= q < self.num_qubits:
                    raise DomainError(f"op {o.render()!r} uses qubit {q} outside 0..{self.num_qubits - 1}")

    def __len__(self):
        return len(self.ops)

    def then(self, *more: CircuitOp) -> Circuit:
        return Circuit(self.num_qubits, self.ops + tuple(more))

    def __add__(self, other: Circuit) -> Circuit:
        if other.num_qubits != self.num_qubits:
            raise DomainError("cannot concatenate circuits of different widths")
        return Circuit(self.num_qubits, self.ops + other.ops)


def render(c: Circuit) -> str:
    lines = [f"qubits {c.num_qubits}"] + [o.render() for o in c.ops]
    return "\n".join(lines) + "\n"


def _tokens(line: str) -> list[tuple[int, str]]:
    """Split on whitespace, returning (1-based column, token) pairs."""
    out = []
    i, n = 0, len(line)
    while i < n:
        if line[i].isspace():
            i += 1
            continue
        j = i
        while j < n and not line[j].isspace():
            j += 1
        out.append((i + 1, line[i:j]))
        i = j
    return out


def _parse_index(lineno: int, col: int, tok: str) -> int:
    if not tok.isdigit():
        raise ParseError(lineno, col, f"expected a qubit index, got {tok!r}")
    return int(tok)


def parse(text: str) -> Circuit:
    """Parse DSL source into a :class:`Circuit`; raises :class:`ParseError` on the first violation."""
    num_qubits = None
    ops: list[CircuitOp] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        toks = _tokens(line)
        if not toks:
            continue
        if num_qubits is None:
            col, word = toks[0]
            if word != "qubits":
                raise ParseError(lineno, col, "missing 'qubits <n>' header")
            if len(toks) != 2:
                raise ParseError(lineno, col, "header must be exactly 'qubits <n>'")
            ncol, ntok = toks[1]
            n = _parse_index(lineno, ncol, ntok)
            if not 1 <= n <= MAX_STATE_QUBITS:
                raise ParseError(lineno, ncol, f"qubit count must be in 1..{MAX_STATE_QUBITS}")
            num_qubits = n
            continue
        ops.append(_parse_op(lineno, toks, num_qubits))
    if num_qubits is None:
        raise ParseError(1, 1, "missing 'qubits <n>' header")
    return Circuit(num_qubits, tuple(ops))


def _parse_op(lineno: int, toks: list[tuple[int, str]], num_qubits: int) -> CircuitOp:
    n_controls = 0
    pos = 0
    while pos < len(toks) and toks[pos][1] == "c":
        n_controls += 1
        pos += 1
    if pos == len(toks):
        raise ParseError(lineno, toks[-1][0], "expected a gate name after 'c'")
    name_col, name = toks[pos]
    if name == "qubits":
        raise ParseError(lineno, name_col, "duplicate 'qubits' header")
    if name not in GATE_SPECS:
        raise ParseError(lineno, name_col, f"unknown gate {name!r}")
    arity, required = GATE_SPECS[name]
    pos += 1

    indices: list[tuple[int, int]] = []
    while pos < len(toks) and "=" not in toks[pos][1]:
        col, tok = toks[pos]
        indices.append((col, _parse_index(lineno, col, tok)))
        pos += 1
    params: dict[str, float] = {}
    while pos < len(toks):
        col, tok = toks[pos]
        key, _, value = tok.partition("=")
        if "=" not in tok:
            raise ParseError(lineno, col, f"qubit index {tok!r} after parameters")
        if key not in required:
            raise ParseError(lineno, col, f"gate {name!r} has no parameter {key!r}")
        if key in params:
            raise ParseError(lineno, col, f"parameter {key!r} given twice")
        try:
            params[key] = float(value)
        except ValueError:
            raise ParseError(lineno, col + len(key) + 1, f"bad angle {value!r}") from None
        if not math.isfinite(params[key]):
            raise ParseError(lineno, col + len(key) + 1, f"angle must be finite, got {value!r}")
        pos += 1

    expected = n_controls + arity
    if len(indices) != expected:
        col = indices[expected][0] if len(indices) > expected else name_col
        raise ParseError(lineno, col, f"'{'c ' * n_controls}{name}' takes {expected} qubit indices, got {len(indices)}")
    seen: set[int] = set()
    for col, q in indices:
        if q >= num_qubits:
            raise ParseError(lineno, col, f"qubit {q} out of range for {num_qubits} qubits")
        if q in seen:
            raise ParseError(lineno, col, f"qubit {q} used twice in one op")
        seen.add(q)
    missing = [k for k in required if k not in params]
    if missing:
        raise ParseError(lineno, name_col, f"gate {name!r} missing parameter(s) {', '.join(missing)}")
    qs = [q for _, q in indices]
    return CircuitOp(name, tuple(qs[n_controls:]), tuple(qs[:n_controls]),
                     tuple((k, params[k]) for k in required))


def run(c: Circuit, initial: StateVector) -> StateVector:
    if initial.num_qubits != c.num_qubits:
        raise DomainError(f"circuit has {c.num_qubits} qubits, state has {initial.num_qubits}")
    return StateVector._trusted(run_amplitudes(c, initial.amplitudes), c.num_qubits)


def run_amplitudes(c: Circuit, amps: np.ndarray) -> np.ndarray:
    """Run ``c`` on a raw ``(2**n, *batch)`` amplitude array."""
    cache: dict[CircuitOp, np.ndarray] = {}
    for o in c.ops:
        m = cache.get(o)
        if m is None:
            m = cache[o] = o.gate().matrix
        amps = gates.apply_matrix(amps, c.num_qubits, m, o.qubits)
    return amps


def inverse(c: Circuit) -> Circuit:
    return Circuit(c.num_qubits, tuple(o.inverse() for o in reversed(c.ops)))


def unitary_of(c: Circuit) -> gates.Gate:
    """Dense unitary realized by ``c``; column j is the circuit applied to basis state j."""
    n = c.num_qubits
    if n > MAX_UNITARY_QUBITS:
        raise ResourceError(f"unitary_of is capped at {MAX_UNITARY_QUBITS} qubits, got {n}")
    # Every basis state at once: the identity's columns are a batch of states.
    cols = run_amplitudes(c, np.eye(1 << n, dtype=np.complex128))
    return gates.Gate(cols, f"circuit{n}", atol=1e-9)
