"""Gate matrices, gate algebra checks, and the state-vector application kernel.

Gate-local ordering: for ``apply(state, g, [t0, t1, ...])`` the first target
is the most significant bit of the gate's row/column index.  With this
ordering ``cnot`` on ``[c, t]`` uses ``c`` as control, and ``controlled(g, m)``
puts its ``m`` controls ahead of the targets of ``g``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import _kernels
from .errors import DomainError
from .qstate import StateVector, inner_product

UNITARY_ATOL = 1e-10

_SQRT1_2 = 1.0 / np.sqrt(2.0)


@dataclass(frozen=True, eq=False)
class Gate:
    """A named unitary on ``arity`` qubits."""

    matrix: np.ndarray
    label: str = "U"
    atol: float = field(default=UNITARY_ATOL, repr=False)

    def __post_init__(self):
        m = np.array(self.matrix, dtype=np.complex128, copy=True)
        if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] < 2 or m.shape[0] & (m.shape[0] - 1):
            raise DomainError(f"gate matrix must be 2^k x 2^k, got shape {m.shape}")
        if not is_unitary(m, self.atol):
            raise DomainError(f"gate {self.label!r} is not unitary within {self.atol}")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @property
    def arity(self) -> int:
        return self.matrix.shape[0].bit_length() - 1

    def __matmul__(self, other: Gate) -> Gate:
        return Gate(self.matrix @ other.matrix, f"{self.label}*{other.label}")

    def allclose(self, other: Gate, atol: float = 1e-10) -> bool:
        return self.matrix.shape == other.matrix.shape and bool(
            np.allclose(self.matrix, other.matrix, rtol=0, atol=atol))

    def __repr__(self):
        return f"Gate({self.label!r}, arity={self.arity})"


@dataclass(frozen=True)
class GateParams:
    theta: float = 0.0
    phi: float = 0.0
    lam: float = 0.0


def is_unitary(m: np.ndarray, atol: float = UNITARY_ATOL) -> bool:
    m = np.asarray(m)
    return bool(np.allclose(m.conj().T @ m, np.eye(m.shape[0]), rtol=0, atol=atol))


def identity(k: int = 1) -> Gate:
    return Gate(np.eye(1 << k), "i" if k == 1 else f"i{k}")


def hadamard() -> Gate:
    return Gate(_SQRT1_2 * np.array([[1, 1], [1, -1]]), "h")


_PAULI = {
    "X": np.array([[0, 1], [1, 0]], dtype=np.complex128),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=np.complex128),
    "Z": np.array([[1, 0], [0, -1]], dtype=np.complex128),
}


def pauli(which: str) -> Gate:
    key = which.upper()
    if key not in _PAULI:
        raise DomainError(f"unknown Pauli {which!r}; expected X, Y or Z")
    return Gate(_PAULI[key], key.lower())


def phase(theta: float) -> Gate:
    """diag(1, e^{i theta})."""
    return Gate(np.diag([1.0, np.exp(1j * theta)]), "phase")


def single_qubit_u(p: GateParams | None = None, *, theta: float = 0.0, phi: float = 0.0,
                   lam: float = 0.0) -> Gate:
    """General single-qubit gate U(theta, phi, lam).

    U = [[cos(theta/2), -e^{i lam} sin(theta/2)],
         [e^{i phi} sin(theta/2), e^{i(phi+lam)} cos(theta/2)]]
    reaches every element of U(2) up to a global phase.
    """
    if p is not None:
        theta, phi, lam = p.theta, p.phi, p.lam
    c, s = np.cos(theta / 2), np.sin(theta / 2)
    m = np.array([[c, -np.exp(1j * lam) * s],
                  [np.exp(1j * phi) * s, np.exp(1j * (phi + lam)) * c]])
    return Gate(m, "u")


def controlled(g: Gate, num_controls: int = 1) -> Gate:
    """Identity unless every control bit is 1; then ``g`` acts on the targets."""
    if num_controls < 1:
        raise DomainError(f"num_controls must be >= 1, got {num_controls}")
    d = g.matrix.shape[0]
    total = d << num_controls
    m = np.eye(total, dtype=np.complex128)
    m[total - d:, total - d:] = g.matrix
    return Gate(m, "c" * num_controls + g.label)


def cnot() -> Gate:
    return Gate(controlled(pauli("X"), 1).matrix, "cnot")


def toffoli() -> Gate:
    return Gate(controlled(pauli("X"), 2).matrix, "ccnot")


def swap() -> Gate:
    m = np.eye(4)[[0, 2, 1, 3]]
    return Gate(m, "swap")


def dagger(g: Gate) -> Gate:
    label = g.label if g.label in _SELF_ADJOINT else g.label + "_dg"
    return Gate(g.matrix.conj().T, label)


_SELF_ADJOINT = {"i", "h", "x", "y", "z", "cnot", "ccnot", "swap"}


def is_classical_reversible(g: Gate, atol: float = 1e-10) -> bool:
    """True iff the matrix is a 0/1 permutation matrix."""
    m = g.matrix
    ones = np.abs(m - 1.0) <= atol
    zeros = np.abs(m) <= atol
    if not np.all(ones | zeros):
        return False
    return bool(np.all(ones.sum(axis=0) == 1) and np.all(ones.sum(axis=1) == 1))


def equal_up_to_phase(a: Gate | np.ndarray, b: Gate | np.ndarray, atol: float = 1e-10) -> bool:
    """Whether ``a == e^{i alpha} b`` for some alpha, with alpha taken from the first nonzero entry of ``b``."""
    ma = a.matrix if isinstance(a, Gate) else np.asarray(a)
    mb = b.matrix if isinstance(b, Gate) else np.asarray(b)
    if ma.shape != mb.shape:
        return False
    flat_b = mb.ravel()
    idx = int(np.argmax(np.abs(flat_b) > atol))
    if abs(flat_b[idx]) <= atol:
        return bool(np.all(np.abs(ma) <= atol))
    ratio = ma.ravel()[idx] / flat_b[idx]
    if abs(ratio) < atol:
        return False
    alpha = np.angle(ratio)
    return bool(np.max(np.abs(ma - np.exp(1j * alpha) * mb)) < atol)


def _check_targets(num_qubits: int, targets: Sequence[int], arity: int) -> list[int]:
    ts = [int(t) for t in targets]
    if len(ts) != arity:
        raise DomainError(f"gate of arity {arity} given {len(ts)} targets")
    if len(set(ts)) != len(ts):
        raise DomainError(f"duplicate targets {ts}")
    for t in ts:
        if not 0 <= t < num_qubits:
            raise DomainError(f"target {t} out of range for {num_qubits} qubits")
    return ts


def apply_matrix(amps: np.ndarray, num_qubits: int, matrix: np.ndarray,
                 targets: Sequence[int]) -> np.ndarray:
    """Apply a 2^k x 2^k matrix to ``targets`` of an amplitude array.

    ``amps`` has shape ``(2**num_qubits, *batch)``; trailing axes are treated
    as independent columns, so a density matrix or a batch of states can be
    pushed through in one call.  Cost is O(2^n * 2^k) per column; the full
    2^n x 2^n operator is never formed.  Returns a new array.
    """
    matrix = np.ascontiguousarray(matrix, dtype=np.complex128)
    k = matrix.shape[0].bit_length() - 1
    ts = _check_targets(num_qubits, targets, k)
    amps = np.asarray(amps, dtype=np.complex128)
    shape = amps.shape
    if shape[0] != 1 << num_qubits:
        raise DomainError(f"amplitude array has {shape[0]} rows, expected {1 << num_qubits}")
    v = np.ascontiguousarray(amps.reshape(shape[0], -1))
    single = v.shape[1] == 1
    if single:
        v = v.ravel()
    if k == 1:
        kernel = _kernels.apply_1q_vec if single else _kernels.apply_1q
        return kernel(v, ts[0], matrix).reshape(shape)
    offsets = np.array([sum(1 << ts[t] for t in range(k) if (j >> (k - 1 - t)) & 1)
                        for j in range(1 << k)], dtype=np.int64)
    nz_rows, nz_cols = np.nonzero(matrix)
    row_ptr = np.searchsorted(nz_rows, np.arange((1 << k) + 1)).astype(np.int64)
    kernel = _kernels.apply_kq_vec if single else _kernels.apply_kq
    out = kernel(v, np.array(sorted(ts), dtype=np.int64), offsets, row_ptr,
                            nz_cols.astype(np.int64), matrix[nz_rows, nz_cols])
    return out.reshape(shape)


def apply(state: StateVector, g: Gate, targets: Sequence[int]) -> StateVector:
    out = apply_matrix(state.amplitudes, state.num_qubits, g.matrix, targets)
    return StateVector._trusted(out, state.num_qubits)


def apply_sequence(state: StateVector, steps: Sequence[tuple[Gate, Sequence[int]]]) -> StateVector:
    amps = state.amplitudes
    for g, ts in steps:
        amps = apply_matrix(amps, state.num_qubits, g.matrix, ts)
    return StateVector._trusted(amps, state.num_qubits)


@dataclass(frozen=True)
class NoCloningReport:
    overlap: complex
    overlap_abs: float
    residual: float
    clonable: bool


def verify_no_cloning(u: StateVector, v: StateVector, atol: float = 1e-10) -> NoCloningReport:
    """Check the copy-consistency condition <u|v> = <u|v>^2 for a pair of qubit states.

    ``residual`` is |<u|v> - <u|v>^2|.  A pair is clonable by a single unitary
    only when the states are identical (up to phase) or orthogonal.
    """
    if u.num_qubits != 1 or v.num_qubits != 1:
        raise DomainError("verify_no_cloning takes single-qubit states")
    ov = inner_product(u, v)
    mag = abs(ov)
    clonable = mag <= atol or abs(mag - 1.0) <= atol
    return NoCloningReport(ov, mag, abs(ov - ov * ov), clonable)


def cnot_copy(psi: StateVector) -> StateVector:
    """Run ``psi ⊗ |0>`` through a C-not (control qubit 0, target qubit 1).

    Basis states are copied; superpositions a|0>+b|1> become a|00>+b|11>.
    """
    if psi.num_qubits != 1:
        raise DomainError("cnot_copy takes a single-qubit state")
    pair = np.zeros(4, dtype=np.complex128)
    pair[:2] = psi.amplitudes
    return apply(StateVector._trusted(pair, 2), cnot(), [0, 1])
