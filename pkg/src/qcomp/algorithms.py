"""Circuit builders and runners for QFT, Grover search, teleportation,
dense coding and the reversible half adder."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from . import gates
from .circuit import Circuit, op, run
from .errors import DomainError
from .qstate import (
    DensityMatrix,
    SeedLike,
    StateVector,
    basis_state,
    bits_to_index,
    fidelity,
    index_to_bits,
    make_rng,
    measure_all,
    measure_qubit,
    project_qubit,
    reduced_density,
)


def uniform_superposition(n: int) -> StateVector:
    """Walsh-Hadamard transform of |0...0>."""
    state = basis_state(n, 0)
    h = gates.hadamard()
    return gates.apply_sequence(state, [(h, [q]) for q in range(n)])


# --- Fourier transform -------------------------------------------------------

def qft_circuit(n: int) -> Circuit:
    """|x> -> N^{-1/2} sum_y e^{2 pi i x y / N} |y>, N = 2^n.

    Hadamard plus controlled-phase(pi / 2^d) ladder from the most significant
    qubit down, then swaps to reverse qubit order.  Gate count is
    n(n+1)/2 + floor(n/2).
    """
    if not 1 <= n <= 24:
        raise DomainError(f"qft_circuit needs 1 <= n <= 24, got {n}")
    ops = []
    for j in reversed(range(n)):
        ops.append(op("h", j))
        for k in reversed(range(j)):
            ops.append(op("phase", j, controls=[k], theta=math.pi / 2 ** (j - k)))
    for i in range(n // 2):
        ops.append(op("swap", i, n - 1 - i))
    return Circuit(n, tuple(ops))


def dft_matrix(n: int) -> np.ndarray:
    """Dense DFT matrix F[j, k] = e^{2 pi i j k / N} / sqrt(N)."""
    N = 1 << n
    jk = np.outer(np.arange(N), np.arange(N)) % N
    return np.exp(2j * np.pi * jk / N) / np.sqrt(N)


# --- Grover ------------------------------------------------------------------

@dataclass(frozen=True)
class GroverOracle:
    """Sign-flip oracle for the basis indices in ``marked``."""

    n: int
    marked: frozenset[int]

    def __init__(self, n: int, marked: Iterable[int] | int):
        if isinstance(marked, (int, np.integer)):
            marked = [marked]
        marked = frozenset(int(m) for m in marked)
        if n < 1:
            raise DomainError(f"qubit count must be >= 1, got {n}")
        if not marked:
            raise DomainError("oracle needs at least one marked item")
        if any(not 0 <= m < 1 << n for m in marked):
            raise DomainError(f"marked items must lie in 0..{(1 << n) - 1}")
        object.__setattr__(self, "n", int(n))
        object.__setattr__(self, "marked", marked)

    def apply(self, amps: np.ndarray) -> np.ndarray:
        out = amps.copy()
        idx = list(self.marked)
        out[idx] = -out[idx]
        return out


def _grover_angle(N: int, num_marked: int = 1) -> float:
    if N < 4 or N & (N - 1):
        raise DomainError(f"search space size must be a power of two >= 4, got {N}")
    if not 1 <= num_marked < N:
        raise DomainError(f"marked count must lie in 1..{N - 1}, got {num_marked}")
    return math.asin(math.sqrt(num_marked / N))


def grover_iterations(N: int, num_marked: int = 1) -> int:
    """Nearest integer I to the solution of (2I+1) theta = pi/2, theta = arcsin(sqrt(M/N)); at least 1."""
    theta = _grover_angle(N, num_marked)
    return max(1, round(math.pi / (4 * theta) - 0.5))


def diffuse(amps: np.ndarray) -> np.ndarray:
    """Inversion about the average: a_i -> 2<a> - a_i, i.e. 2|s><s| - I."""
    return 2.0 * amps.mean() - amps


def grover_state(oracle: GroverOracle, iterations: int | None = None) -> StateVector:
    """State after ``iterations`` oracle+diffusion rounds (default: the optimal count)."""
    if iterations is None:
        iterations = grover_iterations(1 << oracle.n, len(oracle.marked))
    amps = np.array(uniform_superposition(oracle.n).amplitudes)
    for _ in range(iterations):
        amps = diffuse(oracle.apply(amps))
    return StateVector._trusted(amps, oracle.n)


def grover_success_probability(oracle: GroverOracle, iterations: int | None = None) -> float:
    probs = grover_state(oracle, iterations).probabilities()
    return float(probs[list(oracle.marked)].sum())


def grover_search(oracle: GroverOracle, seed: SeedLike) -> int:
    """Run the optimal number of Grover iterations and measure; returns the observed index."""
    return measure_all(grover_state(oracle), seed).outcome_index


# --- Teleportation and dense coding -----------------------------------------

def bell_pair(kind: str = "phi+") -> StateVector:
    """(|00>+|11>)/sqrt2 for ``phi+``; (|01>-|10>)/sqrt2 for ``singlet``."""
    s = 1 / math.sqrt(2)
    if kind == "phi+":
        return StateVector([s, 0, 0, s], 2)
    if kind == "singlet":
        # index = q0 + 2 q1: |q0=0,q1=1> is index 2
        return StateVector([0, -s, s, 0], 2)
    raise DomainError(f"unknown Bell pair {kind!r}")


@dataclass(frozen=True)
class TeleportResult:
    classical_bits: tuple[int, int]
    received: StateVector
    fidelity: float
    sender_reduced: DensityMatrix


def teleport(psi: StateVector, seed: SeedLike = None, *,
             outcomes: tuple[int, int] | None = None) -> TeleportResult:
    """Teleport a one-qubit state over a shared phi+ pair.

    Qubit 0 holds ``psi``, qubits 1 and 2 the pair (2 is the receiver's).
    The sender measures qubits 0 and 1 after C-not and Hadamard; the
    receiver applies X^b2 then Z^b1.  ``outcomes`` forces the two measurement
    results instead of sampling them.
    """
    if psi.num_qubits != 1:
        raise DomainError("teleport takes a single-qubit state")
    rng = make_rng(seed)
    h, x, z, cx = gates.hadamard(), gates.pauli("X"), gates.pauli("Z"), gates.cnot()
    state = psi.tensor(basis_state(2, 0))
    state = gates.apply_sequence(state, [(h, [1]), (cx, [1, 2]), (cx, [0, 1]), (h, [0])])
    bits = []
    for q in (0, 1):
        if outcomes is None:
            b, state = measure_qubit(state, q, rng)
        else:
            b = int(outcomes[q])
            _, state = project_qubit(state, q, b)
        bits.append(b)
    b1, b2 = bits
    if b2:
        state = gates.apply(state, x, [2])
    if b1:
        state = gates.apply(state, z, [2])
    base = b1 | (b2 << 1)
    received = StateVector(state.amplitudes[[base, base | 4]], 1)
    return TeleportResult((b1, b2), received, fidelity(psi, received), reduced_density(state, [0, 1]))


_DENSE_ENCODING = {(0, 0): [], (0, 1): ["X"], (1, 0): ["Z"], (1, 1): ["X", "Z"]}


def dense_code(bits: tuple[int, int], seed: SeedLike = None, *, pair: str = "phi+") -> tuple[int, int]:
    """Send two classical bits by acting on one half of a Bell pair.

    The sender applies X^b2 then Z^b1 to qubit 0 and ships it; the receiver
    runs C-not(0->1), H(0) and measures both qubits.  For the singlet the
    decoder output is offset by (1, 1), since singlet = -XZ applied to phi+.
    """
    b1, b2 = (int(b) for b in bits)
    if {b1, b2} - {0, 1}:
        raise DomainError(f"bits must be 0 or 1, got {bits!r}")
    rng = make_rng(seed)
    state = bell_pair(pair)
    for name in _DENSE_ENCODING[(b1, b2)]:
        state = gates.apply(state, gates.pauli(name), [0])
    state = gates.apply_sequence(state, [(gates.cnot(), [0, 1]), (gates.hadamard(), [0])])
    out = index_to_bits(measure_all(state, rng).outcome_index, 2)
    if pair == "singlet":
        out = (out[0] ^ 1, out[1] ^ 1)
    return int(out[0]), int(out[1])


def phase_kickback() -> tuple[StateVector, StateVector]:
    """C-not on |1>(|0>-|1>)/sqrt2: returns (input, output); output = -input."""
    minus = StateVector([1, -1], 1, normalize=True)
    inp = basis_state(1, 1).tensor(minus)  # qubit 0 control = |1>, qubit 1 target = |->
    return inp, gates.apply(inp, gates.cnot(), [0, 1])


# --- Reversible adder --------------------------------------------------------

def adder_circuit() -> Circuit:
    """C^2-not on (0, 1 -> 2) then C-not (0 -> 1): qubit 1 becomes the sum, qubit 2 the carry."""
    return Circuit(3, (op("ccnot", 0, 1, 2), op("cnot", 0, 1)))


def half_adder(x: int, y: int) -> tuple[int, int]:
    """Run the adder on basis input (x, y, 0); returns (sum, carry)."""
    out = run(adder_circuit(), basis_state(3, bits_to_index([x, y, 0])))
    idx = int(np.argmax(out.probabilities()))
    if abs(out.probabilities()[idx] - 1.0) > 1e-12:
        raise AssertionError("adder output is not a basis state")
    bits = index_to_bits(idx, 3)
    return bits[1], bits[2]
