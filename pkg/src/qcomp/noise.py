"""Pauli noise channels and the three-qubit bit-flip code.

The code stores a|0>+b|1> as a|000>+b|111>.  Correction appends two ancillas
(qubits 3 and 4), copies the parities q0^q1 and q1^q2 into them, measures
them, flips the qubit the syndrome points at, and drops the ancillas.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import gates
from .errors import DomainError
from .qstate import DensityMatrix, SeedLike, StateVector, make_rng

CHANNEL_KINDS = ("bit_flip", "phase_flip", "depolarizing", "dephasing")

PAULI_LABELS = ("I", "X", "Y", "Z")

# hbar / k_B in kelvin-seconds, to the two digits used for the thermal estimate.
HBAR_OVER_K = 0.76e-11


@dataclass(frozen=True)
class NoiseChannel:
    kind: str
    strength: float

    def __post_init__(self):
        if self.kind not in CHANNEL_KINDS:
            raise DomainError(f"unknown channel kind {self.kind!r}; expected one of {CHANNEL_KINDS}")
        if not 0.0 <= self.strength <= 1.0:
            raise DomainError(f"channel strength must lie in [0, 1], got {self.strength!r}")

    def pauli_weights(self) -> np.ndarray:
        """Probabilities of (I, X, Y, Z) for one qubit."""
        p = self.strength
        if self.kind == "bit_flip":
            return np.array([1 - p, p, 0.0, 0.0])
        if self.kind == "phase_flip":
            return np.array([1 - p, 0.0, 0.0, p])
        if self.kind == "depolarizing":
            return np.array([1 - p, p / 3, p / 3, p / 3])
        # Scaling coherences by (1 - g) is a Z flip with probability g / 2.
        return np.array([1 - p / 2, 0.0, 0.0, p / 2])


def _conjugate(rho: np.ndarray, n: int, m: np.ndarray, q: int) -> np.ndarray:
    """P rho P^dagger for a single-qubit matrix on qubit ``q`` (rho Hermitian)."""
    left = gates.apply_matrix(rho, n, m, [q])
    return gates.apply_matrix(left.conj().T, n, m, [q])


def apply_channel(rho: DensityMatrix, ch: NoiseChannel, q: int) -> DensityMatrix:
    n = rho.num_qubits
    if not 0 <= q < n:
        raise DomainError(f"qubit {q} out of range for {n} qubits")
    r = rho.entries
    p = ch.strength
    if ch.kind == "dephasing":
        idx = np.arange(1 << n)
        bit = (idx >> q) & 1
        scale = np.where(bit[:, None] != bit[None, :], 1.0 - p, 1.0)
        out = r * scale
    else:
        w = ch.pauli_weights()
        out = w[0] * r
        for label, weight in zip("XYZ", w[1:]):
            if weight:
                out = out + weight * _conjugate(r, n, gates.pauli(label).matrix, q)
    return DensityMatrix(out, n)


def sample_pauli_errors(ch: NoiseChannel, size, seed: SeedLike) -> np.ndarray:
    """Array of Pauli codes (0=I, 1=X, 2=Y, 3=Z), i.i.d. per entry."""
    rng = make_rng(seed)
    return rng.choice(4, size=size, p=ch.pauli_weights())


def sample_pauli_error(ch: NoiseChannel, num_qubits: int, seed: SeedLike) -> tuple[str, ...]:
    """One independent Pauli label per qubit."""
    codes = sample_pauli_errors(ch, num_qubits, seed)
    return tuple(PAULI_LABELS[c] for c in codes)


# --- three-qubit bit-flip code ----------------------------------------------

_CX = gates.cnot().matrix
_X = gates.pauli("X").matrix

# (q0^q1, q1^q2) -> qubit to flip
SYNDROME_TABLE = {(0, 0): None, (1, 0): 0, (1, 1): 1, (0, 1): 2}


def _encode_amps(amps: np.ndarray) -> np.ndarray:
    """(2, batch) logical amplitudes -> (8, batch) codewords."""
    batch = amps.reshape(2, -1)
    code = np.zeros((8, batch.shape[1]), dtype=np.complex128)
    code[:2] = batch
    code = gates.apply_matrix(code, 3, _CX, [0, 1])
    return gates.apply_matrix(code, 3, _CX, [0, 2])


def encode_bitflip3(psi: StateVector) -> StateVector:
    if psi.num_qubits != 1:
        raise DomainError("encode_bitflip3 takes a single-qubit state")
    return StateVector._trusted(_encode_amps(psi.amplitudes).ravel(), 3)


def decode_bitflip3(code: StateVector) -> StateVector:
    """Undo the encoding; the residual qubits 1 and 2 must be back in |00>."""
    if code.num_qubits != 3:
        raise DomainError("decode_bitflip3 takes a three-qubit state")
    amps = gates.apply_matrix(code.amplitudes, 3, _CX, [0, 2])
    amps = gates.apply_matrix(amps, 3, _CX, [0, 1])
    leak = float(np.sum(np.abs(amps[2:]) ** 2))
    if leak > 1e-9:
        raise DomainError(f"state is not a codeword (weight {leak:.3g} outside the code space)")
    return StateVector(amps[:2], 1, normalize=True)


def _measure_qubit_batch(amps: np.ndarray, q: int, rng: np.random.Generator):
    """Measure qubit ``q`` independently in every column of a (2^n, batch) array."""
    v = amps.reshape(-1, 2, 1 << q, amps.shape[1])
    p1 = np.sum(np.abs(v[:, 1]) ** 2, axis=(0, 1))
    bits = (rng.random(amps.shape[1]) < p1).astype(np.int64)
    probs = np.where(bits == 1, p1, 1.0 - p1)
    if np.any(probs < 1e-12):
        raise DomainError("sampled an impossible measurement branch")
    out = np.zeros_like(v)
    cols = np.arange(amps.shape[1])
    out[:, bits, :, cols] = v[:, bits, :, cols] / np.sqrt(probs)[:, None, None]
    return bits, out.reshape(amps.shape)


def _correct_batch(code: np.ndarray, rng: np.random.Generator):
    """Syndrome-extract and correct a (8, batch) array of three-qubit states.

    Returns (corrected (8, batch), syndromes (batch, 2)).
    """
    batch = code.shape[1]
    amps = np.zeros((32, batch), dtype=np.complex128)
    amps[:8] = code
    for ctrl, anc in ((0, 3), (1, 3), (1, 4), (2, 4)):
        amps = gates.apply_matrix(amps, 5, _CX, [ctrl, anc])
    s0, amps = _measure_qubit_batch(amps, 3, rng)
    s1, amps = _measure_qubit_batch(amps, 4, rng)
    for (a, b), target in SYNDROME_TABLE.items():
        if target is None:
            continue
        hit = (s0 == a) & (s1 == b)
        if hit.any():
            flipped = gates.apply_matrix(amps[:, hit], 5, _X, [target])
            amps[:, hit] = flipped
    # Ancillas now sit in the basis state |s0 s1>; keep that block only.
    base = (s0 << 3) | (s1 << 4)
    rows = base[None, :] + np.arange(8)[:, None]
    corrected = np.take_along_axis(amps, rows, axis=0)
    return corrected, np.stack([s0, s1], axis=1)


def measure_syndrome(code: StateVector, seed: SeedLike) -> tuple[tuple[int, int], StateVector]:
    """Extract the syndrome and return it with the corrected three-qubit state."""
    if code.num_qubits != 3:
        raise DomainError("syndrome extraction takes a three-qubit state")
    corrected, syn = _correct_batch(code.amplitudes.reshape(8, 1), make_rng(seed))
    return (int(syn[0, 0]), int(syn[0, 1])), StateVector._trusted(corrected.ravel(), 3)


def syndrome_correct(code: StateVector, seed: SeedLike = None) -> StateVector:
    return measure_syndrome(code, seed)[1]


def apply_bit_flips(code: StateVector, flips) -> StateVector:
    """Apply X to every qubit whose entry in ``flips`` is truthy."""
    amps = code.amplitudes
    for q, f in enumerate(flips):
        if f:
            amps = gates.apply_matrix(amps, code.num_qubits, _X, [q])
    return StateVector._trusted(amps, code.num_qubits)


@dataclass(frozen=True)
class QecTrialStats:
    trials: int
    physical_p: float
    logical_failures: int
    logical_rate: float

    @property
    def predicted_rate(self) -> float:
        return predicted_logical_rate(self.physical_p)


def predicted_logical_rate(p: float) -> float:
    """Probability of two or more flips among three: 3p^2 - 2p^3."""
    return 3 * p**2 - 2 * p**3


def logical_error_rate(p: float, trials: int, seed: SeedLike, *, batch_size: int = 20_000) -> QecTrialStats:
    """Monte-Carlo logical failure rate under independent bit flips of probability ``p``.

    Each trial encodes a Haar-random logical state, flips each physical
    qubit with probability ``p``, corrects, and counts a failure when the
    corrected state's fidelity with the clean codeword drops below 1 - 1e-6.
    Trials are simulated column-wise in batches with the same kernels as
    :func:`syndrome_correct`.
    """
    if not 0.0 <= p <= 1.0:
        raise DomainError(f"p must lie in [0, 1], got {p!r}")
    if trials < 1:
        raise DomainError(f"trials must be >= 1, got {trials}")
    rng = make_rng(seed)
    ch = NoiseChannel("bit_flip", p)
    failures = 0
    done = 0
    while done < trials:
        b = min(batch_size, trials - done)
        z = rng.normal(size=(2, b)) + 1j * rng.normal(size=(2, b))
        logical = z / np.linalg.norm(z, axis=0)
        clean = _encode_amps(logical)
        noisy = clean
        errors = sample_pauli_errors(ch, (3, b), rng)
        for q in range(3):
            hit = errors[q] == 1
            if hit.any():
                noisy = noisy.copy()
                noisy[:, hit] = gates.apply_matrix(noisy[:, hit], 3, _X, [q])
        corrected, _ = _correct_batch(noisy, rng)
        fid = np.abs(np.sum(clean.conj() * corrected, axis=0)) ** 2
        failures += int(np.sum(fid < 1 - 1e-6))
        done += b
    return QecTrialStats(trials, p, failures, failures / trials)


def decoherence_timescale(temperature: float) -> float:
    """Thermal decoherence time hbar/kT in seconds, for ``temperature`` in kelvin."""
    if not temperature > 0 or not math.isfinite(temperature):
        raise DomainError(f"temperature must be positive, got {temperature!r}")
    return HBAR_OVER_K / temperature
