"""BB84 key distribution, simulated round by round on one-qubit states.

Bases: 0 = computational {|0>, |1>}, 1 = Hadamard {|+>, |->}.  Preparing
bit ``b`` in basis 1 is H|b>; measuring in basis 1 is H followed by a
computational measurement.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import gates
from .errors import DomainError
from .noise import NoiseChannel, sample_pauli_errors
from .qstate import SeedLike, StateVector, basis_state, inner_product, make_rng, measure_qubit, project_qubit

EAVESDROPPERS = ("none", "intercept_resend")

_H = gates.hadamard()
_X = gates.pauli("X")


@dataclass(frozen=True)
class Bb84Config:
    raw_length: int = 1024
    eavesdropper: str = "none"
    qber_sample_fraction: float = 0.5
    detection_threshold: float = 0.12
    seed: SeedLike = 0
    channel_flip: float = 0.0

    def __post_init__(self):
        if self.raw_length < 8:
            raise DomainError(f"raw_length must be >= 8, got {self.raw_length}")
        if self.eavesdropper not in EAVESDROPPERS:
            raise DomainError(f"eavesdropper must be one of {EAVESDROPPERS}, got {self.eavesdropper!r}")
        if not 0.0 < self.qber_sample_fraction < 1.0:
            raise DomainError("qber_sample_fraction must lie in (0, 1)")
        if not 0.0 < self.detection_threshold < 1.0:
            raise DomainError("detection_threshold must lie in (0, 1)")
        if not 0.0 <= self.channel_flip <= 1.0:
            raise DomainError("channel_flip must lie in [0, 1]")


@dataclass(frozen=True)
class Round:
    bit: int
    basis_a: int
    basis_e: int | None
    basis_b: int
    outcome: int

    def to_json(self) -> dict:
        return {"bit": self.bit, "basis_a": self.basis_a, "basis_e": self.basis_e,
                "basis_b": self.basis_b, "outcome": self.outcome}


@dataclass(frozen=True)
class Bb84Result:
    raw_length: int
    sifted_length: int
    sample_size: int
    measured_qber: float
    eavesdropping_detected: bool
    final_key: tuple[int, ...]
    receiver_key: tuple[int, ...]
    privacy_amplified: bool
    rounds: tuple[Round, ...] = field(repr=False)

    def key_hex(self) -> str:
        return bits_to_hex(self.final_key)

    def to_json(self, transcript: bool = False) -> dict:
        out = {
            "raw_length": self.raw_length,
            "sifted_length": self.sifted_length,
            "sample_size": self.sample_size,
            "qber": self.measured_qber,
            "detected": self.eavesdropping_detected,
            "key_bits": len(self.final_key),
            "key_hex": self.key_hex(),
        }
        if transcript:
            out["transcript"] = [r.to_json() for r in self.rounds]
        return out


def bits_to_hex(bits) -> str:
    """Pack bits most-significant first; a trailing partial nibble is zero-padded on the right."""
    bits = list(bits)
    if not bits:
        return ""
    bits += [0] * (-len(bits) % 4)
    return "".join(f"{int(''.join(map(str, bits[i:i + 4])), 2):x}" for i in range(0, len(bits), 4))


def prepare(bit: int, basis: int) -> StateVector:
    state = basis_state(1, bit)
    return gates.apply(state, _H, [0]) if basis else state


def measure_in_basis(state: StateVector, basis: int, rng) -> tuple[int, StateVector]:
    """Measure a qubit in ``basis``; returns the bit and the collapsed state expressed in that basis."""
    if basis:
        state = gates.apply(state, _H, [0])
    bit, post = measure_qubit(state, 0, rng)
    if basis:
        post = gates.apply(post, _H, [0])
    return bit, post


def run_bb84(cfg: Bb84Config) -> Bb84Result:
    rng = make_rng(cfg.seed)
    n = cfg.raw_length
    bits_a = rng.integers(0, 2, n)
    bases_a = rng.integers(0, 2, n)
    bases_b = rng.integers(0, 2, n)
    eve = cfg.eavesdropper == "intercept_resend"
    bases_e = rng.integers(0, 2, n) if eve else None
    flips = sample_pauli_errors(NoiseChannel("bit_flip", cfg.channel_flip), n, rng)

    rounds = []
    for i in range(n):
        photon = prepare(int(bits_a[i]), int(bases_a[i]))
        basis_e = None
        if eve:
            basis_e = int(bases_e[i])
            _, photon = measure_in_basis(photon, basis_e, rng)
        if flips[i]:
            photon = gates.apply(photon, _X, [0])
        outcome, _ = measure_in_basis(photon, int(bases_b[i]), rng)
        rounds.append(Round(int(bits_a[i]), int(bases_a[i]), basis_e, int(bases_b[i]), outcome))

    # Public basis comparison.
    sifted = [r for r in rounds if r.basis_a == r.basis_b]
    m = len(sifted)
    sample_size = min(m, max(1, round(cfg.qber_sample_fraction * m))) if m else 0
    sample_idx = set(rng.choice(m, size=sample_size, replace=False).tolist()) if sample_size else set()
    errors = sum(sifted[i].bit != sifted[i].outcome for i in sample_idx)
    qber = errors / sample_size if sample_size else 0.0
    detected = qber > cfg.detection_threshold

    keep = [i for i in range(m) if i not in sample_idx]
    key_a = [sifted[i].bit for i in keep]
    key_b = [sifted[i].outcome for i in keep]
    amplified = False
    if detected:
        key_a, key_b = [], []
    elif qber > 0:
        key_a, key_b = parity_distill(key_a), parity_distill(key_b)
        amplified = True
    return Bb84Result(n, m, sample_size, qber, detected, tuple(key_a), tuple(key_b), amplified,
                      tuple(rounds))


def parity_distill(bits) -> list[int]:
    """XOR consecutive pairs, halving the key; an unpaired last bit is dropped."""
    return [bits[i] ^ bits[i + 1] for i in range(0, len(bits) - 1, 2)]


@dataclass(frozen=True)
class DisturbanceReport:
    overlap_abs: float
    branch_probabilities: tuple[float, float]
    expected_fidelity: float
    disturbed: bool


def eavesdrop_disturbance_demo(u: StateVector, v: StateVector) -> DisturbanceReport:
    """Measure ``v`` in the orthonormal basis {u, u_perp} and report how much it is disturbed.

    ``expected_fidelity`` averages |<v|post>|^2 over both outcomes; it is 1 only
    when ``v`` is (up to phase) ``u`` or orthogonal to it.
    """
    if u.num_qubits != 1 or v.num_qubits != 1:
        raise DomainError("disturbance demo takes single-qubit states")
    a, b = u.amplitudes
    # Columns u and u_perp; applying W^dagger rotates u's basis onto the computational one.
    w = np.array([[a, -np.conj(b)], [b, np.conj(a)]])
    rotated = gates.apply(v, gates.Gate(w.conj().T, "w_dg"), [0])
    probs, fid = [], 0.0
    for k in (0, 1):
        try:
            p, post = project_qubit(rotated, 0, k)
        except DomainError:
            probs.append(0.0)
            continue
        post = gates.apply(post, gates.Gate(w, "w"), [0])
        probs.append(p)
        fid += p * abs(inner_product(v, post)) ** 2
    return DisturbanceReport(abs(inner_product(u, v)), (probs[0], probs[1]), fid, fid < 1 - 1e-10)
