"""Pure and mixed qubit states, measurement, and reduction.

Basis index ``i`` encodes qubit ``q`` as bit ``q`` of ``i``; qubit 0 is the
least significant bit.  Amplitude arrays are stored as read-only
``complex128`` numpy arrays so values can be shared freely.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Union

import numpy as np

from .errors import DomainError, ResourceError

NORM_ATOL = 1e-10
PSD_ATOL = 1e-9
IMPOSSIBLE_BRANCH = 1e-12

MAX_STATE_QUBITS = 24
MAX_DENSITY_QUBITS = 12

SeedLike = Union[int, np.random.Generator, np.random.SeedSequence, None]


def make_rng(seed: SeedLike) -> np.random.Generator:
    """Return a generator for ``seed``; generators pass through unchanged."""
    return np.random.default_rng(seed)


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr = np.array(arr, dtype=np.complex128, copy=True)
    arr.setflags(write=False)
    return arr


def _check_qubit_count(n: int, cap: int) -> None:
    if not isinstance(n, (int, np.integer)) or n < 1:
        raise DomainError(f"qubit count must be a positive integer, got {n!r}")
    if n > cap:
        raise ResourceError(f"{n} qubits exceeds the cap of {cap}")


class StateVector:
    """Normalized amplitude vector over ``num_qubits`` qubits."""

    __slots__ = ("_n", "_amps")

    def __init__(self, amplitudes, num_qubits: int | None = None, *, normalize: bool = False,
                 validate: bool = True):
        amps = np.asarray(amplitudes, dtype=np.complex128).ravel()
        size = amps.shape[0]
        if num_qubits is None:
            num_qubits = size.bit_length() - 1
        _check_qubit_count(num_qubits, MAX_STATE_QUBITS)
        if size != 1 << num_qubits:
            raise DomainError(f"expected {1 << num_qubits} amplitudes, got {size}")
        if normalize:
            norm = np.linalg.norm(amps)
            if norm < IMPOSSIBLE_BRANCH:
                raise DomainError("cannot normalize the zero vector")
            amps = amps / norm
        elif validate:
            norm_sq = float(np.vdot(amps, amps).real)
            if abs(norm_sq - 1.0) > NORM_ATOL:
                raise DomainError(f"state is not normalized (norm^2 = {norm_sq!r})")
        self._n = int(num_qubits)
        self._amps = _frozen(amps)

    @classmethod
    def _trusted(cls, amps: np.ndarray, num_qubits: int) -> StateVector:
        # Skips the norm check; callers guarantee the invariant by construction.
        return cls(amps, num_qubits, validate=False)

    @property
    def num_qubits(self) -> int:
        return self._n

    @property
    def amplitudes(self) -> np.ndarray:
        return self._amps

    @property
    def dim(self) -> int:
        return self._amps.shape[0]

    def probabilities(self) -> np.ndarray:
        return np.abs(self._amps) ** 2

    def norm(self) -> float:
        return float(np.linalg.norm(self._amps))

    def tensor(self, other: StateVector) -> StateVector:
        """Return ``other ⊗ self``: ``self`` keeps qubits 0..n-1, ``other`` is appended above."""
        return StateVector._trusted(np.kron(other._amps, self._amps), self._n + other._n)

    def to_json(self) -> dict:
        return {"n": self._n, "re": self._amps.real.tolist(), "im": self._amps.imag.tolist()}

    @classmethod
    def from_json(cls, data: dict | str) -> StateVector:
        if isinstance(data, str):
            data = json.loads(data)
        amps = np.asarray(data["re"], dtype=float) + 1j * np.asarray(data["im"], dtype=float)
        return cls(amps, int(data["n"]))

    def allclose(self, other: StateVector, atol: float = 1e-10) -> bool:
        return self._n == other._n and bool(np.allclose(self._amps, other._amps, rtol=0, atol=atol))

    def __eq__(self, other):
        if not isinstance(other, StateVector):
            return NotImplemented
        return self._n == other._n and np.array_equal(self._amps, other._amps)

    __hash__ = None

    def __repr__(self):
        if self._n > 4:
            return f"StateVector(num_qubits={self._n})"
        return f"StateVector({np.round(self._amps, 6).tolist()})"


class DensityMatrix:
    """Hermitian, unit-trace, positive semidefinite matrix over ``num_qubits`` qubits."""

    __slots__ = ("_n", "_rho")

    def __init__(self, entries, num_qubits: int | None = None, *, validate: bool = True):
        rho = np.asarray(entries, dtype=np.complex128)
        if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
            raise DomainError(f"density matrix must be square, got shape {rho.shape}")
        if num_qubits is None:
            num_qubits = rho.shape[0].bit_length() - 1
        _check_qubit_count(num_qubits, MAX_DENSITY_QUBITS)
        if rho.shape[0] != 1 << num_qubits:
            raise DomainError(f"expected a {1 << num_qubits}-dimensional matrix, got {rho.shape}")
        self._n = int(num_qubits)
        self._rho = _frozen(rho)
        if validate:
            self.check()

    def check(self) -> None:
        """Raise :class:`DomainError` unless all density-matrix invariants hold."""
        rho = self._rho
        if not np.allclose(rho, rho.conj().T, rtol=0, atol=NORM_ATOL):
            raise DomainError("density matrix is not Hermitian")
        tr = np.trace(rho)
        if abs(tr - 1.0) > NORM_ATOL:
            raise DomainError(f"density matrix trace is {tr!r}, expected 1")
        lo = float(np.linalg.eigvalsh(rho).min())
        if lo < -PSD_ATOL:
            raise DomainError(f"density matrix has negative eigenvalue {lo!r}")

    @property
    def num_qubits(self) -> int:
        return self._n

    @property
    def entries(self) -> np.ndarray:
        return self._rho

    def eigenvalues(self) -> np.ndarray:
        return np.linalg.eigvalsh(self._rho)

    def trace(self) -> complex:
        return complex(np.trace(self._rho))

    def allclose(self, other: DensityMatrix, atol: float = 1e-10) -> bool:
        return self._n == other._n and bool(np.allclose(self._rho, other._rho, rtol=0, atol=atol))

    def __repr__(self):
        return f"DensityMatrix(num_qubits={self._n})"


@dataclass(frozen=True)
class MeasurementRecord:
    outcome_index: int
    probability: float
    post_state: StateVector


def basis_state(n: int, index: int) -> StateVector:
    _check_qubit_count(n, MAX_STATE_QUBITS)
    if not 0 <= index < 1 << n:
        raise DomainError(f"basis index {index} out of range for {n} qubits")
    amps = np.zeros(1 << n, dtype=np.complex128)
    amps[index] = 1.0
    return StateVector._trusted(amps, n)


def bits_to_index(bits: Iterable[int]) -> int:
    """Map per-qubit bits (qubit 0 first) to a basis index."""
    return sum(int(b) << q for q, b in enumerate(bits))


def index_to_bits(index: int, n: int) -> tuple[int, ...]:
    return tuple((index >> q) & 1 for q in range(n))


def inner_product(u: StateVector, v: StateVector) -> complex:
    if u.num_qubits != v.num_qubits:
        raise DomainError(f"dimension mismatch: {u.num_qubits} vs {v.num_qubits} qubits")
    return complex(np.vdot(u.amplitudes, v.amplitudes))


def fidelity(u: StateVector, v: StateVector) -> float:
    """Pure-state fidelity |<u|v>|^2."""
    return abs(inner_product(u, v)) ** 2


def to_density(v: StateVector) -> DensityMatrix:
    _check_qubit_count(v.num_qubits, MAX_DENSITY_QUBITS)
    a = v.amplitudes
    return DensityMatrix(np.outer(a, a.conj()), v.num_qubits, validate=False)


def measure_all(v: StateVector, seed: SeedLike) -> MeasurementRecord:
    rng = make_rng(seed)
    probs = v.probabilities()
    # Sample by inverse CDF; the final bucket absorbs round-off in the cumulative sum.
    cdf = np.cumsum(probs)
    j = int(np.searchsorted(cdf, rng.random() * cdf[-1], side="right"))
    j = min(j, v.dim - 1)
    while probs[j] == 0.0:
        j -= 1
    return MeasurementRecord(j, float(probs[j]), basis_state(v.num_qubits, j))


def _check_qubit(v: StateVector, q: int) -> None:
    if not 0 <= q < v.num_qubits:
        raise DomainError(f"qubit {q} out of range for {v.num_qubits} qubits")


def qubit_probability(v: StateVector, q: int, bit: int = 1) -> float:
    """Probability that measuring qubit ``q`` yields ``bit``."""
    _check_qubit(v, q)
    view = v.probabilities().reshape(-1, 2, 1 << q)
    return float(view[:, bit, :].sum())


def project_qubit(v: StateVector, q: int, bit: int) -> tuple[float, StateVector]:
    """Project qubit ``q`` onto ``bit`` and renormalize.

    Returns ``(probability, post_state)``.  Branches with probability below
    1e-12 are impossible and raise :class:`DomainError`.
    """
    _check_qubit(v, q)
    if bit not in (0, 1):
        raise DomainError(f"bit must be 0 or 1, got {bit!r}")
    amps = v.amplitudes.reshape(-1, 2, 1 << q)
    p = float(np.sum(np.abs(amps[:, bit, :]) ** 2))
    if p < IMPOSSIBLE_BRANCH:
        raise DomainError(f"outcome {bit} on qubit {q} has probability {p:.3g}")
    out = np.zeros_like(amps)
    out[:, bit, :] = amps[:, bit, :] / np.sqrt(p)
    return p, StateVector._trusted(out.ravel(), v.num_qubits)


def measure_qubit(v: StateVector, q: int, seed: SeedLike) -> tuple[int, StateVector]:
    rng = make_rng(seed)
    p1 = qubit_probability(v, q, 1)
    bit = int(rng.random() < p1)
    _, post = project_qubit(v, q, bit)
    return bit, post


def _normalize_keep(keep: Iterable[int], n: int) -> list[int]:
    kept = sorted(set(int(q) for q in keep))
    if not kept or len(kept) >= n:
        raise DomainError(f"keep set must be a nonempty proper subset of 0..{n - 1}, got {kept}")
    if kept[0] < 0 or kept[-1] >= n:
        raise DomainError(f"keep set {kept} has qubits outside 0..{n - 1}")
    return kept


def partial_trace(rho: DensityMatrix, keep: Iterable[int]) -> DensityMatrix:
    """Trace out every qubit not in ``keep``.

    Kept qubits are renumbered in ascending order, so the lowest kept index
    becomes qubit 0 of the result.
    """
    n = rho.num_qubits
    kept = _normalize_keep(keep, n)
    traced = [q for q in range(n) if q not in kept]
    # Tensor axis a holds qubit n-1-a for rows and (n + a) for columns.
    t = rho.entries.reshape((2,) * (2 * n))
    row_keep = [n - 1 - q for q in reversed(kept)]
    row_tr = [n - 1 - q for q in reversed(traced)]
    perm = row_keep + row_tr + [n + a for a in row_keep] + [n + a for a in row_tr]
    dk, dt = 1 << len(kept), 1 << len(traced)
    t = t.transpose(perm).reshape(dk, dt, dk, dt)
    reduced = np.einsum("ajbj->ab", t)
    return DensityMatrix(reduced, len(kept), validate=False)


def reduced_density(v: StateVector, keep: Iterable[int]) -> DensityMatrix:
    """Partial trace of ``|v><v|`` computed without forming the full density matrix."""
    n = v.num_qubits
    kept = _normalize_keep(keep, n)
    traced = [q for q in range(n) if q not in kept]
    t = v.amplitudes.reshape((2,) * n)
    axes = [n - 1 - q for q in reversed(kept)] + [n - 1 - q for q in reversed(traced)]
    m = t.transpose(axes).reshape(1 << len(kept), -1)
    _check_qubit_count(len(kept), MAX_DENSITY_QUBITS)
    return DensityMatrix(m @ m.conj().T, len(kept), validate=False)


def purity(rho: DensityMatrix) -> float:
    r = rho.entries
    # Tr(rho^2) = sum |rho_ij|^2 for Hermitian rho.
    return float(np.sum(np.abs(r) ** 2))


def random_state(n: int, seed: SeedLike) -> StateVector:
    """Haar-random pure state on ``n`` qubits."""
    rng = make_rng(seed)
    z = rng.normal(size=1 << n) + 1j * rng.normal(size=1 << n)
    return StateVector(z, n, normalize=True)


def mix(weights: Iterable[float], states: Iterable[DensityMatrix]) -> DensityMatrix:
    """Convex combination of density matrices."""
    weights = list(weights)
    states = list(states)
    if any(w < 0 for w in weights) or abs(sum(weights) - 1.0) > NORM_ATOL:
        raise DomainError("mixture weights must be non-negative and sum to 1")
    acc = sum(w * s.entries for w, s in zip(weights, states))
    return DensityMatrix(acc, states[0].num_qubits)
