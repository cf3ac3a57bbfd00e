"""Classical and quantum entropies, in bits."""

from __future__ import annotations

from typing import Iterable

import numpy as np

from .errors import DomainError
from .qstate import MAX_DENSITY_QUBITS, DensityMatrix, StateVector, _normalize_keep, reduced_density

PROB_ATOL = 1e-10
EIG_ZERO = 1e-12


def _as_dist(probs) -> np.ndarray:
    p = np.asarray(probs, dtype=float)
    if p.size == 0:
        raise DomainError("empty distribution")
    if np.any(p < 0) or not np.all(np.isfinite(p)):
        raise DomainError("probabilities must be finite and non-negative")
    if abs(p.sum() - 1.0) > PROB_ATOL:
        raise DomainError(f"probabilities sum to {p.sum()!r}, expected 1")
    return p


def _entropy_bits(p: np.ndarray) -> float:
    p = p[p > 0]
    return float(-np.sum(p * np.log2(p)))


def shannon_entropy(probs) -> float:
    """-sum p log2 p, with 0 log 0 = 0."""
    p = _as_dist(probs).ravel()
    return max(_entropy_bits(p), 0.0)


def binary_entropy(p: float) -> float:
    return shannon_entropy([p, 1.0 - p])


def mutual_information(table) -> float:
    """I(X:Y) = sum p(x,y) log2[p(x,y) / (p(x) p(y))] over a joint probability table."""
    pxy = _as_dist(table)
    if pxy.ndim != 2:
        raise DomainError(f"joint distribution must be a 2-D table, got {pxy.ndim}-D")
    px = pxy.sum(axis=1, keepdims=True)
    py = pxy.sum(axis=0, keepdims=True)
    nz = pxy > 0
    ratio = pxy[nz] / (px * py)[nz]
    return max(float(np.sum(pxy[nz] * np.log2(ratio))), 0.0)


def bsc_capacity(p: float) -> float:
    """Capacity of a binary symmetric channel with flip probability ``p``, bits per use."""
    if not 0.0 <= p <= 1.0:
        raise DomainError(f"flip probability must lie in [0, 1], got {p!r}")
    return 1.0 - binary_entropy(p)


def compression_limit(probs, n: int) -> float:
    """Bits needed to encode ``n`` i.i.d. messages: n * S(X)."""
    if n < 0:
        raise DomainError(f"message count must be non-negative, got {n}")
    return n * shannon_entropy(probs)


def von_neumann_entropy(rho: DensityMatrix) -> float:
    """-Tr(rho log2 rho) from the eigenvalues; those below 1e-12 count as zero."""
    lam = np.linalg.eigvalsh(rho.entries)
    return max(_entropy_bits(lam[lam > EIG_ZERO]), 0.0)


def entanglement_entropy(v: StateVector, partition: Iterable[int]) -> float:
    """E(A:B) = S(rho_A) + S(rho_B) - S(rho_AB) for a pure state split into ``partition`` and its complement.

    The joint state is pure, so S(rho_AB) = 0 and E = 2 S(rho_A).
    """
    n = v.num_qubits
    a = _normalize_keep(partition, n)
    b = [q for q in range(n) if q not in a]
    if len(a) > len(b):
        a, b = b, a
    s_a = von_neumann_entropy(reduced_density(v, a))
    # Both reductions of a pure state share their nonzero spectrum (Schmidt
    # decomposition); past the density cap the larger side is not formed.
    s_b = von_neumann_entropy(reduced_density(v, b)) if len(b) <= MAX_DENSITY_QUBITS else s_a
    return s_a + s_b
