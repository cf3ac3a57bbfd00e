import numpy as np
import pytest
from scipy.stats import unitary_group

from qcomp.circuit import Circuit, CircuitOp, op

ACCEPTANCE_LINES: list[str] = []


def dense_embed(matrix: np.ndarray, targets, n: int) -> np.ndarray:
    """Brute-force 2^n x 2^n embedding of a gate, built entry by entry.

    Row j, column i is nonzero only when j and i agree off the targets; the
    entry is the gate element between their target bit patterns (first
    target = most significant gate bit).
    """
    k = len(targets)
    dim = 1 << n
    full = np.zeros((dim, dim), dtype=complex)
    mask = sum(1 << t for t in targets)

    def local(idx):
        return sum(((idx >> t) & 1) << (k - 1 - pos) for pos, t in enumerate(targets))

    for i in range(dim):
        for j in range(dim):
            if (i & ~mask) == (j & ~mask):
                full[j, i] = matrix[local(j), local(i)]
    return full


def random_unitary(k: int, rng) -> np.ndarray:
    return unitary_group.rvs(1 << k, random_state=rng)


def random_circuit(n: int, num_ops: int, rng) -> Circuit:
    ops: list[CircuitOp] = []
    names = ["h", "x", "y", "z", "phase", "u", "cnot", "ccnot", "swap"]
    arity = {"cnot": 2, "swap": 2, "ccnot": 3}
    while len(ops) < num_ops:
        name = names[rng.integers(len(names))]
        k = arity.get(name, 1)
        n_ctrl = int(rng.integers(0, 2)) if n > k else 0
        if k + n_ctrl > n:
            continue
        qs = [int(q) for q in rng.choice(n, size=k + n_ctrl, replace=False)]
        params = {}
        if name == "phase":
            params = {"theta": float(rng.uniform(-np.pi, np.pi))}
        elif name == "u":
            params = {key: float(rng.uniform(-np.pi, np.pi)) for key in ("theta", "phi", "lam")}
        ops.append(op(name, *qs[n_ctrl:], controls=qs[:n_ctrl], **params))
    return Circuit(n, tuple(ops))


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def dft_oracle(n: int) -> np.ndarray:
    """F[j, k] = e^{2 pi i j k / N} / sqrt(N), filled element by element."""
    import cmath

    N = 1 << n
    f = np.empty((N, N), dtype=complex)
    for j in range(N):
        for k in range(N):
            f[j, k] = cmath.exp(2j * cmath.pi * ((j * k) % N) / N) / N**0.5
    return f
