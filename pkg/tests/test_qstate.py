import json
import math

import numpy as np
import pytest

from qcomp.errors import DomainError, ResourceError
from qcomp.qstate import (
    DensityMatrix,
    StateVector,
    basis_state,
    inner_product,
    measure_all,
    measure_qubit,
    mix,
    partial_trace,
    project_qubit,
    purity,
    random_state,
    reduced_density,
    to_density,
)

S = 1 / math.sqrt(2)
PLUS = StateVector([S, S])
BELL = StateVector([S, 0, 0, S])
SINGLET = StateVector([0, -S, S, 0])  # (|01> - |10>)/sqrt2 with qubit 0 written first


def brute_partial_trace(rho: np.ndarray, n: int, keep) -> np.ndarray:
    """Sum over traced-out bit patterns index by index."""
    keep = sorted(keep)
    traced = [q for q in range(n) if q not in keep]
    dk = 1 << len(keep)
    out = np.zeros((dk, dk), dtype=complex)

    def compose(kbits, tbits):
        idx = 0
        for pos, q in enumerate(keep):
            idx |= ((kbits >> pos) & 1) << q
        for pos, q in enumerate(traced):
            idx |= ((tbits >> pos) & 1) << q
        return idx

    for a in range(dk):
        for b in range(dk):
            out[a, b] = sum(rho[compose(a, t), compose(b, t)] for t in range(1 << len(traced)))
    return out


class TestStateVector:
    def test_basis_state_examples(self):
        np.testing.assert_array_equal(basis_state(1, 0).amplitudes, [1, 0])
        np.testing.assert_array_equal(basis_state(2, 3).amplitudes, [0, 0, 0, 1])
        v = basis_state(3, 5)
        assert v.amplitudes[5] == 1 and np.count_nonzero(v.amplitudes) == 1

    @pytest.mark.parametrize("n,index", [(1, 2), (2, -1), (3, 8)])
    def test_basis_state_out_of_range(self, n, index):
        with pytest.raises(DomainError):
            basis_state(n, index)

    def test_rejects_unnormalized_and_bad_length(self):
        with pytest.raises(DomainError):
            StateVector([1, 1])
        with pytest.raises(DomainError):
            StateVector([1, 0, 0], 2)

    def test_normalize_flag(self):
        v = StateVector([3, 4j], normalize=True)
        assert abs(v.norm() - 1) < 1e-15

    def test_amplitudes_are_read_only(self):
        v = basis_state(2, 0)
        with pytest.raises(ValueError):
            v.amplitudes[0] = 0

    def test_qubit_cap(self):
        with pytest.raises(ResourceError):
            StateVector(np.zeros(2), 25)

    def test_json_round_trip(self):
        v = random_state(3, 4)
        data = json.loads(json.dumps(v.to_json()))
        assert set(data) == {"n", "re", "im"}
        assert StateVector.from_json(data) == v

    def test_inner_product_examples(self):
        assert inner_product(basis_state(1, 0), basis_state(1, 0)) == 1
        assert inner_product(basis_state(1, 0), basis_state(1, 1)) == 0
        # conj(1)*S + conj(0)*S
        assert abs(inner_product(basis_state(1, 0), PLUS) - S) < 1e-15

    def test_inner_product_conjugates_left(self):
        u = StateVector([S, 1j * S])
        assert abs(inner_product(u, u) - 1) < 1e-15
        assert abs(inner_product(u, PLUS) - (S * S - 1j * S * S)) < 1e-15

    def test_inner_product_dimension_mismatch(self):
        with pytest.raises(DomainError):
            inner_product(basis_state(1, 0), basis_state(2, 0))


class TestDensity:
    def test_to_density_examples(self):
        np.testing.assert_allclose(to_density(basis_state(1, 0)).entries, [[1, 0], [0, 0]])
        np.testing.assert_allclose(to_density(PLUS).entries, [[0.5, 0.5], [0.5, 0.5]], atol=1e-15)
        r = to_density(basis_state(2, 3)).entries
        assert r[3, 3] == 1 and np.count_nonzero(r) == 1

    def test_validation(self):
        with pytest.raises(DomainError):
            DensityMatrix([[1, 0.1], [0.2, 0]])  # not Hermitian
        with pytest.raises(DomainError):
            DensityMatrix([[0.6, 0], [0, 0.6]])  # trace 1.2
        with pytest.raises(DomainError):
            DensityMatrix([[1.1, 0], [0, -0.1]])  # negative eigenvalue

    def test_density_cap(self):
        with pytest.raises(ResourceError):
            to_density(basis_state(13, 0))

    def test_purity_examples(self):
        assert abs(purity(to_density(PLUS)) - 1) < 1e-12
        assert abs(purity(DensityMatrix(np.eye(2) / 2)) - 0.5) < 1e-15
        assert abs(purity(DensityMatrix(np.diag([0.9, 0.1]))) - 0.82) < 1e-15

    def test_purity_of_random_pure_states(self, rng):
        for n in range(1, 6):
            assert abs(purity(to_density(random_state(n, rng))) - 1) < 1e-10

    def test_purity_bounds_on_mixtures(self, rng):
        for n in (1, 2, 3):
            rhos = [to_density(random_state(n, rng)) for _ in range(5)]
            w = rng.dirichlet(np.ones(5))
            p = purity(mix(w, rhos))
            assert 2.0**-n - 1e-12 <= p <= 1 + 1e-12


class TestPartialTrace:
    def test_singlet_reduces_to_identity_half(self):
        rho_a = partial_trace(to_density(SINGLET), {0})
        np.testing.assert_allclose(rho_a.entries, np.eye(2) / 2, atol=1e-15)
        assert abs(purity(rho_a) - 0.5) < 1e-15

    def test_product_state_keep_plus_factor(self):
        # qubit 0 = |0>, qubit 1 = |+>
        v = basis_state(1, 0).tensor(PLUS)
        rho = partial_trace(to_density(v), {1})
        np.testing.assert_allclose(rho.entries, [[0.5, 0.5], [0.5, 0.5]], atol=1e-15)

    @pytest.mark.parametrize("keep", [set(), {0, 1}, {2}])
    def test_bad_keep_sets(self, keep):
        with pytest.raises(DomainError):
            partial_trace(to_density(BELL), keep)

    def test_matches_brute_force_sum(self, rng):
        for n in (2, 3, 4):
            for _ in range(5):
                rho = to_density(random_state(n, rng)).entries
                w = rng.dirichlet(np.ones(3))
                mixed = DensityMatrix(w[0] * rho + w[1] * np.eye(1 << n) / (1 << n)
                                      + w[2] * to_density(random_state(n, rng)).entries)
                size = int(rng.integers(1, n))
                keep = sorted(rng.choice(n, size=size, replace=False).tolist())
                got = partial_trace(mixed, keep)
                np.testing.assert_allclose(got.entries, brute_partial_trace(mixed.entries, n, keep),
                                           atol=1e-12)
                assert abs(got.trace() - 1) < 1e-12
                got.check()

    def test_product_states_factor_exactly(self, rng):
        for _ in range(20):
            na, nb = rng.integers(1, 4, size=2)
            u, v = random_state(int(na), rng), random_state(int(nb), rng)
            joint = u.tensor(v)  # u on the low qubits
            rho_u = partial_trace(to_density(joint), range(na))
            np.testing.assert_allclose(rho_u.entries, to_density(u).entries, atol=1e-12)
            rho_v = partial_trace(to_density(joint), range(na, na + nb))
            np.testing.assert_allclose(rho_v.entries, to_density(v).entries, atol=1e-12)

    def test_reduced_density_agrees_with_partial_trace(self, rng):
        v = random_state(5, rng)
        for keep in ([0], [1, 3], [0, 2, 4], [4]):
            np.testing.assert_allclose(reduced_density(v, keep).entries,
                                       partial_trace(to_density(v), keep).entries, atol=1e-12)


class TestMeasurement:
    def test_eigenstate_is_deterministic(self):
        for seed in range(20):
            rec = measure_all(basis_state(1, 1), seed)
            assert rec.outcome_index == 1 and rec.probability == 1
            assert rec.post_state == basis_state(1, 1)

    def test_plus_statistics(self):
        rng = np.random.default_rng(7)
        trials = 100_000
        zeros = sum(measure_all(PLUS, rng).outcome_index == 0 for _ in range(trials))
        assert 0.494 <= zeros / trials <= 0.506

    def test_bell_never_yields_mixed_bits(self):
        rng = np.random.default_rng(1)
        outcomes = {measure_all(BELL, rng).outcome_index for _ in range(2000)}
        assert outcomes == {0, 3}

    def test_probability_matches_amplitude(self, rng):
        v = random_state(4, rng)
        for _ in range(50):
            rec = measure_all(v, rng)
            assert abs(rec.probability - abs(v.amplitudes[rec.outcome_index]) ** 2) < 1e-12

    def test_same_seed_same_outcome(self):
        v = random_state(6, 0)
        assert [measure_all(v, s).outcome_index for s in range(30)] == \
               [measure_all(v, s).outcome_index for s in range(30)]

    def test_frequencies_converge_to_born_rule(self):
        rng = np.random.default_rng(99)
        v = random_state(3, rng)
        trials = 40_000
        counts = np.bincount([measure_all(v, rng).outcome_index for _ in range(trials)], minlength=8)
        p = v.probabilities()
        sigma = np.sqrt(p * (1 - p) / trials)
        assert np.all(np.abs(counts / trials - p) <= 4 * sigma + 1e-12)

    def test_measure_qubit_collapses_bell(self):
        seen = set()
        for seed in range(40):
            bit, post = measure_qubit(BELL, 0, seed)
            seen.add(bit)
            assert post == basis_state(2, 3 if bit else 0)
        assert seen == {0, 1}

    def test_measure_qubit_on_product_eigen_component(self):
        v = PLUS.tensor(basis_state(1, 0))  # |+> on qubit 0, |0> on qubit 1
        for seed in range(20):
            bit, post = measure_qubit(v, 1, seed)
            assert bit == 0
            assert post.allclose(v, atol=1e-15)

    def test_measure_qubit_single(self):
        bit, post = measure_qubit(basis_state(1, 1), 0, 3)
        assert bit == 1 and post == basis_state(1, 1)

    def test_measure_qubit_range(self):
        with pytest.raises(DomainError):
            measure_qubit(BELL, 2, 0)

    def test_project_rejects_impossible_branch(self):
        with pytest.raises(DomainError):
            project_qubit(basis_state(2, 0), 1, 1)
