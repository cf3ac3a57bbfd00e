import math

import numpy as np
import pytest

from conftest import dense_embed
from qcomp import gates as G
from qcomp.errors import DomainError
from qcomp.noise import (
    NoiseChannel,
    apply_bit_flips,
    apply_channel,
    decode_bitflip3,
    decoherence_timescale,
    encode_bitflip3,
    logical_error_rate,
    measure_syndrome,
    predicted_logical_rate,
    sample_pauli_error,
    sample_pauli_errors,
    syndrome_correct,
)
from qcomp.qstate import DensityMatrix, StateVector, fidelity, mix, random_state, to_density

S = 1 / math.sqrt(2)
PLUS = StateVector([S, S])
PAULI = {k: G.pauli(k).matrix for k in "XYZ"}


def kraus_oracle(rho: np.ndarray, weights, q: int, n: int) -> np.ndarray:
    out = weights[0] * rho
    for w, k in zip(weights[1:], "XYZ"):
        p = dense_embed(PAULI[k], [q], n)
        out = out + w * p @ rho @ p.conj().T
    return out


class TestChannels:
    def test_bit_flip_on_zero(self):
        out = apply_channel(to_density(StateVector([1, 0])), NoiseChannel("bit_flip", 0.3), 0)
        np.testing.assert_allclose(out.entries, np.diag([0.7, 0.3]), atol=1e-15)

    def test_phase_flip_on_plus(self):
        out = apply_channel(to_density(PLUS), NoiseChannel("phase_flip", 0.5), 0)
        np.testing.assert_allclose(out.entries, np.eye(2) / 2, atol=1e-15)

    def test_full_depolarizing_mixes_fully(self, rng):
        rho = to_density(random_state(1, rng))
        out = apply_channel(rho, NoiseChannel("depolarizing", 0.75), 0)
        np.testing.assert_allclose(out.entries, np.eye(2) / 2, atol=1e-14)

    def test_dephasing_scales_coherences(self):
        out = apply_channel(to_density(PLUS), NoiseChannel("dephasing", 0.4), 0)
        np.testing.assert_allclose(out.entries, [[0.5, 0.3], [0.3, 0.5]], atol=1e-15)
        full = apply_channel(to_density(PLUS), NoiseChannel("dephasing", 1.0), 0)
        np.testing.assert_allclose(full.entries, np.eye(2) / 2, atol=1e-15)

    @pytest.mark.parametrize("kind", ["bit_flip", "phase_flip", "depolarizing", "dephasing"])
    def test_matches_kraus_oracle(self, kind, rng):
        for _ in range(10):
            n = int(rng.integers(1, 5))
            q = int(rng.integers(n))
            ch = NoiseChannel(kind, float(rng.uniform()))
            rho = to_density(random_state(n, rng))
            out = apply_channel(rho, ch, q)
            np.testing.assert_allclose(out.entries, kraus_oracle(rho.entries, ch.pauli_weights(), q, n),
                                       atol=1e-12)

    @pytest.mark.parametrize("kind", ["bit_flip", "phase_flip", "depolarizing", "dephasing"])
    def test_trace_preserving_and_linear(self, kind, rng):
        ch = NoiseChannel(kind, 0.37)
        a, b = to_density(random_state(2, rng)), to_density(random_state(2, rng))
        w = 0.3
        lhs = apply_channel(mix([w, 1 - w], [a, b]), ch, 1).entries
        rhs = w * apply_channel(a, ch, 1).entries + (1 - w) * apply_channel(b, ch, 1).entries
        np.testing.assert_allclose(lhs, rhs, atol=1e-14)
        assert abs(np.trace(lhs) - 1) < 1e-14

    def test_zero_strength_is_identity(self, rng):
        rho = to_density(random_state(3, rng))
        for kind in ("bit_flip", "phase_flip", "depolarizing", "dephasing"):
            np.testing.assert_allclose(apply_channel(rho, NoiseChannel(kind, 0.0), 2).entries, rho.entries)

    def test_validation(self):
        with pytest.raises(DomainError):
            NoiseChannel("amplitude_damping", 0.1)
        with pytest.raises(DomainError):
            NoiseChannel("bit_flip", 1.5)
        with pytest.raises(DomainError):
            apply_channel(DensityMatrix(np.eye(2) / 2), NoiseChannel("bit_flip", 0.1), 1)


class TestSampling:
    def test_frequencies(self):
        ch = NoiseChannel("depolarizing", 0.3)
        codes = sample_pauli_errors(ch, 200_000, 8)
        freq = np.bincount(codes, minlength=4) / codes.size
        sigma = np.sqrt(ch.pauli_weights() * (1 - ch.pauli_weights()) / codes.size)
        assert np.all(np.abs(freq - ch.pauli_weights()) <= 4 * sigma)

    def test_labels_and_determinism(self):
        ch = NoiseChannel("bit_flip", 0.5)
        labels = sample_pauli_error(ch, 20, 3)
        assert len(labels) == 20 and set(labels) <= {"I", "X"}
        assert labels == sample_pauli_error(ch, 20, 3)


class TestBitFlipCode:
    def test_encoding(self):
        code = encode_bitflip3(StateVector([0.6, 0.8]))
        expected = np.zeros(8)
        expected[0], expected[7] = 0.6, 0.8
        np.testing.assert_allclose(code.amplitudes, expected, atol=1e-15)
        np.testing.assert_allclose(decode_bitflip3(code).amplitudes, [0.6, 0.8], atol=1e-15)

    def test_every_single_flip_is_corrected(self, rng):
        for _ in range(50):
            psi = random_state(1, rng)
            code = encode_bitflip3(psi)
            for q, syn in ((None, (0, 0)), (0, (1, 0)), (1, (1, 1)), (2, (0, 1))):
                flips = [int(i == q) for i in range(3)]
                got, fixed = measure_syndrome(apply_bit_flips(code, flips), rng)
                assert got == syn
                assert abs(fidelity(fixed, code) - 1) < 1e-12
                assert abs(fidelity(decode_bitflip3(fixed), psi) - 1) < 1e-12

    def test_syndrome_reveals_nothing_about_the_state(self):
        # syndromes for |0>_L and |+>_L under the same flip are identical
        zero, plus = encode_bitflip3(StateVector([1, 0])), encode_bitflip3(PLUS)
        for flips in ([0, 0, 0], [1, 0, 0], [0, 1, 0], [0, 0, 1], [1, 1, 0]):
            a = {measure_syndrome(apply_bit_flips(zero, flips), s)[0] for s in range(10)}
            b = {measure_syndrome(apply_bit_flips(plus, flips), s)[0] for s in range(10)}
            assert a == b and len(a) == 1

    def test_two_flips_cause_logical_error(self, rng):
        psi = StateVector([0.6, 0.8])
        code = encode_bitflip3(psi)
        for flips in ([1, 1, 0], [0, 1, 1], [1, 0, 1], [1, 1, 1]):
            fixed = syndrome_correct(apply_bit_flips(code, flips), rng)
            assert fidelity(fixed, code) < 0.99
            # ends up in the logically flipped codeword
            flipped = encode_bitflip3(StateVector([0.8, 0.6]))
            assert abs(fidelity(fixed, flipped) - 1) < 1e-12

    def test_decode_rejects_non_codeword(self):
        with pytest.raises(DomainError):
            decode_bitflip3(apply_bit_flips(encode_bitflip3(PLUS), [0, 1, 0]))


class TestLogicalRate:
    def test_formula(self):
        assert predicted_logical_rate(0) == 0
        assert abs(predicted_logical_rate(0.5) - 0.5) < 1e-15
        assert abs(predicted_logical_rate(0.1) - 0.028) < 1e-15

    def test_monte_carlo_small(self):
        stats = logical_error_rate(0.1, 20_000, 5)
        sigma = math.sqrt(stats.predicted_rate * (1 - stats.predicted_rate) / stats.trials)
        assert abs(stats.logical_rate - stats.predicted_rate) < 4 * sigma

    def test_extremes(self):
        assert logical_error_rate(0.0, 500, 1).logical_failures == 0
        assert logical_error_rate(1.0, 500, 1).logical_failures == 500

    def test_seeded(self):
        assert logical_error_rate(0.2, 3000, 9) == logical_error_rate(0.2, 3000, 9)

    def test_batch_size_independent_of_count(self):
        assert logical_error_rate(0.2, 999, 2, batch_size=100).trials == 999


class TestDecoherence:
    def test_values(self):
        assert abs(decoherence_timescale(1.0) - 0.76e-11) < 1e-24
        assert abs(decoherence_timescale(300.0) - 0.76e-11 / 300) < 1e-26

    @pytest.mark.parametrize("t", [0.0, -1.0, float("inf"), float("nan")])
    def test_domain(self, t):
        with pytest.raises(DomainError):
            decoherence_timescale(t)
