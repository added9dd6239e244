import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from noisytele.fidelity import average_fidelity_exact
from noisytele.noise import NoiseParams, choi_trace_deviation
from noisytele.oracle import enumerate_map
from noisytele.protocol import (
    ProtocolSchedule,
    correction_for,
    effective_channel,
    paper_output_state,
    run_protocol,
)
from noisytele.states import PureQubit, bloch_qubit, haar_random_qubit
from noisytele.tensor import I2, X, Y, Z, check_physical

from helpers import grid5, random_density, seeds, unit

params_st = st.builds(NoiseParams, unit, unit, unit, unit)
IDEAL = NoiseParams()


class TestCorrection:
    def test_table(self):
        assert np.array_equal(correction_for(0, 0), I2)
        assert np.array_equal(correction_for(0, 1), X)
        assert np.array_equal(correction_for(1, 0), Z)
        assert np.allclose(correction_for(1, 1), Z @ X)
        assert np.allclose(correction_for(1, 1), 1j * Y)

    @pytest.mark.parametrize("m1,m2", list(itertools.product((0, 1), repeat=2)))
    def test_unitary(self, m1, m2):
        u = correction_for(m1, m2)
        assert np.allclose(u @ u.conj().T, I2)

    def test_rejects_non_bits(self):
        with pytest.raises(ValueError):
            correction_for(2, 0)


class TestRunProtocol:
    @given(seeds)
    def test_ideal_recovery(self, seed):
        psi = haar_random_qubit(seed)
        res = run_protocol(psi, IDEAL)
        assert np.allclose(res.averaged, psi.density(), rtol=0, atol=1e-12)

    @settings(max_examples=25)
    @given(seeds, unit, unit, unit)
    def test_uncorrelated_resource(self, seed, p1, p2, eta):
        res = run_protocol(haar_random_qubit(seed), NoiseParams(p1, p2, eta, 0.25))
        assert np.allclose(res.averaged, I2 / 2, rtol=0, atol=1e-12)

    def test_cnot_noise_only(self):
        assert average_fidelity_exact(effective_channel(NoiseParams(1, 0.9, 1, 1))).value == pytest.approx(0.95, abs=1e-12)
        assert enumerate_map(NoiseParams(1, 0.9, 1, 1)).haar_average_fidelity() == pytest.approx(0.95, abs=1e-12)

    @pytest.mark.parametrize("values", list(itertools.product(grid5, repeat=4))[::7])
    def test_probabilities_sum_to_one(self, values):
        res = run_protocol(bloch_qubit(1.1, 0.4), NoiseParams(*values))
        assert abs(sum(b.probability for b in res.branches) - 1) <= 1e-12
        assert all(b.probability >= 0 for b in res.branches)
        assert check_physical(res.averaged).ok()
        assert np.allclose(res.averaged, sum(b.probability * b.bob_state for b in res.branches), atol=0)

    @given(seeds, st.floats(0, 2 * np.pi), params_st)
    def test_global_phase_blind(self, seed, phase, params):
        psi = haar_random_qubit(seed)
        shifted = PureQubit(psi.alpha * np.exp(1j * phase), psi.beta * np.exp(1j * phase))
        a = run_protocol(psi, params).averaged
        b = run_protocol(shifted, params).averaged
        assert np.allclose(a, b, rtol=0, atol=1e-12)

    def test_every_branch_recovers_without_noise(self):
        off = ProtocolSchedule(False, False, False, False, False)
        psi = haar_random_qubit(99)
        noisy = NoiseParams(0.3, 0.4, 0.5, 1.0)
        for params, schedule in ((noisy, off), (NoiseParams(eta=0.6), ProtocolSchedule(measurement_noisy=False))):
            res = run_protocol(psi, params, schedule)
            assert len(res.branches) == 4
            for b in res.branches:
                assert b.probability == pytest.approx(0.25, abs=1e-12)
                assert np.allclose(b.bob_state, psi.density(), rtol=0, atol=1e-12)

    def test_ideal_identity_flag(self):
        params = NoiseParams(0.5, 1, 1, 1)
        psi = bloch_qubit(0.7, 1.9)
        default = run_protocol(psi, params).probabilities
        assert set(default) == {(0, 0), (0, 1), (1, 0), (1, 1)}
        a = run_protocol(psi, params, ProtocolSchedule(apply_noisy_identity_correction=False))
        b = run_protocol(psi, params)
        assert not np.allclose(a.averaged, b.averaged)


class TestEffectiveChannel:
    def test_ideal_is_identity(self):
        ch = effective_channel(IDEAL)
        rho = random_density(np.random.default_rng(0), 2)
        assert np.allclose(ch(rho), rho, atol=1e-12)

    def test_uncorrelated_is_constant(self):
        ch = effective_channel(NoiseParams(0.7, 0.6, 0.9, 0.25))
        for i, j in itertools.product(range(2), repeat=2):
            expected = I2 / 2 if i == j else np.zeros((2, 2))
            assert np.allclose(ch.units[i, j], expected, atol=1e-12)

    @given(seeds, params_st)
    @settings(max_examples=20)
    def test_linearity(self, seed, params):
        ch = effective_channel(params)
        rng = np.random.default_rng(seed)
        r1, r2 = random_density(rng, 2), random_density(rng, 2)
        assert np.allclose(ch((r1 + r2) / 2), (ch(r1) + ch(r2)) / 2, rtol=0, atol=1e-12)

    @given(seeds, params_st)
    @settings(max_examples=20)
    def test_agrees_with_direct_run(self, seed, params):
        psi = haar_random_qubit(seed)
        ch = effective_channel(params)
        assert np.allclose(ch(psi.density()), run_protocol(psi, params).averaged, rtol=0, atol=1e-12)

    def test_cptp_on_grid(self):
        for values in itertools.product([0.0, 1 / 3, 2 / 3, 1.0], repeat=4):
            ch = effective_channel(NoiseParams(*values))
            J = ch.choi()
            assert np.linalg.eigvalsh(J)[0] >= -1e-10, values
            assert choi_trace_deviation(J, 1) <= 1e-12, values


class TestPaperOutputState:
    def test_ideal(self):
        psi = haar_random_qubit(5)
        assert np.allclose(paper_output_state(psi, IDEAL), psi.density(), atol=1e-15)

    def test_unit_trace_grid(self):
        psi = bloch_qubit(2.0, 5.0)
        for values in itertools.product(grid5, repeat=4):
            out = paper_output_state(psi, NoiseParams(*values))
            assert abs(np.trace(out) - 1) <= 1e-12

    @pytest.mark.parametrize("F", grid5)
    def test_perfect_readout(self, F):
        psi = haar_random_qubit(6)
        q = (4 * F - 1) / 3
        expected = q * psi.density() + (1 - q) / 2 * I2
        assert np.allclose(paper_output_state(psi, NoiseParams(1, 1, 1, F)), expected, atol=1e-15)

    def test_physical_at_point(self):
        out = paper_output_state(bloch_qubit(0.3, 0.2), NoiseParams(0.9, 0.9, 0.9, 0.9))
        assert check_physical(out).trace_deviation < 1e-12
