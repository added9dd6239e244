import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from noisytele.states import bell_states, werner
from noisytele.tensor import (
    CNOT,
    H,
    I2,
    X,
    Z,
    check_physical,
    embed_apply,
    partial_trace,
    projector,
    replace_with_mixed,
    tensor,
)

from helpers import brute_lift, brute_partial_trace, random_density, random_unitary, seeds, square

ket0 = projector([1, 0])
ket1 = projector([0, 1])


class TestTensor:
    def test_identities(self):
        assert np.array_equal(tensor(I2, I2), np.eye(4))

    def test_basis(self):
        out = tensor(ket0, ket1)
        expected = np.zeros((4, 4))
        expected[1, 1] = 1
        assert np.array_equal(out, expected)

    def test_x_kron_z_entries(self):
        # X⊗Z = [[0, Z], [Z, 0]] in 2x2 blocks
        out = tensor(X, Z)
        assert out[0, 2] == 1
        assert out[1, 3] == -1
        assert out[2, 0] == 1
        assert out[3, 1] == -1
        assert np.count_nonzero(out) == 4

    def test_overflow_rejected(self):
        with pytest.raises(ValueError):
            tensor(np.eye(8), I2)

    def test_non_power_of_two_rejected(self):
        with pytest.raises(ValueError):
            tensor(np.eye(3), I2)

    @given(square(2), square(2), square(2))
    def test_associative(self, a, b, c):
        assert np.array_equal(tensor(tensor(a, b), c), tensor(a, tensor(b, c)))


class TestPartialTrace:
    def test_bell_reduction(self):
        assert np.allclose(partial_trace(bell_states()[0], keep={1}), I2 / 2, atol=1e-15)

    def test_product_factorization(self):
        rng = np.random.default_rng(4)
        ra, rb = random_density(rng, 2), random_density(rng, 4)
        assert np.allclose(partial_trace(tensor(ra, rb), keep={0}), ra, atol=1e-14)

    def test_werner_marginal(self):
        for keep in ({0}, {1}):
            assert np.allclose(partial_trace(werner(0.7), keep=keep), I2 / 2, atol=1e-15)

    def test_empty_keep_rejected(self):
        with pytest.raises(ValueError):
            partial_trace(np.eye(4) / 4, keep=set())

    def test_bad_index_rejected(self):
        with pytest.raises(ValueError):
            partial_trace(np.eye(4) / 4, keep={2})

    @pytest.mark.parametrize("keep", [[0], [1], [2], [0, 1], [0, 2], [1, 2], [0, 1, 2]])
    def test_matches_brute_force(self, keep):
        rho = random_density(np.random.default_rng(len(keep) * 10 + keep[0]), 8)
        assert np.allclose(partial_trace(rho, keep), brute_partial_trace(rho, 3, keep), atol=1e-14)

    @given(seeds)
    def test_left_block_of_product(self, seed):
        rng = np.random.default_rng(seed)
        a = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
        b = random_density(rng, 4)
        assert np.allclose(partial_trace(tensor(a, b), keep=[0]), a, atol=1e-12)

    @given(seeds, st.sampled_from([[0], [1], [2], [0, 2], [1, 2]]))
    def test_does_not_create_negativity(self, seed, keep):
        rho = random_density(np.random.default_rng(seed), 8, rank=1)
        before = min(check_physical(rho).min_eigenvalue, 0)
        assert check_physical(partial_trace(rho, keep)).min_eigenvalue >= before - 1e-10


class TestEmbedApply:
    def test_identity(self):
        rho = random_density(np.random.default_rng(0), 8)
        assert np.allclose(embed_apply(rho, I2, [1]), rho, atol=1e-15)

    def test_basis_flip(self):
        rho = np.zeros((8, 8))
        rho[0, 0] = 1
        out = embed_apply(rho, X, [2])
        expected = np.zeros((8, 8))
        expected[1, 1] = 1
        assert np.allclose(out, expected)

    def test_cnot_on_message_and_bell_pair(self):
        psi = projector([0.6, 0.8j])
        rho = embed_apply(tensor(psi, bell_states()[0]), CNOT, [0, 1])
        assert np.allclose(partial_trace(rho, keep={2}), I2 / 2, atol=1e-15)

    def test_rejects_non_unitary(self):
        with pytest.raises(ValueError):
            embed_apply(np.eye(2) / 2, np.array([[1, 1], [0, 1]]), [0])

    def test_rejects_shape_mismatch(self):
        with pytest.raises(ValueError):
            embed_apply(np.eye(4) / 4, CNOT, [0])

    @settings(max_examples=50)
    @given(seeds, st.permutations([0, 1, 2]), st.integers(1, 2))
    def test_matches_lifted_matrix(self, seed, order, k):
        rng = np.random.default_rng(seed)
        targets = list(order[:k])
        u = random_unitary(rng, 2**k)
        rho = random_density(rng, 8)
        U = brute_lift(u, 3, targets)
        assert np.allclose(embed_apply(rho, u, targets), U @ rho @ U.conj().T, atol=1e-12)

    @given(seeds)
    def test_trace_preserved(self, seed):
        rng = np.random.default_rng(seed)
        rho = random_density(rng, 8)
        out = embed_apply(rho, random_unitary(rng, 4), [2, 0])
        assert abs(np.trace(out) - np.trace(rho)) <= 1e-12


class TestReplaceWithMixed:
    def test_product_state(self):
        rng = np.random.default_rng(1)
        a, b = random_density(rng, 2), random_density(rng, 4)
        assert np.allclose(replace_with_mixed(tensor(a, b), [0]), tensor(I2 / 2, b), atol=1e-15)

    def test_middle_qubit_matches_brute_force(self):
        rho = random_density(np.random.default_rng(2), 8)
        out = replace_with_mixed(rho, [1])
        assert np.allclose(partial_trace(out, [0, 2]), brute_partial_trace(rho, 3, [0, 2]), atol=1e-14)
        assert np.allclose(partial_trace(out, [1]), I2 / 2, atol=1e-14)


class TestCheckPhysical:
    def test_maximally_mixed(self):
        d = check_physical(I2 / 2)
        assert d.trace_deviation == 0
        assert d.hermiticity_deviation == 0
        assert d.min_eigenvalue == pytest.approx(0.5, abs=1e-15)

    def test_pure(self):
        assert abs(check_physical(ket0).min_eigenvalue) <= 1e-15

    def test_reports_without_raising(self):
        d = check_physical(np.array([[2, 1], [0, -1]], dtype=complex))
        assert not d.ok()
        assert d.trace_deviation == 0
        assert d.hermiticity_deviation == 1

    def test_hadamard_state(self):
        plus = H @ ket0 @ H
        assert check_physical(plus).ok()
