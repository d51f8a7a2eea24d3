import numpy as np
import pytest

from isoflow import hessfn, matcore
from isoflow.errors import (NonzeroDiagonal, NotHermitian, ShapeMismatch,
                            SingularInput)


def random_hermitian(n, seed, real=False):
    rng = np.random.default_rng(seed)
    A = rng.standard_normal((n, n)).astype(complex)
    if not real:
        A = A + 1j * rng.standard_normal((n, n))
    return A + A.conj().T


class TestSkewProjection:
    def test_diagonal_maps_to_zero(self):
        assert np.all(matcore.skew_projection(np.diag([1.0, 2.0, 3.0])) == 0)

    def test_2x2(self):
        b = 0.4 - 0.3j
        L = np.array([[1.0, b], [np.conj(b), 2.0]])
        P = matcore.skew_projection(L)
        assert np.allclose(P, [[0, -b], [np.conj(b), 0]])

    def test_decomposition_unique(self):
        for seed in range(5):
            L = random_hermitian(5, seed)
            P = matcore.skew_projection(L)
            assert np.max(np.abs(P + P.conj().T)) < 1e-14
            upper = L - P
            assert np.max(np.abs(np.tril(upper, -1))) == 0

    def test_staircase_support_preserved(self):
        h = hessfn.validate((3, 3, 5, 6, 6, 6))
        L = matcore.random_staircase(h, seed=0)
        P = matcore.skew_projection(L.matrix)
        assert np.all(P[~matcore.staircase_mask(h)] == 0)

    def test_rejects_non_hermitian(self):
        with pytest.raises(NotHermitian):
            matcore.skew_projection(np.array([[0.0, 1.0], [0.0, 0.0]]))


class TestCommutator:
    def test_self_commutes(self):
        A = random_hermitian(4, 0)
        assert np.max(np.abs(matcore.commutator(A, A))) < 1e-12

    def test_diagonals_commute(self):
        a, b = np.diag([1.0, 2.0]), np.diag([5.0, 7.0])
        assert np.all(matcore.commutator(a, b) == 0)

    def test_hermitian_with_skew_is_hermitian_traceless(self):
        h = hessfn.h_min(3)
        L = matcore.random_staircase(h, seed=1).matrix
        C = matcore.commutator(L, matcore.skew_projection(L))
        assert np.max(np.abs(C - C.conj().T)) < 1e-13
        assert abs(np.trace(C)) < 1e-13
        assert np.all(np.abs(C[~matcore.staircase_mask(h)]) < 1e-15)

    def test_shape_mismatch(self):
        with pytest.raises(ShapeMismatch):
            matcore.commutator(np.eye(2), np.eye(3))


class TestJOperator:
    def test_zero(self):
        assert np.all(matcore.apply_J(np.zeros((4, 4))) == 0)

    def test_weights(self):
        om = np.zeros((3, 3), dtype=complex)
        om[0, 1], om[1, 0] = 1j, 1j       # superdiagonal weight 1
        om[0, 2], om[2, 0] = 2.0, -2.0    # corner weight 2
        J = matcore.apply_J(om)
        assert J[0, 1] == 1j and J[0, 2] == 4.0

    def test_inverse_roundtrip(self):
        rng = np.random.default_rng(0)
        om = rng.standard_normal((5, 5)) + 1j * rng.standard_normal((5, 5))
        om = om - om.conj().T
        np.fill_diagonal(om, 0.0)
        assert np.allclose(
            matcore.apply_J(matcore.apply_J_inverse(om)), om, atol=1e-14)

    def test_inverse_rejects_nonzero_diagonal(self):
        with pytest.raises(NonzeroDiagonal):
            matcore.apply_J_inverse(1j * np.eye(3))


class TestEigen:
    def test_diagonal_permutation(self):
        spec, U = matcore.hermitian_eigen(np.diag([3.0, 1.0, 2.0]))
        assert np.allclose(spec.values, [1, 2, 3])
        assert np.allclose(np.abs(U), np.eye(3)[:, [1, 2, 0]][[0, 1, 2]].T @
                           np.eye(3), atol=1e-12) or \
            np.allclose(np.sort(np.abs(U).ravel())[-3:], 1.0)

    def test_symmetric_2x2(self):
        spec, _ = matcore.hermitian_eigen(np.array([[0.0, 1.0], [1.0, 0.0]]))
        assert np.allclose(spec.values, [-1, 1])

    @pytest.mark.parametrize("seed", range(5))
    def test_residual_and_orthogonality(self, seed):
        L = random_hermitian(5, seed)
        spec, U = matcore.hermitian_eigen(L)
        scale = np.linalg.norm(L)
        assert np.linalg.norm(L @ U - U @ np.diag(spec.values)) < 1e-10 * scale
        assert np.max(np.abs(U.conj().T @ U - np.eye(5))) < 1e-10
        assert np.all(np.diff(spec.values) >= 0)

    def test_against_independent_solver(self):
        # numpy's LAPACK eigensolver as the independent oracle
        for seed in range(5):
            L = random_hermitian(7, seed)
            spec, _ = matcore.hermitian_eigen(L)
            assert np.allclose(spec.values, np.linalg.eigvalsh(L), atol=1e-11)

    def test_degenerate_flagged_not_fatal(self):
        spec, _ = matcore.hermitian_eigen(np.diag([1.0, 1.0, 5.0]))
        assert not spec.simple


class TestQR:
    def test_identity(self):
        Q, R = matcore.qr_positive(np.eye(4))
        assert np.allclose(Q, np.eye(4)) and np.allclose(R, np.eye(4))

    def test_unitary_input(self):
        rng = np.random.default_rng(3)
        M = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
        Q0, _ = matcore.qr_positive(M)
        Q, R = matcore.qr_positive(Q0)
        assert np.allclose(np.abs(np.diag(R)), 1.0, atol=1e-12)
        assert np.max(np.abs(R - np.diag(np.diag(R)))) < 1e-12

    @pytest.mark.parametrize("seed", range(5))
    def test_reconstruction(self, seed):
        rng = np.random.default_rng(seed)
        M = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
        Q, R = matcore.qr_positive(M)
        assert np.linalg.norm(M - Q @ R) < 1e-12 * np.linalg.norm(M)
        assert np.min(np.diag(R).real) > 0
        assert np.max(np.abs(np.diag(R).imag)) < 1e-13
        assert np.max(np.abs(Q.conj().T @ Q - np.eye(4))) < 1e-13

    def test_deterministic(self):
        rng = np.random.default_rng(9)
        M = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
        Q1, R1 = matcore.qr_positive(M)
        Q2, R2 = matcore.qr_positive(M.copy())
        assert np.array_equal(Q1, Q2) and np.array_equal(R1, R2)

    def test_perturbation_stability(self):
        rng = np.random.default_rng(11)
        M = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
        Q1, _ = matcore.qr_positive(M)
        Q2, _ = matcore.qr_positive(M + 1e-12 * rng.standard_normal((4, 4)))
        assert np.max(np.abs(Q1 - Q2)) < 1e-9

    def test_singular_rejected(self):
        with pytest.raises(SingularInput):
            matcore.qr_positive(np.zeros((3, 3)))


class TestExpm:
    def test_t_zero(self):
        L = random_hermitian(4, 0)
        assert np.allclose(matcore.expm_hermitian(L, 0.0), np.eye(4),
                           atol=1e-12)

    def test_diagonal(self):
        E = matcore.expm_hermitian(np.diag([1.0, -2.0]), 1.0)
        assert np.allclose(np.diag(E), np.exp([1.0, -2.0]))

    def test_inverse_product(self):
        for seed in range(3):
            L = random_hermitian(5, seed)
            prod = matcore.expm_hermitian(L, 1.0) @ matcore.expm_hermitian(L, -1.0)
            assert np.max(np.abs(prod - np.eye(5))) < 1e-10


class TestRandomStaircase:
    def test_reproducible(self):
        h = hessfn.validate((3, 3, 5, 6, 6, 6))
        a = matcore.random_staircase(h, seed=42)
        b = matcore.random_staircase(h, seed=42)
        assert np.array_equal(a.matrix, b.matrix)

    def test_pattern_exact_zero(self):
        h = hessfn.h_min(5)
        L = matcore.random_staircase(h, seed=0)
        assert np.all(L.matrix[~matcore.staircase_mask(h)] == 0)

    def test_real_mode(self):
        h = hessfn.h_min(4)
        L = matcore.random_staircase(h, seed=0, real_mode=True)
        assert np.all(L.matrix.imag == 0)

    @pytest.mark.parametrize("seed", range(50))
    def test_simple_spectrum(self, seed):
        h = hessfn.h_min(4)
        L = matcore.random_staircase(h, seed=seed)
        assert L.spectrum().simple

    def test_json_roundtrip(self):
        h = hessfn.h_min(3)
        L = matcore.random_staircase(h, seed=5)
        back = matcore.StaircaseHermitian.from_json(L.to_json())
        assert np.array_equal(back.matrix, L.matrix)
