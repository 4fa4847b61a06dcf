import numpy as np
import pytest
from numpy.linalg import LinAlgError

from lreig.densekit import Tolerances, eig_dense, symmetric_eig
from lreig.lowrank import FactorPair, lowrank_eig, residual, spectral_mismatch
from lreig.symmetric import (
    ReducedSymmetric,
    SignDiagonal,
    SymmetricFactorization,
    apply_congruence,
    generalized_spd_eig,
    reduce_to_sign,
    symmetric_lowrank_eig,
)


def random_symmetric_fixture(rng, n, r):
    """SymmetricFactorization with mixed-sign, well-separated middle factor."""
    atilde = rng.standard_normal((n, r))
    picks = rng.uniform(0.5, 2.0, r) * rng.choice([-1.0, 1.0], r)
    if r >= 2:  # force mixed inertia
        picks[0] = abs(picks[0])
        picks[1] = -abs(picks[1])
    basis, _ = np.linalg.qr(rng.standard_normal((r, r)))
    stilde = (basis * picks) @ basis.T
    return SymmetricFactorization(atilde, (stilde + stilde.T) / 2.0)


class TestSignDiagonal:
    def test_validation(self):
        s = SignDiagonal(np.array([1, -1, 1]))
        assert s.inertia == (2, 1)
        assert np.array_equal(s.matrix(), np.diag([1.0, -1.0, 1.0]))

    def test_rejects_non_unit_entries(self):
        with pytest.raises(ValueError, match=r"\+1 or -1"):
            SignDiagonal(np.array([1, 0]))


class TestSymmetricFactorization:
    def test_rejects_asymmetric_middle(self):
        with pytest.raises(ValueError, match="Hermitian"):
            SymmetricFactorization(np.eye(2), np.array([[1.0, 1.0], [0.0, 1.0]]))

    def test_rejects_singular_middle(self):
        with pytest.raises(ValueError, match="singular"):
            SymmetricFactorization(np.eye(2), np.diag([1.0, 0.0]))


class TestReduceToSign:
    def test_identity(self):
        wc, s = reduce_to_sign(np.eye(2))
        assert np.allclose(wc, np.eye(2))
        assert s.signs.tolist() == [1, 1]

    def test_diagonal_two_by_two(self):
        wc, s = reduce_to_sign(np.diag([2.0, -3.0]))
        assert np.allclose(wc, np.diag([1 / np.sqrt(2), 1 / np.sqrt(3)]), atol=1e-15)
        assert s.signs.tolist() == [1, -1]
        assert np.allclose(wc @ np.diag([2.0, -3.0]) @ wc.T, np.diag([1.0, -1.0]))

    def test_random_congruence_identity_and_inertia(self):
        rng = np.random.default_rng(61)
        for _ in range(20):
            g = rng.standard_normal((5, 5))
            stilde = g + g.T + np.diag(rng.choice([-4.0, 4.0], 5))
            d, _ = symmetric_eig(stilde)
            if np.abs(d).min() < 1e-6:
                continue
            wc, s = reduce_to_sign(stilde)
            nrm = np.linalg.norm(stilde)
            got = wc @ stilde @ wc.T
            assert np.linalg.norm(got - np.diag(s.signs.astype(float))) <= 1e-12 * nrm
            # Sylvester: sign counts match the eigenvalue sign counts
            assert s.inertia == (int((d > 0).sum()), int((d < 0).sum()))
            # canonical order: +1 entries first
            flips = np.diff(s.signs)
            assert (flips <= 0).all()

    def test_singular_rejected(self):
        with pytest.raises(LinAlgError, match="singular"):
            reduce_to_sign(np.diag([1.0, 0.0]))

    def test_non_hermitian_rejected(self):
        with pytest.raises(ValueError, match="Hermitian"):
            reduce_to_sign(np.array([[1.0, 2.0], [0.0, 1.0]]))


class TestApplyCongruence:
    def test_identity_congruence(self):
        fact = SymmetricFactorization(np.ones((3, 1)), np.eye(1))
        reduced = apply_congruence(fact, np.eye(1), SignDiagonal(np.array([1])))
        assert np.array_equal(reduced.a, fact.atilde)

    def test_diagonal_case(self):
        fact = SymmetricFactorization(np.eye(2), np.diag([2.0, -3.0]))
        wc, s = reduce_to_sign(fact.stilde)
        reduced = apply_congruence(fact, wc, s)
        assert np.allclose(reduced.a, np.diag([np.sqrt(2), np.sqrt(3)]), atol=1e-15)
        got = reduced.a @ np.diag([1.0, -1.0]) @ reduced.a.T
        assert np.allclose(got, np.diag([2.0, -3.0]), atol=1e-14)

    def test_random_reconstruction(self):
        rng = np.random.default_rng(67)
        fact = random_symmetric_fixture(rng, 8, 3)
        wc, s = reduce_to_sign(fact.stilde)
        reduced = apply_congruence(fact, wc, s)
        x_ref = fact.atilde @ fact.stilde @ fact.atilde.T
        x_got = reduced.a @ np.diag(s.signs.astype(float)) @ reduced.a.T
        bound = 1e-11 * np.linalg.norm(fact.atilde) ** 2 * np.linalg.norm(fact.stilde)
        assert np.linalg.norm(x_got - x_ref) <= bound

    def test_ill_conditioned_congruence_rejected(self):
        fact = SymmetricFactorization(np.eye(2), np.eye(2))
        bad = np.diag([1.0, 1e-200])
        with pytest.raises(LinAlgError, match="cond"):
            apply_congruence(fact, bad, SignDiagonal(np.array([1, 1])))


class TestGeneralizedSpdEig:
    def test_identity_pencil(self):
        v, lam = generalized_spd_eig(np.eye(3), SignDiagonal(np.array([1, 1, 1])))
        assert np.allclose(lam, [1.0, 1.0, 1.0])
        assert np.allclose(v.T @ v, np.eye(3), atol=1e-13)

    def test_diagonal_mixed_signs(self):
        v, lam = generalized_spd_eig(np.diag([4.0, 1.0]), SignDiagonal(np.array([1, -1])))
        assert np.allclose(lam, [4.0, -1.0], atol=1e-14)
        assert np.allclose(np.abs(v), np.diag([0.5, 1.0]), atol=1e-14)
        g = np.diag([4.0, 1.0])
        s = np.diag([1.0, -1.0])
        assert np.allclose(v.T @ g @ v, np.eye(2), atol=1e-14)
        assert np.allclose(v.T @ s @ v, np.diag(1.0 / lam), atol=1e-14)

    def test_random_spd_identities_and_inertia(self):
        rng = np.random.default_rng(71)
        for _ in range(20):
            g0 = rng.standard_normal((6, 6))
            g = g0 @ g0.T + np.eye(6)
            signs = SignDiagonal(rng.choice([-1, 1], 6))
            v, lam = generalized_spd_eig(g, signs)
            assert np.linalg.norm(v.T @ g @ v - np.eye(6)) <= 1e-11 * np.linalg.norm(g)
            assert np.linalg.norm(v.T @ signs.matrix() @ v - np.diag(1.0 / lam)) <= 1e-11
            assert np.isrealobj(lam) and (lam != 0).all()
            pos = int((lam > 0).sum())
            assert (pos, 6 - pos) == signs.inertia
            # ordering contract: descending magnitude
            assert (np.diff(np.abs(lam)) <= 1e-12 * np.abs(lam).max()).all()

    def test_indefinite_left_member_rejected(self):
        with pytest.raises(LinAlgError, match="positive definite"):
            generalized_spd_eig(np.diag([1.0, -1.0]), SignDiagonal(np.array([1, 1])))

    def test_pencil_matches_nonsymmetric_product(self):
        rng = np.random.default_rng(73)
        g0 = rng.standard_normal((5, 5))
        g = g0 @ g0.T + np.eye(5)
        signs = SignDiagonal(rng.choice([-1, 1], 5))
        _, lam = generalized_spd_eig(g, signs)
        product_values, _ = eig_dense(g @ signs.matrix())
        assert spectral_mismatch(lam, product_values) <= 1e-10 * np.abs(lam).max()


class TestSymmetricLowrankEig:
    def test_rank_one_unit(self):
        reduced = ReducedSymmetric(
            np.array([[1.0], [0.0], [0.0]]), SignDiagonal(np.array([1]))
        )
        lam, w = symmetric_lowrank_eig(reduced)
        assert np.allclose(lam, [1.0])
        assert np.allclose(np.abs(w), [[1.0], [0.0], [0.0]])

    def test_embedded_diagonal_fixture(self):
        a = np.zeros((4, 2))
        a[0, 0] = np.sqrt(2)
        a[1, 1] = np.sqrt(3)
        reduced = ReducedSymmetric(a, SignDiagonal(np.array([1, -1])))
        lam, w = symmetric_lowrank_eig(reduced)
        # x = diag(2, -3, 0, 0); pairs are (2, e1) and (-3, e2)
        pairs = {round(float(val)): i for i, val in enumerate(lam)}
        assert set(pairs) == {2, -3}
        assert np.allclose(np.abs(w[:, pairs[2]]), [1.0, 0.0, 0.0, 0.0], atol=1e-14)
        assert np.allclose(np.abs(w[:, pairs[-3]]), [0.0, 1.0, 0.0, 0.0], atol=1e-14)
        # ordering contract puts |-3| before |2|
        assert np.allclose(lam, [-3.0, 2.0], atol=1e-14)

    def test_random_fixture_matches_dense_oracle(self):
        rng = np.random.default_rng(79)
        fact = random_symmetric_fixture(rng, 50, 5)
        wc, s = reduce_to_sign(fact.stilde)
        reduced = apply_congruence(fact, wc, s)
        lam, w = symmetric_lowrank_eig(reduced)
        x = fact.atilde @ fact.stilde @ fact.atilde.T
        dense_values, _ = symmetric_eig(x)
        dense_kept = dense_values[np.argsort(-np.abs(dense_values))[:5]]
        assert spectral_mismatch(lam, dense_kept) <= 1e-9 * np.abs(lam).max()
        assert np.linalg.norm(w.T @ w - np.eye(5)) <= 1e-10
        # residuals without forming x
        signed = reduced.a * s.signs
        pair = FactorPair(signed, reduced.a.T)
        for i in range(lam.size):
            assert residual(pair, lam[i], w[:, i]) <= 1e-9

    def test_rank_deficient_factor_rejected(self):
        a = np.zeros((4, 2))
        a[:, 0] = [1.0, 0.0, 0.0, 0.0]
        a[:, 1] = [1.0, 0.0, 0.0, 0.0]
        reduced = ReducedSymmetric(a, SignDiagonal(np.array([1, -1])))
        with pytest.raises(LinAlgError, match="rank"):
            symmetric_lowrank_eig(reduced)

    def test_realness_against_nonsymmetric_path(self):
        rng = np.random.default_rng(83)
        fact = random_symmetric_fixture(rng, 30, 4)
        wc, s = reduce_to_sign(fact.stilde)
        reduced = apply_congruence(fact, wc, s)
        lam, _ = symmetric_lowrank_eig(reduced)
        assert np.isrealobj(lam)
        pair = FactorPair(reduced.a * s.signs, reduced.a.T)
        general = lowrank_eig(pair, cfg=Tolerances()).eigenvalues
        assert general.size == lam.size
        assert spectral_mismatch(lam, general) <= 1e-9 * np.abs(lam).max()

    def test_hermitian_complex_path(self):
        rng = np.random.default_rng(89)
        atilde = rng.standard_normal((12, 3)) + 1j * rng.standard_normal((12, 3))
        stilde = np.diag([2.0, -1.0, 0.5])
        fact = SymmetricFactorization(atilde, stilde)
        wc, s = reduce_to_sign(fact.stilde)
        reduced = apply_congruence(fact, wc, s)
        lam, w = symmetric_lowrank_eig(reduced)
        assert np.isrealobj(lam)
        assert np.linalg.norm(w.conj().T @ w - np.eye(3)) <= 1e-10
        x = atilde @ stilde @ atilde.conj().T
        dense_values, _ = symmetric_eig(x)
        dense_kept = dense_values[np.argsort(-np.abs(dense_values))[:3]]
        assert spectral_mismatch(lam, dense_kept) <= 1e-9 * np.abs(lam).max()
