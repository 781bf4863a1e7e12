import numpy as np
import pytest

from sofpalm import (
    SingularFeedbackEquationError,
    UnstableCoefficientError,
    solve_feedback_equation,
    solve_lyapunov,
    solve_lyapunov_pair,
)

from oracles import kron_feedback, kron_lyapunov, random_hurwitz, random_psd, random_spd


class TestSolveLyapunov:
    def test_scalar(self):
        sol = solve_lyapunov(np.array([[-1.0]]), np.array([[1.0]]))
        assert sol.X[0, 0] == pytest.approx(0.5)

    def test_minus_identity(self):
        sol = solve_lyapunov(-np.eye(2), np.eye(2))
        np.testing.assert_allclose(sol.X, 0.5 * np.eye(2), atol=1e-14)

    def test_matches_kron_oracle(self, rng):
        M = random_hurwitz(rng, 6)
        W = random_psd(rng, 6)
        sol = solve_lyapunov(M, W)
        np.testing.assert_allclose(sol.X, kron_lyapunov(M, W), atol=1e-8)

    def test_linearity(self, rng):
        M = random_hurwitz(rng, 5)
        W1 = random_psd(rng, 5)
        W2 = random_psd(rng, 5)
        X12 = solve_lyapunov(M, W1 + W2).X
        X1 = solve_lyapunov(M, W1).X
        X2 = solve_lyapunov(M, W2).X
        np.testing.assert_allclose(X12, X1 + X2,
                                   atol=1e-10 * (1 + np.abs(X12).max()))

    @pytest.mark.parametrize("n", range(2, 9))
    def test_residual_and_psd(self, n, rng):
        for _ in range(10):
            M = random_hurwitz(rng, n)
            W = random_psd(rng, n)
            sol = solve_lyapunov(M, W)
            assert sol.residual_norm <= 1e-9 * (1 + np.linalg.norm(W, "fro"))
            np.testing.assert_allclose(sol.X, sol.X.T, atol=1e-12)
            assert np.linalg.eigvalsh(sol.X).min() >= -1e-9

    def test_unstable_coefficient_rejected(self):
        with pytest.raises(UnstableCoefficientError,
                           match="unstable coefficient matrix"):
            solve_lyapunov(np.array([[1.0]]), np.array([[1.0]]))

    def test_marginal_coefficient_rejected(self):
        M = np.array([[0.0, 1.0], [-1.0, 0.0]])
        with pytest.raises(UnstableCoefficientError):
            solve_lyapunov(M, np.eye(2))

    def test_asymmetric_w_rejected(self):
        with pytest.raises(ValueError):
            solve_lyapunov(-np.eye(2), np.array([[1.0, 1.0], [0.0, 1.0]]))


class TestSolveLyapunovPair:
    def test_matches_single_solves(self, rng):
        M = random_hurwitz(rng, 7)
        Wf = random_psd(rng, 7)
        Wa = random_psd(rng, 7)
        sol_f, sol_a = solve_lyapunov_pair(M, Wf, Wa)
        np.testing.assert_allclose(sol_f.X, solve_lyapunov(M, Wf).X,
                                   atol=1e-12)
        np.testing.assert_allclose(sol_a.X, solve_lyapunov(M.T, Wa).X,
                                   atol=1e-12)
        assert sol_a.residual_norm <= 1e-9 * (1 + np.linalg.norm(Wa, "fro"))


class TestSolveFeedbackEquation:
    def test_scalar_example(self):
        # 2 (F - 1) * 1 + 2 (F - 0) = 0  =>  F = 0.5
        F = solve_feedback_equation(np.eye(1), np.eye(1), np.eye(1),
                                    2.0, np.zeros((1, 1)))
        assert F[0, 0] == pytest.approx(0.5)

    def test_c_zero_reduces_to_weighted_solve(self, rng):
        R = random_spd(rng, 3)
        G = rng.standard_normal((3, 4))
        F = solve_feedback_equation(R, np.eye(4), G, 0.0, np.zeros((3, 4)))
        np.testing.assert_allclose(F, np.linalg.solve(R, G), atol=1e-10)

    def test_matches_kron_oracle(self, rng):
        R = random_spd(rng, 3)
        L = random_psd(rng, 4)
        G = rng.standard_normal((3, 4))
        Z = rng.standard_normal((3, 4))
        c = 0.7
        F = solve_feedback_equation(R, L, G, c, Z)
        np.testing.assert_allclose(F, kron_feedback(R, L, G, c, Z), atol=1e-8)

    def test_residual_bound(self, rng):
        R = random_spd(rng, 4)
        L = random_psd(rng, 5)
        G = rng.standard_normal((4, 5))
        Z = rng.standard_normal((4, 5))
        c = 2.5
        F = solve_feedback_equation(R, L, G, c, Z)
        residual = 2.0 * (R @ F - G) @ L + c * (F - Z)
        bound = 1e-10 * (1 + np.linalg.norm(G, "fro")
                         + c * np.linalg.norm(Z, "fro"))
        assert np.linalg.norm(residual, "fro") <= bound

    def test_diagonal_closed_form(self):
        R = np.diag([1.0, 4.0])
        L = np.diag([2.0, 3.0, 5.0])
        G = np.arange(6, dtype=float).reshape(2, 3) + 1.0
        Z = np.ones((2, 3))
        c = 1.5
        F = solve_feedback_equation(R, L, G, c, Z)
        expected = (2.0 * G @ L + c * Z) / (2.0 * np.outer(np.diag(R),
                                                           np.diag(L)) + c)
        np.testing.assert_allclose(F, expected, atol=1e-12)

    def test_singular_when_c_zero_and_l_rank_deficient(self, rng):
        R = random_spd(rng, 2)
        L = random_psd(rng, 3, rank=1)
        with pytest.raises(SingularFeedbackEquationError,
                           match="singular feedback equation"):
            solve_feedback_equation(R, L, np.ones((2, 3)), 0.0,
                                    np.zeros((2, 3)))

    def test_tiny_positive_c_is_fine(self, rng):
        R = random_spd(rng, 2)
        L = random_psd(rng, 3, rank=1)
        F = solve_feedback_equation(R, L, np.ones((2, 3)), 1e-8,
                                    np.zeros((2, 3)))
        assert np.all(np.isfinite(F))
