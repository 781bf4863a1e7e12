"""Dense solvers for the two matrix-equation shapes the synthesis needs.

Continuous Lyapunov equations

    M X + X M^T = -W          (forward form, controllability-type)
    M^T X + X M = -W          (adjoint form, observability-type)

are solved by reduction to real Schur form followed by a LAPACK ``trsyl``
back-substitution (Bartels-Stewart family), O(n^3). The prox-regularized
feedback equation

    2 (R F - G) L + c (F - Z) = 0

is solved entrywise in the eigenbases of R and L.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import eigh, get_lapack_funcs, schur

from .errors import (
    EigendecompositionError,
    SingularFeedbackEquationError,
    SolverBreakdownError,
    UnstableCoefficientError,
)

# Smallest admissible transformed pivot 2*lam_i*mu_j + c.
PIVOT_FLOOR = 1e-14


@dataclass(frozen=True)
class LyapunovSolution:
    """Symmetrized solution X together with the equation residual norm."""

    X: np.ndarray
    residual_norm: float


def _square(M, name: str) -> np.ndarray:
    M = np.atleast_2d(np.asarray(M, dtype=float))
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ValueError(f"{name} must be square")
    return M


def abscissa_from_schur(T: np.ndarray) -> float:
    """Largest eigenvalue real part read off a real Schur form.

    1x1 diagonal blocks contribute their entry; 2x2 blocks correspond to
    complex conjugate pairs and contribute half their trace.
    """
    n = T.shape[0]
    worst = -np.inf
    i = 0
    while i < n:
        if i + 1 < n and T[i + 1, i] != 0.0:
            worst = max(worst, 0.5 * (T[i, i] + T[i + 1, i + 1]))
            i += 2
        else:
            worst = max(worst, T[i, i])
            i += 1
    return float(worst)


def _trsyl_schur(T: np.ndarray, C: np.ndarray, adjoint: bool) -> np.ndarray:
    """Solve T Y + Y T^T = C (or T^T Y + Y T = C) in Schur coordinates."""
    trsyl = get_lapack_funcs("trsyl", (T, C))
    trana, tranb = ("T", "N") if adjoint else ("N", "T")
    y, scale, info = trsyl(T, T, C, isgn=1, trana=trana, tranb=tranb)
    # info == 1 means perturbed eigenvalues were used, which cannot happen
    # for a Hurwitz coefficient; treat any nonzero info as a breakdown.
    if info != 0 or scale == 0.0 or not np.all(np.isfinite(y)):
        raise SolverBreakdownError("solver breakdown")
    return y / scale


def _solve_lyapunov_schur(M, T, Z, W, adjoint: bool) -> LyapunovSolution:
    Ct = -(Z.T @ W @ Z)
    Y = _trsyl_schur(T, Ct, adjoint)
    X = Z @ Y @ Z.T
    X = 0.5 * (X + X.T)
    if adjoint:
        residual = M.T @ X + X @ M + W
    else:
        residual = M @ X + X @ M.T + W
    return LyapunovSolution(X=X, residual_norm=float(np.linalg.norm(residual, "fro")))


def solve_lyapunov(M, W) -> LyapunovSolution:
    """Solve M X + X M^T = -W for Hurwitz M and symmetric W.

    Parameters
    ----------
    M : (n, n) array_like
        Coefficient matrix; its spectral abscissa must be strictly negative.
    W : (n, n) array_like
        Symmetric right-hand side (positive semidefinite in the Gramian use).

    Returns
    -------
    LyapunovSolution
        Solution symmetrized on output, with the Frobenius norm of
        ``M X + X M^T + W``.

    Raises
    ------
    UnstableCoefficientError
        If M is not Hurwitz (the equation has no stabilizing solution).
    SolverBreakdownError
        If the Schur back-substitution fails.
    """
    M = _square(M, "M")
    W = _square(W, "W")
    if W.shape != M.shape:
        raise ValueError("W must have the same shape as M")
    scale = 1.0 + float(np.abs(W).max(initial=0.0))
    if np.abs(W - W.T).max(initial=0.0) > 1e-10 * scale:
        raise ValueError("W must be symmetric")
    T, Z = schur(M, output="real")
    if abscissa_from_schur(T) >= 0.0:
        raise UnstableCoefficientError("unstable coefficient matrix")
    return _solve_lyapunov_schur(M, T, Z, W, adjoint=False)


def solve_lyapunov_pair(M, W_forward, W_adjoint):
    """Solve M L + L M^T = -W_forward and M^T P + P M = -W_adjoint together.

    Both equations share the Schur factorization of M, which dominates the
    cost, so solving them jointly roughly halves the work of two separate
    calls. Returns ``(LyapunovSolution, LyapunovSolution)``.
    """
    M = _square(M, "M")
    Wf = _square(W_forward, "W_forward")
    Wa = _square(W_adjoint, "W_adjoint")
    if Wf.shape != M.shape or Wa.shape != M.shape:
        raise ValueError("right-hand sides must have the same shape as M")
    T, Z = schur(M, output="real")
    if abscissa_from_schur(T) >= 0.0:
        raise UnstableCoefficientError("unstable coefficient matrix")
    sol_f = _solve_lyapunov_schur(M, T, Z, Wf, adjoint=False)
    sol_a = _solve_lyapunov_schur(M, T, Z, Wa, adjoint=True)
    return sol_f, sol_a


def solve_feedback_equation(R, L, G, c, Z) -> np.ndarray:
    """Solve 2 (R F - G) L + c (F - Z) = 0 for F.

    With eigendecompositions R = U diag(lam) U^T (lam > 0) and
    L = V diag(mu) V^T (mu >= 0), the transformed unknown Ft = U^T F V
    satisfies, entry by entry,

        (2 lam_i mu_j + c) Ft_ij = (U^T (2 G L + c Z) V)_ij,

    so the solve costs two symmetric eigendecompositions plus O(m n (m+n))
    multiplies instead of an (mn)^2 linear system.

    Parameters
    ----------
    R : (m, m) array_like
        Symmetric positive definite weight.
    L : (n, n) array_like
        Symmetric positive semidefinite (positive definite when c = 0).
    G : (m, n) array_like
        Affine term multiplying L (takes the role of B2^T P).
    c : float
        Nonnegative proximal coefficient.
    Z : (m, n) array_like
        Proximal center.

    Raises
    ------
    SingularFeedbackEquationError
        If some transformed pivot falls at or below ``PIVOT_FLOOR`` (only
        possible when c is zero and L is singular, or R is not PD).
    """
    R = _square(R, "R")
    L = _square(L, "L")
    G = np.atleast_2d(np.asarray(G, dtype=float))
    Z = np.atleast_2d(np.asarray(Z, dtype=float))
    c = float(c)
    if c < 0.0:
        raise ValueError("c must be nonnegative")
    m, n = R.shape[0], L.shape[0]
    if G.shape != (m, n) or Z.shape != (m, n):
        raise ValueError("G and Z must have shape (m, n)")
    try:
        lam, U = eigh(R)
        mu, V = eigh(L)
    except np.linalg.LinAlgError as exc:
        raise EigendecompositionError(
            "eigendecomposition did not converge") from exc
    pivots = 2.0 * np.outer(lam, mu) + c
    if pivots.min() <= PIVOT_FLOOR:
        raise SingularFeedbackEquationError("singular feedback equation")
    rhs = 2.0 * (G @ L) + c * Z
    Ft = (U.T @ rhs @ V) / pivots
    return U @ Ft @ V.T
