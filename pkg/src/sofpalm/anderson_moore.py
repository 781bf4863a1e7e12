"""Inner solver for the F-step: minimize J(F) + (c/2) ||F - Z||_F^2.

The stationarity system couples a feedback equation with the two
closed-loop Lyapunov equations:

    2 (R F - B2^T P) L + c (F - Z) = 0,
    (A - B2 F) L + L (A - B2 F)^T  = -B1 B1^T,
    (A - B2 F)^T P + P (A - B2 F)  = -(Q + F^T R F).

Freezing (L, P) at the current gain and solving the feedback equation for
a candidate gain yields the update direction; an Armijo backtracking line
search on the prox objective keeps every accepted gain stabilizing and the
objective non-increasing. The direction equals the negative gradient
preconditioned by the positive definite map F -> 2 R F L + c F, hence it is
a descent direction whenever it is nonzero; a steepest-descent fallback
guards the degenerate numerical case.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import LineSearchError, NotStabilizingError
from .h2 import ObjectiveValue, h2_cost
from .matrix_equations import solve_feedback_equation
from .plant import Plant

# Predicted Armijo decreases below this relative level are not measurable
# in double precision; accepting any non-increasing trial then prevents
# spurious line-search failures at convergence.
_NOISE_FLOOR = 1e-14
_STAGNATION_FLOOR = 1e-15


@dataclass(frozen=True)
class AndersonMooreConfig:
    """Line-search and stopping parameters for the inner solver."""

    max_inner_iter: int = 100
    grad_tol: float = 1e-8
    armijo_sigma: float = 1e-4
    armijo_beta: float = 0.5
    max_backtracks: int = 50

    def __post_init__(self):
        if self.max_inner_iter < 1:
            raise ValueError("max_inner_iter must be positive")
        if self.grad_tol <= 0.0:
            raise ValueError("grad_tol must be positive")
        if not 0.0 < self.armijo_sigma < 1.0:
            raise ValueError("armijo_sigma must lie in (0, 1)")
        if not 0.0 < self.armijo_beta < 1.0:
            raise ValueError("armijo_beta must lie in (0, 1)")
        if self.max_backtracks < 1:
            raise ValueError("max_backtracks must be positive")


@dataclass(frozen=True)
class AndersonMooreResult:
    """Final gain plus the cost data already computed at it.

    ``phi_trace`` holds the prox objective at the warm start and after each
    accepted step; it is non-increasing by construction.
    """

    F: np.ndarray
    cost: ObjectiveValue
    phi: float
    iterations: int
    converged: bool
    residual_norm: float
    phi_trace: tuple[float, ...] = ()


def anderson_moore_full(plant: Plant, Z, c: float, F_init,
                        config: AndersonMooreConfig | None = None,
                        cost_at_init: ObjectiveValue | None = None,
                        ) -> AndersonMooreResult:
    """Run the inner solver and return the gain with its diagnostics.

    Parameters
    ----------
    plant : Plant
        Problem data.
    Z : (m, n) array_like
        Proximal center.
    c : float
        Proximal coefficient, strictly positive.
    F_init : (m, n) array_like
        Stabilizing warm start.
    config : AndersonMooreConfig, optional
        Defaults to :class:`AndersonMooreConfig()`.
    cost_at_init : ObjectiveValue, optional
        H2 cost already evaluated at ``F_init``; skips one Lyapunov pair.

    The prox objective is non-increasing across iterations and every
    accepted gain is stabilizing. Termination: the stationarity residual
    drops to ``grad_tol * (1 + ||Z||_F)``, the iteration cap is reached,
    or no measurable progress is possible in double precision.

    Raises
    ------
    NotStabilizingError
        If ``F_init`` is not stabilizing.
    LineSearchError
        If backtracking exhausts ``max_backtracks`` without an acceptable
        trial (in practice only when instability blocks every step size).
    """
    cfg = config if config is not None else AndersonMooreConfig()
    c = float(c)
    if c <= 0.0:
        raise ValueError("c must be positive")
    Z = np.atleast_2d(np.asarray(Z, dtype=float))
    F = np.array(np.atleast_2d(F_init), dtype=float, copy=True)
    if F.shape != Z.shape:
        raise ValueError("F_init and Z must have the same shape")

    cost = cost_at_init if cost_at_init is not None else h2_cost(plant, F)
    if not cost.is_finite:
        raise NotStabilizingError("initial gain not stabilizing")
    R, B1, B2 = plant.R, plant.B1, plant.B2
    z_scale = 1.0 + float(np.linalg.norm(Z, "fro"))
    phi = cost.value + 0.5 * c * float(np.linalg.norm(F - Z, "fro") ** 2)
    phi_trace = [phi]

    steps = 0
    converged = False
    stagnated = False
    while True:
        L, P = cost.gramians.L, cost.gramians.P
        grad = 2.0 * (R @ F - B2.T @ P) @ L + c * (F - Z)
        residual = float(np.linalg.norm(grad, "fro"))
        if residual <= cfg.grad_tol * z_scale:
            converged = True
            break
        if steps >= cfg.max_inner_iter or stagnated:
            break

        F_bar = solve_feedback_equation(R, L, B2.T @ P, c, Z)
        dF = F_bar - F
        slope = float(np.sum(grad * dF))
        if slope >= 0.0:
            # degenerate direction; the preconditioned structure makes this
            # a pure rounding artifact
            dF = -grad
            slope = -residual * residual

        alpha = 1.0
        accepted = False
        noise = _NOISE_FLOOR * (1.0 + abs(phi))
        for _ in range(cfg.max_backtracks):
            trial = F + alpha * dF
            trial_cost = h2_cost(plant, trial)
            if trial_cost.is_finite:
                phi_trial = trial_cost.value + 0.5 * c * float(
                    np.linalg.norm(trial - Z, "fro") ** 2)
                predicted = cfg.armijo_sigma * alpha * slope
                if phi_trial <= phi + predicted or (
                        -predicted <= noise and phi_trial <= phi):
                    accepted = True
                    break
            alpha *= cfg.armijo_beta
        if not accepted:
            raise LineSearchError("line search failed")

        steps += 1
        stagnated = (phi - phi_trial) <= _STAGNATION_FLOOR * (1.0 + abs(phi))
        F, cost, phi = trial, trial_cost, phi_trial
        phi_trace.append(phi)

    return AndersonMooreResult(F=F, cost=cost, phi=phi, iterations=steps,
                               converged=converged, residual_norm=residual,
                               phi_trace=tuple(phi_trace))


def anderson_moore(plant: Plant, Z, c: float, F_init,
                   config: AndersonMooreConfig | None = None) -> np.ndarray:
    """Minimize J(F) + (c/2) ||F - Z||_F^2 from a stabilizing warm start.

    Convenience wrapper around :func:`anderson_moore_full` returning only
    the gain.
    """
    return anderson_moore_full(plant, Z, c, F_init, config=config).F
