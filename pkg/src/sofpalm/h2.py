"""Closed-loop H2 performance index, its gradient, and the Gramians behind it.

For a stabilizing effective gain F the closed loop A - B2 F is Hurwitz and

    J(F) = trace(B1^T P B1),

where P is the observability Gramian weighted by Q + F^T R F. The dual
identity J(F) = trace(L (Q + F^T R F)) with the controllability Gramian L
holds as well and serves as a cross-check. Off the stabilizing set J is
extended by plus infinity, encoded as an :class:`ObjectiveValue` without
Gramians so that no floating-point infinity enters any arithmetic path.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import NotStabilizingError, UnstableCoefficientError
from .matrix_equations import solve_lyapunov_pair
from .plant import Plant


@dataclass(frozen=True)
class GramianPair:
    """Closed-loop Gramians: L (controllability, driven by B1) and P
    (observability, weighted by Q + F^T R F)."""

    L: np.ndarray
    P: np.ndarray


@dataclass(frozen=True)
class ObjectiveValue:
    """Extended-real H2 value; Gramians are present exactly when finite."""

    value: float
    gramians: GramianPair | None = None

    @property
    def is_finite(self) -> bool:
        return self.gramians is not None


def closed_loop_gramians(plant: Plant, F) -> GramianPair:
    """Solve the two closed-loop Lyapunov equations for (L, P).

    L solves (A - B2 F) L + L (A - B2 F)^T = -B1 B1^T and
    P solves (A - B2 F)^T P + P (A - B2 F) = -(Q + F^T R F).
    Raises :class:`NotStabilizingError` when A - B2 F is not Hurwitz.
    """
    F = np.atleast_2d(np.asarray(F, dtype=float))
    M = plant.A - plant.B2 @ F
    W_ctrl = plant.B1 @ plant.B1.T
    W_obs = plant.Q + F.T @ plant.R @ F
    try:
        sol_l, sol_p = solve_lyapunov_pair(M, W_ctrl, W_obs)
    except UnstableCoefficientError as exc:
        raise NotStabilizingError("not stabilizing") from exc
    return GramianPair(L=sol_l.X, P=sol_p.X)


def h2_cost(plant: Plant, F) -> ObjectiveValue:
    """Evaluate J(F) = trace(B1^T P B1), or the infinite variant off the
    stabilizing set. Never raises on instability."""
    try:
        gramians = closed_loop_gramians(plant, F)
    except NotStabilizingError:
        return ObjectiveValue(value=math.inf, gramians=None)
    value = float(np.trace(plant.B1.T @ gramians.P @ plant.B1))
    return ObjectiveValue(value=value, gramians=gramians)


def h2_gradient(plant: Plant, F) -> np.ndarray:
    """Gradient of J at a stabilizing F: 2 (R F - B2^T P) L."""
    F = np.atleast_2d(np.asarray(F, dtype=float))
    gramians = closed_loop_gramians(plant, F)
    return gradient_from_gramians(plant, F, gramians)


def gradient_from_gramians(plant: Plant, F, gramians: GramianPair) -> np.ndarray:
    """Same as :func:`h2_gradient` but reusing already-computed Gramians."""
    return 2.0 * (plant.R @ F - plant.B2.T @ gramians.P) @ gramians.L
