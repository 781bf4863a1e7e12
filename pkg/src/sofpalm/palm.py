"""Outer solver: Gauss-Seidel proximal-linearized updates of (K, C, F).

Each sweep minimizes the penalized objective

    Phi(K, C, F) = J(F) + (gamma/2) ||F - K C||_F^2

subject to card(K) <= s and a row or column cardinality bound on C, by a
K-step and a C-step (gradient step on the coupling term followed by hard
thresholding) and an F-step (proximal minimization of J by the inner
Anderson-Moore solver). Step coefficients are gamma_i > 1 multiples of the
closed-form Lipschitz constants of the coupling gradients,

    L1 = gamma ||C C^T||_F,  L2 = gamma ||K^T K||_F,  L3 = gamma,

floored at a configurable epsilon so that zero iterates cannot produce an
unbounded step. Every completed sweep is feasible, keeps F stabilizing,
and decreases Phi by at least (delta/2) ||G_next - G||_F^2 with
delta = min_i (gamma_i - 1) min_k L_i^k, which the solver monitors online.
"""

from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import solve_continuous_are

from .anderson_moore import AndersonMooreConfig, anderson_moore_full
from .errors import (
    BudgetError,
    DecreaseViolationWarning,
    InfeasibleIterateError,
    InitializationError,
    InnerSolverError,
    LineSearchError,
    NotStabilizingError,
    SolverBreakdownError,
)
from .h2 import ObjectiveValue, h2_cost
from .plant import Plant, is_stabilizing, validate_plant
from .prox import (
    CSparsityMode,
    SparsityBudget,
    card,
    card_col,
    card_row,
    truncate_columns,
    truncate_entries,
    truncate_rows,
)

# Relative slack for the online sufficient-decrease monitor.
_DECREASE_SLACK = 1e-9


@dataclass(frozen=True)
class Iterate:
    """Decision triple: gain K (m x p), output matrix C (p x n), effective
    state feedback F (m x n)."""

    K: np.ndarray
    C: np.ndarray
    F: np.ndarray

    def __post_init__(self):
        for name in ("K", "C", "F"):
            object.__setattr__(
                self, name,
                np.array(np.atleast_2d(getattr(self, name)), dtype=float))


@dataclass(frozen=True)
class SolverConfig:
    """Hyperparameters of the outer solver.

    ``gamma`` is the coupling penalty; ``gamma1``..``gamma3`` are the
    strict-over-one step multipliers; ``lipschitz_floor`` keeps the step
    coefficients bounded away from zero; the solve stops once the largest
    consecutive-step error falls to ``tol_step`` and the relative decrease
    of the objective over the last five sweeps falls to ``tol_phi``.
    ``seed`` only labels runs (benchmark generation in the CLI); the solver
    itself is deterministic.
    """

    budget: SparsityBudget
    gamma: float = 10.0
    gamma1: float = 1.1
    gamma2: float = 1.1
    gamma3: float = 1.1
    lipschitz_floor: float = 1e-8
    max_iter: int = 2000
    tol_step: float = 1e-6
    tol_phi: float = 1e-10
    inner: AndersonMooreConfig = field(default_factory=AndersonMooreConfig)
    seed: int = 0

    def __post_init__(self):
        for name in ("gamma1", "gamma2", "gamma3"):
            if not getattr(self, name) > 1.0:
                raise ValueError(f"{name} must exceed 1")
        if self.gamma <= 0.0:
            raise ValueError("gamma must be positive")
        if self.lipschitz_floor <= 0.0:
            raise ValueError("lipschitz_floor must be positive")
        if self.max_iter < 0:
            raise ValueError("max_iter must be nonnegative")
        if self.tol_step <= 0.0 or self.tol_phi <= 0.0:
            raise ValueError("tolerances must be positive")


@dataclass(frozen=True)
class ConvergenceRecord:
    """Per-sweep instrumentation. Step errors and the decrease slack are
    NaN on the initialization row (index 0), which has no predecessor."""

    iter: int
    phi: float
    j_value: float
    penalty_residual: float
    e_K: float
    e_C: float
    e_F: float
    L1: float
    L2: float
    L3: float
    card_K: int
    cardrow_C: int
    decrease_slack: float


class SolveStatus(enum.Enum):
    CONVERGED = "Converged"
    MAX_ITERATIONS = "MaxIterations"
    INNER_SOLVER_FAILURE = "InnerSolverFailure"


@dataclass(frozen=True)
class SolveResult:
    """Final iterate, the full per-sweep history (row 0 = initialization),
    the termination status, and the realized sufficient-decrease constant
    delta = min_i (gamma_i - 1) min_k L_i^k."""

    final: Iterate
    history: list[ConvergenceRecord]
    status: SolveStatus
    delta: float

    @property
    def iterations(self) -> int:
        return len(self.history) - 1


def lipschitz_constants(K, C, gamma: float, floor: float = 1e-8):
    """Closed-form Lipschitz constants of the coupling gradients,
    (gamma ||C C^T||_F, gamma ||K^T K||_F, gamma), floored at ``floor``."""
    K = np.atleast_2d(np.asarray(K, dtype=float))
    C = np.atleast_2d(np.asarray(C, dtype=float))
    L1 = max(gamma * float(np.linalg.norm(C @ C.T, "fro")), floor)
    L2 = max(gamma * float(np.linalg.norm(K.T @ K, "fro")), floor)
    L3 = max(float(gamma), floor)
    return L1, L2, L3


def coupling_value(K, C, F, gamma: float) -> float:
    """H(K, C, F) = (gamma/2) ||F - K C||_F^2."""
    K = np.atleast_2d(np.asarray(K, dtype=float))
    C = np.atleast_2d(np.asarray(C, dtype=float))
    F = np.atleast_2d(np.asarray(F, dtype=float))
    return 0.5 * gamma * float(np.linalg.norm(F - K @ C, "fro") ** 2)


def coupling_gradients(K, C, F, gamma: float):
    """Partial gradients of the coupling term with respect to K, C, F:
    gamma (K C - F) C^T, gamma K^T (K C - F), gamma (F - K C)."""
    K = np.atleast_2d(np.asarray(K, dtype=float))
    C = np.atleast_2d(np.asarray(C, dtype=float))
    F = np.atleast_2d(np.asarray(F, dtype=float))
    D = K @ C - F
    return gamma * D @ C.T, gamma * K.T @ D, -gamma * D


def _constrained_cardinality(C, mode: CSparsityMode) -> int:
    return card_row(C) if mode is CSparsityMode.ROW else card_col(C)


def _truncate_c(Y, r: int, mode: CSparsityMode) -> np.ndarray:
    if mode is CSparsityMode.ROW:
        return truncate_rows(Y, r)
    return truncate_columns(Y, r)


def _check_feasible(plant: Plant, config: SolverConfig, G: Iterate) -> None:
    budget = config.budget
    if card(G.K) > budget.s:
        raise InfeasibleIterateError("infeasible iterate")
    if _constrained_cardinality(G.C, budget.mode) > budget.r:
        raise InfeasibleIterateError("infeasible iterate")


def objective_phi(plant: Plant, config: SolverConfig, G: Iterate) -> float:
    """Penalized objective J(F) + (gamma/2)||F - K C||_F^2 on a feasible
    iterate; the cardinality indicators contribute zero there."""
    _check_feasible(plant, config, G)
    cost = h2_cost(plant, G.F)
    if not cost.is_finite:
        raise InfeasibleIterateError("infeasible iterate")
    return cost.value + coupling_value(G.K, G.C, G.F, config.gamma)


def check_budget(plant: Plant, budget: SparsityBudget) -> None:
    """Validate the budgets against the plant dimensions."""
    if budget.s > plant.m * plant.p:
        raise BudgetError("entry budget exceeds gain size")
    if budget.mode is CSparsityMode.ROW:
        if budget.r > plant.p:
            raise BudgetError("row budget exceeds output dimension")
    else:
        if budget.r > plant.n:
            raise BudgetError("column budget exceeds state dimension")


def lqr_gain(plant: Plant) -> np.ndarray:
    """Stabilizing LQR state-feedback gain R^{-1} B2^T P from the
    continuous algebraic Riccati equation."""
    try:
        P = solve_continuous_are(plant.A, plant.B2, plant.Q, plant.R)
        F = np.linalg.solve(plant.R, plant.B2.T @ P)
    except (np.linalg.LinAlgError, ValueError) as exc:
        raise InitializationError("no stabilizing initialization") from exc
    if not is_stabilizing(plant, F):
        raise InitializationError("no stabilizing initialization")
    return F


def initial_iterate(plant: Plant, config: SolverConfig) -> Iterate:
    """Default start: LQR state feedback for F, an all-ones output matrix,
    and K matching F when p = n (least-squares fit of F = K C otherwise).

    Note the returned triple is not yet projected onto the sparsity
    budgets; :func:`solve` truncates it before its first sweep.
    """
    F0 = lqr_gain(plant)
    C0 = np.ones((plant.p, plant.n))
    if plant.p == plant.n:
        K0 = F0.copy()
    else:
        K0 = np.linalg.lstsq(C0.T, F0.T, rcond=None)[0].T
    return Iterate(K=K0, C=C0, F=F0)


def _project_iterate(G: Iterate, budget: SparsityBudget) -> Iterate:
    return Iterate(K=truncate_entries(G.K, budget.s),
                   C=_truncate_c(G.C, budget.r, budget.mode),
                   F=G.F)


def _palm_step(plant: Plant, config: SolverConfig, current: Iterate,
               phi_current: float, cost_current: ObjectiveValue,
               lip_minima: tuple[float, float, float], iteration: int):
    """One Gauss-Seidel sweep. Returns (next iterate, record, cost at the
    new F, updated running Lipschitz minima)."""
    budget = config.budget
    gamma = config.gamma
    floor = config.lipschitz_floor
    K, C, F = current.K, current.C, current.F

    # K-step: proximal-linearized update at step 1/a_k, then thresholding.
    L1 = max(gamma * float(np.linalg.norm(C @ C.T, "fro")), floor)
    a_k = config.gamma1 * L1
    grad_K = gamma * (K @ C - F) @ C.T
    K_next = truncate_entries(K - grad_K / a_k, budget.s)

    # C-step: uses the already-updated K.
    L2 = max(gamma * float(np.linalg.norm(K_next.T @ K_next, "fro")), floor)
    b_k = config.gamma2 * L2
    grad_C = gamma * K_next.T @ (K_next @ C - F)
    C_next = _truncate_c(C - grad_C / b_k, budget.r, budget.mode)

    # F-step: exact prox of J at the linearized point, warm-started at F.
    L3 = max(gamma, floor)
    c_k = config.gamma3 * L3
    grad_F = gamma * (F - K_next @ C_next)
    Z = F - grad_F / c_k
    try:
        inner = anderson_moore_full(plant, Z, c_k, F, config=config.inner,
                                    cost_at_init=cost_current)
    except (LineSearchError, NotStabilizingError) as exc:
        raise InnerSolverError("inner solver failure") from exc
    F_next = inner.F

    e_K = float(np.linalg.norm(K_next - K, "fro"))
    e_C = float(np.linalg.norm(C_next - C, "fro"))
    e_F = float(np.linalg.norm(F_next - F, "fro"))
    phi_next = inner.cost.value + coupling_value(K_next, C_next, F_next, gamma)

    minima = (min(lip_minima[0], L1), min(lip_minima[1], L2),
              min(lip_minima[2], L3))
    delta = _delta_from_minima(config, minima)
    step_sq = e_K ** 2 + e_C ** 2 + e_F ** 2
    slack = (phi_current - phi_next) - 0.5 * delta * step_sq
    if slack < -_DECREASE_SLACK * (1.0 + abs(phi_current)):
        warnings.warn(
            f"sufficient decrease violated at iteration {iteration}: "
            f"slack {slack:.3e}", DecreaseViolationWarning, stacklevel=3)

    record = ConvergenceRecord(
        iter=iteration, phi=phi_next, j_value=inner.cost.value,
        penalty_residual=float(np.linalg.norm(F_next - K_next @ C_next, "fro")),
        e_K=e_K, e_C=e_C, e_F=e_F, L1=L1, L2=L2, L3=L3,
        card_K=card(K_next),
        cardrow_C=_constrained_cardinality(C_next, budget.mode),
        decrease_slack=slack)
    return Iterate(K=K_next, C=C_next, F=F_next), record, inner.cost, minima


def palm_iteration(plant: Plant, config: SolverConfig, current: Iterate,
                   *, iteration: int = 1):
    """Run a single sweep from a feasible iterate.

    Returns ``(next_iterate, record)``. The record's decrease slack is
    computed against this sweep's own Lipschitz constants; inside
    :func:`solve` the running minima over the whole history are used
    instead.
    """
    _check_feasible(plant, config, current)
    cost = h2_cost(plant, current.F)
    if not cost.is_finite:
        raise InfeasibleIterateError("infeasible iterate")
    phi = cost.value + coupling_value(current.K, current.C, current.F,
                                      config.gamma)
    big = math.inf
    nxt, record, _, _ = _palm_step(plant, config, current, phi, cost,
                                   (big, big, big), iteration)
    return nxt, record


def _delta_from_minima(config: SolverConfig,
                       minima: tuple[float, float, float]) -> float:
    return min((config.gamma1 - 1.0) * minima[0],
               (config.gamma2 - 1.0) * minima[1],
               (config.gamma3 - 1.0) * minima[2])


def _converged(history: list[ConvergenceRecord], config: SolverConfig) -> bool:
    rec = history[-1]
    if max(rec.e_K, rec.e_C, rec.e_F) > config.tol_step:
        return False
    if len(history) < 6:
        return False
    drop = history[-6].phi - rec.phi
    return drop <= config.tol_phi * (1.0 + abs(rec.phi))


def solve(plant: Plant, config: SolverConfig, init: Iterate | None = None,
          callback=None) -> SolveResult:
    """Run the outer solver to convergence or the iteration cap.

    Parameters
    ----------
    plant : Plant
        Problem data; must pass :func:`validate_plant`.
    config : SolverConfig
        Budgets, penalty, multipliers, tolerances.
    init : Iterate, optional
        Starting triple with a stabilizing F. Defaults to
        :func:`initial_iterate`. K and C are projected onto their budgets
        before the first sweep so that the recorded objective is finite
        from row 0 on.
    callback : callable, optional
        Invoked with each :class:`ConvergenceRecord` as it is produced.

    Returns
    -------
    SolveResult
        History row k holds the state after sweep k (row 0 is the
        projected initialization). An inner-solver failure terminates the
        run with status ``INNER_SOLVER_FAILURE`` and the history collected
        so far.
    """
    report = validate_plant(plant)
    if not report.ok:
        raise ValueError("invalid plant: " + "; ".join(report.violations))
    check_budget(plant, config.budget)

    if init is None:
        G = initial_iterate(plant, config)
    else:
        G = Iterate(K=init.K, C=init.C, F=init.F)
        if not is_stabilizing(plant, G.F):
            raise InitializationError("initial gain not stabilizing")
    G = _project_iterate(G, config.budget)

    cost = h2_cost(plant, G.F)
    if not cost.is_finite:
        raise InitializationError("no stabilizing initialization")
    phi = cost.value + coupling_value(G.K, G.C, G.F, config.gamma)
    L1, L2, L3 = lipschitz_constants(G.K, G.C, config.gamma,
                                     floor=config.lipschitz_floor)
    nan = float("nan")
    record = ConvergenceRecord(
        iter=0, phi=phi, j_value=cost.value,
        penalty_residual=float(np.linalg.norm(G.F - G.K @ G.C, "fro")),
        e_K=nan, e_C=nan, e_F=nan, L1=L1, L2=L2, L3=L3,
        card_K=card(G.K),
        cardrow_C=_constrained_cardinality(G.C, config.budget.mode),
        decrease_slack=nan)
    history = [record]
    if callback is not None:
        callback(record)

    minima = (L1, L2, L3)
    status = SolveStatus.MAX_ITERATIONS
    for k in range(1, config.max_iter + 1):
        try:
            G, record, cost, minima = _palm_step(plant, config, G, phi, cost,
                                                 minima, k)
        except InnerSolverError:
            status = SolveStatus.INNER_SOLVER_FAILURE
            break
        phi = record.phi
        history.append(record)
        if callback is not None:
            callback(record)
        # Lipschitz bounds must stay within the floor/finite corridor.
        if not all(map(math.isfinite, minima)):
            raise SolverBreakdownError("solver breakdown")
        assert min(minima) >= config.lipschitz_floor * (1.0 - 1e-12)
        if _converged(history, config):
            status = SolveStatus.CONVERGED
            break

    return SolveResult(final=G, history=history, status=status,
                       delta=_delta_from_minima(config, minima))
