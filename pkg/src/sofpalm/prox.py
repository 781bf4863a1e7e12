"""Hard-thresholding projections onto cardinality balls, and exact counts.

Entry-wise truncation keeps the s largest entries in magnitude; row (or
column) truncation keeps the r rows (columns) of largest Euclidean norm.
Both are the exact Euclidean projections onto their constraint sets, so
they realize the proximal operators of the cardinality indicator functions.

Ties at the cutoff magnitude are broken deterministically toward the
smaller row-major linear index (for rows and columns, the smaller index),
so the output always has cardinality at most the budget even when several
entries share the threshold value.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .errors import BudgetError


class CSparsityMode(enum.Enum):
    """Which cardinality of the output matrix C is constrained."""

    ROW = "row"
    COLUMN = "column"


@dataclass(frozen=True)
class SparsityBudget:
    """Budgets for the two design variables: card(K) <= s and at most r
    nonzero rows (or columns) of C."""

    s: int
    r: int
    mode: CSparsityMode = CSparsityMode.ROW

    def __post_init__(self):
        if isinstance(self.mode, str):
            object.__setattr__(self, "mode", CSparsityMode(self.mode))
        if self.s < 1 or self.r < 1:
            raise BudgetError("budget out of range")


def _keep_mask(values: np.ndarray, budget: int) -> np.ndarray:
    """Boolean mask keeping the ``budget`` largest values, ties broken
    toward smaller indices. ``values`` is 1-D and nonnegative."""
    size = values.size
    cutoff_pos = size - budget
    threshold = np.partition(values, cutoff_pos)[cutoff_pos]
    keep = values > threshold
    need = budget - int(np.count_nonzero(keep))
    ties = np.flatnonzero(values == threshold)
    keep[ties[:need]] = True
    return keep


def truncate_entries(X, s: int) -> np.ndarray:
    """Keep the s largest-magnitude entries of X, zeroing the rest.

    Minimizes the Frobenius distance to X over matrices with at most s
    nonzero entries. Requires 1 <= s <= X.size.
    """
    X = np.atleast_2d(np.asarray(X, dtype=float))
    if not 1 <= s <= X.size:
        raise BudgetError("budget out of range")
    if s == X.size:
        return X.copy()
    keep = _keep_mask(np.abs(X).ravel(), s)
    return np.where(keep.reshape(X.shape), X, 0.0)


def truncate_rows(Y, r: int) -> np.ndarray:
    """Keep the r rows of Y with largest Euclidean norm, zeroing the rest.

    Minimizes the Frobenius distance to Y over matrices with at most r
    nonzero rows. Requires 1 <= r <= number of rows.
    """
    Y = np.atleast_2d(np.asarray(Y, dtype=float))
    if not 1 <= r <= Y.shape[0]:
        raise BudgetError("budget out of range")
    if r == Y.shape[0]:
        return Y.copy()
    keep = _keep_mask(np.linalg.norm(Y, axis=1), r)
    return np.where(keep[:, None], Y, 0.0)


def truncate_columns(Y, r: int) -> np.ndarray:
    """Column version of :func:`truncate_rows`, acting on the rows of Y^T."""
    Y = np.atleast_2d(np.asarray(Y, dtype=float))
    return truncate_rows(Y.T, r).T


def card(X) -> int:
    """Number of exactly nonzero entries."""
    return int(np.count_nonzero(np.asarray(X)))


def card_row(X) -> int:
    """Number of rows with at least one nonzero entry."""
    X = np.atleast_2d(np.asarray(X))
    return int(np.count_nonzero(np.any(X != 0, axis=1)))


def card_col(X) -> int:
    """Number of columns with at least one nonzero entry."""
    X = np.atleast_2d(np.asarray(X))
    return int(np.count_nonzero(np.any(X != 0, axis=0)))
