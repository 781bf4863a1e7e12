"""Problem data: state-space matrices, performance weights, stability queries.

The control law under design is u = -K y with y = C x, so the closed loop
obtained after eliminating the output is driven by the effective
state-feedback gain F = K C:

    dx/dt = (A - B2 F) x + B1 d.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import EigendecompositionError

# Symmetry / definiteness tolerances used by the validator.
_SYM_TOL = 1e-10
_EIG_TOL = 1e-10


def _frozen_matrix(value) -> np.ndarray:
    out = np.array(np.atleast_2d(value), dtype=float, copy=True)
    out.setflags(write=False)
    return out


@dataclass(frozen=True)
class Plant:
    """Fixed problem instance for the co-design synthesis.

    Parameters
    ----------
    A : (n, n) array_like
        State dynamics matrix.
    B1 : (n, q) array_like
        Disturbance input matrix.
    B2 : (n, m) array_like
        Control input matrix.
    Q : (n, n) array_like
        State weight, symmetric positive semidefinite.
    R : (m, m) array_like
        Control weight, symmetric positive definite.
    p : int, optional
        Number of outputs (rows of the output matrix C under design).
        Defaults to the state dimension n.

    The instance is immutable: matrices are copied on construction and
    marked read-only, so a plant can be shared across concurrent solves.
    """

    A: np.ndarray
    B1: np.ndarray
    B2: np.ndarray
    Q: np.ndarray
    R: np.ndarray
    p: int = 0

    def __post_init__(self):
        for name in ("A", "B1", "B2", "Q", "R"):
            object.__setattr__(self, name, _frozen_matrix(getattr(self, name)))
        if self.p == 0:
            object.__setattr__(self, "p", self.A.shape[0])

    @property
    def n(self) -> int:
        """State dimension."""
        return self.A.shape[0]

    @property
    def m(self) -> int:
        """Number of control inputs."""
        return self.B2.shape[1]

    @property
    def q(self) -> int:
        """Number of disturbance channels."""
        return self.B1.shape[1]


@dataclass
class ValidationReport:
    """Outcome of :func:`validate_plant`. ``ok`` is True iff no violations."""

    ok: bool
    violations: list[str] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)


def _check_symmetric_part(M: np.ndarray, name: str, report: ValidationReport,
                          require_pd: bool) -> None:
    scale = 1.0 + float(np.abs(M).max(initial=0.0))
    if np.abs(M - M.T).max(initial=0.0) > _SYM_TOL * scale:
        report.violations.append(f"{name} not symmetric")
        return
    try:
        eigs = np.linalg.eigvalsh(0.5 * (M + M.T))
    except np.linalg.LinAlgError:
        report.violations.append(f"{name} eigendecomposition did not converge")
        return
    lo = float(eigs.min())
    if require_pd:
        if lo <= _EIG_TOL * scale:
            report.violations.append(f"{name} not positive definite")
    else:
        if lo < -_EIG_TOL * scale:
            report.violations.append(f"{name} not positive semidefinite")
        elif lo <= _EIG_TOL * scale:
            report.warnings.append(
                f"{name} is positive semidefinite but not positive definite")


def validate_plant(plant: Plant) -> ValidationReport:
    """Check every structural invariant of a plant; pure report, no raising.

    Each violation names the offending field and the failed predicate.
    A positive semidefinite but singular Q is accepted with a warning.
    """
    report = ValidationReport(ok=True)
    A, B1, B2, Q, R = plant.A, plant.B1, plant.B2, plant.Q, plant.R
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        report.violations.append("A not square")
    n = A.shape[0]
    if B1.shape[0] != n:
        report.violations.append("dimension mismatch A/B1")
    if B2.shape[0] != n:
        report.violations.append("dimension mismatch A/B2")
    if Q.shape != (n, n):
        report.violations.append("dimension mismatch A/Q")
    else:
        _check_symmetric_part(Q, "Q", report, require_pd=False)
    m = B2.shape[1]
    if R.shape != (m, m):
        report.violations.append("dimension mismatch B2/R")
    else:
        _check_symmetric_part(R, "R", report, require_pd=True)
    if plant.p < 1:
        report.violations.append("p must be at least 1")
    for name in ("A", "B1", "B2", "Q", "R"):
        if not np.all(np.isfinite(getattr(plant, name))):
            report.violations.append(f"{name} has non-finite entries")
    report.ok = not report.violations
    return report


def spectral_abscissa(M) -> float:
    """Largest real part over the eigenvalues of a square matrix."""
    M = np.atleast_2d(np.asarray(M, dtype=float))
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ValueError("matrix must be square")
    if not np.all(np.isfinite(M)):
        raise ValueError("matrix has non-finite entries")
    try:
        eigs = np.linalg.eigvals(M)
    except np.linalg.LinAlgError as exc:
        raise EigendecompositionError(
            "eigendecomposition did not converge") from exc
    return float(eigs.real.max())


def is_stabilizing(plant: Plant, F) -> bool:
    """True iff A - B2 F is Hurwitz (strictly negative spectral abscissa)."""
    F = np.atleast_2d(np.asarray(F, dtype=float))
    return spectral_abscissa(plant.A - plant.B2 @ F) < 0.0
