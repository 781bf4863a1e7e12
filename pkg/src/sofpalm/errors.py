"""Exception and warning types shared across the solver stack."""


class SofpalmError(Exception):
    """Base class for all library-specific errors."""


class EigendecompositionError(SofpalmError):
    """An eigenvalue computation did not converge."""


class UnstableCoefficientError(SofpalmError):
    """A Lyapunov solve was requested with a non-Hurwitz coefficient matrix."""


class SolverBreakdownError(SofpalmError):
    """A dense matrix-equation solver failed internally."""


class SingularFeedbackEquationError(SofpalmError):
    """The prox-regularized feedback equation has a (near-)zero pivot."""


class NotStabilizingError(SofpalmError):
    """A gain required to be stabilizing is not."""


class BudgetError(SofpalmError, ValueError):
    """A sparsity budget lies outside its admissible range."""


class LineSearchError(SofpalmError):
    """Armijo backtracking exhausted its trial budget without acceptance."""


class InitializationError(SofpalmError):
    """No stabilizing initial gain could be constructed."""


class InfeasibleIterateError(SofpalmError):
    """An iterate violates the sparsity constraints or is not stabilizing."""


class InnerSolverError(SofpalmError):
    """The F-step solver could not produce an acceptable update."""


class DecreaseViolationWarning(RuntimeWarning):
    """The sufficient-decrease inequality failed beyond numerical slack."""
