"""Co-design of sparse static output-feedback gains K and row/column-sparse
output matrices C, minimizing a penalized closed-loop H2 objective by
proximal alternating linearized minimization with an Anderson-Moore inner
solver for the F block."""

from .anderson_moore import (
    AndersonMooreConfig,
    AndersonMooreResult,
    anderson_moore,
    anderson_moore_full,
)
from .benchmarks import DistributedLayout, make_distributed, make_mass_spring
from .errors import (
    BudgetError,
    DecreaseViolationWarning,
    EigendecompositionError,
    InfeasibleIterateError,
    InitializationError,
    InnerSolverError,
    LineSearchError,
    NotStabilizingError,
    SingularFeedbackEquationError,
    SofpalmError,
    SolverBreakdownError,
    UnstableCoefficientError,
)
from .h2 import (
    GramianPair,
    ObjectiveValue,
    closed_loop_gramians,
    h2_cost,
    h2_gradient,
)
from .matrix_equations import (
    LyapunovSolution,
    solve_feedback_equation,
    solve_lyapunov,
    solve_lyapunov_pair,
)
from .palm import (
    ConvergenceRecord,
    Iterate,
    SolveResult,
    SolveStatus,
    SolverConfig,
    check_budget,
    coupling_gradients,
    coupling_value,
    initial_iterate,
    lipschitz_constants,
    lqr_gain,
    objective_phi,
    palm_iteration,
    solve,
)
from .plant import (
    Plant,
    ValidationReport,
    is_stabilizing,
    spectral_abscissa,
    validate_plant,
)
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

__version__ = "0.1.0"

__all__ = [
    "AndersonMooreConfig",
    "AndersonMooreResult",
    "BudgetError",
    "CSparsityMode",
    "ConvergenceRecord",
    "DecreaseViolationWarning",
    "DistributedLayout",
    "EigendecompositionError",
    "GramianPair",
    "InfeasibleIterateError",
    "InitializationError",
    "InnerSolverError",
    "Iterate",
    "LineSearchError",
    "LyapunovSolution",
    "NotStabilizingError",
    "ObjectiveValue",
    "Plant",
    "SingularFeedbackEquationError",
    "SofpalmError",
    "SolveResult",
    "SolveStatus",
    "SolverBreakdownError",
    "SolverConfig",
    "SparsityBudget",
    "UnstableCoefficientError",
    "ValidationReport",
    "anderson_moore",
    "anderson_moore_full",
    "card",
    "card_col",
    "card_row",
    "check_budget",
    "closed_loop_gramians",
    "coupling_gradients",
    "coupling_value",
    "h2_cost",
    "h2_gradient",
    "initial_iterate",
    "is_stabilizing",
    "lipschitz_constants",
    "lqr_gain",
    "make_distributed",
    "make_mass_spring",
    "objective_phi",
    "palm_iteration",
    "solve",
    "solve_feedback_equation",
    "solve_lyapunov",
    "solve_lyapunov_pair",
    "spectral_abscissa",
    "truncate_columns",
    "truncate_entries",
    "truncate_rows",
    "validate_plant",
]
