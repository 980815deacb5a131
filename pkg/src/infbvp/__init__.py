"""Nonlinear two-point boundary value problems on [0, inf].

The semi-infinite domain is covered by a quasi-uniform grid whose last
node sits exactly at infinity, so boundary conditions at infinity are
imposed directly on an ordinary unknown. A midpoint finite-difference
scheme built from always-finite fractional nodes discretizes the system,
Newton's method with a structured linear solver computes the node values,
and nested extrapolation on doubling grid families sharpens the reported
scalars.
"""

from .grids import (
    GridMap,
    MapKind,
    QuasiUniformGrid,
    StencilCoefficients,
    build_grid,
)
from .newton import (
    DENSE_SIZE_LIMIT,
    SingularSystemError,
    SolveResult,
    SolverConfig,
    linear_solve,
    newton_solve,
)
from .problems import (
    PROBLEMS,
    BvpProblem,
    falkner_skan,
    initial_field,
    pile,
    report_scalar,
)
from .richardson import (
    ExtrapolationTable,
    SweepSeries,
    extrapolate_table,
    observed_order,
    richardson_error,
)
from .scheme import (
    EvaluationError,
    MissingDerivativeError,
    StructuredJacobian,
    assemble_jacobian,
    assemble_residual,
    midpoint_derivative,
    midpoint_value,
)

__version__ = "0.1.0"

__all__ = [
    "BvpProblem",
    "DENSE_SIZE_LIMIT",
    "EvaluationError",
    "ExtrapolationTable",
    "GridMap",
    "MapKind",
    "MissingDerivativeError",
    "PROBLEMS",
    "QuasiUniformGrid",
    "SingularSystemError",
    "SolveResult",
    "SolverConfig",
    "StencilCoefficients",
    "StructuredJacobian",
    "SweepSeries",
    "assemble_jacobian",
    "assemble_residual",
    "build_grid",
    "extrapolate_table",
    "falkner_skan",
    "initial_field",
    "linear_solve",
    "midpoint_derivative",
    "midpoint_value",
    "newton_solve",
    "observed_order",
    "pile",
    "report_scalar",
    "richardson_error",
]
