"""Newton iteration for the discretized boundary value system.

Full steps, no damping: the update solves J * delta = -residual and is
applied as-is, and the iteration stops once the mean absolute correction
over all d*(N+1) unknowns drops to the tolerance. The linear stage
exploits the block bidiagonal-plus-border structure: a forward
elimination expresses every correction block through the first one, and
the boundary equations close a single d x d system. A dense LU with
partial pivoting is kept as a cross-check oracle for moderate sizes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .grids import QuasiUniformGrid
from .problems import BvpProblem, initial_field
from .scheme import StructuredJacobian, assemble_jacobian, assemble_residual

__all__ = [
    "SingularSystemError",
    "SolverConfig",
    "SolveResult",
    "linear_solve",
    "newton_solve",
    "DENSE_SIZE_LIMIT",
]

DENSE_SIZE_LIMIT = 10_000


class SingularSystemError(RuntimeError):
    """The structured linear system could not be factorized."""


@dataclass
class SolverConfig:
    """Newton iteration controls.

    jacobian_mode is "analytic", "fd", or None to pick analytic whenever
    the problem carries closed-form derivatives. continuation keeps the
    last-interval interpolation weights copied from the interval before
    it (turning it off reproduces the degenerate b = 0, c_w = 1 weights).
    """

    tol: float = 1e-6
    max_iter: int = 50
    jacobian_mode: str | None = None
    continuation: bool = True
    linear_solver: str = "bordered"

    def __post_init__(self) -> None:
        if not self.tol > 0.0:
            raise ValueError(f"tolerance must be positive, got {self.tol}")
        if int(self.max_iter) < 1:
            raise ValueError(f"max_iter must be at least 1, got {self.max_iter}")
        if self.jacobian_mode not in (None, "analytic", "fd"):
            raise ValueError(f"unknown jacobian mode {self.jacobian_mode!r}")
        if self.linear_solver not in ("bordered", "dense"):
            raise ValueError(f"unknown linear solver {self.linear_solver!r}")


@dataclass(eq=False)
class SolveResult:
    """Grid solution with iteration diagnostics.

    solution has shape (N+1, d); increments records the mean absolute
    correction of every applied Newton step, so increments[-1] equals
    final_increment.
    """

    solution: np.ndarray
    iterations: int
    final_increment: float
    converged: bool
    increments: list[float] = field(default_factory=list)


def linear_solve(jacobian: StructuredJacobian, rhs, method: str = "bordered") -> np.ndarray:
    """Solve jacobian @ delta = rhs; returns the correction field (N+1, d).

    "bordered" runs the block forward elimination in O(d^3 N);
    "dense" assembles the full matrix and LU-factorizes it with partial
    pivoting (allowed up to d*(N+1) = 10_000 unknowns).
    """
    d, N = jacobian.d, jacobian.N
    rhs = np.asarray(rhs, dtype=float)
    if rhs.shape != ((N + 1) * d,):
        raise ValueError(f"rhs length {rhs.shape} does not match system size {(N + 1) * d}")

    if method == "dense":
        if jacobian.size > DENSE_SIZE_LIMIT:
            raise ValueError(f"dense mode limited to {DENSE_SIZE_LIMIT} unknowns, "
                             f"got {jacobian.size}; use the bordered solver")
        try:
            flat = np.linalg.solve(jacobian.to_dense(), rhs)
        except np.linalg.LinAlgError as exc:
            raise SingularSystemError(f"dense factorization failed: {exc}") from exc
        return flat.reshape(N + 1, d)
    if method != "bordered":
        raise ValueError(f"unknown linear solver {method!r}")

    # Express delta_n = shift[n] + prop[n] @ delta_0 by eliminating the
    # interval rows front to back, then close with the boundary row.
    blocks = rhs[: N * d].reshape(N, d)
    shift = np.empty((N + 1, d))
    prop = np.empty((N + 1, d, d))
    shift[0] = 0.0
    prop[0] = np.eye(d)
    stacked = np.empty((d, d + 1))
    for n in range(N):
        stacked[:, 0] = blocks[n] - jacobian.dU_n[n] @ shift[n]
        stacked[:, 1:] = -jacobian.dU_n[n] @ prop[n]
        try:
            eliminated = np.linalg.solve(jacobian.dU_next[n], stacked)
        except np.linalg.LinAlgError as exc:
            raise SingularSystemError(
                f"forward elimination hit a singular block on interval {n}") from exc
        shift[n + 1] = eliminated[:, 0]
        prop[n + 1] = eliminated[:, 1:]
    closure = jacobian.dg_0 + jacobian.dg_N @ prop[N]
    closure_rhs = rhs[N * d:] - jacobian.dg_N @ shift[N]
    try:
        delta_0 = np.linalg.solve(closure, closure_rhs)
    except np.linalg.LinAlgError as exc:
        raise SingularSystemError("boundary closure system is singular") from exc
    return shift + prop @ delta_0


def newton_solve(problem: BvpProblem, grid: QuasiUniformGrid, initial=None,
                 config: SolverConfig | None = None) -> SolveResult:
    """Run full-step Newton on the discrete system.

    initial is a field of shape (N+1, d) or None for the problem's
    default iterate. Convergence means the mean absolute correction fell
    to config.tol; hitting max_iter or a non-finite iterate returns
    converged=False instead of raising.
    """
    config = config if config is not None else SolverConfig()
    if initial is None:
        U = initial_field(problem, grid)
    else:
        U = np.array(initial, dtype=float, copy=True)
        if U.shape != (grid.N + 1, problem.d):
            raise ValueError(f"initial field shape {U.shape} does not match "
                             f"({grid.N + 1}, {problem.d})")
        if not np.all(np.isfinite(U)):
            raise ValueError("initial field must be finite")

    if config.jacobian_mode is not None:
        mode = config.jacobian_mode
    elif problem.df_du is not None and problem.dg is not None:
        mode = "analytic"
    else:
        mode = "fd"

    increments: list[float] = []
    converged = False
    for iteration in range(1, int(config.max_iter) + 1):
        residual = assemble_residual(problem, grid, U, config.continuation)
        jacobian = assemble_jacobian(problem, grid, U, mode, config.continuation)
        try:
            delta = linear_solve(jacobian, -residual, config.linear_solver)
        except SingularSystemError as exc:
            raise SingularSystemError(f"iteration {iteration}: {exc}") from exc
        if not np.all(np.isfinite(delta)):
            increments.append(math.inf)
            break
        U = U + delta
        m = float(np.mean(np.abs(delta)))
        increments.append(m)
        if not np.all(np.isfinite(U)):
            break
        if m <= config.tol:
            converged = True
            break
    return SolveResult(solution=U, iterations=len(increments),
                       final_increment=increments[-1], converged=converged,
                       increments=increments)
