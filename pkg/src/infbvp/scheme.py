"""Midpoint discretization of first-order systems u' = f(x, u) on [0, inf].

The unknowns are the node values U_n, n = 0..N; the value at the infinity
node is an ordinary finite unknown. Interval n contributes the d equations

    U_{n+1} - U_n - a * f(x_{n+1/2}, b*U_{n+1} + c_w*U_n) = 0

with the coefficients of grids.StencilCoefficients, and the boundary
function g(U_0, U_N) supplies the final d equations. Residual entries are
ordered interval-major with the boundary block last. No formula ever reads
the infinite coordinate x_N: midpoints and stencil coefficients come from
fractional nodes only.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .grids import QuasiUniformGrid, StencilCoefficients

__all__ = [
    "EvaluationError",
    "MissingDerivativeError",
    "StructuredJacobian",
    "midpoint_value",
    "midpoint_derivative",
    "assemble_residual",
    "assemble_jacobian",
]

_SQRT_EPS = float(np.sqrt(np.finfo(float).eps))


class EvaluationError(ValueError):
    """A problem function returned a non-finite value.

    .where holds the offending interval index, or the string "boundary".
    """

    def __init__(self, message: str, where=None):
        super().__init__(message)
        self.where = where


class MissingDerivativeError(ValueError):
    """Analytic Jacobian requested for a problem without closed-form
    derivatives."""


def midpoint_value(coeffs: StencilCoefficients, u_n, u_next):
    """Interpolate the interval midpoint value c_w*u_n + b*u_next.

    Exact for data affine in x on interior intervals.
    """
    u_n = np.asarray(u_n, dtype=float)
    u_next = np.asarray(u_next, dtype=float)
    if u_n.shape != u_next.shape:
        raise ValueError(f"mismatched value shapes {u_n.shape} and {u_next.shape}")
    return coeffs.c_w * u_n + coeffs.b * u_next


def midpoint_derivative(coeffs: StencilCoefficients, u_n, u_next):
    """First derivative at the interval midpoint, (u_next - u_n)/a."""
    u_n = np.asarray(u_n, dtype=float)
    u_next = np.asarray(u_next, dtype=float)
    if u_n.shape != u_next.shape:
        raise ValueError(f"mismatched value shapes {u_n.shape} and {u_next.shape}")
    return (u_next - u_n) / coeffs.a


def _check_field(problem, grid: QuasiUniformGrid, U) -> np.ndarray:
    if grid.whole_line:
        raise ValueError("the discrete scheme supports semi-infinite grids only")
    U = np.asarray(U, dtype=float)
    expected = (grid.N + 1, problem.d)
    if U.shape != expected:
        raise ValueError(f"field shape {U.shape} does not match grid/problem shape {expected}")
    return U


def _eval_f(problem, x: float, u: np.ndarray, n: int) -> np.ndarray:
    fx = np.asarray(problem.f(x, u), dtype=float)
    if fx.shape != (problem.d,):
        raise ValueError(f"f returned shape {fx.shape}, expected ({problem.d},)")
    if not np.all(np.isfinite(fx)):
        raise EvaluationError(f"non-finite right-hand side on interval {n}", where=n)
    return fx


def _eval_g(problem, u0: np.ndarray, u_inf: np.ndarray) -> np.ndarray:
    gv = np.asarray(problem.g(u0, u_inf), dtype=float)
    if gv.shape != (problem.d,):
        raise ValueError(f"g returned shape {gv.shape}, expected ({problem.d},)")
    if not np.all(np.isfinite(gv)):
        raise EvaluationError("non-finite boundary function value", where="boundary")
    return gv


def assemble_residual(problem, grid: QuasiUniformGrid, U, continuation: bool = True) -> np.ndarray:
    """Residual of the discrete system at the field U, length d*(N+1)."""
    U = _check_field(problem, grid, U)
    N, d = grid.N, problem.d
    a, b, c_w, x_mid = grid.stencil_arrays(continuation)
    res = np.empty((N + 1) * d)
    for n in range(N):
        u_mid = c_w[n] * U[n] + b[n] * U[n + 1]
        fx = _eval_f(problem, float(x_mid[n]), u_mid, n)
        res[n * d:(n + 1) * d] = U[n + 1] - U[n] - a[n] * fx
    res[N * d:] = _eval_g(problem, U[0], U[N])
    return res


@dataclass(eq=False)
class StructuredJacobian:
    """Jacobian of the discrete system in its natural block sparsity.

    Interval block row n couples only U_n and U_{n+1}; the boundary row
    couples U_0 and U_N. Logical shape is d*(N+1) square.
    """

    dU_n: np.ndarray      # (N, d, d) derivative of interval block n w.r.t. U_n
    dU_next: np.ndarray   # (N, d, d) derivative of interval block n w.r.t. U_{n+1}
    dg_0: np.ndarray      # (d, d) boundary block w.r.t. U_0
    dg_N: np.ndarray      # (d, d) boundary block w.r.t. U_N

    @property
    def d(self) -> int:
        return self.dU_n.shape[1]

    @property
    def N(self) -> int:
        return self.dU_n.shape[0]

    @property
    def size(self) -> int:
        return (self.N + 1) * self.d

    def to_dense(self) -> np.ndarray:
        d, N = self.d, self.N
        full = np.zeros((self.size, self.size))
        for n in range(N):
            rows = slice(n * d, (n + 1) * d)
            full[rows, n * d:(n + 1) * d] = self.dU_n[n]
            full[rows, (n + 1) * d:(n + 2) * d] = self.dU_next[n]
        full[N * d:, :d] = self.dg_0
        full[N * d:, N * d:] = self.dg_N
        return full

    def matvec(self, delta: np.ndarray) -> np.ndarray:
        """Apply the Jacobian to a correction field of shape (N+1, d)."""
        delta = np.asarray(delta, dtype=float)
        d, N = self.d, self.N
        if delta.shape != (N + 1, d):
            raise ValueError(f"correction shape {delta.shape} does not match ({N + 1}, {d})")
        out = np.empty((N + 1) * d)
        for n in range(N):
            out[n * d:(n + 1) * d] = self.dU_n[n] @ delta[n] + self.dU_next[n] @ delta[n + 1]
        out[N * d:] = self.dg_0 @ delta[0] + self.dg_N @ delta[N]
        return out


def _fd_columns(residual_at, u_base: np.ndarray, base: np.ndarray) -> np.ndarray:
    """Forward-difference derivative of residual_at(u) w.r.t. each entry
    of u_base, one column per entry, step sqrt(eps)*(1 + |entry|)."""
    d_out = base.shape[0]
    cols = np.empty((d_out, u_base.shape[0]))
    for j in range(u_base.shape[0]):
        step = _SQRT_EPS * (1.0 + abs(float(u_base[j])))
        u_pert = u_base.copy()
        u_pert[j] += step
        cols[:, j] = (residual_at(u_pert) - base) / step
    return cols


def assemble_jacobian(problem, grid: QuasiUniformGrid, U, mode: str = "analytic",
                      continuation: bool = True) -> StructuredJacobian:
    """Jacobian of assemble_residual at U.

    mode "analytic" uses the problem's closed-form derivatives df_du and
    dg; mode "fd" differentiates the residual blocks by forward
    differences and works for any problem.
    """
    if mode not in ("analytic", "fd"):
        raise ValueError(f"unknown jacobian mode {mode!r}")
    U = _check_field(problem, grid, U)
    N, d = grid.N, problem.d
    a, b, c_w, x_mid = grid.stencil_arrays(continuation)
    dU_n = np.empty((N, d, d))
    dU_next = np.empty((N, d, d))

    if mode == "analytic":
        if problem.df_du is None or problem.dg is None:
            raise MissingDerivativeError(
                f"problem '{problem.name}' carries no analytic derivatives; use mode='fd'")
        eye = np.eye(d)
        for n in range(N):
            u_mid = c_w[n] * U[n] + b[n] * U[n + 1]
            F = np.asarray(problem.df_du(float(x_mid[n]), u_mid), dtype=float)
            if F.shape != (d, d):
                raise ValueError(f"df_du returned shape {F.shape}, expected ({d}, {d})")
            dU_n[n] = -eye - (a[n] * c_w[n]) * F
            dU_next[n] = eye - (a[n] * b[n]) * F
        dg_0 = np.asarray(problem.dg[0], dtype=float)
        dg_N = np.asarray(problem.dg[1], dtype=float)
        if dg_0.shape != (d, d) or dg_N.shape != (d, d):
            raise ValueError("dg must be a pair of d x d matrices")
        return StructuredJacobian(dU_n=dU_n, dU_next=dU_next, dg_0=dg_0.copy(), dg_N=dg_N.copy())

    for n in range(N):
        x = float(x_mid[n])

        def block(u_n, u_next, n=n, x=x):
            u_mid = c_w[n] * u_n + b[n] * u_next
            return u_next - u_n - a[n] * _eval_f(problem, x, u_mid, n)

        base = block(U[n], U[n + 1])
        dU_n[n] = _fd_columns(lambda u: block(u, U[n + 1]), U[n].copy(), base)
        dU_next[n] = _fd_columns(lambda u: block(U[n], u), U[n + 1].copy(), base)
    g_base = _eval_g(problem, U[0], U[N])
    dg_0 = _fd_columns(lambda u: _eval_g(problem, u, U[N]), U[0].copy(), g_base)
    dg_N = _fd_columns(lambda u: _eval_g(problem, U[0], u), U[N].copy(), g_base)
    return StructuredJacobian(dU_n=dU_n, dU_next=dU_next, dg_0=dg_0, dg_N=dg_N)
