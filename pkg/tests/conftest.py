"""Shared manufactured problems with known exact solutions.

Both problems decay to their limit exponentially, so they exercise the
semi-infinite grids the way the built-in benchmarks do while keeping an
analytic answer to compare against.
"""

import numpy as np

from infbvp import BvpProblem


def linear_decay_problem(with_derivatives=True):
    """u'' = u on [0, inf) with u(0) = 1 and u(inf) = 0.

    Exact solution exp(-x), so the missing initial slope is -1. Passing
    with_derivatives=False drops the closed-form Jacobian data, which
    forces the finite-difference fallback.
    """

    def f(x, u):
        return np.array([u[1], u[0]])

    def g(u0, u_inf):
        return np.array([u0[0] - 1.0, u_inf[0]])

    df_du = None
    dg = None
    if with_derivatives:
        df_du = lambda x, u: np.array([[0.0, 1.0], [1.0, 0.0]])
        dg = (np.array([[1.0, 0.0], [0.0, 0.0]]),
              np.array([[0.0, 0.0], [1.0, 0.0]]))
    return BvpProblem(name="linear-decay", d=2, f=f, g=g,
                      initial_iterate=lambda x: np.zeros(2),
                      df_du=df_du, dg=dg,
                      reports={"du0": lambda result: float(result.solution[0, 1])})


def nonlinear_decay_problem():
    """u'' = u^2 + exp(-x) - exp(-2x) with u(0) = 1 and u(inf) = 0.

    The source term is chosen so the exact solution is again exp(-x);
    the quadratic term keeps Newton's method honest and keeps the
    missing initial slope du0 = -1 from converging faster than the
    scheme's nominal order.
    """

    def f(x, u):
        return np.array([u[1], u[0] * u[0] + np.exp(-x) - np.exp(-2.0 * x)])

    def g(u0, u_inf):
        return np.array([u0[0] - 1.0, u_inf[0]])

    def df_du(x, u):
        return np.array([[0.0, 1.0], [2.0 * u[0], 0.0]])

    dg = (np.array([[1.0, 0.0], [0.0, 0.0]]),
          np.array([[0.0, 0.0], [1.0, 0.0]]))
    return BvpProblem(name="nonlinear-decay", d=2, f=f, g=g,
                      initial_iterate=lambda x: np.zeros(2),
                      df_du=df_du, dg=dg,
                      reports={"du0": lambda result: float(result.solution[0, 1])})


def exact_decay_field(grid):
    """exp(-x) and its derivative sampled at every node, zero at x = inf."""
    decay = np.exp(-grid.nodes)
    return np.column_stack([decay, -decay])


def toy_linear_problem():
    """Scalar u' = -u with u(0) = 2: one unknown per node, no dynamics
    hidden behind vector indexing, so residuals can be checked by hand."""

    def f(x, u):
        return np.array([-u[0]])

    def g(u0, u_inf):
        return np.array([u0[0] - 2.0])

    return BvpProblem(name="toy", d=1, f=f, g=g,
                      initial_iterate=lambda x: np.zeros(1),
                      df_du=lambda x, u: np.array([[-1.0]]),
                      dg=(np.array([[1.0]]), np.array([[0.0]])),
                      reports={"u0": lambda result: float(result.solution[0, 0])})
