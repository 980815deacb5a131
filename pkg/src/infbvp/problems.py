"""Built-in boundary value problems posed on [0, inf).

Each problem is a first-order system du/dx = f(x, u) with a two-point
boundary function g(u(0), u(inf)) = 0, optional closed-form derivatives
for Newton's method, a default initial iterate, and named report scalars
(typically the missing initial conditions one wants from the solve).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

__all__ = [
    "BvpProblem",
    "falkner_skan",
    "pile",
    "initial_field",
    "report_scalar",
    "PROBLEMS",
]


@dataclass(frozen=True, eq=False)
class BvpProblem:
    """First-order system on [0, inf) with boundary function g(u0, u_inf).

    f(x, u) maps a finite coordinate and a d-vector to a d-vector; the
    scheme never calls it at x = inf. g consumes the first and last node
    values. df_du gives the d x d state Jacobian of f; dg is a pair of
    constant d x d matrices (the built-in boundary functions are affine).
    Problems without derivatives fall back to the finite-difference
    Jacobian mode. reports maps scalar names to extractors over a solve
    result. initial_iterate is evaluated at every node coordinate,
    including x = inf, so it must return finite values there.
    """

    name: str
    d: int
    f: Callable[[float, np.ndarray], np.ndarray]
    g: Callable[[np.ndarray, np.ndarray], np.ndarray]
    initial_iterate: Callable[[float], np.ndarray]
    df_du: Callable[[float, np.ndarray], np.ndarray] | None = None
    dg: tuple[np.ndarray, np.ndarray] | None = None
    reports: dict[str, Callable] = field(default_factory=dict)


def _guard_coordinate(x: float) -> None:
    if not np.isfinite(x):
        raise ValueError("right-hand side evaluated at a non-finite coordinate")


def falkner_skan(P: float = 1.0) -> BvpProblem:
    """Boundary-layer similarity flow with pressure-gradient parameter P.

    Third-order model reduced to u = (u1, u2, u3) = (stream function,
    velocity, shear):

        u' = (u2, u3, -u1*u3 - P*(1 - u2^2))

    with u1(0) = u2(0) = 0 and u2(inf) = 1. The headline scalar is the
    wall shear u3(0); u3 at the infinity node reports how well the far
    boundary condition is met by the discretization.
    """
    P = float(P)

    def f(x, u):
        _guard_coordinate(x)
        return np.array([u[1], u[2], -u[0] * u[2] - P * (1.0 - u[1] * u[1])])

    def df_du(x, u):
        return np.array([
            [0.0, 1.0, 0.0],
            [0.0, 0.0, 1.0],
            [-u[2], 2.0 * P * u[1], -u[0]],
        ])

    def g(u0, u_inf):
        return np.array([u0[0], u0[1], u_inf[1] - 1.0])

    dg_0 = np.array([[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 0.0]])
    dg_N = np.array([[0.0, 0.0, 0.0], [0.0, 0.0, 0.0], [0.0, 1.0, 0.0]])

    def initial_iterate(x):
        return np.array([0.5, 0.5, 1e-2])

    reports = {
        "fpp0": lambda result: float(result.solution[0, 2]),
        "fpp_inf": lambda result: float(result.solution[-1, 2]),
    }
    return BvpProblem(name="falkner-skan", d=3, f=f, g=g,
                      initial_iterate=initial_iterate, df_du=df_du,
                      dg=(dg_0, dg_N), reports=reports)


def pile(P1: float = 1.0, P2: float = 0.5, P3: float = 0.5) -> BvpProblem:
    """Deflection of a semi-infinite pile in soft soil.

    Fourth-order model reduced to u = (deflection, slope, moment, shear):

        u' = (u2, u3, u4, -P1*(1 - exp(-P2*u1)))

    with zero moment and prescribed shear P3 at the origin, and u1 and u2
    vanishing at infinity. Report scalars are the surface deflection
    u1(0) and slope u2(0).
    """
    P1, P2, P3 = float(P1), float(P2), float(P3)
    if P1 <= 0.0 or P2 <= 0.0:
        raise ValueError("soil reaction constants P1 and P2 must be positive")

    def f(x, u):
        _guard_coordinate(x)
        return np.array([u[1], u[2], u[3], -P1 * (1.0 - np.exp(-P2 * u[0]))])

    def df_du(x, u):
        out = np.zeros((4, 4))
        out[0, 1] = out[1, 2] = out[2, 3] = 1.0
        out[3, 0] = -P1 * P2 * np.exp(-P2 * u[0])
        return out

    def g(u0, u_inf):
        return np.array([u0[2], u0[3] - P3, u_inf[0], u_inf[1]])

    dg_0 = np.zeros((4, 4))
    dg_0[0, 2] = dg_0[1, 3] = 1.0
    dg_N = np.zeros((4, 4))
    dg_N[2, 0] = dg_N[3, 1] = 1.0

    def initial_iterate(x):
        return np.ones(4)

    reports = {
        "u0": lambda result: float(result.solution[0, 0]),
        "du0": lambda result: float(result.solution[0, 1]),
    }
    return BvpProblem(name="pile", d=4, f=f, g=g,
                      initial_iterate=initial_iterate, df_du=df_du,
                      dg=(dg_0, dg_N), reports=reports)


def initial_field(problem: BvpProblem, grid) -> np.ndarray:
    """Evaluate the problem's default initial iterate at every node."""
    rows = [np.asarray(problem.initial_iterate(float(x)), dtype=float) for x in grid.nodes]
    values = np.vstack(rows)
    if values.shape != (grid.N + 1, problem.d):
        raise ValueError(f"initial iterate produced shape {values.shape}, "
                         f"expected ({grid.N + 1}, {problem.d})")
    if not np.all(np.isfinite(values)):
        raise ValueError("initial iterate must be finite at every node")
    return values


def report_scalar(problem: BvpProblem, result, name: str) -> float:
    """Extract a named report quantity from a solve result."""
    try:
        extractor = problem.reports[name]
    except KeyError:
        raise KeyError(f"problem '{problem.name}' has no report scalar {name!r}; "
                       f"available: {sorted(problem.reports)}") from None
    return float(extractor(result))


PROBLEMS: dict[str, Callable[..., BvpProblem]] = {
    "falkner-skan": falkner_skan,
    "pile": pile,
}
