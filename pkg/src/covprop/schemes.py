"""Uniform periodic grid, CFL time stepping, and dense one-step propagators.

Both schemes discretize q_t + v q_x + b q = 0 with b = alpha * v'(x) on the
periodic grid and advance one time step with a single dense n x n matrix:

* Crank-Nicolson: the Cayley form (I - dt/2 A)^{-1} (I + dt/2 A) built
  around an exactly skew-symmetric advection core, so for alpha = 1/2 the
  one-step matrix is orthogonal to round-off.
* Lax-Wendroff: the second-order Taylor form I + dt L + dt^2/2 G2 where G2
  is the compact discretization of (v d/dx + b)^2; for constant v this is
  the classical Lax-Wendroff stencil.

The matrices are time-independent, so one build serves every step.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .flow_exact import SINE_FIELD, TWO_PI, VelocityField

__all__ = [
    "MAX_SPEED",
    "Grid",
    "TimeStepping",
    "Scheme",
    "PropagatorMatrix",
    "build_grid",
    "timestep_from_cfl",
    "skew_centered_operator",
    "build_propagator",
    "propagate_state",
]

#: Maximum of the built-in advection speed sin(x) + 2.
MAX_SPEED = 3.0


@dataclass(frozen=True)
class Grid:
    """Uniform periodic grid on [0, 2*pi) with nodes x_i = i * dx."""

    n: int
    dx: float
    nodes: np.ndarray

    def node_index(self, x: float) -> int:
        """Index of the node closest to angle x."""
        return int(round(x / self.dx)) % self.n


def build_grid(n: int) -> Grid:
    if n < 8:
        raise ValueError(f"grid needs at least 8 nodes, got {n}")
    dx = TWO_PI / n
    return Grid(n=int(n), dx=dx, nodes=np.arange(n) * dx)


@dataclass(frozen=True)
class TimeStepping:
    """Time step chosen from the CFL number: dt = cfl * dx / max(v)."""

    cfl: float
    dt: float

    def steps_to(self, T: float) -> int:
        return int(round(T / self.dt))


def timestep_from_cfl(cfl: float, grid: Grid) -> TimeStepping:
    if not 0.0 < cfl <= 1.0:
        raise ValueError(f"CFL number must be in (0, 1], got {cfl}")
    return TimeStepping(cfl=cfl, dt=cfl * grid.dx / MAX_SPEED)


class Scheme(enum.Enum):
    LAX_WENDROFF = "lw"
    CRANK_NICOLSON = "cn"


def _centered_difference(grid: Grid) -> np.ndarray:
    """Periodic centered first-difference matrix; exactly antisymmetric."""
    n, dx = grid.n, grid.dx
    D = np.zeros((n, n))
    idx = np.arange(n)
    D[idx, (idx + 1) % n] = 1.0 / (2.0 * dx)
    D[idx, (idx - 1) % n] = -1.0 / (2.0 * dx)
    return D


def _second_difference(grid: Grid) -> np.ndarray:
    """Periodic compact 3-point second-difference matrix."""
    n, dx = grid.n, grid.dx
    D2 = np.zeros((n, n))
    idx = np.arange(n)
    D2[idx, (idx + 1) % n] = 1.0 / dx**2
    D2[idx, (idx - 1) % n] = 1.0 / dx**2
    D2[idx, idx] = -2.0 / dx**2
    return D2


def skew_centered_operator(grid: Grid, field: VelocityField = SINE_FIELD) -> np.ndarray:
    """Skew-symmetric advection core A = -(V D + D V) / 2.

    Second-order consistent with -(v d/dx + v'/2); its exact skew symmetry
    is what makes the Crank-Nicolson step orthogonal for alpha = 1/2.
    """
    D = _centered_difference(grid)
    V = np.diag(field.speed(grid.nodes))
    return -0.5 * (V @ D + D @ V)


@dataclass
class PropagatorMatrix:
    """Dense one-step propagator for a scheme and source weight alpha."""

    scheme: Scheme
    alpha: float
    matrix: np.ndarray
    grid: Grid
    dt: float


def build_propagator(
    scheme: Scheme,
    alpha: float,
    grid: Grid,
    ts: TimeStepping,
    field: VelocityField = SINE_FIELD,
) -> PropagatorMatrix:
    """Assemble the one-step matrix advancing q_t + v q_x + alpha v' q = 0."""
    x = grid.nodes
    n, dt = grid.n, ts.dt
    v = field.speed(x)
    dv = field.speed_derivative(x)
    eye = np.eye(n)
    D1 = _centered_difference(grid)

    if scheme is Scheme.CRANK_NICOLSON:
        A = skew_centered_operator(grid, field)
        if alpha != 0.5:
            A = A - (alpha - 0.5) * np.diag(dv)
        lhs = eye - 0.5 * dt * A
        # the implicit system is solved once; the resulting matrix is
        # reused for every step
        try:
            B = np.linalg.solve(lhs, eye + 0.5 * dt * A)
        except np.linalg.LinAlgError as exc:  # pragma: no cover
            raise RuntimeError("Crank-Nicolson system is singular") from exc
        if not np.all(np.isfinite(B)):  # pragma: no cover
            raise RuntimeError("Crank-Nicolson solve produced non-finite entries")
    elif scheme is Scheme.LAX_WENDROFF:
        b = alpha * dv
        db = alpha * field.speed_second_derivative(x)
        L = -(np.diag(v) @ D1 + np.diag(b))
        # compact stencils for (v d/dx + b)^2 = v^2 d2/dx2 + (v v' + 2 b v) d/dx
        # + (v b' + b^2); the wide product L @ L is unstable at cfl = 1
        G2 = (
            np.diag(v**2) @ _second_difference(grid)
            + np.diag(v * dv + 2.0 * b * v) @ D1
            + np.diag(v * db + b**2)
        )
        B = eye + dt * L + 0.5 * dt**2 * G2
    else:
        raise ValueError(f"unknown scheme: {scheme!r}")
    return PropagatorMatrix(scheme=scheme, alpha=alpha, matrix=B, grid=grid, dt=dt)


def propagate_state(prop: PropagatorMatrix, q: np.ndarray, k: int) -> np.ndarray:
    """Apply the one-step matrix k times to a state vector."""
    q = np.asarray(q, dtype=float)
    if q.shape != (prop.grid.n,):
        raise ValueError(f"state has shape {q.shape}, expected ({prop.grid.n},)")
    if k < 0:
        raise ValueError("step count must be non-negative")
    out = q.copy()
    for _ in range(k):
        out = prop.matrix @ out
    return out
