"""Initial covariances, discrete covariance propagation, and diagnostics.

Initial covariance matrices are built from a correlation kernel in chordal
distance and a standard-deviation profile:

    P0[i, j] = sigma0(x_i) * C(r(x_i, x_j)) * sigma0(x_j).

Two propagation methods are provided.  Traditional propagation applies the
one-step model matrix from both sides, P <- M P M^T.  Polar-decomposition
propagation advances P with the orthogonal-part matrix U (built with
alpha = 1/2) and applies the exact scalar multiplication factor d(x, t) as
a diagonal congruence at the sampled time:

    P_k = D_k U^k P0 (U^T)^k D_k,   D_k = diag(d(x_i, k dt)).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .flow_exact import polar_scalar_d
from .schemes import Grid, PropagatorMatrix, TimeStepping

__all__ = [
    "KernelKind",
    "CorrelationKernel",
    "VarianceProfile",
    "CovarianceMatrix",
    "SpectrumDiagnostics",
    "chordal_distance",
    "gc_kernel",
    "foar_kernel",
    "build_initial_covariance",
    "propagate_traditional",
    "propagate_polar",
    "trace",
    "weighted_trace",
    "diagonal",
    "correlation_row",
    "normalized_spectrum",
    "jacobi_eigenvalues",
]


def chordal_distance(xi, xj):
    """Straight-line distance 2 sin(|xi - xj| / 2) between circle points."""
    xi = np.asarray(xi, dtype=float)
    xj = np.asarray(xj, dtype=float)
    if not (np.all(np.isfinite(xi)) and np.all(np.isfinite(xj))):
        raise ValueError("angles must be finite")
    delta = np.mod(np.abs(xi - xj), 2.0 * np.pi)
    return 2.0 * np.sin(delta / 2.0)


def gc_kernel(r, c):
    """Compactly supported 5th-order piecewise-rational correlation.

    Value 1 at r = 0, exactly 0 for r >= 2c, and 5/24 at the knot r = c
    where the two polynomial branches meet.
    """
    if c <= 0:
        raise ValueError("support half-length c must be positive")
    r = np.asarray(r, dtype=float)
    scalar = r.ndim == 0
    z = np.atleast_1d(np.abs(r) / c)
    out = np.zeros_like(z)
    inner = z <= 1.0
    outer = (z > 1.0) & (z < 2.0)  # exactly zero from r = 2c outward
    zi = z[inner]
    out[inner] = -0.25 * zi**5 + 0.5 * zi**4 + 0.625 * zi**3 - (5.0 / 3.0) * zi**2 + 1.0
    zo = z[outer]
    out[outer] = (
        zo**5 / 12.0
        - 0.5 * zo**4
        + 0.625 * zo**3
        + (5.0 / 3.0) * zo**2
        - 5.0 * zo
        + 4.0
        - 2.0 / (3.0 * zo)
    )
    return float(out[0]) if scalar else out


def foar_kernel(r, L):
    """First-order autoregressive correlation exp(-r / L); cusped at r = 0."""
    if L <= 0:
        raise ValueError("length scale L must be positive")
    return np.exp(-np.asarray(r, dtype=float) / L)


class KernelKind(enum.Enum):
    GASPARI_COHN = "gc"
    FOAR = "foar"
    DIRAC = "dirac"


@dataclass(frozen=True)
class CorrelationKernel:
    """A correlation function of chordal distance, or the Dirac limit."""

    kind: KernelKind
    length: float = 0.0

    @classmethod
    def gaspari_cohn(cls, c: float) -> "CorrelationKernel":
        if c <= 0:
            raise ValueError("support half-length c must be positive")
        return cls(KernelKind.GASPARI_COHN, c)

    @classmethod
    def foar(cls, L: float) -> "CorrelationKernel":
        if L <= 0:
            raise ValueError("length scale L must be positive")
        return cls(KernelKind.FOAR, L)

    @classmethod
    def dirac(cls) -> "CorrelationKernel":
        """Zero correlation length: the identity correlation matrix."""
        return cls(KernelKind.DIRAC, 0.0)

    def correlation(self, r):
        if self.kind is KernelKind.GASPARI_COHN:
            return gc_kernel(r, self.length)
        if self.kind is KernelKind.FOAR:
            return foar_kernel(r, self.length)
        return np.where(np.asarray(r) == 0.0, 1.0, 0.0)

    @property
    def spec(self) -> str:
        """CLI-style spec string, e.g. 'gc:0.25' or 'dirac'."""
        if self.kind is KernelKind.DIRAC:
            return "dirac"
        return f"{self.kind.value}:{self.length:g}"


@dataclass(frozen=True)
class VarianceProfile:
    """Standard-deviation profile sigma0(x) of the initial covariance."""

    kind: str
    sigma0: Callable[[np.ndarray], np.ndarray]

    @classmethod
    def unit(cls) -> "VarianceProfile":
        return cls("unit", lambda x: np.ones_like(np.asarray(x, dtype=float)))

    @classmethod
    def sinusoidal(cls) -> "VarianceProfile":
        """sigma0(x) = sin(3x)/3 + 1, strictly positive everywhere."""
        return cls("sin", lambda x: np.sin(3.0 * np.asarray(x, dtype=float)) / 3.0 + 1.0)


@dataclass
class CovarianceMatrix:
    """Dense symmetric covariance with provenance metadata."""

    matrix: np.ndarray
    kernel: Optional[CorrelationKernel] = None
    variance: Optional[VarianceProfile] = None
    provenance: str = "initial"

    @property
    def n(self) -> int:
        return self.matrix.shape[0]


def build_initial_covariance(
    kernel: CorrelationKernel, var: VarianceProfile, grid: Grid
) -> CovarianceMatrix:
    """P0[i, j] = sigma0(x_i) C(r_ij) sigma0(x_j); Dirac gives diag(sigma0^2)."""
    sig = var.sigma0(grid.nodes)
    if kernel.kind is KernelKind.DIRAC:
        P = np.diag(sig**2)
    else:
        r = chordal_distance(grid.nodes[:, None], grid.nodes[None, :])
        P = sig[:, None] * kernel.correlation(r) * sig[None, :]
    return CovarianceMatrix(matrix=P, kernel=kernel, variance=var, provenance="initial")


def _check_dims(P0: CovarianceMatrix, prop: PropagatorMatrix):
    if P0.matrix.shape != prop.matrix.shape:
        raise ValueError(
            f"covariance is {P0.matrix.shape}, propagator is {prop.matrix.shape}"
        )


def propagate_traditional(
    P0: CovarianceMatrix,
    M: PropagatorMatrix,
    k: int,
    on_step: Optional[Callable[[int, np.ndarray], None]] = None,
) -> CovarianceMatrix:
    """k two-sided applications P <- M P M^T, symmetrized after each step.

    ``on_step(j, P_j)`` is invoked with the initial matrix (j = 0) and
    after every step, e.g. to sample the trace along the way.
    """
    _check_dims(P0, M)
    B = M.matrix
    P = P0.matrix.copy()
    if on_step is not None:
        on_step(0, P)
    for j in range(1, k + 1):
        P = B @ P @ B.T
        P = 0.5 * (P + P.T)
        if on_step is not None:
            on_step(j, P)
    return CovarianceMatrix(
        matrix=P,
        kernel=P0.kernel,
        variance=P0.variance,
        provenance=f"{M.scheme.value}-traditional k={k}",
    )


def propagate_polar(
    P0: CovarianceMatrix,
    U: PropagatorMatrix,
    grid: Grid,
    k: int,
    ts: TimeStepping,
    on_step: Optional[Callable[[int, np.ndarray], None]] = None,
) -> CovarianceMatrix:
    """Polar-decomposition propagation D_k U^k P0 (U^T)^k D_k.

    ``U`` must be built with alpha = 1/2 (the orthogonal-part equation);
    the diagonal factor uses the exact scalar d(x_i, k dt).  ``on_step``
    receives the fully scaled covariance at every sampled step.
    """
    _check_dims(P0, U)
    if U.alpha != 0.5:
        raise ValueError(f"polar propagation needs alpha = 1/2, got {U.alpha}")
    B = U.matrix
    Q = P0.matrix.copy()
    if on_step is not None:
        on_step(0, Q)
    if k == 0:  # d(x, 0) = 1 exactly; skip the scaling round trip
        return CovarianceMatrix(
            matrix=Q, kernel=P0.kernel, variance=P0.variance,
            provenance=f"{U.scheme.value}-polar k=0")
    for j in range(1, k + 1):
        Q = B @ Q @ B.T
        Q = 0.5 * (Q + Q.T)
        if on_step is not None:
            d = polar_scalar_d(grid.nodes, j * ts.dt)
            on_step(j, d[:, None] * Q * d[None, :])
    d = polar_scalar_d(grid.nodes, k * ts.dt)
    P = d[:, None] * Q * d[None, :]
    P = 0.5 * (P + P.T)
    return CovarianceMatrix(
        matrix=P,
        kernel=P0.kernel,
        variance=P0.variance,
        provenance=f"{U.scheme.value}-polar k={k}",
    )


def trace(P: CovarianceMatrix | np.ndarray) -> float:
    """Unweighted matrix trace, the total-variance diagnostic."""
    return float(np.trace(_as_array(P)))


def weighted_trace(P: CovarianceMatrix | np.ndarray, grid: Grid) -> float:
    """dx-weighted trace, approximating the integral of the diagonal."""
    return grid.dx * trace(P)


def diagonal(P: CovarianceMatrix | np.ndarray) -> np.ndarray:
    return np.diag(_as_array(P)).copy()


def correlation_row(P: CovarianceMatrix | np.ndarray, i: int) -> np.ndarray:
    """Row i of the correlation matrix, P[i, j] / sqrt(P[i, i] P[j, j])."""
    A = _as_array(P)
    d = np.diag(A)
    if d[i] <= 0.0 or np.any(d <= 0.0):
        raise ValueError("correlation row needs strictly positive variances")
    return A[i, :] / np.sqrt(d[i] * d)


@dataclass(frozen=True)
class SpectrumDiagnostics:
    """Eigenvalues in descending order and the same list scaled by the largest."""

    eigenvalues: np.ndarray
    normalized: np.ndarray


def normalized_spectrum(P: CovarianceMatrix | np.ndarray) -> SpectrumDiagnostics:
    """All eigenvalues of the symmetrized matrix via the in-repo Jacobi solver."""
    A = _as_array(P)
    A = 0.5 * (A + A.T)
    lam = np.sort(jacobi_eigenvalues(A))[::-1]
    if lam[0] <= 0.0:
        raise ValueError("leading eigenvalue must be positive to normalize")
    return SpectrumDiagnostics(eigenvalues=lam, normalized=lam / lam[0])


def jacobi_eigenvalues(A: np.ndarray, rel_tol: float = 1e-12, max_sweeps: int = 60) -> np.ndarray:
    """Eigenvalues of a symmetric matrix by cyclic Jacobi rotations.

    Sweeps row by row, rotating away each off-diagonal entry, until the
    off-diagonal Frobenius norm drops below ``rel_tol`` times the matrix
    Frobenius norm.
    """
    A = np.array(A, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError("matrix must be square")
    if np.max(np.abs(A - A.T)) > 1e-10 * max(1.0, np.max(np.abs(A))):
        raise ValueError("matrix must be symmetric")
    n = A.shape[0]
    if n == 1:
        return np.diag(A).copy()
    norm = np.linalg.norm(A)
    if norm == 0.0:
        return np.zeros(n)

    def off_norm():
        off = A - np.diag(np.diag(A))
        return float(np.linalg.norm(off))

    for _ in range(max_sweeps):
        if off_norm() <= rel_tol * norm:
            return np.diag(A).copy()
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = A[p, q]
                if apq == 0.0:
                    continue
                tau = (A[q, q] - A[p, p]) / (2.0 * apq)
                # hypot avoids overflow when tau is enormous
                t = np.sign(tau) / (abs(tau) + np.hypot(tau, 1.0)) if tau != 0.0 else 1.0
                cth = 1.0 / np.sqrt(1.0 + t**2)
                sth = t * cth
                col_p = A[:, p].copy()
                col_q = A[:, q].copy()
                A[:, p] = cth * col_p - sth * col_q
                A[:, q] = sth * col_p + cth * col_q
                row_p = A[p, :].copy()
                row_q = A[q, :].copy()
                A[p, :] = cth * row_p - sth * row_q
                A[q, :] = sth * row_p + cth * row_q
                A[p, q] = 0.0
                A[q, p] = 0.0
    if off_norm() > rel_tol * norm:  # pragma: no cover
        raise RuntimeError("Jacobi iteration did not converge")
    return np.diag(A).copy()


def _as_array(P: CovarianceMatrix | np.ndarray) -> np.ndarray:
    return P.matrix if isinstance(P, CovarianceMatrix) else np.asarray(P, dtype=float)
