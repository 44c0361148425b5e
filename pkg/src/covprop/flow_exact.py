"""Closed-form reference solutions on the unit circle.

The advecting field is v(x) = sin(x) + 2, which never vanishes, so every
point circulates around the circle with period 2*pi/sqrt(3).  Solutions of

    q_t + v q_x + alpha * v'(x) q = 0,   q(x, 0) = f0(x)

follow characteristics and can be written down explicitly:

    q(x, t) = f0(s(x, t)) * (v(s(x, t)) / v(x)) ** alpha

where s(x, t) is the departure point of the characteristic arriving at x
at time t.  The exponent alpha selects the quantity of interest:

    alpha = 0    pure advection (zero-correlation-length diagonal factor)
    alpha = 1/2  scalar polar factor d (so d**2 is the mass ratio)
    alpha = 1    mass density / zero-correlation diagonal / mass ratio m
    alpha = 2    variance of a spatially correlated field

All functions accept scalars or numpy arrays and broadcast.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

__all__ = [
    "CIRCULATION_PERIOD",
    "VelocityField",
    "ExactProfile",
    "BoundaryScan",
    "departure_point",
    "exact_weighted_solution",
    "mass_ratio",
    "polar_scalar_d",
    "convergence_boundaries",
]

_SQRT3 = np.sqrt(3.0)

#: Time for any fluid element to complete one lap of the circle:
#: integral of dx / (sin x + 2) over [0, 2*pi].
CIRCULATION_PERIOD = 2.0 * np.pi / _SQRT3

TWO_PI = 2.0 * np.pi


@dataclass(frozen=True)
class VelocityField:
    """Time-independent advection speed on the circle and its derivatives."""

    kind: str
    speed: Callable[[np.ndarray], np.ndarray]
    speed_derivative: Callable[[np.ndarray], np.ndarray]
    speed_second_derivative: Callable[[np.ndarray], np.ndarray]

    @classmethod
    def sine(cls) -> "VelocityField":
        """The built-in profile v(x) = sin(x) + 2, with v in [1, 3]."""
        return cls(
            kind="sine",
            speed=lambda x: np.sin(x) + 2.0,
            speed_derivative=np.cos,
            speed_second_derivative=lambda x: -np.sin(x),
        )


#: Default field used by every closed-form routine in this module.
SINE_FIELD = VelocityField.sine()


def _speed(x):
    return np.sin(x) + 2.0


def _validate(x, t):
    x = np.asarray(x, dtype=float)
    t = np.asarray(t, dtype=float)
    if not (np.all(np.isfinite(x)) and np.all(np.isfinite(t))):
        raise ValueError("angles and times must be finite")
    if np.any(t < 0.0):
        raise ValueError("time must be non-negative")
    return x, t


def _flow_angle(x):
    """Monotone angle coordinate along the flow.

    arctan((2*tan(x/2) + 1)/sqrt(3)) maps one lap of the circle onto an
    interval of length pi; the principal branch jumps at x = pi, so a
    branch counter restores continuity.  Advancing time by dt shifts this
    coordinate by sqrt(3)*dt/2.
    """
    xw = np.mod(x, TWO_PI)
    th = np.arctan((2.0 * np.tan(xw / 2.0) + 1.0) / _SQRT3)
    return np.where(xw > np.pi, th + np.pi, th)


def departure_point(x, t):
    """Foot s(x, t) of the characteristic through (x, t), wrapped to [0, 2*pi).

    Exact inverse of the forward flow of dx/dt = sin(x) + 2.  The angle
    coordinate is reduced modulo pi onto the principal strip before the
    tangent is inverted, so the result stays continuous in t for all t,
    not just until the first branch crossing.
    """
    x, t = _validate(x, t)
    th = _flow_angle(x) - _SQRT3 * t / 2.0
    # reduce to (-pi/2, pi/2]; tan is pi-periodic so the shift is exact
    phi = th - np.floor((th + np.pi / 2.0) / np.pi) * np.pi
    s = 2.0 * np.arctan((_SQRT3 * np.tan(phi) - 1.0) / 2.0)
    out = np.mod(s, TWO_PI)
    return out if out.ndim else float(out)


@dataclass(frozen=True)
class ExactProfile:
    """A weighted characteristic solution: f0(s(x,t)) * (v(s)/v(x))**alpha."""

    alpha: float
    f0: Callable[[np.ndarray], np.ndarray]

    def value(self, x, t):
        return exact_weighted_solution(self, x, t)


def exact_weighted_solution(profile: ExactProfile, x, t):
    """Evaluate an :class:`ExactProfile` at angles ``x`` and time ``t``."""
    x, t = _validate(x, t)
    s = departure_point(x, t)
    ratio = _speed(s) / _speed(x)
    if profile.alpha == 0.0:
        return profile.f0(s)
    return profile.f0(s) * ratio**profile.alpha


def mass_ratio(x, t):
    """m(x, t) = v(s(x,t)) / v(x): mass density evolved from a unit field.

    m > 1 marks mass convergence, m < 1 divergence.  The ratio of the
    exact variance to the exact zero-correlation diagonal equals m when
    both start from the same initial profile.
    """
    x, t = _validate(x, t)
    s = departure_point(x, t)
    return _speed(s) / _speed(x)


def polar_scalar_d(x, t):
    """Scalar multiplication factor of the propagator's polar decomposition.

    d(x, 0) = 1 and d**2 equals :func:`mass_ratio` exactly.
    """
    return np.sqrt(mass_ratio(x, t))


@dataclass(frozen=True)
class BoundaryScan:
    """Roots of m(x, t) = 1 partitioning the circle into loss/gain regions."""

    roots: np.ndarray
    neutral: bool  # True when m == 1 everywhere (t = 0)


def convergence_boundaries(t: float, grid_resolution: int) -> BoundaryScan:
    """Locate all x in [0, 2*pi) with m(x, t) = 1.

    Sign changes of m - 1 are bracketed on a scan grid four times finer
    than ``grid_resolution`` and refined by bisection to 1e-10.  At t = 0
    the ratio is identically one and the scan is reported as neutral.
    """
    if not np.isfinite(t) or t < 0.0:
        raise ValueError("time must be finite and non-negative")
    if t == 0.0:
        return BoundaryScan(roots=np.empty(0), neutral=True)

    n_scan = 4 * int(grid_resolution)
    xs = np.arange(n_scan) * (TWO_PI / n_scan)
    g = mass_ratio(xs, t) - 1.0

    def g_at(x):
        return mass_ratio(np.mod(x, TWO_PI), t) - 1.0

    roots = []
    for i in range(n_scan):
        a, fa = xs[i], g[i]
        b = xs[i + 1] if i + 1 < n_scan else TWO_PI  # wrap bracket
        fb = g[(i + 1) % n_scan]
        if fa == 0.0:
            roots.append(a)
            continue
        if fa * fb >= 0.0:
            continue
        while b - a > 1e-10:
            mid = 0.5 * (a + b)
            fm = g_at(mid)
            if fm == 0.0:
                a = b = mid
            elif fa * fm < 0.0:
                b = mid
            else:
                a, fa = mid, fm
        roots.append(np.mod(0.5 * (a + b), TWO_PI))
    return BoundaryScan(roots=np.sort(np.asarray(roots)), neutral=False)
