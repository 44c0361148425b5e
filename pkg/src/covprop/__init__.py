"""Covariance propagation for advective dynamics on the unit circle.

Exact characteristic solutions, Lax-Wendroff / Crank-Nicolson one-step
propagators, traditional and polar-decomposition covariance propagation,
and the diagnostics that expose spurious variance loss and gain.
"""

__version__ = "0.1.0"

from .flow_exact import (  # noqa: E402
    CIRCULATION_PERIOD,
    BoundaryScan,
    ExactProfile,
    VelocityField,
    convergence_boundaries,
    departure_point,
    exact_weighted_solution,
    mass_ratio,
    polar_scalar_d,
)
from .schemes import (  # noqa: E402
    Grid,
    PropagatorMatrix,
    Scheme,
    TimeStepping,
    build_grid,
    build_propagator,
    propagate_state,
    skew_centered_operator,
    timestep_from_cfl,
)
from .covariance import (  # noqa: E402
    CorrelationKernel,
    CovarianceMatrix,
    SpectrumDiagnostics,
    VarianceProfile,
    build_initial_covariance,
    chordal_distance,
    correlation_row,
    diagonal,
    foar_kernel,
    gc_kernel,
    jacobi_eigenvalues,
    normalized_spectrum,
    propagate_polar,
    propagate_traditional,
    trace,
    weighted_trace,
)
from .experiments import (  # noqa: E402
    FIGURE_IDS,
    ExperimentConfig,
    OutputBundle,
    error_metrics,
    parse_kernel,
    run_figure,
)

__all__ = [
    "__version__",
    "CIRCULATION_PERIOD",
    "BoundaryScan",
    "ExactProfile",
    "VelocityField",
    "convergence_boundaries",
    "departure_point",
    "exact_weighted_solution",
    "mass_ratio",
    "polar_scalar_d",
    "Grid",
    "PropagatorMatrix",
    "Scheme",
    "TimeStepping",
    "build_grid",
    "build_propagator",
    "propagate_state",
    "skew_centered_operator",
    "timestep_from_cfl",
    "CorrelationKernel",
    "CovarianceMatrix",
    "SpectrumDiagnostics",
    "VarianceProfile",
    "build_initial_covariance",
    "chordal_distance",
    "correlation_row",
    "diagonal",
    "foar_kernel",
    "gc_kernel",
    "jacobi_eigenvalues",
    "normalized_spectrum",
    "propagate_polar",
    "propagate_traditional",
    "trace",
    "weighted_trace",
    "FIGURE_IDS",
    "ExperimentConfig",
    "OutputBundle",
    "error_metrics",
    "parse_kernel",
    "run_figure",
]
