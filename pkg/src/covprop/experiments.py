"""Declarative figure runs: propagation variants, exact references, CSV output.

Each figure id maps to a bundle of CSV files plus a manifest.json written
into the output directory.  The pipeline is fully deterministic — no
randomness anywhere — so identical configuration reproduces byte-identical
CSV output.

CSV schemas (UTF-8, comma separator, header row, floats with 17
significant digits):

    diag:     x, exact_variance, exact_cts_spectrum, cn_trad, cn_polar, lw_trad, lw_polar
    trace:    t, exact, cn_trad, cn_polar, lw_trad, lw_polar
    spectrum: rank, exact, cn_trad, cn_polar, lw_trad, lw_polar   (normalized, rank 1-based)
    row:      x, exact, cn_trad, cn_polar, lw_trad, lw_polar      (correlations at x = 3*pi/2)
    state:    x, t, exact, cn, lw
    regions:  x, t, mass_ratio, converging                        (shading helper)
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Callable, Optional

import numpy as np

from . import __version__
from .covariance import (
    CorrelationKernel,
    CovarianceMatrix,
    VarianceProfile,
    build_initial_covariance,
    chordal_distance,
    correlation_row,
    diagonal,
    normalized_spectrum,
    propagate_polar,
    propagate_traditional,
)
from .flow_exact import SINE_FIELD, ExactProfile, departure_point, mass_ratio
from .schemes import (
    Grid,
    PropagatorMatrix,
    Scheme,
    TimeStepping,
    build_grid,
    build_propagator,
    propagate_state,
    timestep_from_cfl,
)

__all__ = [
    "FIGURE_IDS",
    "ExperimentConfig",
    "OutputBundle",
    "error_metrics",
    "parse_kernel",
    "run_figure",
]

FIGURE_IDS = (
    "VarianceVsSpectrum",
    "FullSupportGC",
    "TraceSeries",
    "GC025",
    "FOAR025",
    "ZeroLength",
    "DiagSweepGC",
    "DiagSweepFOAR",
    "VarianceTimeSeries",
    "StateSolutions",
)

#: Default output directory environment variable; --out overrides.
OUTPUT_ENV_VAR = "COVPROP_OUT"

_GC_SWEEP = (1.0, 0.25, 0.05, 0.0)  # 0 means the Dirac limit
_FOAR_SWEEP = (0.5, 0.25, 0.03, 0.0)


def error_metrics(numeric, exact, dx: float) -> dict:
    """l2 = sqrt(dx * sum((num - ex)^2)); linf = max |num - ex|."""
    numeric = np.asarray(numeric, dtype=float)
    exact = np.asarray(exact, dtype=float)
    if numeric.shape != exact.shape:
        raise ValueError(f"length mismatch: {numeric.shape} vs {exact.shape}")
    diff = numeric - exact
    return {
        "l2": float(np.sqrt(dx * np.sum(diff**2))),
        "linf": float(np.max(np.abs(diff))) if diff.size else 0.0,
    }


def parse_kernel(spec: str) -> CorrelationKernel:
    """Parse 'gc:<c>', 'foar:<L>' or 'dirac'."""
    s = spec.strip().lower()
    if s == "dirac":
        return CorrelationKernel.dirac()
    for prefix, builder in (("gc:", CorrelationKernel.gaspari_cohn),
                            ("foar:", CorrelationKernel.foar)):
        if s.startswith(prefix):
            try:
                value = float(s[len(prefix):])
            except ValueError:
                raise ValueError(f"bad kernel spec: {spec!r}") from None
            if value == 0.0:
                return CorrelationKernel.dirac()
            return builder(value)
    raise ValueError(f"bad kernel spec: {spec!r} (expected gc:<c>, foar:<L> or dirac)")


@dataclass
class ExperimentConfig:
    """Run configuration; None fields fall back to each figure's defaults."""

    n: int = 200
    cfl: float = 1.0
    final_time: float = 3.979
    kernel: Optional[CorrelationKernel] = None
    variance: Optional[str] = None  # "unit" | "sin"
    output_dir: Optional[Path] = None

    def resolve_output_dir(self) -> Path:
        if self.output_dir is not None:
            return Path(self.output_dir)
        env = os.environ.get(OUTPUT_ENV_VAR)
        return Path(env) if env else Path("covprop_out")


@dataclass
class OutputBundle:
    """Where a figure run landed and what it wrote."""

    figure: str
    directory: Path
    manifest: dict
    files: list = field(default_factory=list)


# ---------------------------------------------------------------------------
# shared machinery


_VARIANTS = ("cn_trad", "cn_polar", "lw_trad", "lw_polar")


class _Pipeline:
    """Grid, time stepping and cached propagators for one configuration."""

    def __init__(self, cfg: ExperimentConfig):
        self.cfg = cfg
        self.grid: Grid = build_grid(cfg.n)
        self.ts: TimeStepping = timestep_from_cfl(cfg.cfl, self.grid)
        self.steps: int = self.ts.steps_to(cfg.final_time)
        self.arrival: float = self.steps * self.ts.dt
        self.row_index: int = self.grid.node_index(1.5 * np.pi)
        self._props: dict = {}

    def propagator(self, scheme: Scheme, alpha: float) -> PropagatorMatrix:
        key = (scheme, alpha)
        if key not in self._props:
            self._props[key] = build_propagator(scheme, alpha, self.grid, self.ts)
        return self._props[key]

    def run_variant(
        self,
        name: str,
        P0: CovarianceMatrix,
        on_step: Optional[Callable[[int, np.ndarray], None]] = None,
    ) -> CovarianceMatrix:
        scheme = Scheme.CRANK_NICOLSON if name.startswith("cn") else Scheme.LAX_WENDROFF
        if name.endswith("trad"):
            M = self.propagator(scheme, 1.0)
            return propagate_traditional(P0, M, self.steps, on_step=on_step)
        U = self.propagator(scheme, 0.5)
        return propagate_polar(P0, U, self.grid, self.steps, self.ts, on_step=on_step)

    def snapshots(self) -> list:
        marks = sorted({max(1, round(self.steps * f)) for f in (0.25, 0.5, 0.75, 1.0)})
        return marks


def _profiles(cfg: ExperimentConfig) -> list:
    if cfg.variance is None:
        return [VarianceProfile.unit(), VarianceProfile.sinusoidal()]
    if cfg.variance == "unit":
        return [VarianceProfile.unit()]
    if cfg.variance == "sin":
        return [VarianceProfile.sinusoidal()]
    raise ValueError(f"unknown variance profile: {cfg.variance!r}")


def _sigma0_sq(var: VarianceProfile) -> Callable:
    return lambda x: var.sigma0(x) ** 2


def _exact_diagonals(pipe: _Pipeline, var: VarianceProfile, t: float):
    """Exact variance and zero-correlation-limit diagonals at time t."""
    f0 = _sigma0_sq(var)
    x = pipe.grid.nodes
    sig2 = ExactProfile(2.0, f0).value(x, t)
    cts = ExactProfile(1.0, f0).value(x, t)
    return sig2, cts


def _exact_covariance(pipe: _Pipeline, kernel: CorrelationKernel,
                      var: VarianceProfile, t: float) -> np.ndarray:
    """Exact propagated covariance sampled on the grid at time t."""
    x = pipe.grid.nodes
    if kernel.kind.value == "dirac":
        _, cts = _exact_diagonals(pipe, var, t)
        return np.diag(cts)
    s = departure_point(x, t)
    ratio = SINE_FIELD.speed(s) / SINE_FIELD.speed(x)
    r = chordal_distance(s[:, None], s[None, :])
    corr = kernel.correlation(r)
    w = var.sigma0(s) * ratio
    return w[:, None] * corr * w[None, :]


def _kernel_label(kernel: CorrelationKernel, family: str) -> str:
    """Filename tag: gc_c1, foar_L0.25, ...; the Dirac member inherits the
    sweep family so both sweep endpoints keep distinct names."""
    if kernel.kind.value == "gc":
        return f"gc_c{kernel.length:g}"
    if kernel.kind.value == "foar":
        return f"foar_L{kernel.length:g}"
    return "gc_c0" if family == "gc" else "foar_L0"


# ---------------------------------------------------------------------------
# CSV and manifest output


def _fmt(value) -> str:
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return format(float(value), ".17g")


def _write_csv(path: Path, header: list, columns: list) -> None:
    rows = zip(*columns)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(_fmt(v) for v in row) + "\n")


class _Bundle:
    """Accumulates files, panel descriptors and error metrics for a figure."""

    def __init__(self, figure: str, outdir: Path, pipe: _Pipeline):
        self.figure = figure
        self.outdir = outdir
        self.pipe = pipe
        self.files: list = []
        self.panels: list = []
        self.metrics: dict = {}

    def add(self, name: str, header: list, columns: list, kind: str,
            label: str, group: str, **extra) -> None:
        _write_csv(self.outdir / name, header, columns)
        self.files.append(name)
        panel = {"file": name, "kind": kind, "label": label, "group": group}
        panel.update(extra)
        self.panels.append(panel)

    def add_metrics(self, name: str, metrics: dict) -> None:
        self.metrics[name] = metrics

    def finish(self, cfg: ExperimentConfig, extras: dict) -> OutputBundle:
        manifest = {
            "figure": self.figure,
            "generator": {"package": "covprop", "version": __version__},
            "config": {
                "n": cfg.n,
                "cfl": cfg.cfl,
                "final_time": cfg.final_time,
                "kernel": cfg.kernel.spec if cfg.kernel is not None else None,
                "variance": cfg.variance,
            },
            "dt": self.pipe.ts.dt,
            "steps": self.pipe.steps,
            "arrival_time": self.pipe.arrival,
            "row_index": self.pipe.row_index,
            "files": list(self.files),
            "panels": self.panels,
            "metrics": self.metrics,
        }
        manifest.update(extras)
        path = self.outdir / "manifest.json"
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(json.dumps(manifest, indent=2, sort_keys=True) + "\n")
        self.files.append("manifest.json")
        return OutputBundle(
            figure=self.figure,
            directory=self.outdir,
            manifest=manifest,
            files=list(self.files),
        )


# ---------------------------------------------------------------------------
# figure runners


def _curve_metrics(dx: float, exact, curves: dict) -> dict:
    return {name: error_metrics(c, exact, dx) for name, c in curves.items()}


def _fig_equation_solutions(bundle: _Bundle, cfg: ExperimentConfig) -> dict:
    """Exact vs directly discretized diagonal equations at several times."""
    pipe = bundle.pipe
    x = pipe.grid.nodes
    marks = [0] + pipe.snapshots()
    for var in _profiles(cfg):
        f0 = _sigma0_sq(var)
        q0 = f0(x)
        for tag, alpha in (("variance_eq", 2.0), ("ctsspec_eq", 1.0)):
            exact_profile = ExactProfile(alpha, f0)
            cols_x, cols_t, col_ex, col_cn, col_lw = [], [], [], [], []
            metrics = {}
            q_cn, q_lw = q0.copy(), q0.copy()
            cn = pipe.propagator(Scheme.CRANK_NICOLSON, alpha)
            lw = pipe.propagator(Scheme.LAX_WENDROFF, alpha)
            last = 0
            for k in marks:
                q_cn = propagate_state(cn, q_cn, k - last)
                q_lw = propagate_state(lw, q_lw, k - last)
                last = k
                t = k * pipe.ts.dt
                ex = exact_profile.value(x, t)
                cols_x.append(x)
                cols_t.append(np.full(pipe.grid.n, t))
                col_ex.append(ex)
                col_cn.append(q_cn)
                col_lw.append(q_lw)
                metrics[f"t={t:.6g}"] = _curve_metrics(
                    pipe.grid.dx, ex, {"cn": q_cn, "lw": q_lw})
            name = f"{tag}_{var.kind}.csv"
            bundle.add(
                name, ["x", "t", "exact", "cn", "lw"],
                [np.concatenate(cols_x), np.concatenate(cols_t),
                 np.concatenate(col_ex), np.concatenate(col_cn),
                 np.concatenate(col_lw)],
                kind="state", label=f"{tag} ({var.kind} start)", group=var.kind)
            bundle.add_metrics(name, metrics)
    _write_regions(bundle, pipe.snapshots())
    return {"snapshot_steps": [0] + pipe.snapshots()}


def _write_regions(bundle: _Bundle, marks: list) -> None:
    pipe = bundle.pipe
    x = pipe.grid.nodes
    cols_x, cols_t, col_m, col_conv = [], [], [], []
    for k in marks:
        t = k * pipe.ts.dt
        m = mass_ratio(x, t)
        cols_x.append(x)
        cols_t.append(np.full(pipe.grid.n, t))
        col_m.append(m)
        col_conv.append((m > 1.0).astype(int))
    bundle.add(
        "regions.csv", ["x", "t", "mass_ratio", "converging"],
        [np.concatenate(cols_x), np.concatenate(cols_t),
         np.concatenate(col_m), np.concatenate(col_conv)],
        kind="regions", label="mass convergence regions", group="regions")


def _fig_kernel_snapshot(bundle: _Bundle, cfg: ExperimentConfig,
                         default_kernel: str) -> dict:
    """Spectrum / diagonal / correlation-row panels for one kernel at T."""
    pipe = bundle.pipe
    kernel = cfg.kernel if cfg.kernel is not None else parse_kernel(default_kernel)
    x = pipe.grid.nodes
    for var in _profiles(cfg):
        P0 = build_initial_covariance(kernel, var, pipe.grid)
        results = {name: bundle.pipe.run_variant(name, P0) for name in _VARIANTS}
        sig2, cts = _exact_diagonals(pipe, var, pipe.arrival)
        exact_P = _exact_covariance(pipe, kernel, var, pipe.arrival)

        diag_name = f"diag_{var.kind}.csv"
        diag_curves = {name: diagonal(res) for name, res in results.items()}
        bundle.add(
            diag_name,
            ["x", "exact_variance", "exact_cts_spectrum"] + list(_VARIANTS),
            [x, sig2, cts] + [diag_curves[name] for name in _VARIANTS],
            kind="diag", label=f"variances ({var.kind})", group=var.kind)
        bundle.add_metrics(diag_name, {
            name: {
                "vs_exact_variance": error_metrics(curve, sig2, pipe.grid.dx),
                "vs_exact_cts_spectrum": error_metrics(curve, cts, pipe.grid.dx),
            } for name, curve in diag_curves.items()
        })

        spec_name = f"spectrum_{var.kind}.csv"
        spec_exact = normalized_spectrum(exact_P).normalized
        spec_curves = {name: normalized_spectrum(res.matrix).normalized
                       for name, res in results.items()}
        bundle.add(
            spec_name, ["rank", "exact"] + list(_VARIANTS),
            [np.arange(1, pipe.grid.n + 1), spec_exact]
            + [spec_curves[name] for name in _VARIANTS],
            kind="spectrum", label=f"normalized spectra ({var.kind})", group=var.kind)
        bundle.add_metrics(spec_name, _curve_metrics(1.0, spec_exact, spec_curves))

        row_name = f"row_{var.kind}.csv"
        i = pipe.row_index
        row_exact = correlation_row(exact_P, i)
        row_curves = {name: correlation_row(res.matrix, i)
                      for name, res in results.items()}
        bundle.add(
            row_name, ["x", "exact"] + list(_VARIANTS),
            [x, row_exact] + [row_curves[name] for name in _VARIANTS],
            kind="row", label=f"correlations at x=3pi/2 ({var.kind})", group=var.kind)
        bundle.add_metrics(row_name, _curve_metrics(pipe.grid.dx, row_exact, row_curves))
    return {"kernel_used": kernel.spec}


def _trace_members(cfg: ExperimentConfig) -> list:
    """(family, kernel) sweep for trace/diagonal sweep figures."""
    if cfg.kernel is not None:
        family = cfg.kernel.kind.value if cfg.kernel.kind.value != "dirac" else "gc"
        return [(family, cfg.kernel)]
    members = []
    for c in _GC_SWEEP:
        members.append(("gc", parse_kernel(f"gc:{c}")))
    for L in _FOAR_SWEEP:
        members.append(("foar", parse_kernel(f"foar:{L}")))
    return members


def _fig_trace_series(bundle: _Bundle, cfg: ExperimentConfig) -> dict:
    pipe = bundle.pipe
    x = pipe.grid.nodes
    var = _profiles(replace(cfg, variance=cfg.variance or "sin"))[0]
    members = _trace_members(cfg)
    single = len(members) == 1
    times = np.arange(pipe.steps + 1) * pipe.ts.dt

    f0 = _sigma0_sq(var)
    exact_cont = np.array([np.sum(ExactProfile(2.0, f0).value(x, t)) for t in times])
    exact_dirac = np.array([np.sum(ExactProfile(1.0, f0).value(x, t)) for t in times])

    dirac_cache = None
    for family, kernel in members:
        if kernel.kind.value == "dirac" and dirac_cache is not None:
            traces = dirac_cache
        else:
            P0 = build_initial_covariance(kernel, var, pipe.grid)
            traces = {}
            for name in _VARIANTS:
                series = np.empty(pipe.steps + 1)

                def sample(j, P, series=series):
                    series[j] = np.trace(P)

                pipe.run_variant(name, P0, on_step=sample)
                traces[name] = series
            if kernel.kind.value == "dirac":
                dirac_cache = traces
        exact = exact_dirac if kernel.kind.value == "dirac" else exact_cont
        name = "trace_series.csv" if single else f"trace_{_kernel_label(kernel, family)}.csv"
        bundle.add(
            name, ["t", "exact"] + list(_VARIANTS),
            [times, exact] + [traces[v] for v in _VARIANTS],
            kind="trace", label=f"trace, {kernel.spec}", group=family)
        bundle.add_metrics(name, _curve_metrics(pipe.ts.dt, exact, traces))
    return {"variance_used": var.kind}


def _fig_diag_sweep(bundle: _Bundle, cfg: ExperimentConfig, family: str) -> dict:
    pipe = bundle.pipe
    x = pipe.grid.nodes
    if cfg.kernel is not None:
        members = [(family, cfg.kernel)]
    else:
        values = _GC_SWEEP if family == "gc" else _FOAR_SWEEP
        members = [(family, parse_kernel(f"{family}:{v}")) for v in values]
    for var in _profiles(cfg):
        sig2, cts = _exact_diagonals(pipe, var, pipe.arrival)
        for fam, kernel in members:
            P0 = build_initial_covariance(kernel, var, pipe.grid)
            results = {name: pipe.run_variant(name, P0) for name in _VARIANTS}
            curves = {name: diagonal(res) for name, res in results.items()}
            name = f"diag_{_kernel_label(kernel, fam)}_{var.kind}.csv"
            bundle.add(
                name,
                ["x", "exact_variance", "exact_cts_spectrum"] + list(_VARIANTS),
                [x, sig2, cts] + [curves[v] for v in _VARIANTS],
                kind="diag", label=f"diag, {kernel.spec} ({var.kind})", group=var.kind)
            bundle.add_metrics(name, {
                v: {
                    "vs_exact_variance": error_metrics(curves[v], sig2, pipe.grid.dx),
                    "vs_exact_cts_spectrum": error_metrics(curves[v], cts, pipe.grid.dx),
                } for v in _VARIANTS
            })
    return {}


def _fig_variance_time_series(bundle: _Bundle, cfg: ExperimentConfig) -> dict:
    pipe = bundle.pipe
    x = pipe.grid.nodes
    kernel = cfg.kernel if cfg.kernel is not None else parse_kernel("gc:0.05")
    marks = pipe.snapshots()
    for var in _profiles(cfg):
        f0 = _sigma0_sq(var)
        P0 = build_initial_covariance(kernel, var, pipe.grid)
        sampled = {name: {} for name in _VARIANTS}
        for name in _VARIANTS:
            store = sampled[name]

            def keep(j, P, store=store):
                if j in marks:
                    store[j] = np.diag(P).copy()

            pipe.run_variant(name, P0, on_step=keep)
        for k in marks:
            t = k * pipe.ts.dt
            sig2 = ExactProfile(2.0, f0).value(x, t)
            cts = ExactProfile(1.0, f0).value(x, t)
            name = f"diag_{var.kind}_k{k}.csv"
            bundle.add(
                name,
                ["x", "exact_variance", "exact_cts_spectrum"] + list(_VARIANTS),
                [x, sig2, cts] + [sampled[v][k] for v in _VARIANTS],
                kind="diag", label=f"variances at t={t:.4g} ({var.kind})",
                group=var.kind, t=t)
            bundle.add_metrics(name, {
                v: {
                    "vs_exact_variance": error_metrics(sampled[v][k], sig2, pipe.grid.dx),
                    "vs_exact_cts_spectrum": error_metrics(sampled[v][k], cts, pipe.grid.dx),
                } for v in _VARIANTS
            })

        # the same diagonal propagated on its own, directly from the
        # variance equation, for contrast with the extracted diagonals
        cols_x, cols_t, col_ex, col_cn, col_lw = [], [], [], [], []
        q_cn = q_lw = f0(x)
        cn = pipe.propagator(Scheme.CRANK_NICOLSON, 2.0)
        lw = pipe.propagator(Scheme.LAX_WENDROFF, 2.0)
        last = 0
        metrics = {}
        for k in marks:
            q_cn = propagate_state(cn, q_cn, k - last)
            q_lw = propagate_state(lw, q_lw, k - last)
            last = k
            t = k * pipe.ts.dt
            ex = ExactProfile(2.0, f0).value(x, t)
            cols_x.append(x)
            cols_t.append(np.full(pipe.grid.n, t))
            col_ex.append(ex)
            col_cn.append(q_cn)
            col_lw.append(q_lw)
            metrics[f"t={t:.6g}"] = _curve_metrics(pipe.grid.dx, ex,
                                                   {"cn": q_cn, "lw": q_lw})
        name = f"varsolve_{var.kind}.csv"
        bundle.add(
            name, ["x", "t", "exact", "cn", "lw"],
            [np.concatenate(cols_x), np.concatenate(cols_t),
             np.concatenate(col_ex), np.concatenate(col_cn), np.concatenate(col_lw)],
            kind="state", label=f"variance equation solved directly ({var.kind})",
            group=var.kind)
        bundle.add_metrics(name, metrics)
    _write_regions(bundle, marks)
    return {"kernel_used": kernel.spec, "snapshot_steps": marks}


def _fig_state_solutions(bundle: _Bundle, cfg: ExperimentConfig) -> dict:
    pipe = bundle.pipe
    x = pipe.grid.nodes
    marks = pipe.snapshots()
    for var in _profiles(cfg):
        f0 = var.sigma0  # the state itself, not its square
        exact_profile = ExactProfile(1.0, f0)
        q_cn = q_lw = f0(x)
        cn = pipe.propagator(Scheme.CRANK_NICOLSON, 1.0)
        lw = pipe.propagator(Scheme.LAX_WENDROFF, 1.0)
        cols_x, cols_t, col_ex, col_cn, col_lw = [], [], [], [], []
        metrics = {}
        last = 0
        for k in marks:
            q_cn = propagate_state(cn, q_cn, k - last)
            q_lw = propagate_state(lw, q_lw, k - last)
            last = k
            t = k * pipe.ts.dt
            ex = exact_profile.value(x, t)
            cols_x.append(x)
            cols_t.append(np.full(pipe.grid.n, t))
            col_ex.append(ex)
            col_cn.append(q_cn)
            col_lw.append(q_lw)
            metrics[f"t={t:.6g}"] = _curve_metrics(pipe.grid.dx, ex,
                                                   {"cn": q_cn, "lw": q_lw})
        name = f"state_{var.kind}.csv"
        bundle.add(
            name, ["x", "t", "exact", "cn", "lw"],
            [np.concatenate(cols_x), np.concatenate(cols_t),
             np.concatenate(col_ex), np.concatenate(col_cn), np.concatenate(col_lw)],
            kind="state", label=f"state solutions ({var.kind} start)", group=var.kind)
        bundle.add_metrics(name, metrics)
    return {"snapshot_steps": marks}


_RUNNERS = {
    "VarianceVsSpectrum": _fig_equation_solutions,
    "FullSupportGC": lambda b, c: _fig_kernel_snapshot(b, c, "gc:1"),
    "TraceSeries": _fig_trace_series,
    "GC025": lambda b, c: _fig_kernel_snapshot(b, c, "gc:0.25"),
    "FOAR025": lambda b, c: _fig_kernel_snapshot(b, c, "foar:0.25"),
    "ZeroLength": lambda b, c: _fig_kernel_snapshot(b, c, "dirac"),
    "DiagSweepGC": lambda b, c: _fig_diag_sweep(b, c, "gc"),
    "DiagSweepFOAR": lambda b, c: _fig_diag_sweep(b, c, "foar"),
    "VarianceTimeSeries": _fig_variance_time_series,
    "StateSolutions": _fig_state_solutions,
}


def run_figure(fig: str, cfg: Optional[ExperimentConfig] = None) -> OutputBundle:
    """Run one figure id and write its CSV bundle plus manifest.json."""
    if fig not in _RUNNERS:
        raise ValueError(f"unknown figure id: {fig!r} (see FIGURE_IDS)")
    cfg = cfg or ExperimentConfig()
    outdir = cfg.resolve_output_dir() / fig
    outdir.mkdir(parents=True, exist_ok=True)
    pipe = _Pipeline(cfg)
    bundle = _Bundle(fig, outdir, pipe)
    extras = _RUNNERS[fig](bundle, cfg)
    return bundle.finish(cfg, extras)
