"""Command-line entry point: run figures, list them, or validate the build.

Exit codes: 0 success, 1 validation failure, 2 bad arguments.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .experiments import FIGURE_IDS, ExperimentConfig, parse_kernel, run_figure

_FIGURE_BLURBS = {
    "VarianceVsSpectrum": "exact vs discretized diagonal-equation solutions",
    "FullSupportGC": "spectrum/diagonal/row panels, GC c=1",
    "TraceSeries": "trace time series over the kernel sweeps",
    "GC025": "spectrum/diagonal/row panels, GC c=0.25",
    "FOAR025": "spectrum/diagonal/row panels, FOAR L=0.25",
    "ZeroLength": "spectrum/diagonal/row panels, zero correlation length",
    "DiagSweepGC": "final-time diagonals across the GC sweep",
    "DiagSweepFOAR": "final-time diagonals across the FOAR sweep",
    "VarianceTimeSeries": "diagonal snapshots through the run, GC c=0.05",
    "StateSolutions": "state propagation vs the exact solution",
}


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="covprop",
        description="Covariance propagation experiments on the unit circle.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run one figure and write its CSV bundle")
    run.add_argument("--figure", required=True, choices=FIGURE_IDS, metavar="ID")
    run.add_argument("--n", type=int, default=None, help="grid size (default 200)")
    run.add_argument("--lambda", dest="cfl", type=float, default=None,
                     help="CFL number in (0, 1] (default 1.0)")
    run.add_argument("--final-time", type=float, default=None,
                     help="target final time (default 3.979)")
    run.add_argument("--kernel", default=None,
                     help="gc:<c> | foar:<L> | dirac (default per figure)")
    run.add_argument("--variance", choices=("unit", "sin"), default=None,
                     help="initial standard-deviation profile (default per figure)")
    run.add_argument("--out", default=None,
                     help="output directory (default $COVPROP_OUT or ./covprop_out)")
    run.add_argument("--config", default=None,
                     help="JSON config file; explicit flags override its values")

    sub.add_parser("list-figures", help="print the available figure ids")
    sub.add_parser("validate", help="run the acceptance invariant suite")
    return parser


def _config_from_args(args: argparse.Namespace) -> ExperimentConfig:
    values = {}
    if args.config:
        with open(args.config, "r", encoding="utf-8") as fh:
            file_cfg = json.load(fh)
        unknown = set(file_cfg) - {"n", "lambda", "final_time", "kernel",
                                   "variance", "out"}
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        values.update(file_cfg)
    # flags override the file
    for key, flag in (("n", args.n), ("lambda", args.cfl),
                      ("final_time", args.final_time), ("kernel", args.kernel),
                      ("variance", args.variance), ("out", args.out)):
        if flag is not None:
            values[key] = flag

    cfg = ExperimentConfig()
    if "n" in values:
        cfg.n = int(values["n"])
    if "lambda" in values:
        cfg.cfl = float(values["lambda"])
    if "final_time" in values:
        cfg.final_time = float(values["final_time"])
    if "kernel" in values and values["kernel"] is not None:
        cfg.kernel = parse_kernel(str(values["kernel"]))
    if "variance" in values and values["variance"] is not None:
        if values["variance"] not in ("unit", "sin"):
            raise ValueError(f"variance must be 'unit' or 'sin', got {values['variance']!r}")
        cfg.variance = values["variance"]
    if "out" in values and values["out"] is not None:
        cfg.output_dir = Path(values["out"])
    return cfg


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code else 0

    if args.command == "list-figures":
        for fid in FIGURE_IDS:
            print(f"{fid:20s} {_FIGURE_BLURBS[fid]}")
        return 0

    if args.command == "validate":
        from .checks import run_all_checks

        results = run_all_checks()
        for res in results:
            status = "PASS" if res.passed else "FAIL"
            print(f"[{status}] {res.name}: {res.detail}")
        failed = [r for r in results if not r.passed]
        print(f"{len(results) - len(failed)}/{len(results)} checks passed")
        return 1 if failed else 0

    # run
    try:
        cfg = _config_from_args(args)
    except (ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    try:
        bundle = run_figure(args.figure, cfg)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(f"{args.figure}: wrote {len(bundle.files)} files to {bundle.directory}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
