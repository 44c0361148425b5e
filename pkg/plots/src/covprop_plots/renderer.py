"""Render CSV figure bundles to static images.

Consumes only the CSV files and manifest.json that the experiment runner
writes; nothing numerical is recomputed here.  Panel layout follows the
manifest's panel list; curve styles and per-kind axis settings live in
styles.json (data, not code).
"""

from __future__ import annotations

import json
from importlib import resources
from pathlib import Path

import matplotlib
import numpy as np

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

__all__ = ["SchemaError", "load_styles", "load_manifest", "panel_grid", "render"]


class SchemaError(Exception):
    """Bundle contents do not match the expected figure schema."""


def load_styles() -> dict:
    with resources.files("covprop_plots").joinpath("styles.json").open(
            "r", encoding="utf-8") as fh:
        return json.load(fh)


def load_manifest(bundle_dir: Path) -> dict:
    bundle_dir = Path(bundle_dir)
    path = bundle_dir / "manifest.json"
    if not path.is_file():
        raise SchemaError(f"no manifest.json in {bundle_dir}")
    with open(path, encoding="utf-8") as fh:
        manifest = json.load(fh)
    for key in ("figure", "panels", "files"):
        if key not in manifest:
            raise SchemaError(f"manifest.json lacks required key {key!r}")
    return manifest


def _read_table(bundle_dir: Path, name: str, needed: list) -> np.ndarray:
    path = Path(bundle_dir) / name
    if not path.is_file():
        raise SchemaError(f"missing data file {name}")
    data = np.genfromtxt(path, delimiter=",", names=True)
    have = data.dtype.names or ()
    missing = [c for c in needed if c not in have]
    if missing:
        raise SchemaError(f"{name}: missing columns {missing}")
    return np.atleast_1d(data)


def panel_grid(bundle_dir: Path, manifest: dict, styles: dict) -> list:
    """Arrange the manifest's panels into rows of plottable cells.

    A cell is {"panel", "data", "t", "overlay"}.  Non-state panels of one
    group share a row; each state panel becomes its own row with one cell
    per snapshot time.  Regions panels never render directly and varsolve
    state panels become overlays where the figure requests it.
    """
    fig_opts = styles["figures"].get(manifest["figure"], {})
    panels = [p for p in manifest["panels"] if p["kind"] != "regions"]
    for panel in panels:
        if panel["kind"] not in styles["kinds"]:
            raise SchemaError(f"{panel['file']}: unknown panel kind {panel['kind']!r}")

    groups = []
    for panel in panels:
        if panel["group"] not in groups:
            groups.append(panel["group"])

    rows = []
    for group in groups:
        in_group = [p for p in panels if p["group"] == group]
        states = [p for p in in_group if p["kind"] == "state"]
        others = [p for p in in_group if p["kind"] != "state"]
        overlay = None
        if fig_opts.get("overlay_varsolve") and states:
            spec = styles["kinds"]["state"]
            overlay = _read_table(bundle_dir, states[0]["file"],
                                  [spec["x"], spec["split_by"]] + spec["curves"])
            states = []
        if others:
            row = []
            for panel in others:
                spec = styles["kinds"][panel["kind"]]
                data = _read_table(bundle_dir, panel["file"],
                                   [spec["x"]] + spec["curves"])
                row.append({"panel": panel, "data": data,
                            "t": panel.get("t"), "overlay": overlay})
            rows.append(row)
        for panel in states:
            spec = styles["kinds"]["state"]
            data = _read_table(bundle_dir, panel["file"],
                               [spec["x"], spec["split_by"]] + spec["curves"])
            rows.append([
                {"panel": panel, "data": data[data[spec["split_by"]] == tv],
                 "t": float(tv), "overlay": None}
                for tv in np.unique(data[spec["split_by"]])
            ])
    if not rows:
        raise SchemaError("bundle has no drawable panels")
    return rows


def _load_regions(bundle_dir: Path, manifest: dict, styles: dict):
    if "regions.csv" not in manifest["files"]:
        return None
    spec = styles["kinds"]["regions"]
    return _read_table(bundle_dir, "regions.csv", [spec["x"]] + spec["curves"])


def _shade_converging(ax, regions, t):
    mask = regions["t"] == t
    if not np.any(mask):
        return
    x = regions["x"][mask]
    conv = regions["converging"][mask].astype(bool)
    if not conv.any():
        return
    idx = np.where(conv)[0]
    breaks = np.where(np.diff(idx) > 1)[0]
    starts = np.concatenate(([idx[0]], idx[breaks + 1]))
    ends = np.concatenate((idx[breaks], [idx[-1]]))
    half = 0.5 * (x[1] - x[0]) if x.size > 1 else 0.0
    for s, e in zip(starts, ends):
        ax.axvspan(x[s] - half, x[e] + half, color="0.88", zorder=0, linewidth=0)


def _draw_cell(ax, cell, styles):
    kind = cell["panel"]["kind"]
    spec = styles["kinds"][kind]
    data = cell["data"]
    xcol = data[spec["x"]]
    for name in spec["curves"]:
        cs = styles["curves"][name]
        ax.plot(xcol, data[name], color=cs["color"], linestyle=cs["linestyle"],
                linewidth=cs.get("linewidth", 1.2), label=cs["label"])
    overlay = cell["overlay"]
    if overlay is not None and cell["t"] is not None:
        mask = overlay["t"] == cell["t"]
        if np.any(mask):
            cs = styles["curves"]["varsolve_cn"]
            ax.plot(overlay["x"][mask], overlay["cn"][mask], color=cs["color"],
                    linestyle=cs["linestyle"], linewidth=cs.get("linewidth", 1.2),
                    label=cs["label"])
    if spec.get("logy"):
        ax.set_yscale("log")
    ax.set_xlabel(spec.get("xlabel", spec["x"]), fontsize=8)
    ax.set_ylabel(spec.get("ylabel", ""), fontsize=8)
    title = cell["panel"]["label"]
    if kind == "state" and cell["t"] is not None:
        title = f"{title}, t={cell['t']:.4g}"
    ax.set_title(title, fontsize=8)
    ax.tick_params(labelsize=7)


def render(bundle_dir, fig: str, out, dpi: int = 150) -> Path:
    """Render one figure bundle to ``out`` (format from the suffix)."""
    bundle_dir = Path(bundle_dir)
    styles = load_styles()
    manifest = load_manifest(bundle_dir)
    if manifest["figure"] != fig:
        raise SchemaError(
            f"bundle in {bundle_dir} is for figure {manifest['figure']!r}, not {fig!r}")
    rows = panel_grid(bundle_dir, manifest, styles)
    shade = styles["figures"].get(fig, {}).get("shade_regions", False)
    regions = _load_regions(bundle_dir, manifest, styles) if shade else None

    with matplotlib.rc_context({"svg.hashsalt": "covprop-plots"}):
        nrows = len(rows)
        ncols = max(len(row) for row in rows)
        figure, axes = plt.subplots(
            nrows, ncols, figsize=(3.4 * ncols, 2.7 * nrows), squeeze=False,
            constrained_layout=True)
        for i in range(nrows):
            for j in range(ncols):
                if j >= len(rows[i]):
                    axes[i][j].set_visible(False)
                    continue
                cell = rows[i][j]
                _draw_cell(axes[i][j], cell, styles)
                if regions is not None and cell["t"] is not None:
                    _shade_converging(axes[i][j], regions, cell["t"])
        axes[0][0].legend(fontsize=6, loc="best")
        figure.suptitle(fig, fontsize=11)
        out = Path(out)
        if out.parent and not out.parent.exists():
            out.parent.mkdir(parents=True, exist_ok=True)
        figure.savefig(out, dpi=dpi)
        plt.close(figure)
    return out
