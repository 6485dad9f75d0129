"""Curve and landscape figures from sweep tables.

Rendering is deterministic: fixed fonts, a fixed SVG hash salt and no date
metadata, so re-rendering the same input yields a byte-identical file.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .reader import SchemaError, read_tables

_RC = {
    "svg.hashsalt": "backflow-plots",
    "svg.fonttype": "none",
    "font.family": "DejaVu Sans",
    "figure.figsize": (8.0, 5.0),
    "figure.dpi": 100,
    "savefig.dpi": 100,
    "axes.grid": True,
    "grid.alpha": 0.3,
}

# Caption convention: warm colors for the non-conserved current, green/olive
# pair for the conserved one.
_SERIES_COLORS = {
    (False, 1): "tab:red",
    (False, -1): "tab:blue",
    (True, 1): "goldenrod",
    (True, -1): "tab:green",
}

_STRENGTH_SYMBOL = {"delta": "lambda", "jump": "alpha"}


@dataclass(frozen=True)
class FigureSpec:
    inputs: tuple[str, ...]
    kind: str  # curve | landscape
    out: str
    series: str = "strength"  # strength | conserved
    fmt: str = "svg"  # svg | png
    beta0: float | None = None

    def __post_init__(self):
        if not self.inputs:
            raise SchemaError("at least one input CSV is required")
        if self.kind not in ("curve", "landscape"):
            raise SchemaError(f"unknown figure kind {self.kind!r}")
        if self.series not in ("strength", "conserved"):
            raise SchemaError(f"unknown series column {self.series!r}")
        if self.fmt not in ("svg", "png"):
            raise SchemaError(f"unknown format {self.fmt!r}")


def _series_label(defect: str, strength: float, conserved: bool) -> str:
    symbol = _STRENGTH_SYMBOL.get(defect, "strength")
    label = f"{symbol} = {strength:+g}"
    if defect == "jump":
        label += ", conserved" if conserved else ", non-conserved"
    return label


def _series_color(conserved: bool, strength: float):
    return _SERIES_COLORS.get((conserved, 1 if strength >= 0 else -1))


def _reference_beta(rows, fallback: float | None) -> float:
    for row in rows:
        if row.defect == "free" and not math.isnan(row.beta):
            return row.beta
    if fallback is not None:
        return fallback
    raise SchemaError(
        "no free-case row in the input and no --beta0 given; the reference "
        "line is never hardcoded"
    )


def _render_curve(spec: FigureSpec, rows) -> None:
    series_rows = [r for r in rows if r.defect != "free"]
    if not series_rows:
        raise SchemaError("curve figure needs non-free rows to plot")
    if len({r.x0 for r in series_rows}) < 2:
        raise SchemaError("curve figure needs at least 2 distinct x0 values")
    reference = _reference_beta(rows, spec.beta0)

    groups: dict[tuple, list] = {}
    for row in series_rows:
        if spec.series == "conserved":
            key = (row.conserved, row.strength, row.defect)
        else:
            key = (row.strength, row.conserved, row.defect)
        groups.setdefault(key, []).append(row)

    fig, ax = plt.subplots()
    for key in sorted(groups):
        group = sorted(groups[key], key=lambda r: r.x0)
        xs = np.array([r.x0 for r in group])
        ys = np.array([r.beta for r in group])  # NaN sentinel rows draw as gaps
        defect = group[0].defect
        ax.plot(
            xs, ys,
            label=_series_label(defect, group[0].strength, group[0].conserved),
            color=_series_color(group[0].conserved, group[0].strength),
            linewidth=1.6,
        )
    ax.axhline(reference, color="black", linestyle="--", linewidth=1.0,
               label=f"free reference ({reference:.4g})")
    ax.set_xlabel("measurement position x0")
    ax.set_ylabel("lowest eigenvalue beta")
    ax.legend(fontsize=8)
    _save(fig, spec)


def _landscape_grid(rows):
    strengths = sorted({r.strength for r in rows})
    positions = sorted({r.x0 for r in rows})
    index = {}
    for r in rows:
        key = (r.strength, r.x0)
        if key in index:
            raise SchemaError(f"duplicate landscape point strength={r.strength:g}, x0={r.x0:g}")
        index[key] = r.beta
    missing = [
        (s, x) for s in strengths for x in positions if (s, x) not in index
    ]
    if missing:
        s, x = missing[0]
        raise SchemaError(
            f"landscape grid incomplete: missing strength={s:g}, x0={x:g} "
            f"({len(missing)} points absent)"
        )
    grid = np.array([[index[(s, x)] for x in positions] for s in strengths])
    return np.array(strengths), np.array(positions), grid


def _render_landscape(spec: FigureSpec, rows) -> None:
    series_rows = [r for r in rows if r.defect != "free"]
    if not series_rows:
        raise SchemaError("landscape figure needs non-free rows to plot")
    strengths, positions, grid = _landscape_grid(series_rows)
    if len(strengths) < 2 or len(positions) < 2:
        raise SchemaError("landscape needs at least a 2 x 2 (strength x x0) grid")
    defect = series_rows[0].defect
    symbol = _STRENGTH_SYMBOL.get(defect, "strength")

    masked = np.ma.masked_invalid(grid)
    fig = plt.figure(figsize=(11.0, 4.5))
    flat = fig.add_subplot(1, 2, 1)
    mesh = flat.pcolormesh(positions, strengths, masked, shading="nearest", cmap="viridis")
    fig.colorbar(mesh, ax=flat, label="beta")
    flat.set_xlabel("x0")
    flat.set_ylabel(symbol)

    surf_ax = fig.add_subplot(1, 2, 2, projection="3d")
    xs, ss = np.meshgrid(positions, strengths)
    surf_ax.plot_surface(xs, ss, masked, cmap="viridis", linewidth=0, antialiased=False)
    surf_ax.set_xlabel("x0")
    surf_ax.set_ylabel(symbol)
    surf_ax.set_zlabel("beta")
    _save(fig, spec)


def _save(fig, spec: FigureSpec) -> None:
    if spec.fmt == "svg":
        fig.savefig(spec.out, format="svg", metadata={"Date": None})
    else:
        fig.savefig(spec.out, format="png")
    plt.close(fig)


def render(spec: FigureSpec) -> None:
    """Render the figure described by spec; deterministic for SVG output."""
    tables = read_tables(spec.inputs)
    rows = [row for table in tables for row in table.rows]
    with matplotlib.rc_context(_RC):
        if spec.kind == "curve":
            _render_curve(spec, rows)
        else:
            _render_landscape(spec, rows)
