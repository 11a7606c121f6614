"""Figure builders for the three plot kinds.

Each build_* function returns a matplotlib Figure so tests can inspect what
was drawn; the plot_* wrappers write the PNG under the pinned style. Color
range for equilibrium-resource heatmaps defaults to the full [0, 1] scale so
panels are comparable across runs.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

import numpy as np
from matplotlib import cm, pyplot as plt

from . import style
from .readers import (
    CriticalMapData,
    DensityData,
    SchemaError,
    read_critical_map,
    read_density,
    read_series,
)

_RUN_SERIES = re.compile(r"^(R|x)_run\d+$")


def _grid_cmap():
    cmap = plt.get_cmap(style.COLORMAP).copy()
    cmap.set_bad(style.MISSING_COLOR)
    return cmap


def build_density(
    data: DensityData,
    overlay: float | None = None,
    color_range: tuple[float, float] = (0.0, 1.0),
    title: str = "stable equilibrium resource",
):
    """Heatmap of terminal resource over (R0, x0), unresolved cells greyed.

    The initial cooperator fraction runs up the y axis, so an overlay
    threshold is a horizontal line.
    """
    style.apply()
    fig, ax = plt.subplots(figsize=(4.2, 3.4), constrained_layout=True)
    mesh = ax.pcolormesh(
        data.r0,
        data.x0,
        np.ma.masked_invalid(data.r_star.T),
        cmap=_grid_cmap(),
        vmin=color_range[0],
        vmax=color_range[1],
        shading="nearest",
    )
    fig.colorbar(mesh, ax=ax, label="terminal resource")
    if overlay is not None:
        ax.axhline(overlay, color=style.OVERLAY_COLOR, linewidth=1.6)
    ax.set_xlabel("initial resource")
    ax.set_ylabel("initial cooperator fraction")
    ax.set_title(title)
    return fig


def build_trajectories(series: dict, title: str = "simulation vs deterministic model"):
    """Two panels (resource, cooperator fraction) against time.

    Individual realizations draw as light traces, ensemble means as points
    with standard-error bars, the deterministic curve as a dark line.
    """
    style.apply()
    fig, axes = plt.subplots(2, 1, figsize=(4.6, 4.6), sharex=True,
                             constrained_layout=True)
    panels = {"R": (axes[0], "resource"), "x": (axes[1], "cooperator fraction")}
    drew = False
    for name in sorted(series):
        if not _RUN_SERIES.match(name):
            continue
        variable = name.split("_")[0]
        ax, _ = panels[variable]
        s = series[name]
        ax.plot(s.times, s.means, color=style.TRACE_COLOR, linewidth=0.7, zorder=1)
        drew = True
    for variable, (ax, label) in panels.items():
        ode = series.get(f"{variable}_ode")
        if ode is not None:
            ax.plot(ode.times, ode.means, color=style.ODE_COLOR, linewidth=1.4, zorder=3)
            drew = True
        mean = series.get(f"{variable}_mean")
        if mean is not None:
            ax.errorbar(
                mean.times, mean.means, yerr=mean.stderrs,
                color=style.MEAN_COLOR, fmt="o", markersize=2.2,
                elinewidth=0.8, capsize=1.5, zorder=2,
            )
            drew = True
        ax.set_ylabel(label)
        ax.set_ylim(-0.02, 1.02)
    if not drew:
        raise SchemaError("series file contains none of the plottable series")
    axes[1].set_xlabel("time")
    axes[0].set_title(title)
    return fig


def build_critical_map(
    data: CriticalMapData,
    boundary: tuple[float, float] | None = (-1.0, 2.0),
    title: str = "sustainability threshold",
):
    """Heatmap of the threshold over extraction parameters.

    Cells without a threshold render in the missing color; the optional
    (slope, intercept) line marks where the threshold regimes split.
    """
    style.apply()
    fig, ax = plt.subplots(figsize=(4.2, 3.4), constrained_layout=True)
    mesh = ax.pcolormesh(
        data.ec,
        data.ed,
        np.ma.masked_invalid(data.values),
        cmap=_grid_cmap(),
        vmin=0.0,
        vmax=1.0,
        shading="nearest",
    )
    fig.colorbar(mesh, ax=ax, label="critical cooperator fraction")
    if boundary is not None:
        slope, intercept = boundary
        ec = np.array([data.ec[0], data.ec[-1]])
        ax.plot(ec, slope * ec + intercept, color=style.OVERLAY_COLOR, linewidth=1.6)
        ax.set_ylim(data.ed[0], data.ed[-1])
    ax.set_xlabel("cooperator extraction")
    ax.set_ylabel("defector extraction")
    ax.set_title(title)
    return fig


@dataclass(frozen=True)
class FigureRequest:
    """One figure: what kind, from which inputs, to which image."""

    kind: str  # density | trajectories | critical-map
    inputs: tuple[str, ...]
    output: str
    overlay: float | None = None
    draw_boundary: bool = True

    def __post_init__(self):
        if self.kind not in ("density", "trajectories", "critical-map"):
            raise ValueError(f"unknown figure kind {self.kind!r}")
        if len(self.inputs) != 1:
            raise ValueError(f"{self.kind} expects exactly one input file")


def render(request: FigureRequest) -> str:
    """Build and save the requested figure; returns the output path."""
    if request.kind == "density":
        fig = build_density(read_density(request.inputs[0]), overlay=request.overlay)
    elif request.kind == "trajectories":
        fig = build_trajectories(read_series(request.inputs[0]))
    else:
        boundary = (-1.0, 2.0) if request.draw_boundary else None
        fig = build_critical_map(read_critical_map(request.inputs[0]), boundary=boundary)
    style.save(fig, request.output)
    return request.output
