"""Pinned rendering style.

Everything that affects pixels is fixed here: backend, fonts, dpi, colormap,
and the colors of the figure elements. Rendering the same inputs twice must
produce byte-identical PNG files, so nothing may depend on locale, time, or
installed-font discovery order.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)

DPI = 150
COLORMAP = "viridis"

#: Cells with no answer (unresolved runs, absent thresholds) get a color
#: that no colormap value can produce.
MISSING_COLOR = "#c7c7c7"

TRACE_COLOR = "#ffb0b0"
MEAN_COLOR = "#d62728"
ODE_COLOR = "#000000"
OVERLAY_COLOR = "#d62728"

_RC = {
    "figure.dpi": DPI,
    "savefig.dpi": DPI,
    "font.family": "DejaVu Sans",
    "font.size": 9.0,
    "axes.titlesize": 10.0,
    "axes.labelsize": 9.0,
    "svg.hashsalt": "cprplot",
}


def apply() -> None:
    plt.rcdefaults()
    plt.rcParams.update(_RC)


def save(fig, path: str) -> None:
    """Write a PNG without volatile metadata, then release the figure."""
    fig.savefig(path, format="png", metadata={"Software": None})
    plt.close(fig)
