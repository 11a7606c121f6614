"""Deterministic result serialization.

Everything numeric is written with 17 significant digits, enough to
round-trip a double exactly, so a rerun with the same seed produces byte
identical files. Matrices go to CSV with a one-line indexed header and
row-major data, with the axis vectors in sidecar files; time series go to
long-format CSV (time, series, mean, stderr); metadata (resolved
configuration, seeds, generator and backend names, versions, wall clock)
goes to a single JSON file per run. Timestamps live only in the metadata so
they never break result determinism.

Unresolved density cells (runs that hit the time budget) are written as NaN
in the value matrices; the terminal-code matrix keeps the full story.
"""

from __future__ import annotations

import json
import math
import os
from typing import Iterable, Sequence

import numpy as np

from . import kernels
from .sweep import CriticalMap, DensityGrid


def fmt(value: float) -> str:
    """Round-trip-safe text form of a double."""
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return f"{value:.17g}"


def _write_lines(path: str, lines: Iterable[str]) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for line in lines:
            fh.write(line)
            fh.write("\n")


def write_matrix(path: str, matrix: np.ndarray) -> None:
    """Matrix CSV: header c0..c{n-1}, one row per line, row-major."""
    n_cols = matrix.shape[1]
    header = ",".join(f"c{j}" for j in range(n_cols))
    lines = [header]
    for row in matrix:
        lines.append(",".join(fmt(v) for v in row))
    _write_lines(path, lines)


def write_axis(path: str, name: str, values: Sequence[float]) -> None:
    """Axis sidecar CSV: single named column."""
    _write_lines(path, [name] + [fmt(v) for v in values])


def write_series(path: str, rows: Iterable[tuple[float, str, float, float]]) -> None:
    """Long-format series CSV with columns time, series, mean, stderr."""
    lines = ["time,series,mean,stderr"]
    for time, series, mean, stderr in rows:
        lines.append(f"{fmt(time)},{series},{fmt(mean)},{fmt(stderr)}")
    _write_lines(path, lines)


def write_table(path: str, header: Sequence[str], rows: Iterable[Sequence]) -> None:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(v if isinstance(v, str) else fmt(v) for v in row))
    _write_lines(path, lines)


def write_metadata(path: str, payload: dict) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _masked(values: np.ndarray, terminal: np.ndarray) -> np.ndarray:
    out = values.copy()
    out[terminal == kernels.MAX_TIME] = math.nan
    return out


def write_density(out_dir: str, name: str, density: DensityGrid) -> list[str]:
    """Write the five files of a density sweep; returns their paths."""
    paths = []

    def p(suffix: str) -> str:
        path = os.path.join(out_dir, f"{name}.{suffix}.csv")
        paths.append(path)
        return path

    write_matrix(p("rstar"), _masked(density.r_star, density.terminal))
    write_matrix(p("xstar"), _masked(density.x_star, density.terminal))
    write_matrix(p("terminal"), density.terminal)
    write_axis(p("r0"), "r0", density.grid.r0_axis())
    write_axis(p("x0"), "x0", density.grid.x0_axis())
    return paths


def write_critical_map(out_dir: str, name: str, cmap: CriticalMap) -> list[str]:
    """Write the four files of a threshold map; returns their paths."""
    paths = []

    def p(suffix: str) -> str:
        path = os.path.join(out_dir, f"{name}.{suffix}.csv")
        paths.append(path)
        return path

    write_matrix(p("map"), cmap.values)
    write_matrix(p("region"), cmap.regions)
    write_axis(p("ec"), "ec", cmap.ec_axis)
    write_axis(p("ed"), "ed", cmap.ed_axis)
    return paths
