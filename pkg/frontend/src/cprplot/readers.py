"""Readers for the simulation engine's documented CSV formats.

Three shapes exist: matrices (one ``c0,c1,...`` header line, row-major
float rows, NaN for unresolved cells), axis sidecars (one named column), and
long-format series (``time,series,mean,stderr``). Density grids and
threshold maps are located by naming convention from their main matrix file:
``NAME.rstar.csv`` sits next to ``NAME.r0.csv`` / ``NAME.x0.csv``, and
``NAME.map.csv`` next to ``NAME.ec.csv`` / ``NAME.ed.csv``.

This package only ever renders numbers read here or passed on its command
line; it never recomputes any model quantity.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

import numpy as np


class SchemaError(ValueError):
    """Input file exists but does not match the documented schema."""


def _open_rows(path: str | Path):
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"input file not found: {path}")
    with path.open(newline="", encoding="utf-8") as fh:
        return list(csv.reader(fh))


def read_matrix(path: str | Path) -> np.ndarray:
    rows = _open_rows(path)
    if not rows or not all(cell == f"c{j}" for j, cell in enumerate(rows[0])):
        raise SchemaError(f"{path}: expected a c0,c1,... matrix header")
    n_cols = len(rows[0])
    try:
        data = [[float(cell) for cell in row] for row in rows[1:]]
    except ValueError as exc:
        raise SchemaError(f"{path}: non-numeric matrix cell ({exc})") from exc
    if not data or any(len(row) != n_cols for row in data):
        raise SchemaError(f"{path}: ragged or empty matrix body")
    return np.asarray(data)


def read_axis(path: str | Path, name: str) -> np.ndarray:
    rows = _open_rows(path)
    if not rows or rows[0] != [name]:
        raise SchemaError(f"{path}: expected single-column header {name!r}")
    try:
        values = [float(row[0]) for row in rows[1:]]
    except (IndexError, ValueError) as exc:
        raise SchemaError(f"{path}: malformed axis value ({exc})") from exc
    if not values:
        raise SchemaError(f"{path}: empty axis")
    return np.asarray(values)


@dataclass(frozen=True)
class Series:
    times: np.ndarray
    means: np.ndarray
    stderrs: np.ndarray


def read_series(path: str | Path) -> dict[str, Series]:
    rows = _open_rows(path)
    if not rows or rows[0] != ["time", "series", "mean", "stderr"]:
        raise SchemaError(f"{path}: expected header time,series,mean,stderr")
    if len(rows) == 1:
        raise SchemaError(f"{path}: series file has no data rows")
    collected: dict[str, list[tuple[float, float, float]]] = {}
    for row in rows[1:]:
        if len(row) != 4:
            raise SchemaError(f"{path}: malformed series row {row!r}")
        try:
            t, mean, err = float(row[0]), float(row[2]), float(row[3])
        except ValueError as exc:
            raise SchemaError(f"{path}: non-numeric series value ({exc})") from exc
        collected.setdefault(row[1], []).append((t, mean, err))
    out = {}
    for name, triples in collected.items():
        triples.sort(key=lambda item: item[0])
        arr = np.asarray(triples)
        out[name] = Series(arr[:, 0], arr[:, 1], arr[:, 2])
    return out


def _sidecar(main: Path, old_suffix: str, new_suffix: str) -> Path:
    name = main.name
    if not name.endswith(old_suffix):
        raise SchemaError(
            f"{main}: expected a file named *.{old_suffix} so sidecars can be located"
        )
    return main.with_name(name[: -len(old_suffix)] + new_suffix)


@dataclass(frozen=True)
class DensityData:
    r0: np.ndarray
    x0: np.ndarray
    r_star: np.ndarray  # rows follow r0, columns follow x0


def read_density(rstar_path: str | Path) -> DensityData:
    main = Path(rstar_path)
    r_star = read_matrix(main)
    r0 = read_axis(_sidecar(main, "rstar.csv", "r0.csv"), "r0")
    x0 = read_axis(_sidecar(main, "rstar.csv", "x0.csv"), "x0")
    if r_star.shape != (len(r0), len(x0)):
        raise SchemaError(
            f"{main}: matrix shape {r_star.shape} does not match axes "
            f"({len(r0)}, {len(x0)})"
        )
    return DensityData(r0, x0, r_star)


@dataclass(frozen=True)
class CriticalMapData:
    ec: np.ndarray
    ed: np.ndarray
    values: np.ndarray  # rows follow ed, columns follow ec


def read_critical_map(map_path: str | Path) -> CriticalMapData:
    main = Path(map_path)
    values = read_matrix(main)
    ec = read_axis(_sidecar(main, "map.csv", "ec.csv"), "ec")
    ed = read_axis(_sidecar(main, "map.csv", "ed.csv"), "ed")
    if values.shape != (len(ed), len(ec)):
        raise SchemaError(
            f"{main}: matrix shape {values.shape} does not match axes "
            f"({len(ed)}, {len(ec)})"
        )
    return CriticalMapData(ec, ed, values)
