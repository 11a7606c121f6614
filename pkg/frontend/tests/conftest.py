import numpy as np
import pytest


def fmt(x):
    return f"{x:.17g}"


def write_matrix(path, matrix):
    matrix = np.asarray(matrix, dtype=float)
    lines = [",".join(f"c{j}" for j in range(matrix.shape[1]))]
    lines += [",".join(fmt(v) for v in row) for row in matrix]
    path.write_text("\n".join(lines) + "\n")


def write_axis(path, name, values):
    path.write_text("\n".join([name] + [fmt(v) for v in values]) + "\n")


def write_series(path, rows):
    lines = ["time,series,mean,stderr"]
    lines += [f"{fmt(t)},{name},{fmt(m)},{fmt(s)}" for t, name, m, s in rows]
    path.write_text("\n".join(lines) + "\n")


@pytest.fixture
def density_files(tmp_path):
    """A small density-sweep output with a clean basin split at x0 = 0.5."""
    r0 = np.linspace(0.1, 0.9, 5)
    x0 = np.linspace(0.1, 0.9, 9)
    r_star = np.where(x0 >= 0.5, 0.3, 0.0) * np.ones((5, 1))
    r_star[2, 4] = np.nan  # one unresolved cell
    write_matrix(tmp_path / "demo.rstar.csv", r_star)
    write_axis(tmp_path / "demo.r0.csv", "r0", r0)
    write_axis(tmp_path / "demo.x0.csv", "x0", x0)
    return tmp_path / "demo.rstar.csv"


@pytest.fixture
def series_file(tmp_path):
    times = np.arange(6.0)
    rows = []
    for run in range(3):
        for t in times:
            rows.append((t, f"R_run{run:03d}", 0.5 - 0.02 * t + 0.01 * run, 0.0))
            rows.append((t, f"x_run{run:03d}", 0.5 + 0.05 * t - 0.01 * run, 0.0))
    for t in times:
        rows.append((t, "R_ode", 0.5 - 0.02 * t, 0.0))
        rows.append((t, "x_ode", 0.5 + 0.05 * t, 0.0))
        rows.append((t, "R_mean", 0.5 - 0.02 * t + 0.01, 0.005))
        rows.append((t, "x_mean", 0.5 + 0.05 * t - 0.01, 0.006))
    write_series(tmp_path / "demo.series.csv", rows)
    return tmp_path / "demo.series.csv"


@pytest.fixture
def map_files(tmp_path):
    ec = np.linspace(0.1, 0.9, 7)
    ed = np.linspace(1.05, 1.95, 6)
    values = np.empty((6, 7))
    for i, d in enumerate(ed):
        for j, c in enumerate(ec):
            values[i, j] = (d - 1.0) / (d - c)
    values[0, 0] = np.nan  # one absent cell
    write_matrix(tmp_path / "demo.map.csv", values)
    write_axis(tmp_path / "demo.ec.csv", "ec", ec)
    write_axis(tmp_path / "demo.ed.csv", "ed", ed)
    return tmp_path / "demo.map.csv"
