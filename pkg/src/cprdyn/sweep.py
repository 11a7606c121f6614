"""Grid experiments: basins of attraction, threshold maps, ODE-ABM bundles.

A density sweep integrates the deterministic system from every node of an
initial-condition lattice and records where each run ends, giving the basin
picture over (R0, x0). The default lattice is 101 x 101 over
[0.005, 0.995]^2: the axes are inset by a half step because the x boundary
rows are fixed lines of the dynamics and carry no information.

The empirical threshold extracted from a sweep is, per R0, the lowest grid
x0 from which everything upward sustains, maximized over R0 (the threshold
must work for any initial resource level). Cells that ran out of time sit
near basin boundaries where the dynamics are genuinely slow; they are
reported separately and treated as indeterminate rather than as evidence
either way.

Grid cells and ensemble realizations are independent, so sweeps run on a
thread pool (the compiled kernels release the GIL) with results assembled in
index order; output never depends on scheduling.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .abm import AbmConfig, EnsembleSummary, run_ensemble
from .equilibria import Region, critical_value, region_of
from .models import GreedSpec, ModelSpec, SystemState
from .ode import IntegrationError, IntegratorOptions, sample_trajectory

STEADY = kernels.STEADY
DEPLETED = kernels.DEPLETED
MAX_TIME = kernels.MAX_TIME


@dataclass(frozen=True)
class GridSpec:
    """Initial-condition lattice over (R0, x0)."""

    r0_points: int = 101
    x0_points: int = 101
    r0_range: tuple[float, float] = (0.005, 0.995)
    x0_range: tuple[float, float] = (0.005, 0.995)

    def __post_init__(self):
        if self.r0_points < 2 or self.x0_points < 2:
            raise ValueError("need at least 2 points per axis")
        r_lo, r_hi = self.r0_range
        x_lo, x_hi = self.x0_range
        if not (0.0 <= r_lo < r_hi <= 1.0):
            raise ValueError("r0_range must be an increasing interval within [0, 1]")
        if not (0.0 < x_lo < x_hi < 1.0):
            raise ValueError(
                "x0_range must stay strictly inside (0, 1); "
                "the x boundaries are fixed lines of the dynamics"
            )

    def r0_axis(self) -> np.ndarray:
        return np.linspace(self.r0_range[0], self.r0_range[1], self.r0_points)

    def x0_axis(self) -> np.ndarray:
        return np.linspace(self.x0_range[0], self.x0_range[1], self.x0_points)


@dataclass(frozen=True)
class DensityGrid:
    """Terminal states over the lattice: rows index R0, columns index x0."""

    grid: GridSpec
    r_star: np.ndarray = field(repr=False)
    x_star: np.ndarray = field(repr=False)
    terminal: np.ndarray = field(repr=False)  # int8 kernel codes
    depletion_floor: float = 1e-6

    def __post_init__(self):
        shape = (self.grid.r0_points, self.grid.x0_points)
        if self.r_star.shape != shape or self.x_star.shape != shape or self.terminal.shape != shape:
            raise ValueError(f"matrices must have shape {shape}")

    @property
    def n_unresolved(self) -> int:
        return int(np.sum(self.terminal == MAX_TIME))

    def sustained(self) -> np.ndarray:
        """Boolean mask of cells that settled with a live resource."""
        return (self.terminal == STEADY) & (self.r_star > self.depletion_floor)


def density_sweep(
    spec: ModelSpec,
    grid: GridSpec | None = None,
    opts: IntegratorOptions | None = None,
    workers: int | None = None,
) -> DensityGrid:
    """Integrate from every lattice node and record the terminal states."""
    grid = grid or GridSpec()
    opts = opts or IntegratorOptions()
    r0s = grid.r0_axis()
    x0s = grid.x0_axis()
    n_rows = grid.r0_points
    out_r = np.empty((n_rows, grid.x0_points))
    out_x = np.empty((n_rows, grid.x0_points))
    out_code = np.empty((n_rows, grid.x0_points), dtype=np.int8)
    args = spec.kernel_args()
    n_steps = opts.n_steps()
    need = opts.steady_states_needed()

    def chunk(row_start: int, row_end: int) -> None:
        kernels.density_chunk(
            *args, r0s, x0s,
            opts.step_size, n_steps, need, opts.steady_tol, opts.depletion_floor,
            row_start, row_end, out_r, out_x, out_code,
        )

    n_workers = workers if workers is not None else min(8, os.cpu_count() or 1)
    if n_workers <= 1 or n_rows < 4:
        chunk(0, n_rows)
    else:
        bounds = np.linspace(0, n_rows, 4 * n_workers + 1).astype(int)
        spans = [
            (int(bounds[i]), int(bounds[i + 1]))
            for i in range(len(bounds) - 1)
            if bounds[i] < bounds[i + 1]
        ]
        with ThreadPoolExecutor(max_workers=n_workers) as pool:
            list(pool.map(lambda span: chunk(*span), spans))

    bad = np.argwhere(out_code == kernels.NUMERIC_FAILURE)
    if len(bad):
        i, j = bad[0]
        raise IntegrationError(
            f"integration failed in cell (R0={r0s[i]!r}, x0={x0s[j]!r})", 0.0
        )
    return DensityGrid(grid, out_r, out_x, out_code, opts.depletion_floor)


@dataclass(frozen=True)
class EmpiricalCritical:
    """Threshold estimate read off a density grid.

    per_r0[i] is the lowest grid x0 at which the whole upward ray of column
    R0 = r0_axis[i] is sustained (NaN when the column has none); value is
    their maximum, or None when no column qualifies. Unresolved cells are
    skipped while scanning: they neither anchor a threshold nor break a ray.
    """

    value: float | None
    per_r0: np.ndarray
    n_unresolved: int

    @property
    def absent(self) -> bool:
        return self.value is None


def empirical_critical(density: DensityGrid) -> EmpiricalCritical:
    """Extract the sustainability threshold implied by a density sweep."""
    x0s = density.grid.x0_axis()
    sustained = density.sustained()
    terminal = density.terminal
    n_rows, n_cols = terminal.shape
    per_r0 = np.full(n_rows, np.nan)
    for i in range(n_rows):
        best = np.nan
        for j in range(n_cols - 1, -1, -1):
            if sustained[i, j]:
                best = x0s[j]
            elif terminal[i, j] == MAX_TIME:
                continue
            else:
                break
        per_r0[i] = best
    qualifying = per_r0[~np.isnan(per_r0)]
    value = float(np.max(qualifying)) if len(qualifying) else None
    return EmpiricalCritical(value, per_r0, density.n_unresolved)


# ---------------------------------------------------------------------------
# Threshold map over extraction parameters
# ---------------------------------------------------------------------------

REGION_CODES = {
    Region.NOT_APPLICABLE: 0,
    Region.RIGHT_TOP: 1,
    Region.LEFT_BOTTOM: 2,
}


@dataclass(frozen=True)
class CriticalMap:
    """Analytic thresholds over the (e_c_hat, e_d_hat) plane.

    values[i, j] is the threshold at (e_d_hat = ed_axis[i],
    e_c_hat = ec_axis[j]), NaN where no threshold exists; regions holds the
    REGION_CODES. The boundary between regions is the line
    e_d_hat = slope * e_c_hat + intercept with (slope, intercept) below.
    """

    ec_axis: np.ndarray
    ed_axis: np.ndarray
    values: np.ndarray
    regions: np.ndarray
    boundary: tuple[float, float] = (-1.0, 2.0)


def critical_map(
    greed: GreedSpec,
    ec_points: int = 51,
    ed_points: int = 51,
    ec_range: tuple[float, float] = (0.005, 0.995),
    ed_range: tuple[float, float] = (1.005, 2.0),
    growth_rate: float = 2.0,
) -> CriticalMap:
    """Evaluate the analytic threshold over an extraction-parameter lattice.

    The greed spec is held fixed while (e_c_hat, e_d_hat) vary; the
    threshold itself does not depend on the growth rate.
    """
    ec_axis = np.linspace(ec_range[0], ec_range[1], ec_points)
    ed_axis = np.linspace(ed_range[0], ed_range[1], ed_points)
    values = np.full((ed_points, ec_points), np.nan)
    regions = np.zeros((ed_points, ec_points), dtype=np.int8)
    for i, ed in enumerate(ed_axis):
        for j, ec in enumerate(ec_axis):
            spec = ModelSpec(growth_rate, ec, ed, greed)
            cv = critical_value(spec)
            if cv.value is not None:
                values[i, j] = cv.value
            regions[i, j] = REGION_CODES[region_of(ec, ed)]
    return CriticalMap(ec_axis, ed_axis, values, regions)


# ---------------------------------------------------------------------------
# ODE vs ABM comparison bundles
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ComparisonBundle:
    """Deterministic prediction and stochastic ensemble on shared times."""

    times: np.ndarray
    ode_resource: np.ndarray
    ode_coop: np.ndarray
    ensemble: EnsembleSummary
    resource_gap: np.ndarray
    coop_gap: np.ndarray

    @property
    def max_resource_gap(self) -> float:
        return float(np.max(self.resource_gap))

    @property
    def max_coop_gap(self) -> float:
        return float(np.max(self.coop_gap))


def compare_ode_abm(
    spec: ModelSpec,
    config: AbmConfig,
    n_real: int,
    workers: int | None = None,
    step_size: float = 1e-3,
) -> ComparisonBundle:
    """Ensemble means against the deterministic curve at integer times."""
    if n_real < 1:
        raise ValueError("n_real must be at least 1")
    ens = run_ensemble(config, spec, n_real, workers=workers)
    ode = sample_trajectory(
        spec, config.initial, float(config.t_end), sample_dt=1.0, step_size=step_size
    )
    return ComparisonBundle(
        times=ens.times,
        ode_resource=ode.resource,
        ode_coop=ode.coop_fraction,
        ensemble=ens,
        resource_gap=np.abs(ens.resource_mean - ode.resource),
        coop_gap=np.abs(ens.coop_mean - ode.coop_fraction),
    )
