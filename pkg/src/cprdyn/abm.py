"""Stochastic microscopic simulation of harvesting and imitation.

Each micro-step picks a player and one of its network neighbors uniformly at
random; the player adopts the neighbor's strategy with the pairwise
comparison probability p = 1/2 + (w/2)(U_j - U_i)/dU_max, where payoffs are
U = R * e and dU_max is the payoff gap at full resource, so p collapses to
1/2 -+ w R / 2. The resource then advances by the discretized
growth-extraction balance with coefficient T/N, using the pre-switch values.
N micro-steps make one macroscopic time unit, and (R, x) is sampled after
each block at integer times.

Raw per-player extraction rates map to the normalized ones the model uses
via e_hat = N * e / T (see normalized_extraction); only the normalized rates
enter the update rule, because the raw rates cancel out of the payoff ratio.

Every realization is reproducible from a single seed: the network,
the initial strategy placement, and the micro-step draws each run on an
independent stream derived from it. Ensembles derive one seed per
realization index from the master seed, so results do not depend on
evaluation order (realizations may run concurrently).
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from . import kernels
from .models import ModelSpec, SystemState
from .networks import Network, NetworkSpec, build_network
from .rng import (
    STREAM_NETWORK,
    STREAM_POPULATION,
    STREAM_STEPS,
    Xoshiro256StarStar,
    derive_seed,
)

COOPERATE = 1
DEFECT = 0


def normalized_extraction(
    n_players: int, e_c: float, e_d: float, growth_rate: float
) -> tuple[float, float]:
    """Convert raw per-player extraction rates to normalized ones.

    Requires 0 < N*e_c < T < N*e_d so the normalized rates straddle 1.
    """
    total_c = n_players * e_c
    total_d = n_players * e_d
    if not 0.0 < total_c < growth_rate < total_d:
        raise ValueError(
            "requires 0 < n_players*e_c < growth_rate < n_players*e_d, got "
            f"{total_c!r} / {growth_rate!r} / {total_d!r}"
        )
    return total_c / growth_rate, total_d / growth_rate


@dataclass(frozen=True)
class AbmConfig:
    """Shape of one simulation: who plays, on what graph, from where."""

    n_players: int = 500
    network: NetworkSpec = NetworkSpec()
    seed: int = 2024
    t_end: int = 50
    initial: SystemState = SystemState(0.5, 0.5)

    def __post_init__(self):
        if self.n_players < 2:
            raise ValueError("n_players must be at least 2")
        if self.t_end < 0:
            raise ValueError("t_end must be nonnegative")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must fit in 64 bits")


@dataclass
class AbmRun:
    """State of one realization; also its sampled result.

    `strategies` and `resource` are the live state (final state once a run
    completes); the series arrays hold samples at integer times. The
    cooperator fraction is always recomputed from the strategy vector.
    """

    n_players: int
    strategies: np.ndarray
    resource: float
    step_counter: int = 0
    times: np.ndarray | None = None
    resource_series: np.ndarray | None = None
    coop_series: np.ndarray | None = None
    seed: int | None = None

    @property
    def coop_count(self) -> int:
        return int(np.sum(self.strategies, dtype=np.int64))

    @property
    def coop_fraction(self) -> float:
        return self.coop_count * (1.0 / self.n_players)


def init_population(n: int, x0: float, seed: int) -> np.ndarray:
    """Strategy vector with exactly round(x0*n) cooperators, uniformly placed.

    Rounding is half-up (x0 = 0.123 with n = 500 gives 62 cooperators).
    """
    if not 0.0 <= x0 <= 1.0:
        raise ValueError("x0 must lie in [0, 1]")
    count = int(math.floor(x0 * n + 0.5))
    strategies = np.zeros(n, dtype=np.int8)
    rng = Xoshiro256StarStar(seed)
    idx = list(range(n))
    for i in range(count):
        j = i + rng.randint(n - i)
        idx[i], idx[j] = idx[j], idx[i]
    strategies[idx[:count]] = COOPERATE
    return strategies


def micro_step(run: AbmRun, spec: ModelSpec, net: Network, rng: Xoshiro256StarStar) -> AbmRun:
    """Advance one micro-step in place; returns the same run.

    Mirrors the kernel arithmetic exactly (three stream draws per step,
    greed evaluated at the pre-switch state, resource updated from the
    pre-switch values), so a run composed of micro_steps reproduces
    run_realization bit for bit when given the same stream.
    """
    qa, qb, qc, qd, qe, gt, ec, ed = spec.kernel_args()
    n = run.n_players
    strategies = run.strategies
    r = run.resource
    i = rng.randint(n)
    if net.complete:
        jj = rng.randint(n - 1)
        j = jj + 1 if jj >= i else jj
    else:
        base = int(net.offsets[i])
        deg = int(net.offsets[i + 1]) - base
        j = int(net.indices[base + rng.randint(deg)])
    u = rng.uniform()
    inv_n = 1.0 / n
    x = run.coop_count * inv_n
    si = int(strategies[i])
    sj = int(strategies[j])
    if si != sj:
        w = (qa * r + qb) * r + (qc * x + qd) * x + qe
        if w > 1.0:
            w = 1.0
        elif w < -1.0:
            w = -1.0
        wr = w * r
        p = 0.5 - 0.5 * wr if si == 0 else 0.5 + 0.5 * wr
        if u < p:
            strategies[i] = sj
    tn = gt / n
    mix = x * ec + (1.0 - x) * ed
    r = r + tn * (r * (1.0 - r) - r * mix)
    if r > 1.0:
        r = 1.0
    elif r < 0.0:
        r = 0.0
    run.resource = r
    run.step_counter += 1
    return run


def run_realization(config: AbmConfig, spec: ModelSpec) -> AbmRun:
    """One full realization, sampled at integer times 0..t_end."""
    n = config.n_players
    net = build_network(config.network, n, derive_seed(config.seed, STREAM_NETWORK))
    strategies = init_population(
        n, config.initial.coop_fraction, derive_seed(config.seed, STREAM_POPULATION)
    )
    out_r = np.empty(config.t_end + 1)
    out_x = np.empty(config.t_end + 1)
    kernels.abm_realization(
        *spec.kernel_args(),
        config.initial.resource,
        n,
        config.t_end,
        derive_seed(config.seed, STREAM_STEPS),
        strategies,
        net.complete,
        net.offsets,
        net.indices,
        out_r,
        out_x,
    )
    return AbmRun(
        n_players=n,
        strategies=strategies,
        resource=float(out_r[-1]),
        step_counter=n * config.t_end,
        times=np.arange(config.t_end + 1, dtype=np.int64),
        resource_series=out_r,
        coop_series=out_x,
        seed=config.seed,
    )


@dataclass(frozen=True)
class EnsembleSummary:
    """Per-integer-time mean and standard error over realizations.

    The full per-realization series are kept (rows are realizations) so
    downstream plots can show individual traces. With one realization the
    standard error is reported as zero.
    """

    times: np.ndarray
    resource_mean: np.ndarray
    resource_stderr: np.ndarray
    coop_mean: np.ndarray
    coop_stderr: np.ndarray
    resource_runs: np.ndarray
    coop_runs: np.ndarray
    seeds: tuple[int, ...]

    @property
    def n_realizations(self) -> int:
        return len(self.seeds)


def run_ensemble(
    config: AbmConfig,
    spec: ModelSpec,
    n_real: int,
    workers: int | None = None,
) -> EnsembleSummary:
    """Independent realizations with per-index derived seeds.

    Realizations execute concurrently (the kernel drops the GIL) but are
    assembled by index, so the summary does not depend on scheduling.
    """
    if n_real < 1:
        raise ValueError("n_real must be at least 1")
    seeds = tuple(derive_seed(config.seed, r) for r in range(n_real))
    r_runs = np.empty((n_real, config.t_end + 1))
    x_runs = np.empty((n_real, config.t_end + 1))

    def one(r: int) -> None:
        run = run_realization(replace(config, seed=seeds[r]), spec)
        r_runs[r, :] = run.resource_series
        x_runs[r, :] = run.coop_series

    if workers == 1 or n_real == 1:
        for r in range(n_real):
            one(r)
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            list(pool.map(one, range(n_real)))

    if n_real > 1:
        r_err = np.std(r_runs, axis=0, ddof=1) / math.sqrt(n_real)
        x_err = np.std(x_runs, axis=0, ddof=1) / math.sqrt(n_real)
    else:
        r_err = np.zeros(config.t_end + 1)
        x_err = np.zeros(config.t_end + 1)
    return EnsembleSummary(
        times=np.arange(config.t_end + 1, dtype=np.int64),
        resource_mean=r_runs.mean(axis=0),
        resource_stderr=r_err,
        coop_mean=x_runs.mean(axis=0),
        coop_stderr=x_err,
        resource_runs=r_runs,
        coop_runs=x_runs,
        seeds=seeds,
    )
