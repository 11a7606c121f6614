"""Deterministic integration of the coupled resource-cooperation system.

Fixed-step classical Runge-Kutta keeps runs bit-reproducible; the system is
smooth and two-dimensional, so nothing fancier is warranted. A run ends when
the drift norm stays below a tolerance for a full window (steady), when the
resource falls under a depletion floor (the approach to R = 0 is asymptotic
and would otherwise never trigger the stationarity test), or when the time
budget runs out, which is reported honestly rather than coerced.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .models import ModelSpec, SystemState


class Terminal(enum.Enum):
    STEADY = "steady"
    DEPLETED = "depleted"
    MAX_TIME = "max_time_reached"


_CODE_TO_TERMINAL = {
    kernels.STEADY: Terminal.STEADY,
    kernels.DEPLETED: Terminal.DEPLETED,
    kernels.MAX_TIME: Terminal.MAX_TIME,
}


class IntegrationError(RuntimeError):
    """Non-finite state encountered; carries the offending time."""

    def __init__(self, message: str, time: float):
        super().__init__(f"{message} at t = {time}")
        self.time = time


@dataclass(frozen=True)
class IntegratorOptions:
    step_size: float = 1e-3
    max_time: float = 500.0
    steady_tol: float = 1e-9
    window: float = 1.0
    depletion_floor: float = 1e-6

    def __post_init__(self):
        for name in ("step_size", "max_time", "steady_tol", "window", "depletion_floor"):
            if not getattr(self, name) > 0.0:
                raise ValueError(f"{name} must be strictly positive")
        if not self.step_size < self.window < self.max_time:
            raise ValueError("requires step_size < window < max_time")

    def n_steps(self) -> int:
        return int(math.floor(self.max_time / self.step_size + 0.5))

    def steady_states_needed(self) -> int:
        """Consecutive sub-tolerance states covering one full window."""
        return int(math.floor(self.window / self.step_size + 0.5)) + 1


@dataclass(frozen=True)
class Trajectory:
    """Sampled path of one run plus how it ended."""

    times: np.ndarray
    resource: np.ndarray
    coop_fraction: np.ndarray
    terminal: Terminal

    def __post_init__(self):
        if not (len(self.times) == len(self.resource) == len(self.coop_fraction)):
            raise ValueError("times and state series must have equal length")
        if np.any(np.diff(self.times) <= 0.0):
            raise ValueError("times must be strictly increasing")

    def __len__(self) -> int:
        return len(self.times)

    @property
    def states(self) -> list[SystemState]:
        return [
            SystemState(r, x) for r, x in zip(self.resource, self.coop_fraction)
        ]

    @property
    def final_state(self) -> SystemState:
        return SystemState(self.resource[-1], self.coop_fraction[-1])


def step_rk4(spec: ModelSpec, state: SystemState, h: float) -> SystemState:
    """One classical 4th-order Runge-Kutta step of length h."""
    if not h > 0.0:
        raise ValueError("step size must be positive")
    r, x = kernels.rk4_step(*spec.kernel_args(), state.resource, state.coop_fraction, h)
    if not (math.isfinite(r) and math.isfinite(x)):
        raise IntegrationError("non-finite state after step", h)
    return SystemState(r, x)


def integrate(
    spec: ModelSpec,
    initial: SystemState,
    opts: IntegratorOptions | None = None,
) -> Trajectory:
    """Run to a terminal condition; the path is recorded once per window.

    A steady trajectory's final state is the attained equilibrium. Initial
    conditions near a basin boundary can legitimately exhaust max_time; they
    come back flagged MAX_TIME rather than being forced into a bucket.
    """
    opts = opts or IntegratorOptions()
    record_every = int(math.floor(opts.window / opts.step_size + 0.5))
    times, rs, xs, code, t_final = kernels.integrate_record(
        *spec.kernel_args(),
        initial.resource,
        initial.coop_fraction,
        opts.step_size,
        opts.n_steps(),
        opts.steady_states_needed(),
        opts.steady_tol,
        opts.depletion_floor,
        record_every,
    )
    if code == kernels.NUMERIC_FAILURE:
        raise IntegrationError("non-finite state", t_final)
    return Trajectory(times, rs, xs, _CODE_TO_TERMINAL[code])


def integrate_terminal_state(
    spec: ModelSpec,
    initial: SystemState,
    opts: IntegratorOptions | None = None,
) -> tuple[SystemState, Terminal, float]:
    """integrate() without path recording; returns (state, terminal, time)."""
    opts = opts or IntegratorOptions()
    r, x, code, t = kernels.integrate_terminal(
        *spec.kernel_args(),
        initial.resource,
        initial.coop_fraction,
        opts.step_size,
        opts.n_steps(),
        opts.steady_states_needed(),
        opts.steady_tol,
        opts.depletion_floor,
    )
    if code == kernels.NUMERIC_FAILURE:
        raise IntegrationError("non-finite state", t)
    return SystemState(r, x), _CODE_TO_TERMINAL[code], t


def sample_trajectory(
    spec: ModelSpec,
    initial: SystemState,
    t_end: float,
    sample_dt: float = 1.0,
    step_size: float = 1e-3,
) -> Trajectory:
    """Sample the path at multiples of sample_dt up to t_end.

    No early stopping: this is the reference curve to lay under stochastic
    simulations, so it runs out the clock regardless of stationarity. The
    sampling interval must be a whole number of integration steps.
    """
    if t_end < 0.0:
        raise ValueError("t_end must be nonnegative")
    if sample_dt < step_size:
        raise ValueError("requires sample_dt >= step_size")
    steps_per_block = sample_dt / step_size
    if abs(steps_per_block - round(steps_per_block)) > 1e-9 * steps_per_block:
        raise ValueError("sample_dt must be an integer multiple of step_size")
    n_blocks = int(math.floor(t_end / sample_dt + 1e-9))
    rs, xs = kernels.sample_path(
        *spec.kernel_args(),
        initial.resource,
        initial.coop_fraction,
        step_size,
        n_blocks,
        int(round(steps_per_block)),
    )
    if not (np.all(np.isfinite(rs)) and np.all(np.isfinite(xs))):
        bad = int(np.argmax(~(np.isfinite(rs) & np.isfinite(xs))))
        raise IntegrationError("non-finite state", bad * sample_dt)
    times = np.arange(n_blocks + 1) * sample_dt
    return Trajectory(times, rs, xs, Terminal.MAX_TIME)
