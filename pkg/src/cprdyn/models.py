"""Greed-driven harvesting dynamics on a shared renewable resource.

The state is the pair (R, x): normalized resource stock and cooperator
fraction, both in [0, 1]. Cooperators harvest at a sustainable normalized
rate e_c_hat < 1, defectors at an unsustainable rate e_d_hat > 1. The
resource grows logistically (carrying capacity normalized to 1) and is
drained in proportion to the mixed extraction rate, giving

    dR/dt = T * (R * (1 - R) - R * (x * e_c_hat + (1 - x) * e_d_hat))

A greed parameter w in [-1, 1] sets the direction and speed of imitation
under the pairwise-comparison replicator rule: positive w favors defection,
negative w favors cooperation, and the mean-field strategy dynamics are

    dx/dt = -w * R * x * (1 - x)

The greed parameter can be a constant, respond linearly or quadratically to
the resource level, to the prevailing cooperator fraction (conformity), or
to a weighted blend of both. Every variant reduces to a polynomial surface
w(R, x) = qa*R^2 + qb*R + qc*x^2 + qd*x + qe, which is what the integration
and simulation kernels consume.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

# Values may stray outside their domain by at most this much before we treat
# it as a logic error rather than floating-point round-off.
CLAMP_TOL = 1e-12

# Tolerance on the boundary identities of user-supplied quadratic-surface
# coefficients.
BOUNDARY_TOL = 1e-9


def _checked_unit(value: float, name: str) -> float:
    """Clamp round-off noise into [0, 1]; reject anything worse."""
    if not math.isfinite(value):
        raise ValueError(f"{name} must be finite, got {value!r}")
    if value < 0.0:
        if value < -CLAMP_TOL:
            raise ValueError(f"{name} must lie in [0, 1], got {value!r}")
        return 0.0
    if value > 1.0:
        if value > 1.0 + CLAMP_TOL:
            raise ValueError(f"{name} must lie in [0, 1], got {value!r}")
        return 1.0
    return value


@dataclass(frozen=True)
class SystemState:
    """Resource stock and cooperator fraction, each clamped to [0, 1]."""

    resource: float
    coop_fraction: float

    def __post_init__(self):
        object.__setattr__(self, "resource", _checked_unit(self.resource, "resource"))
        object.__setattr__(
            self, "coop_fraction", _checked_unit(self.coop_fraction, "coop_fraction")
        )

    def as_tuple(self) -> tuple[float, float]:
        return (self.resource, self.coop_fraction)


# ---------------------------------------------------------------------------
# Greed-parameter families
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ConstantGreed:
    """Fixed greed parameter (the minimal model)."""

    w: float

    def __post_init__(self):
        if not -1.0 <= self.w <= 1.0:
            raise ValueError(f"constant greed requires -1 <= w <= 1, got {self.w!r}")

    def coefficients(self) -> tuple[float, float, float, float, float]:
        return (0.0, 0.0, 0.0, 0.0, self.w)


@dataclass(frozen=True)
class ResourceLinearGreed:
    """w = 2R - 1: defect when the stock is plentiful, cooperate when scarce."""

    def coefficients(self) -> tuple[float, float, float, float, float]:
        return (0.0, 2.0, 0.0, 0.0, -1.0)


@dataclass(frozen=True)
class ConformityLinearGreed:
    """w = 1 - 2x: follow the majority strategy."""

    def coefficients(self) -> tuple[float, float, float, float, float]:
        return (0.0, 0.0, 0.0, -2.0, 1.0)


@dataclass(frozen=True)
class ResourceConformityLinearGreed:
    """w = (1-c)R + (-1-c)x + c, blending stock response and conformity.

    c = -1 recovers the resource-driven linear form, c = +1 the
    conformity-driven one.
    """

    c: float

    def __post_init__(self):
        if not -1.0 <= self.c <= 1.0:
            raise ValueError(f"blend weight requires -1 <= c <= 1, got {self.c!r}")

    def coefficients(self) -> tuple[float, float, float, float, float]:
        return (0.0, 1.0 - self.c, 0.0, -1.0 - self.c, self.c)


@dataclass(frozen=True)
class ResourceQuadraticGreed:
    """w = aR^2 + (2-a)R - 1, pinned to w(0) = -1 and w(1) = 1."""

    a: float

    def __post_init__(self):
        if not -2.0 <= self.a <= 2.0:
            raise ValueError(f"quadratic shape requires -2 <= a <= 2, got {self.a!r}")

    def coefficients(self) -> tuple[float, float, float, float, float]:
        return (self.a, 2.0 - self.a, 0.0, 0.0, -1.0)


@dataclass(frozen=True)
class ConformityQuadraticGreed:
    """w = ax^2 + (-2-a)x + 1, pinned to w(0) = 1 and w(1) = -1."""

    a: float

    def __post_init__(self):
        if not -2.0 <= self.a <= 2.0:
            raise ValueError(f"quadratic shape requires -2 <= a <= 2, got {self.a!r}")

    def coefficients(self) -> tuple[float, float, float, float, float]:
        return (0.0, 0.0, self.a, -2.0 - self.a, 1.0)

    def interior_root(self) -> float:
        """The unique zero of w(x) in (0, 1).

        Written as 2 / ((2+a) + sqrt(4+a^2)) so it stays well-conditioned
        near a = 0, where it equals the linear-case value 1/2.
        """
        return 2.0 / ((2.0 + self.a) + math.sqrt(4.0 + self.a * self.a))


@dataclass(frozen=True)
class ResourceConformityQuadraticGreed:
    """w = aR^2 + bR + cx^2 + dx + e with both boundary pins.

    Coefficients must satisfy a + b + e = 1 (so w(R=1, x=0) = 1) and
    c + d + e = -1 (so w(R=0, x=1) = -1), and the surface must stay inside
    [-1, 1] on the unit square; both are validated at construction.

    The default is a = b = 0.5, c = d = -0.5, e = 0. (The coefficient table
    this default descends from lists the x-coefficients with positive sign,
    which violates the boundary pin it is printed next to; the signs here
    are the ones that satisfy it.)
    """

    a: float = 0.5
    b: float = 0.5
    c: float = -0.5
    d: float = -0.5
    e: float = 0.0

    def __post_init__(self):
        lo = self.a + self.b + self.e
        hi = self.c + self.d + self.e
        if abs(lo - 1.0) > BOUNDARY_TOL:
            raise ValueError(
                f"coefficients must satisfy a + b + e = 1, got {lo!r}"
            )
        if abs(hi + 1.0) > BOUNDARY_TOL:
            raise ValueError(
                f"coefficients must satisfy c + d + e = -1, got {hi!r}"
            )
        qa, qb, qc, qd, qe = self.coefficients()
        for i in range(101):
            r = i / 100.0
            for j in range(101):
                x = j / 100.0
                w = (qa * r + qb) * r + (qc * x + qd) * x + qe
                if abs(w) > 1.0 + BOUNDARY_TOL:
                    raise ValueError(
                        f"surface leaves [-1, 1] at (R={r}, x={x}): w = {w!r}"
                    )

    def coefficients(self) -> tuple[float, float, float, float, float]:
        return (self.a, self.b, self.c, self.d, self.e)


GreedSpec = (
    ConstantGreed
    | ResourceLinearGreed
    | ConformityLinearGreed
    | ResourceConformityLinearGreed
    | ResourceQuadraticGreed
    | ConformityQuadraticGreed
    | ResourceConformityQuadraticGreed
)

#: Greed families whose interior equilibria have closed forms.
LINEAR_FAMILIES = (
    ConstantGreed,
    ResourceLinearGreed,
    ConformityLinearGreed,
    ResourceConformityLinearGreed,
)

GREED_NAMES_DOC = """\
greed families:
  minimal                        constant w (give --w)
  resource                       w = 2R - 1
  conformity                     w = 1 - 2x
  resource_conformity            w = (1-c)R + (-1-c)x + c (give --c)
  resource_quadratic             w = aR^2 + (2-a)R - 1 (give --a)
  conformity_quadratic           w = ax^2 + (-2-a)x + 1 (give --a)
  resource_conformity_quadratic  w = qa R^2 + qb R + qc x^2 + qd x + qe
"""


@dataclass(frozen=True)
class ModelSpec:
    """Full parameterization of one model variant.

    growth_rate is the resource's natural growth rate T; e_c_hat and e_d_hat
    are the normalized extraction rates (raw per-player rates e_c, e_d in an
    N-player simulation map to e_hat = N * e / T). The carrying capacity is
    fixed at 1 by the normalization of R.
    """

    growth_rate: float
    e_c_hat: float
    e_d_hat: float
    greed: GreedSpec
    carrying_capacity: float = 1.0

    def __post_init__(self):
        if not self.growth_rate > 0.0:
            raise ValueError(f"growth_rate must be positive, got {self.growth_rate!r}")
        if self.carrying_capacity != 1.0:
            raise ValueError("carrying_capacity is fixed to 1 by normalization")
        if not 0.0 < self.e_c_hat < 1.0:
            raise ValueError(
                f"requires 0 < e_c_hat < 1, got e_c_hat = {self.e_c_hat!r}"
            )
        if not self.e_d_hat > 1.0:
            raise ValueError(
                f"requires e_d_hat > 1, got e_d_hat = {self.e_d_hat!r}"
            )

    def kernel_args(self) -> tuple[float, ...]:
        """(qa, qb, qc, qd, qe, T, e_c_hat, e_d_hat) as consumed by kernels."""
        return (*self.greed.coefficients(), self.growth_rate, self.e_c_hat, self.e_d_hat)


class SwitchDirection(enum.Enum):
    D_TO_C = "defect_to_cooperate"
    C_TO_D = "cooperate_to_defect"


def greed_eval(greed: GreedSpec, state: SystemState) -> float:
    """Evaluate the greed parameter at a state, clamped to [-1, 1].

    The clamp only ever acts on floating-point edge noise for valid specs.
    """
    qa, qb, qc, qd, qe = greed.coefficients()
    r = state.resource
    x = state.coop_fraction
    w = (qa * r + qb) * r + (qc * x + qd) * x + qe
    if w > 1.0:
        return 1.0
    if w < -1.0:
        return -1.0
    return w


def switch_probability(w: float, state: SystemState, direction: SwitchDirection) -> float:
    """Probability that a player adopts the compared neighbor's strategy.

    Payoffs are proportional to the resource stock, so the pairwise rule
    p = 1/2 + (w/2) * (U_j - U_i) / dU_max collapses to 1/2 -+ w*R/2; the
    two directions always sum to 1.
    """
    if not -1.0 <= w <= 1.0:
        raise ValueError(f"requires |w| <= 1, got {w!r}")
    wr = w * state.resource
    if direction is SwitchDirection.D_TO_C:
        return 0.5 - 0.5 * wr
    return 0.5 + 0.5 * wr


def drift(spec: ModelSpec, state: SystemState) -> tuple[float, float]:
    """Time derivatives (dR/dt, dx/dt) of the coupled system."""
    return drift_at(spec, state.resource, state.coop_fraction)


def drift_at(spec: ModelSpec, r: float, x: float) -> tuple[float, float]:
    """drift() on raw coordinates, usable slightly outside [0, 1]^2.

    Finite-difference Jacobians and Runge-Kutta stages need to probe just
    past the boundary, where SystemState would reject the values.
    """
    qa, qb, qc, qd, qe = spec.greed.coefficients()
    t = spec.growth_rate
    mix = x * spec.e_c_hat + (1.0 - x) * spec.e_d_hat
    dr = t * (r * (1.0 - r) - r * mix)
    w = (qa * r + qb) * r + (qc * x + qd) * x + qe
    if w > 1.0:
        w = 1.0
    elif w < -1.0:
        w = -1.0
    dx = -w * r * x * (1.0 - x)
    return (dr, dx)
