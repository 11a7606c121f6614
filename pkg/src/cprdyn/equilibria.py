"""Fixed points, stability classification, and sustainability thresholds.

Stationary states of the coupled system come in three kinds: the depleted
line {R = 0, any x} (reported once as a family), the full-cooperation point
{R = 1 - e_c_hat, x = 1}, and interior points where the greed parameter and
the resource balance vanish together. Linear greed families have closed
forms for the interior points; quadratic families are enumerated by
root-finding on the drift field along the resource nullcline.

Stability is judged from the numerically differentiated Jacobian for every
model, one code path for all; closed-form eigenvalues serve as test oracles
where they exist. A two-dimensional fixed point is stable exactly when the
Jacobian determinant is positive and its trace negative, equivalently when
both eigenvalue real parts are negative; a zero real part within tolerance
is neutral stability (the depleted line genuinely has a zero eigenvalue
along itself).

The sustainability threshold is the cooperator fraction above which any
initial resource level ends in a sustained state. With defection-favoring
constant greed no threshold exists. The conformity threshold flattens at the
interior zero of the greed function (1/2 in the linear case) whenever the
extraction pair (e_c_hat, e_d_hat) falls below the line e_d = 2 - e_c; the
blended model interpolates between the resource and conformity thresholds
with weights (1-c)/2 and (1+c)/2.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

from .models import (
    ConformityLinearGreed,
    ConformityQuadraticGreed,
    ConstantGreed,
    ModelSpec,
    ResourceConformityLinearGreed,
    ResourceConformityQuadraticGreed,
    ResourceLinearGreed,
    ResourceQuadraticGreed,
    SystemState,
    drift_at,
)

#: Eigenvalue real parts within this of zero count as neutral.
STABILITY_TOL = 1e-9

#: Central-difference step for the numeric Jacobian.
FD_STEP = 1e-6


class Stability(enum.Enum):
    STABLE = "stable"
    UNSTABLE = "unstable"
    NEUTRAL_STABLE = "neutral_stable"


class Region(enum.Enum):
    RIGHT_TOP = "right_top"
    LEFT_BOTTOM = "left_bottom"
    NOT_APPLICABLE = "not_applicable"


@dataclass(frozen=True)
class Equilibrium:
    """A fixed point with its stability classification and eigen-data.

    `family` is None for isolated points; "depleted_line" marks the {R = 0,
    any x} boundary family and "interior_line" the continuum of fixed points
    of the zero-greed constant model. For families the state holds a
    representative point and the eigen-data is evaluated there; stability
    varies along the line, so classify specific points via jacobian().
    """

    state: SystemState
    classification: Stability
    eigenvalues: tuple[complex, complex]
    existence_condition_met: bool = True
    family: str | None = None


class EquilibriumSet(Sequence):
    """Equilibria of one model, plus an enumeration-completeness flag.

    `complete` is False only if the numeric root finder failed to converge
    somewhere, leaving the interior enumeration possibly partial.
    """

    def __init__(self, equilibria: Sequence[Equilibrium], complete: bool = True):
        self._items = tuple(equilibria)
        self.complete = bool(complete)

    def __len__(self) -> int:
        return len(self._items)

    def __getitem__(self, i):
        return self._items[i]

    def __iter__(self) -> Iterator[Equilibrium]:
        return iter(self._items)

    def __repr__(self) -> str:
        return f"EquilibriumSet({list(self._items)!r}, complete={self.complete})"


def jacobian(spec: ModelSpec, state: SystemState, fd_step: float = FD_STEP) -> np.ndarray:
    """Central finite-difference Jacobian of the drift field at a state."""
    r = state.resource
    x = state.coop_fraction
    fr_hi = drift_at(spec, r + fd_step, x)
    fr_lo = drift_at(spec, r - fd_step, x)
    fx_hi = drift_at(spec, r, x + fd_step)
    fx_lo = drift_at(spec, r, x - fd_step)
    inv = 1.0 / (2.0 * fd_step)
    return np.array(
        [
            [(fr_hi[0] - fr_lo[0]) * inv, (fx_hi[0] - fx_lo[0]) * inv],
            [(fr_hi[1] - fr_lo[1]) * inv, (fx_hi[1] - fx_lo[1]) * inv],
        ]
    )


def _eigenvalues(jac: np.ndarray) -> tuple[complex, complex]:
    eigs = sorted(np.linalg.eigvals(jac), key=lambda z: (z.real, z.imag))
    return (complex(eigs[0]), complex(eigs[1]))


def _classify_eigs(eigs: tuple[complex, complex], tol: float = STABILITY_TOL) -> Stability:
    # For a real 2x2 Jacobian, both real parts negative is the same test as
    # determinant positive with negative trace.
    re_max = max(eigs[0].real, eigs[1].real)
    if re_max > tol:
        return Stability.UNSTABLE
    if re_max >= -tol:
        return Stability.NEUTRAL_STABLE
    return Stability.STABLE


def classify(spec: ModelSpec, eq: Equilibrium, tol: float = STABILITY_TOL) -> Stability:
    """Classification of an equilibrium from its eigen-data."""
    del spec  # classification needs only the eigen-data
    return _classify_eigs(eq.eigenvalues, tol)


def _make_equilibrium(
    spec: ModelSpec, r: float, x: float, family: str | None = None
) -> Equilibrium:
    state = SystemState(r, x)
    eigs = _eigenvalues(jacobian(spec, state))
    return Equilibrium(
        state=state,
        classification=_classify_eigs(eigs),
        eigenvalues=eigs,
        existence_condition_met=True,
        family=family,
    )


def _resource_nullcline(spec: ModelSpec, x: float) -> float:
    """The positive-R balance level 1 - (x e_c + (1-x) e_d) at fraction x."""
    return 1.0 - (x * spec.e_c_hat + (1.0 - x) * spec.e_d_hat)


def _greed_surface(spec: ModelSpec, r: float, x: float) -> float:
    qa, qb, qc, qd, qe = spec.greed.coefficients()
    return (qa * r + qb) * r + (qc * x + qd) * x + qe


def _interior_closed_forms(spec: ModelSpec) -> list[tuple[float, float]]:
    """Interior fixed points of the linear greed families, when in-domain."""
    ec = spec.e_c_hat
    ed = spec.e_d_hat
    greed = spec.greed
    points: list[tuple[float, float]] = []
    if isinstance(greed, ResourceLinearGreed):
        # zero greed at R = 1/2; exists only while the matching fraction is
        # interior, which needs e_c_hat < 1/2
        x = (ed - 0.5) / (ed - ec)
        if 0.0 < x < 1.0:
            points.append((0.5, x))
    elif isinstance(greed, ConformityLinearGreed):
        r = 1.0 - 0.5 * ec - 0.5 * ed  # zero greed at x = 1/2
        if 0.0 < r <= 1.0:
            points.append((r, 0.5))
    elif isinstance(greed, ResourceConformityLinearGreed):
        c = greed.c
        den = 1.0 + ec - ed + c * (1.0 - ec + ed)
        if abs(den) > 1e-14:
            x = (1.0 - ed + c * ed) / den
            if 0.0 < x < 1.0:
                r = _resource_nullcline(spec, x)
                if 0.0 < r <= 1.0:
                    points.append((r, x))
    return points


def _interior_roots(spec: ModelSpec) -> tuple[list[tuple[float, float]], bool]:
    """Interior fixed points of quadratic families by bracketed bisection.

    Interior points satisfy w(R, x) = 0 with R on the resource nullcline, so
    they are zeros of a single smooth function of x on the stretch where the
    nullcline is positive.
    """
    lo = max(0.0, _critical_fraction_minimal(spec.e_c_hat, spec.e_d_hat)) + 1e-12
    hi = 1.0 - 1e-12
    if lo >= hi:
        return [], True

    def g(x: float) -> float:
        return _greed_surface(spec, _resource_nullcline(spec, x), x)

    n_samples = 4096
    xs = np.linspace(lo, hi, n_samples)
    gs = np.array([g(x) for x in xs])
    points: list[tuple[float, float]] = []
    complete = True
    for i in range(n_samples - 1):
        ga, gb = gs[i], gs[i + 1]
        if ga == 0.0:
            root = xs[i]
        elif ga * gb < 0.0:
            a, b = xs[i], xs[i + 1]
            fa = ga
            converged = False
            for _ in range(200):
                m = 0.5 * (a + b)
                fm = g(m)
                if fm == 0.0 or (b - a) < 1e-15:
                    converged = True
                    break
                if fa * fm < 0.0:
                    b = m
                else:
                    a, fa = m, fm
            if not converged:
                complete = False
            root = 0.5 * (a + b)
        else:
            continue
        if not any(abs(root - p[1]) < 1e-9 for p in points):
            r = _resource_nullcline(spec, root)
            if 0.0 < r <= 1.0 and 0.0 < root < 1.0:
                points.append((r, root))
    if gs[-1] == 0.0 and not any(abs(hi - p[1]) < 1e-9 for p in points):
        r = _resource_nullcline(spec, hi)
        if 0.0 < r <= 1.0:
            points.append((r, hi))
    return points, complete


def stationary_solutions(spec: ModelSpec) -> EquilibriumSet:
    """All fixed points: depleted family, full cooperation, interior points.

    The depleted line is reported once with a representative state at
    x = 1/2. Points whose coordinates leave the unit square (their existence
    condition fails) are not physical states and are omitted.
    """
    out = [
        _make_equilibrium(spec, 0.0, 0.5, family="depleted_line"),
        _make_equilibrium(spec, 1.0 - spec.e_c_hat, 1.0),
    ]
    complete = True
    greed = spec.greed
    if isinstance(greed, ConstantGreed):
        if greed.w == 0.0:
            # with frozen strategies every point of the positive balance
            # curve is stationary; represent the continuum once
            x_lo = _critical_fraction_minimal(spec.e_c_hat, spec.e_d_hat)
            x_rep = 0.5 * (max(0.0, x_lo) + 1.0)
            r_rep = _resource_nullcline(spec, x_rep)
            if 0.0 < r_rep <= 1.0:
                out.append(
                    _make_equilibrium(spec, r_rep, x_rep, family="interior_line")
                )
        interior: list[tuple[float, float]] = []
    elif isinstance(
        greed,
        (ResourceLinearGreed, ConformityLinearGreed, ResourceConformityLinearGreed),
    ):
        interior = _interior_closed_forms(spec)
    else:
        interior, complete = _interior_roots(spec)
    for r, x in sorted(interior, key=lambda p: p[1]):
        out.append(_make_equilibrium(spec, r, x))
    return EquilibriumSet(out, complete)


# ---------------------------------------------------------------------------
# Sustainability thresholds
# ---------------------------------------------------------------------------


def _critical_fraction_minimal(e_c_hat: float, e_d_hat: float) -> float:
    return (e_d_hat - 1.0) / (e_d_hat - e_c_hat)


def critical_fraction_minimal(e_c_hat: float, e_d_hat: float) -> float:
    """Threshold (e_d_hat - 1) / (e_d_hat - e_c_hat) of the constant-greed model.

    Also the threshold of both resource-driven families.
    """
    if not (0.0 < e_c_hat < 1.0 < e_d_hat):
        raise ValueError("requires 0 < e_c_hat < 1 < e_d_hat")
    return _critical_fraction_minimal(e_c_hat, e_d_hat)


def region_of(e_c_hat: float, e_d_hat: float) -> Region:
    """Which side of the line e_d_hat = -e_c_hat + 2 a parameter pair is on.

    Exact ties go to RIGHT_TOP; on the line all model thresholds coincide,
    so the tie-break is cosmetic.
    """
    if not (0.0 < e_c_hat < 1.0 < e_d_hat):
        raise ValueError("requires 0 < e_c_hat < 1 < e_d_hat")
    if e_d_hat >= -e_c_hat + 2.0:
        return Region.RIGHT_TOP
    return Region.LEFT_BOTTOM


@dataclass(frozen=True)
class CriticalValue:
    """Sustainability threshold of one model, or its absence."""

    value: float | None
    model_tag: str
    region: Region = Region.NOT_APPLICABLE
    note: str = ""

    @property
    def absent(self) -> bool:
        return self.value is None


GREED_TAGS = {
    ConstantGreed: "minimal",
    ResourceLinearGreed: "resource",
    ConformityLinearGreed: "conformity",
    ResourceConformityLinearGreed: "resource_conformity",
    ResourceQuadraticGreed: "resource_quadratic",
    ConformityQuadraticGreed: "conformity_quadratic",
    ResourceConformityQuadraticGreed: "resource_conformity_quadratic",
}


def critical_value(spec: ModelSpec) -> CriticalValue:
    """The cooperator-fraction threshold guaranteeing sustainability.

    Above the threshold the system sustains the resource from any initial
    resource level. Absent for the defection-favoring constant model (the
    resource always depletes) and for the blended quadratic family (no
    analytic form; sweep empirically instead).
    """
    ec = spec.e_c_hat
    ed = spec.e_d_hat
    greed = spec.greed
    tag = GREED_TAGS[type(greed)]
    base = _critical_fraction_minimal(ec, ed)
    if isinstance(greed, ConstantGreed):
        if greed.w > 0.0:
            return CriticalValue(None, tag, note="defection-favoring greed always depletes")
        return CriticalValue(base, tag)
    if isinstance(greed, (ResourceLinearGreed, ResourceQuadraticGreed)):
        return CriticalValue(base, tag)
    region = region_of(ec, ed)
    if isinstance(greed, ConformityLinearGreed):
        return CriticalValue(max(base, 0.5), tag, region)
    if isinstance(greed, ConformityQuadraticGreed):
        return CriticalValue(max(base, greed.interior_root()), tag, region)
    if isinstance(greed, ResourceConformityLinearGreed):
        c = greed.c
        blended = ((1.0 - c) / 2.0) * base + ((1.0 + c) / 2.0) * max(base, 0.5)
        return CriticalValue(blended, tag, region)
    return CriticalValue(
        None, tag, region, note="no analytic threshold for the blended quadratic family"
    )


#: The (slope, intercept) of the region boundary e_d_hat = -e_c_hat + 2.
REGION_BOUNDARY = (-1.0, 2.0)
