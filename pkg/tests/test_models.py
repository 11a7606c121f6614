import math

import numpy as np
import pytest

from cprdyn.models import (
    ConformityLinearGreed,
    ConformityQuadraticGreed,
    ConstantGreed,
    ModelSpec,
    ResourceConformityLinearGreed,
    ResourceConformityQuadraticGreed,
    ResourceLinearGreed,
    ResourceQuadraticGreed,
    SwitchDirection,
    SystemState,
    drift,
    drift_at,
    greed_eval,
    switch_probability,
)

ALL_GREEDS = [
    ConstantGreed(-1.0),
    ConstantGreed(0.0),
    ConstantGreed(0.7),
    ResourceLinearGreed(),
    ConformityLinearGreed(),
    ResourceConformityLinearGreed(0.25),
    ResourceConformityLinearGreed(-0.75),
    ResourceQuadraticGreed(2.0),
    ResourceQuadraticGreed(-2.0),
    ConformityQuadraticGreed(2.0),
    ConformityQuadraticGreed(-1.5),
    ResourceConformityQuadraticGreed(),
]


def unit_grid(n=41):
    axis = np.linspace(0.0, 1.0, n)
    return [(r, x) for r in axis for x in axis]


class TestSystemState:
    def test_roundoff_is_clamped(self):
        assert SystemState(1.0 + 1e-13, 0.5).resource == 1.0
        assert SystemState(-1e-13, 0.5).resource == 0.0
        assert SystemState(0.5, 1.0 + 1e-13).coop_fraction == 1.0

    def test_real_violations_raise(self):
        with pytest.raises(ValueError, match="resource"):
            SystemState(1.01, 0.5)
        with pytest.raises(ValueError, match="coop_fraction"):
            SystemState(0.5, -0.01)
        with pytest.raises(ValueError):
            SystemState(math.nan, 0.5)


class TestModelSpec:
    def test_extraction_bounds(self):
        with pytest.raises(ValueError, match="e_c_hat"):
            ModelSpec(2.0, 1.2, 1.5, ConstantGreed(0.0))
        with pytest.raises(ValueError, match="e_d_hat"):
            ModelSpec(2.0, 0.5, 0.9, ConstantGreed(0.0))
        with pytest.raises(ValueError, match="growth_rate"):
            ModelSpec(0.0, 0.5, 1.5, ConstantGreed(0.0))
        with pytest.raises(ValueError, match="carrying_capacity"):
            ModelSpec(2.0, 0.5, 1.5, ConstantGreed(0.0), carrying_capacity=2.0)


class TestGreedSpecs:
    def test_parameter_ranges(self):
        with pytest.raises(ValueError):
            ConstantGreed(1.5)
        with pytest.raises(ValueError):
            ResourceConformityLinearGreed(-1.01)
        with pytest.raises(ValueError):
            ResourceQuadraticGreed(2.5)
        with pytest.raises(ValueError):
            ConformityQuadraticGreed(-3.0)

    def test_blended_quadratic_boundary_identities(self):
        # a + b + e = 1 and c + d + e = -1 are required at construction
        with pytest.raises(ValueError, match="a \\+ b \\+ e"):
            ResourceConformityQuadraticGreed(0.5, 0.6, -0.5, -0.5, 0.0)
        with pytest.raises(ValueError, match="c \\+ d \\+ e"):
            ResourceConformityQuadraticGreed(0.5, 0.5, 0.5, 0.5, 0.0)

    def test_default_blended_quadratic_hits_corners(self):
        greed = ResourceConformityQuadraticGreed()
        assert greed_eval(greed, SystemState(1.0, 0.0)) == pytest.approx(1.0, abs=1e-12)
        assert greed_eval(greed, SystemState(0.0, 1.0)) == pytest.approx(-1.0, abs=1e-12)


class TestGreedEval:
    def test_resource_linear_values(self):
        greed = ResourceLinearGreed()
        assert greed_eval(greed, SystemState(0.5, 0.3)) == 0.0
        assert greed_eval(greed, SystemState(0.0, 0.9)) == -1.0
        assert greed_eval(greed, SystemState(1.0, 0.1)) == 1.0

    def test_conformity_linear_values(self):
        greed = ConformityLinearGreed()
        assert greed_eval(greed, SystemState(0.2, 0.0)) == 1.0
        assert greed_eval(greed, SystemState(0.2, 1.0)) == -1.0

    def test_blend_corners(self):
        greed = ResourceConformityLinearGreed(0.25)
        assert greed_eval(greed, SystemState(1.0, 0.0)) == 1.0
        assert greed_eval(greed, SystemState(0.0, 1.0)) == -1.0

    def test_conformity_quadratic_midpoint(self):
        # w = 2x^2 - 4x + 1 at x = 0.5
        greed = ConformityQuadraticGreed(2.0)
        assert greed_eval(greed, SystemState(0.3, 0.5)) == pytest.approx(-0.5, abs=1e-15)

    @pytest.mark.parametrize("greed", ALL_GREEDS, ids=lambda g: type(g).__name__)
    def test_bounded_on_unit_square(self, greed):
        for r, x in unit_grid():
            w = greed_eval(greed, SystemState(r, x))
            assert -1.0 <= w <= 1.0

    def test_resource_monotone_nondecreasing(self):
        for greed in (ResourceLinearGreed(), ResourceQuadraticGreed(2.0),
                      ResourceQuadraticGreed(-2.0), ResourceConformityQuadraticGreed()):
            for x in np.linspace(0.0, 1.0, 9):
                values = [greed_eval(greed, SystemState(r, x)) for r in np.linspace(0, 1, 31)]
                assert np.all(np.diff(values) >= -1e-12)

    def test_conformity_monotone_nonincreasing(self):
        for greed in (ConformityLinearGreed(), ConformityQuadraticGreed(2.0),
                      ConformityQuadraticGreed(-2.0), ResourceConformityQuadraticGreed()):
            for r in np.linspace(0.0, 1.0, 9):
                values = [greed_eval(greed, SystemState(r, x)) for x in np.linspace(0, 1, 31)]
                assert np.all(np.diff(values) <= 1e-12)


class TestVariantReductions:
    def test_blend_reduces_to_resource_at_minus_one(self):
        blend = ResourceConformityLinearGreed(-1.0)
        base = ResourceLinearGreed()
        for r, x in unit_grid(21):
            s = SystemState(r, x)
            assert greed_eval(blend, s) == greed_eval(base, s)

    def test_blend_reduces_to_conformity_at_plus_one(self):
        blend = ResourceConformityLinearGreed(1.0)
        base = ConformityLinearGreed()
        for r, x in unit_grid(21):
            s = SystemState(r, x)
            assert greed_eval(blend, s) == greed_eval(base, s)

    def test_quadratics_reduce_to_linear_at_zero_shape(self):
        for quad, lin in (
            (ResourceQuadraticGreed(0.0), ResourceLinearGreed()),
            (ConformityQuadraticGreed(0.0), ConformityLinearGreed()),
        ):
            for r, x in unit_grid(21):
                s = SystemState(r, x)
                assert greed_eval(quad, s) == greed_eval(lin, s)


class TestSwitchProbability:
    def test_neutral_greed_is_half(self):
        for r in (0.0, 0.3, 1.0):
            s = SystemState(r, 0.4)
            assert switch_probability(0.0, s, SwitchDirection.D_TO_C) == 0.5
            assert switch_probability(0.0, s, SwitchDirection.C_TO_D) == 0.5

    def test_extremes(self):
        top = SystemState(1.0, 0.2)
        assert switch_probability(1.0, top, SwitchDirection.D_TO_C) == 0.0
        assert switch_probability(1.0, top, SwitchDirection.C_TO_D) == 1.0
        mid = SystemState(0.5, 0.2)
        assert switch_probability(-1.0, mid, SwitchDirection.D_TO_C) == 0.75

    def test_directions_sum_to_one(self, rng):
        for _ in range(500):
            w = rng.uniform(-1, 1)
            s = SystemState(rng.uniform(0, 1), rng.uniform(0, 1))
            p_dc = switch_probability(w, s, SwitchDirection.D_TO_C)
            p_cd = switch_probability(w, s, SwitchDirection.C_TO_D)
            assert 0.0 <= p_dc <= 1.0
            assert p_dc + p_cd == 1.0

    def test_rejects_out_of_range_greed(self, center):
        with pytest.raises(ValueError):
            switch_probability(1.5, center, SwitchDirection.D_TO_C)


class TestDrift:
    def test_worked_example(self, minimal_spec, center):
        dr, dx = drift(minimal_spec, center)
        assert dr == pytest.approx(-0.4, abs=1e-14)
        assert dx == pytest.approx(0.125, abs=1e-14)

    def test_zero_resource_is_absorbing(self):
        for greed in ALL_GREEDS:
            spec = ModelSpec(2.0, 0.7, 1.1, greed)
            assert drift(spec, SystemState(0.0, 0.37)) == (0.0, 0.0)

    def test_full_cooperation_point_is_stationary(self, minimal_spec):
        dr, dx = drift(minimal_spec, SystemState(0.3, 1.0))
        assert dr == 0.0
        assert dx == 0.0

    def test_boundary_fractions_freeze_strategies(self, minimal_spec):
        for x in (0.0, 1.0):
            _, dx = drift(minimal_spec, SystemState(0.6, x))
            assert dx == 0.0

    def test_sign_law(self, rng):
        # strategy motion always opposes the sign of the greed parameter
        for greed in ALL_GREEDS:
            spec = ModelSpec(2.0, 0.7, 1.1, greed)
            for _ in range(200):
                s = SystemState(rng.uniform(0.01, 1.0), rng.uniform(0.01, 0.99))
                w = greed_eval(greed, s)
                _, dx = drift(spec, s)
                if w > 0:
                    assert dx < 0
                elif w < 0:
                    assert dx > 0
                else:
                    assert dx == 0

    def test_drift_at_matches_drift_inside_domain(self, minimal_spec, rng):
        for _ in range(50):
            r, x = rng.uniform(0, 1), rng.uniform(0, 1)
            assert drift_at(minimal_spec, r, x) == drift(minimal_spec, SystemState(r, x))
