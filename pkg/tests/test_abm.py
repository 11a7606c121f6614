import numpy as np
import pytest

from cprdyn.abm import (
    AbmConfig,
    AbmRun,
    init_population,
    micro_step,
    normalized_extraction,
    run_ensemble,
    run_realization,
)
from cprdyn.models import (
    ConstantGreed,
    ModelSpec,
    ResourceLinearGreed,
    SystemState,
)
from cprdyn.networks import NetworkKind, NetworkSpec, build_network
from cprdyn.ode import integrate_terminal_state, sample_trajectory
from cprdyn.rng import (
    STREAM_NETWORK,
    STREAM_POPULATION,
    STREAM_STEPS,
    Xoshiro256StarStar,
    derive_seed,
)


class TestNormalizedExtraction:
    def test_conversion(self):
        ec, ed = normalized_extraction(500, 0.0028, 0.0044, 2.0)
        assert ec == pytest.approx(0.7, abs=1e-12)
        assert ed == pytest.approx(1.1, abs=1e-12)

    def test_ordering_enforced(self):
        with pytest.raises(ValueError):
            normalized_extraction(500, 0.005, 0.0044, 2.0)  # N e_c > T


class TestInitPopulation:
    def test_exact_counts(self):
        assert init_population(500, 0.5, seed=1).sum() == 250
        assert init_population(500, 1.0, seed=1).sum() == 500
        assert init_population(500, 0.0, seed=1).sum() == 0
        # round half up: 0.123 * 500 = 61.5 -> 62
        assert init_population(500, 0.123, seed=1).sum() == 62

    def test_deterministic_and_seed_sensitive(self):
        a = init_population(200, 0.4, seed=5)
        b = init_population(200, 0.4, seed=5)
        c = init_population(200, 0.4, seed=6)
        assert np.array_equal(a, b)
        assert not np.array_equal(a, c)

    def test_placement_varies(self):
        # same count, different positions across seeds
        ones = {tuple(np.flatnonzero(init_population(50, 0.3, seed=s))) for s in range(10)}
        assert len(ones) > 1


def manual_realization(config: AbmConfig, spec: ModelSpec) -> AbmRun:
    """Compose run_realization out of public micro_step calls."""
    net = build_network(config.network, config.n_players,
                        derive_seed(config.seed, STREAM_NETWORK))
    strategies = init_population(config.n_players, config.initial.coop_fraction,
                                 derive_seed(config.seed, STREAM_POPULATION))
    rng = Xoshiro256StarStar(derive_seed(config.seed, STREAM_STEPS))
    run = AbmRun(config.n_players, strategies, config.initial.resource)
    times = [0]
    rs = [run.resource]
    xs = [run.coop_fraction]
    for t in range(config.t_end):
        for _ in range(config.n_players):
            micro_step(run, spec, net, rng)
        times.append(t + 1)
        rs.append(run.resource)
        xs.append(run.coop_fraction)
    run.times = np.asarray(times)
    run.resource_series = np.asarray(rs)
    run.coop_series = np.asarray(xs)
    return run


class TestMicroStep:
    def test_same_strategy_meeting_updates_resource_only(self):
        spec = ModelSpec(2.0, 0.7, 1.1, ConstantGreed(-1.0))
        net = build_network(NetworkSpec(NetworkKind.COMPLETE), 50, seed=0)
        strategies = np.ones(50, dtype=np.int8)
        run = AbmRun(50, strategies, 0.9)
        rng = Xoshiro256StarStar(123)
        micro_step(run, spec, net, rng)
        assert run.coop_count == 50
        assert run.resource != 0.9
        assert run.step_counter == 1

    def test_all_cooperators_relax_to_their_balance(self):
        # x pinned at 1; R heads to 1 - e_c
        spec = ModelSpec(2.0, 0.7, 1.1, ConstantGreed(-1.0))
        config = AbmConfig(n_players=100, seed=77, t_end=60,
                           initial=SystemState(0.9, 1.0))
        run = run_realization(config, spec)
        assert np.all(run.coop_series == 1.0)
        assert run.resource == pytest.approx(0.3, abs=0.01)

    def test_count_changes_at_most_one_per_step(self):
        spec = ModelSpec(2.0, 0.7, 1.1, ConstantGreed(1.0))
        net = build_network(NetworkSpec(NetworkKind.COMPLETE), 40, seed=0)
        run = AbmRun(40, init_population(40, 0.5, seed=3), 0.5)
        rng = Xoshiro256StarStar(9)
        count = run.coop_count
        for _ in range(2000):
            micro_step(run, spec, net, rng)
            now = run.coop_count
            assert abs(now - count) <= 1
            assert 0.0 <= run.resource <= 1.0
            count = now

    def test_absorbing_uniform_states(self):
        spec = ModelSpec(2.0, 0.7, 1.1, ConstantGreed(1.0))
        for x0 in (0.0, 1.0):
            config = AbmConfig(n_players=60, seed=5, t_end=20,
                               initial=SystemState(0.5, x0))
            run = run_realization(config, spec)
            assert np.all(run.coop_series == x0)


class TestRunRealization:
    def test_zero_horizon_returns_initial_sample(self):
        spec = ModelSpec(2.0, 0.7, 1.1, ConstantGreed(-1.0))
        config = AbmConfig(n_players=500, seed=1, t_end=0)
        run = run_realization(config, spec)
        assert run.times.tolist() == [0]
        assert run.resource_series.tolist() == [0.5]
        assert run.coop_series.tolist() == [0.5]

    def test_deterministic(self):
        spec = ModelSpec(2.0, 0.7, 1.1, ResourceLinearGreed())
        config = AbmConfig(n_players=120, seed=321, t_end=10)
        a = run_realization(config, spec)
        b = run_realization(config, spec)
        assert np.array_equal(a.resource_series, b.resource_series)
        assert np.array_equal(a.coop_series, b.coop_series)
        assert np.array_equal(a.strategies, b.strategies)

    def test_fraction_matches_strategy_vector(self):
        spec = ModelSpec(2.0, 0.7, 1.1, ResourceLinearGreed())
        config = AbmConfig(n_players=80, seed=4, t_end=15)
        run = run_realization(config, spec)
        assert run.coop_series[-1] == pytest.approx(run.strategies.sum() / 80, rel=1e-15)

    def test_matches_ode_attractor(self):
        spec = ModelSpec(2.0, 0.7, 1.1, ConstantGreed(-1.0))
        config = AbmConfig(n_players=500, seed=2024, t_end=80)
        run = run_realization(config, spec)
        target, _, _ = integrate_terminal_state(spec, config.initial)
        assert abs(run.coop_series[-1] - target.coop_fraction) < 0.05
        assert abs(run.resource_series[-1] - target.resource) < 0.05

    @pytest.mark.parametrize(
        "network",
        [
            NetworkSpec(NetworkKind.COMPLETE),
            NetworkSpec(NetworkKind.BARABASI_ALBERT, ba_m=6),
            NetworkSpec(NetworkKind.SMALL_WORLD, sw_k=8, sw_beta=0.1),
        ],
        ids=["complete", "ba", "sw"],
    )
    def test_micro_step_composition_matches_kernel(self, network):
        spec = ModelSpec(2.0, 0.7, 1.1, ResourceLinearGreed())
        config = AbmConfig(n_players=60, network=network, seed=98765, t_end=3)
        fast = run_realization(config, spec)
        slow = manual_realization(config, spec)
        assert np.array_equal(fast.resource_series, slow.resource_series)
        assert np.array_equal(fast.coop_series, slow.coop_series)
        assert np.array_equal(fast.strategies, slow.strategies)


class TestRunEnsemble:
    def test_single_realization_has_zero_stderr(self):
        spec = ModelSpec(2.0, 0.7, 1.1, ConstantGreed(-1.0))
        config = AbmConfig(n_players=100, seed=7, t_end=10)
        ens = run_ensemble(config, spec, 1)
        assert np.all(ens.resource_stderr == 0.0)
        assert np.all(ens.coop_stderr == 0.0)
        assert ens.n_realizations == 1

    def test_repeatable_and_distinct_seeds(self):
        spec = ModelSpec(2.0, 0.7, 1.1, ConstantGreed(-1.0))
        config = AbmConfig(n_players=100, seed=7, t_end=10)
        a = run_ensemble(config, spec, 5)
        b = run_ensemble(config, spec, 5)
        assert np.array_equal(a.resource_mean, b.resource_mean)
        assert np.array_equal(a.coop_runs, b.coop_runs)
        assert len(set(a.seeds)) == 5

    def test_scheduling_independent(self):
        spec = ModelSpec(2.0, 0.7, 1.1, ResourceLinearGreed())
        config = AbmConfig(n_players=100, seed=13, t_end=10)
        serial = run_ensemble(config, spec, 6, workers=1)
        threaded = run_ensemble(config, spec, 6, workers=4)
        assert np.array_equal(serial.resource_runs, threaded.resource_runs)
        assert np.array_equal(serial.coop_runs, threaded.coop_runs)

    def test_rejects_empty_ensemble(self):
        spec = ModelSpec(2.0, 0.7, 1.1, ConstantGreed(-1.0))
        with pytest.raises(ValueError):
            run_ensemble(AbmConfig(), spec, 0)

    def test_mean_field_gap_shrinks_with_population(self):
        spec = ModelSpec(2.0, 0.7, 1.1, ResourceLinearGreed())
        ode = sample_trajectory(spec, SystemState(0.5, 0.5), 30.0)
        gaps = []
        for n in (100, 500, 2000):
            config = AbmConfig(n_players=n, seed=1234, t_end=30)
            ens = run_ensemble(config, spec, 8)
            gaps.append(float(np.mean(np.abs(ens.coop_mean - ode.coop_fraction))))
        assert gaps[0] > gaps[1] > gaps[2]
