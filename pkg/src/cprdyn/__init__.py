"""Coupled dynamics of common-pool resource extraction and cooperation.

Deterministic integration, fixed-point and stability analysis, stochastic
network simulation, and the sweep experiments built on top of them. See the
README for the command-line interface and output formats.
"""

__version__ = "0.1.0"

from .abm import (
    AbmConfig,
    AbmRun,
    EnsembleSummary,
    init_population,
    micro_step,
    normalized_extraction,
    run_ensemble,
    run_realization,
)
from .equilibria import (
    CriticalValue,
    Equilibrium,
    EquilibriumSet,
    Region,
    Stability,
    classify,
    critical_fraction_minimal,
    critical_value,
    jacobian,
    region_of,
    stationary_solutions,
)
from .models import (
    ConformityLinearGreed,
    ConformityQuadraticGreed,
    ConstantGreed,
    GreedSpec,
    ModelSpec,
    ResourceConformityLinearGreed,
    ResourceConformityQuadraticGreed,
    ResourceLinearGreed,
    ResourceQuadraticGreed,
    SwitchDirection,
    SystemState,
    drift,
    greed_eval,
    switch_probability,
)
from .networks import Network, NetworkKind, NetworkSpec, build_network
from .ode import (
    IntegrationError,
    IntegratorOptions,
    Terminal,
    Trajectory,
    integrate,
    integrate_terminal_state,
    sample_trajectory,
    step_rk4,
)
from .sweep import (
    ComparisonBundle,
    CriticalMap,
    DensityGrid,
    EmpiricalCritical,
    GridSpec,
    compare_ode_abm,
    critical_map,
    density_sweep,
    empirical_critical,
)

__all__ = [name for name in dir() if not name.startswith("_")]
