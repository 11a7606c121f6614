"""Run configuration: an INI-style key-value schema with strict validation.

Five sections: [model] picks the greed family and dynamical parameters,
[integrator] the stepping options, [abm] the simulation shape (players,
network, seed, horizon, initial condition), [sweep] the lattice and
realization counts, [output] where and under what name results land. Every
key has a default; unknown sections or keys are rejected, and invariant
violations name the failing constraint. The fully resolved configuration
(defaults included) is what run metadata records.

parse_config(serialize_config(cfg)) reproduces cfg exactly.
"""

from __future__ import annotations

import configparser
import io
import os
from dataclasses import dataclass, field
from typing import Any

from .abm import AbmConfig, normalized_extraction
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
    SystemState,
)
from .networks import NetworkKind, NetworkSpec
from .ode import IntegratorOptions
from .sweep import GridSpec

#: Environment variable overriding the default output directory.
OUT_DIR_ENV = "CPRDYN_OUT"


class ConfigError(ValueError):
    """Malformed syntax, unknown key, or a named invariant violation."""


FAMILIES = (
    "minimal",
    "resource",
    "conformity",
    "resource_conformity",
    "resource_quadratic",
    "conformity_quadratic",
    "resource_conformity_quadratic",
)

NETWORKS = {
    "complete": NetworkKind.COMPLETE,
    "ba": NetworkKind.BARABASI_ALBERT,
    "sw": NetworkKind.SMALL_WORLD,
}

# (default, parser) per section/key; None default means "optional, no value".
_SCHEMA: dict[str, dict[str, tuple[Any, type]]] = {
    "model": {
        "family": ("minimal", str),
        "growth_rate": (2.0, float),
        "ec": (None, float),
        "ed": (None, float),
        "w": (None, float),
        "c": (None, float),
        "a": (None, float),
        "qa": (None, float),
        "qb": (None, float),
        "qc": (None, float),
        "qd": (None, float),
        "qe": (None, float),
    },
    "integrator": {
        "step_size": (1e-3, float),
        "max_time": (500.0, float),
        "steady_tol": (1e-9, float),
        "window": (1.0, float),
        "depletion_floor": (1e-6, float),
    },
    "abm": {
        "n_players": (500, int),
        "seed": (2024, int),
        "t_end": (50, int),
        "r0": (0.5, float),
        "x0": (0.5, float),
        "network": ("complete", str),
        "ba_m": (50, int),
        "sw_k": (100, int),
        "sw_beta": (0.1, float),
        "e_c": (None, float),
        "e_d": (None, float),
    },
    "sweep": {
        "r0_points": (101, int),
        "x0_points": (101, int),
        "r0_min": (0.005, float),
        "r0_max": (0.995, float),
        "x0_min": (0.005, float),
        "x0_max": (0.995, float),
        "realizations": (10, int),
        "map_ec_points": (51, int),
        "map_ed_points": (51, int),
        "map_ec_min": (0.005, float),
        "map_ec_max": (0.995, float),
        "map_ed_min": (1.005, float),
        "map_ed_max": (2.0, float),
    },
    "output": {
        "directory": (None, str),
        "format": ("csv", str),
        "name": ("run", str),
    },
}


@dataclass(frozen=True)
class RunConfig:
    """Validated configuration with every field resolved."""

    model: ModelSpec
    integrator: IntegratorOptions
    abm: AbmConfig
    grid: GridSpec
    realizations: int
    map_ec_points: int
    map_ed_points: int
    map_ec_range: tuple[float, float]
    map_ed_range: tuple[float, float]
    out_dir: str
    out_format: str
    name: str
    resolved: dict = field(compare=False, repr=False, default_factory=dict)


def _parse_raw(text: str) -> dict[str, dict[str, str]]:
    parser = configparser.ConfigParser(interpolation=None)
    try:
        parser.read_string(text)
    except configparser.Error as exc:
        raise ConfigError(f"malformed configuration: {exc}") from exc
    raw: dict[str, dict[str, str]] = {}
    for section in parser.sections():
        if section not in _SCHEMA:
            raise ConfigError(f"unknown section [{section}]")
        raw[section] = {}
        for key, value in parser.items(section):
            if key not in _SCHEMA[section]:
                raise ConfigError(f"unknown key {section}.{key}")
            raw[section][key] = value
    return raw


def _resolve(raw: dict[str, dict[str, str]]) -> dict[str, dict[str, Any]]:
    resolved: dict[str, dict[str, Any]] = {}
    for section, keys in _SCHEMA.items():
        resolved[section] = {}
        for key, (default, caster) in keys.items():
            if section in raw and key in raw[section]:
                text = raw[section][key]
                try:
                    resolved[section][key] = caster(text)
                except ValueError as exc:
                    raise ConfigError(
                        f"{section}.{key}: cannot parse {text!r} as {caster.__name__}"
                    ) from exc
            else:
                resolved[section][key] = default
    return resolved


def _require(values: dict[str, Any], section: str, key: str) -> Any:
    if values[key] is None:
        raise ConfigError(f"{section}.{key} is required for this model family")
    return values[key]


def _reject(values: dict[str, Any], section: str, keys: list[str], family: str) -> None:
    for key in keys:
        if values[key] is not None:
            raise ConfigError(
                f"{section}.{key} does not apply to the {family!r} family"
            )


def _build_greed(model: dict[str, Any]) -> GreedSpec:
    family = model["family"]
    if family not in FAMILIES:
        raise ConfigError(
            f"model.family must be one of {', '.join(FAMILIES)}; got {family!r}"
        )
    quad_keys = ["qa", "qb", "qc", "qd", "qe"]
    try:
        if family == "minimal":
            _reject(model, "model", ["c", "a"] + quad_keys, family)
            return ConstantGreed(_require(model, "model", "w"))
        if family == "resource":
            _reject(model, "model", ["w", "c", "a"] + quad_keys, family)
            return ResourceLinearGreed()
        if family == "conformity":
            _reject(model, "model", ["w", "c", "a"] + quad_keys, family)
            return ConformityLinearGreed()
        if family == "resource_conformity":
            _reject(model, "model", ["w", "a"] + quad_keys, family)
            return ResourceConformityLinearGreed(_require(model, "model", "c"))
        if family == "resource_quadratic":
            _reject(model, "model", ["w", "c"] + quad_keys, family)
            return ResourceQuadraticGreed(_require(model, "model", "a"))
        if family == "conformity_quadratic":
            _reject(model, "model", ["w", "c"] + quad_keys, family)
            return ConformityQuadraticGreed(_require(model, "model", "a"))
        _reject(model, "model", ["w", "c", "a"], family)
        if all(model[k] is None for k in quad_keys):
            return ResourceConformityQuadraticGreed()
        return ResourceConformityQuadraticGreed(
            *(_require(model, "model", k) for k in quad_keys)
        )
    except ValueError as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(f"model: {exc}") from exc


def build_config(resolved: dict[str, dict[str, Any]]) -> RunConfig:
    """Assemble and validate a RunConfig from resolved key values."""
    model = resolved["model"]
    abm = resolved["abm"]
    greed = _build_greed(model)

    growth_rate = model["growth_rate"]
    ec, ed = model["ec"], model["ed"]
    raw_given = abm["e_c"] is not None or abm["e_d"] is not None
    if raw_given:
        if ec is not None or ed is not None:
            raise ConfigError(
                "give either model.ec/model.ed or abm.e_c/abm.e_d, not both"
            )
        if abm["e_c"] is None or abm["e_d"] is None:
            raise ConfigError("abm.e_c and abm.e_d must be given together")
        try:
            ec, ed = normalized_extraction(
                abm["n_players"], abm["e_c"], abm["e_d"], growth_rate
            )
        except ValueError as exc:
            raise ConfigError(f"abm: {exc}") from exc
    if ec is None or ed is None:
        raise ConfigError("model.ec and model.ed are required")

    try:
        spec = ModelSpec(growth_rate, ec, ed, greed)
    except ValueError as exc:
        raise ConfigError(f"model: {exc}") from exc

    try:
        integrator = IntegratorOptions(**resolved["integrator"])
    except ValueError as exc:
        raise ConfigError(f"integrator: {exc}") from exc

    network_name = abm["network"]
    if network_name not in NETWORKS:
        raise ConfigError(
            f"abm.network must be one of {', '.join(NETWORKS)}; got {network_name!r}"
        )
    try:
        network = NetworkSpec(
            NETWORKS[network_name],
            ba_m=abm["ba_m"],
            sw_k=abm["sw_k"],
            sw_beta=abm["sw_beta"],
        )
        abm_config = AbmConfig(
            n_players=abm["n_players"],
            network=network,
            seed=abm["seed"],
            t_end=abm["t_end"],
            initial=SystemState(abm["r0"], abm["x0"]),
        )
    except ValueError as exc:
        raise ConfigError(f"abm: {exc}") from exc

    sweep = resolved["sweep"]
    try:
        grid = GridSpec(
            sweep["r0_points"],
            sweep["x0_points"],
            (sweep["r0_min"], sweep["r0_max"]),
            (sweep["x0_min"], sweep["x0_max"]),
        )
    except ValueError as exc:
        raise ConfigError(f"sweep: {exc}") from exc
    if sweep["realizations"] < 1:
        raise ConfigError("sweep.realizations must be at least 1")

    output = resolved["output"]
    if output["format"] != "csv":
        raise ConfigError(f"output.format supports only 'csv', got {output['format']!r}")
    out_dir = output["directory"]
    if out_dir is None:
        out_dir = os.environ.get(OUT_DIR_ENV, "out")

    echo = {section: dict(values) for section, values in resolved.items()}
    echo["model"]["ec"] = ec
    echo["model"]["ed"] = ed
    # raw rates, if given, are consumed into the normalized ones above;
    # dropping them keeps the echoed config re-parseable as-is
    echo["abm"]["e_c"] = None
    echo["abm"]["e_d"] = None
    echo["output"]["directory"] = out_dir

    return RunConfig(
        model=spec,
        integrator=integrator,
        abm=abm_config,
        grid=grid,
        realizations=sweep["realizations"],
        map_ec_points=sweep["map_ec_points"],
        map_ed_points=sweep["map_ed_points"],
        map_ec_range=(sweep["map_ec_min"], sweep["map_ec_max"]),
        map_ed_range=(sweep["map_ed_min"], sweep["map_ed_max"]),
        out_dir=out_dir,
        out_format=output["format"],
        name=output["name"],
        resolved=echo,
    )


def parse_config(text: str) -> RunConfig:
    """Parse and fully validate configuration text."""
    return build_config(_resolve(_parse_raw(text)))


def serialize_config(config: RunConfig) -> str:
    """Write a RunConfig back to configuration text (round-trips exactly)."""
    parser = configparser.ConfigParser(interpolation=None)
    for section, values in config.resolved.items():
        parser[section] = {}
        for key, value in values.items():
            if value is None:
                continue
            if isinstance(value, float):
                parser[section][key] = f"{value:.17g}"
            else:
                parser[section][key] = str(value)
    buf = io.StringIO()
    parser.write(buf)
    return buf.getvalue()
