# -*- coding: utf-8 -*-
"""Scenario files: loading, validation and writing.

A scenario is a YAML document with flat sections::

    name: n3_baseline
    road:        {buffer_length, control_length, v_min, v_max, u_min, u_max, s0}
    solver:      {t_c, t_p, tau_r, eta_bar, dt, settle_time, gap_scale,
                  fluctuation_threshold}
    tolerances:  {eps_v, eps_delta, dwell}
    vehicles:    [{kind, position, rho, alpha, eta, length}, ...]

Only ``vehicles`` (with ``kind`` and ``position`` per entry) is required; every
other key falls back to its documented default. Unknown keys are rejected.
"""

import logging
import os
from dataclasses import asdict, fields
from typing import Any, Dict, List, Mapping, Optional

import yaml

from ..shared.utils import atomic_write_text, stable_hash
from .exceptions import ScenarioError
from .model import (
    FormationTolerances,
    RoadConfig,
    ScenarioConfig,
    VehicleKind,
    VehicleParams,
    VehicleState,
    make_steady_state_fleet,
)

logger = logging.getLogger(__name__)

SCENARIO_DIR = os.path.join(os.path.dirname(__file__), "scenarios")

_SOLVER_KEYS = (
    "t_c",
    "t_p",
    "tau_r",
    "eta_bar",
    "dt",
    "settle_time",
    "gap_scale",
    "fluctuation_threshold",
)
_VEHICLE_KEYS = ("kind", "position", "rho", "alpha", "eta", "length")
_TOP_KEYS = ("name", "road", "solver", "tolerances", "vehicles")


def bundled_scenario_path(name: str = "n3_baseline") -> str:
    """Path of a scenario shipped with the package."""
    return os.path.join(SCENARIO_DIR, f"{name}.yaml")


def _key_lines(node: Optional[yaml.Node], prefix: str = "", lines: Optional[Dict] = None) -> Dict:
    """Map dotted key paths (``road.v_min``, ``vehicles[2].rho``) to 1-based lines."""
    lines = {} if lines is None else lines
    if isinstance(node, yaml.MappingNode):
        for key_node, value_node in node.value:
            path = f"{prefix}.{key_node.value}" if prefix else str(key_node.value)
            lines[path] = key_node.start_mark.line + 1
            _key_lines(value_node, path, lines)
    elif isinstance(node, yaml.SequenceNode):
        for index, item in enumerate(node.value):
            path = f"{prefix}[{index + 1}]"
            lines[path] = item.start_mark.line + 1
            _key_lines(item, path, lines)
    return lines


class _SectionReader:
    """Typed access to one mapping section with field/line diagnostics."""

    def __init__(self, data: Any, path: str, allowed: tuple, lines: Dict[str, int]):
        self.path = path
        self.lines = lines
        if data is None:
            data = {}
        if not isinstance(data, Mapping):
            raise ScenarioError("expected a mapping", field=path, line=lines.get(path))
        unknown = [key for key in data if key not in allowed]
        if unknown:
            key_path = self._join(str(unknown[0]))
            raise ScenarioError(
                f"unknown key {unknown[0]!r}; allowed keys: {', '.join(allowed)}",
                field=key_path,
                line=lines.get(key_path),
            )
        self.data = data

    def _join(self, key: str) -> str:
        return f"{self.path}.{key}" if self.path else key

    def number(self, key: str, default: Optional[float] = None) -> Optional[float]:
        if key not in self.data:
            return default
        value = self.data[key]
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            path = self._join(key)
            raise ScenarioError(f"expected a number, got {value!r}", field=path,
                                line=self.lines.get(path))
        return float(value)

    def numbers(self, keys: tuple, defaults: Any) -> Dict[str, float]:
        return {key: self.number(key, getattr(defaults, key)) for key in keys}


def scenario_from_dict(data: Any, lines: Optional[Dict[str, int]] = None) -> ScenarioConfig:
    """Build and validate a scenario from a parsed document."""
    lines = lines or {}
    top = _SectionReader(data, "", _TOP_KEYS, lines)
    road_keys = tuple(f.name for f in fields(RoadConfig))
    tolerance_keys = tuple(f.name for f in fields(FormationTolerances))

    road = RoadConfig(**_SectionReader(top.data.get("road"), "road", road_keys, lines)
                      .numbers(road_keys, RoadConfig()))
    tolerances = FormationTolerances(
        **_SectionReader(top.data.get("tolerances"), "tolerances", tolerance_keys, lines)
        .numbers(tolerance_keys, FormationTolerances())
    )
    solver = _SectionReader(top.data.get("solver"), "solver", _SOLVER_KEYS, lines)
    solver_values = {key: solver.number(key) for key in _SOLVER_KEYS if key in solver.data}

    raw_vehicles = top.data.get("vehicles")
    if not isinstance(raw_vehicles, list) or not raw_vehicles:
        raise ScenarioError("vehicles must be a non-empty list", field="vehicles",
                            line=lines.get("vehicles"))
    vehicles = []
    for index, entry in enumerate(raw_vehicles):
        path = f"vehicles[{index + 1}]"
        reader = _SectionReader(entry, path, _VEHICLE_KEYS, lines)
        kind_text = reader.data.get("kind")
        try:
            kind = VehicleKind(str(kind_text).upper())
        except ValueError as e:
            raise ScenarioError(f"kind must be CAV or HDV, got {kind_text!r}",
                                field=f"{path}.kind", line=lines.get(f"{path}.kind")) from e
        position = reader.number("position")
        if position is None:
            raise ScenarioError("position is required", field=f"{path}.position",
                                line=lines.get(path))
        defaults = VehicleParams(kind)
        params = VehicleParams(
            kind=kind,
            rho=reader.number("rho", defaults.rho),
            alpha=reader.number("alpha", defaults.alpha),
            eta=reader.number("eta", defaults.eta),
            length=reader.number("length", defaults.length),
        )
        vehicles.append((params, VehicleState(position=position, speed=road.v_max)))

    name = top.data.get("name", "scenario")
    config = ScenarioConfig(
        road=road,
        vehicles=tuple(vehicles),
        tolerances=tolerances,
        name=str(name),
        **solver_values,
    )
    make_steady_state_fleet(config)
    return config


def load_scenario(path: str) -> ScenarioConfig:
    """Read, parse and fully validate a scenario file."""
    try:
        with open(path, "r", encoding="utf-8") as handle:
            text = handle.read()
    except OSError as e:
        raise ScenarioError(f"cannot read scenario {path}: {e}") from e

    try:
        lines = _key_lines(yaml.compose(text, Loader=yaml.SafeLoader))
        data = yaml.safe_load(text)
    except yaml.YAMLError as e:
        mark = getattr(e, "problem_mark", None)
        line = mark.line + 1 if mark is not None else None
        raise ScenarioError(f"cannot parse scenario {path}: {getattr(e, 'problem', e)}",
                            line=line) from e

    config = scenario_from_dict(data, lines)
    logger.info("Loaded scenario %s with %d vehicles from %s", config.name, config.n_vehicles,
                path)
    return config


def scenario_to_dict(config: ScenarioConfig) -> Dict[str, Any]:
    """Plain-data form of a scenario, in the file grammar."""
    solver = {key: getattr(config, key) for key in _SOLVER_KEYS}
    if solver["t_p"] is None:
        del solver["t_p"]
    vehicles: List[Dict[str, Any]] = []
    for params, state in config.vehicles:
        vehicles.append(
            {
                "kind": params.kind.value,
                "position": state.position,
                "rho": params.rho,
                "alpha": params.alpha,
                "eta": params.eta,
                "length": params.length,
            }
        )
    return {
        "name": config.name,
        "road": asdict(config.road),
        "solver": solver,
        "tolerances": asdict(config.tolerances),
        "vehicles": vehicles,
    }


def dump_scenario(config: ScenarioConfig, path: str) -> str:
    """Write a scenario that ``load_scenario`` reads back unchanged."""
    text = yaml.safe_dump(scenario_to_dict(config), sort_keys=False, default_flow_style=False)
    return atomic_write_text(path, text)


def scenario_hash(config: ScenarioConfig) -> str:
    """Content hash identifying a scenario independent of file layout."""
    return stable_hash(scenario_to_dict(config))
