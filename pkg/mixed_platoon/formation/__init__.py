# -*- coding: utf-8 -*-
"""Platoon formation - CAV-led platoon formation in mixed traffic."""

from ..shared import OutputSink
from .config import Config
from .controller import ControlPlan, control_at, plan
from .exceptions import (
    AlreadyPlatoonedError,
    CollisionError,
    ConfigurationError,
    FormationError,
    InfeasibleError,
    ScenarioError,
)
from .formatters import OutputFormatter, RunSummary
from .metrics import FormationReport, NotReached, detect_formation
from .model import ScenarioConfig, make_steady_state_fleet
from .scenario import bundled_scenario_path, load_scenario
from .simulator import Trajectory, run
from .study import FormationStudy
from .version import __version__

__all__ = [
    "FormationStudy",
    "Config",
    "ScenarioConfig",
    "ControlPlan",
    "Trajectory",
    "FormationReport",
    "NotReached",
    "RunSummary",
    "OutputFormatter",
    "OutputSink",
    "FormationError",
    "ConfigurationError",
    "ScenarioError",
    "AlreadyPlatoonedError",
    "InfeasibleError",
    "CollisionError",
    "load_scenario",
    "bundled_scenario_path",
    "make_steady_state_fleet",
    "plan",
    "control_at",
    "run",
    "detect_formation",
    "__version__",
]
