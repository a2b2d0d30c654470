# -*- coding: utf-8 -*-
"""Shared fixtures for platoon formation tests."""
import pytest

from mixed_platoon.formation.model import ScenarioConfig
from mixed_platoon.formation.scenario import bundled_scenario_path, load_scenario
from mixed_platoon.formation.study import FormationStudy


@pytest.fixture(scope="session")
def baseline_scenario() -> ScenarioConfig:
    """The bundled three-vehicle scenario."""
    return load_scenario(bundled_scenario_path())


@pytest.fixture(scope="session")
def baseline_result(baseline_scenario):
    """One planned and simulated run of the bundled scenario."""
    return FormationStudy().simulate(baseline_scenario)
