# -*- coding: utf-8 -*-
"""Mixed-traffic platoon toolkit - planning and simulation of CAV-led platoons."""

# Import formation components
from .formation import Config as FormationConfig
from .formation import FormationStudy

# Import shared components
from .shared import OutputSink, PlatoonToolkitError

__version__ = "1.0.0"
__all__ = [
    # Shared components
    "OutputSink",
    "PlatoonToolkitError",
    # Formation components
    "FormationStudy",
    "FormationConfig",
]
