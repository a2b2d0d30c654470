# -*- coding: utf-8 -*-
"""Custom exceptions for the platoon formation tool."""

from typing import Optional

from ..shared.exceptions import PlatoonToolkitError


class FormationError(PlatoonToolkitError):
    """Base exception for the platoon formation tool."""


class ConfigurationError(FormationError):
    """Raised when runtime configuration is invalid."""


class ScenarioError(FormationError):
    """Raised when a scenario is invalid or cannot be parsed."""

    def __init__(self, message: str, field: Optional[str] = None, line: Optional[int] = None):
        self.field = field
        self.line = line
        location = []
        if field:
            location.append(f"field {field}")
        if line is not None:
            location.append(f"line {line}")
        suffix = f" ({', '.join(location)})" if location else ""
        super().__init__(f"{message}{suffix}")


class FleetOrderError(ScenarioError):
    """Raised when vehicles overlap or are not ordered front to back."""


class AlreadyPlatoonedError(ScenarioError):
    """Raised when no HDV has a positive platoon gap at control-zone entry."""


class InfeasibleError(FormationError):
    """Raised when a transition duration cannot be realized under the constraints."""

    def __init__(self, message: str, binding: Optional[str] = None):
        self.binding = binding
        super().__init__(message)


class HistoryError(FormationError):
    """Raised when a delay history is appended out of order or read beyond its span."""


class CollisionError(FormationError):
    """Raised when a bumper-to-bumper gap closes during a simulation."""

    def __init__(self, time: float, vehicle_id: int, gap: float):
        self.time = time
        self.vehicle_id = vehicle_id
        self.gap = gap
        super().__init__(
            f"Collision at t={time:.4f}s: vehicle {vehicle_id} bumper gap {gap:.4f}m"
        )


class ZoneExitError(FormationError):
    """Raised when the CAV leaves the control zone before the transition ends."""
