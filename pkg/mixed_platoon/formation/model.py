# -*- coding: utf-8 -*-
"""Domain types and the spacing/gap algebra shared by the formation modules.

Positions are front-bumper coordinates in meters measured from the control-zone
entry line, so ``p = 0`` is the entry and ``p = L_c`` the end of the zone.
Vehicle index 0 in every sequence is the lead CAV; indices 1..N-1 are HDVs.
User-facing vehicle ids are 1-based.
"""

import logging
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import List, Optional, Sequence, Tuple

from .exceptions import AlreadyPlatoonedError, FleetOrderError, ScenarioError

logger = logging.getLogger(__name__)


class VehicleKind(str, Enum):
    """Vehicle role in the fleet."""

    CAV = "CAV"
    HDV = "HDV"


@dataclass(frozen=True)
class VehicleState:
    """Position, speed and acceleration of one vehicle at one instant."""

    position: float
    speed: float
    accel: float = 0.0


@dataclass(frozen=True)
class VehicleParams:
    """Car-following parameters of one vehicle.

    ``rho`` is the desired time gap, ``alpha`` the driver sensitivity and ``eta``
    the perception delay. The CAV carries them too: it follows the same law once
    it leaves the control zone.
    """

    kind: VehicleKind
    rho: float = 1.0
    alpha: float = 1.5
    eta: float = 0.5
    length: float = 5.0

    def validate(self, eta_bar: float, label: str = "vehicle") -> None:
        """Check parameter ranges, naming the offending field."""
        if self.rho <= 0:
            raise ScenarioError("rho must be positive", field=f"{label}.rho")
        if self.alpha <= 0:
            raise ScenarioError("alpha must be positive", field=f"{label}.alpha")
        if self.eta < 0:
            raise ScenarioError("eta must be non-negative", field=f"{label}.eta")
        if self.eta > eta_bar:
            raise ScenarioError(
                f"eta {self.eta} exceeds the delay bound eta_bar {eta_bar}", field=f"{label}.eta"
            )
        if self.length <= 0:
            raise ScenarioError("length must be positive", field=f"{label}.length")


@dataclass(frozen=True)
class RoadConfig:
    """Road geometry and the state/control bounds every vehicle obeys."""

    buffer_length: float = 300.0
    control_length: float = 1500.0
    v_min: float = 10.0
    v_max: float = 30.0
    u_min: float = -3.0
    u_max: float = 3.0
    s0: float = 2.0

    def validate(self) -> None:
        """Check geometry and bounds."""
        if self.buffer_length < 0:
            raise ScenarioError("buffer_length must be non-negative", field="road.buffer_length")
        if self.control_length <= 0:
            raise ScenarioError("control_length must be positive", field="road.control_length")
        if self.v_min <= 0:
            raise ScenarioError("v_min must be positive", field="road.v_min")
        if self.v_min >= self.v_max:
            raise ScenarioError("v_min must be below v_max", field="road.v_min")
        if self.u_min >= 0:
            raise ScenarioError("u_min must be negative", field="road.u_min")
        if self.u_max <= 0:
            raise ScenarioError("u_max must be positive", field="road.u_max")
        if self.s0 <= 0:
            raise ScenarioError("s0 must be positive", field="road.s0")


@dataclass(frozen=True)
class FormationTolerances:
    """Thresholds turning the exact steady-state conditions into discrete tests."""

    eps_v: float = 0.1
    eps_delta: float = 0.1
    dwell: float = 2.0

    def validate(self) -> None:
        for name in ("eps_v", "eps_delta", "dwell"):
            if getattr(self, name) <= 0:
                raise ScenarioError(f"{name} must be positive", field=f"tolerances.{name}")


Vehicle = Tuple[VehicleParams, VehicleState]


@dataclass(frozen=True)
class ScenarioConfig:
    """Everything needed to plan and simulate one formation maneuver."""

    road: RoadConfig
    vehicles: Tuple[Vehicle, ...]
    t_c: float = 0.0
    t_p: Optional[float] = None
    tau_r: float = 4.0
    eta_bar: float = 1.0
    dt: float = 0.01
    settle_time: float = 35.0
    gap_scale: float = 1.0
    fluctuation_threshold: float = 20.0
    tolerances: FormationTolerances = field(default_factory=FormationTolerances)
    name: str = "scenario"

    @property
    def n_vehicles(self) -> int:
        return len(self.vehicles)

    @property
    def params(self) -> List[VehicleParams]:
        return [params for params, _ in self.vehicles]

    @property
    def states(self) -> List[VehicleState]:
        return [state for _, state in self.vehicles]

    def with_vehicles(self, vehicles: Sequence[Vehicle]) -> "ScenarioConfig":
        """Return a copy with a different fleet."""
        return replace(self, vehicles=tuple(vehicles))

    def validate(self) -> None:
        """Check every structural invariant of the scenario.

        Raises ScenarioError (or FleetOrderError for ordering problems). Soft
        issues such as heterogeneous vehicle lengths are logged as warnings.
        """
        self.road.validate()
        self.tolerances.validate()
        if self.dt <= 0:
            raise ScenarioError("dt must be positive", field="solver.dt")
        if self.tau_r <= 0:
            raise ScenarioError("tau_r must be positive", field="solver.tau_r")
        if self.eta_bar < 0:
            raise ScenarioError("eta_bar must be non-negative", field="solver.eta_bar")
        if self.gap_scale <= 0:
            raise ScenarioError("gap_scale must be positive", field="solver.gap_scale")
        if self.settle_time < 0:
            raise ScenarioError("settle_time must be non-negative", field="solver.settle_time")
        if self.t_p is not None and self.t_p <= self.t_c:
            raise ScenarioError("t_p must be later than t_c", field="solver.t_p")
        if self.n_vehicles < 2:
            raise ScenarioError("a scenario needs a CAV and at least one HDV", field="vehicles")

        for index, (params, _) in enumerate(self.vehicles):
            label = f"vehicles[{index + 1}]"
            expected = VehicleKind.CAV if index == 0 else VehicleKind.HDV
            if params.kind != expected:
                raise ScenarioError(
                    f"vehicle {index + 1} must be a {expected.value}", field=f"{label}.kind"
                )
            params.validate(self.eta_bar, label)

        for index in range(1, self.n_vehicles):
            pred_state = self.vehicles[index - 1][1]
            params, state = self.vehicles[index]
            bumper_gap = pred_state.position - state.position - params.length
            if bumper_gap <= 0:
                raise FleetOrderError(
                    f"vehicle {index + 1} overlaps or is ahead of vehicle {index} "
                    f"(bumper gap {bumper_gap:.3f} m)",
                    field=f"vehicles[{index + 1}].position",
                )

        lengths = {params.length for params in self.params}
        if len(lengths) > 1:
            logger.warning("Heterogeneous vehicle lengths %s; gaps use each follower's length",
                           sorted(lengths))
        band = self.road.v_max - self.road.v_min
        if band > self.fluctuation_threshold:
            logger.warning(
                "Speed band v_max - v_min = %.3f m/s exceeds the fluctuation threshold %.3f m/s; "
                "the HDV platoon may not be locally stable",
                band,
                self.fluctuation_threshold,
            )


@dataclass(frozen=True)
class FleetSnapshot:
    """States of the whole fleet at one instant, index-aligned with the scenario."""

    time: float
    states: Tuple[VehicleState, ...]


def dynamic_spacing(v: float, params: VehicleParams, s0: float) -> float:
    """Desired speed-dependent spacing ``rho * v + s0``."""
    return params.rho * v + s0


def platoon_gap(
    pred: VehicleState, state: VehicleState, params: VehicleParams, s0: float
) -> float:
    """Bumper gap left after the follower's dynamic spacing.

    Positive values mean the follower is decoupled (free flow); zero or negative
    means it is following its predecessor.
    """
    if pred.position <= state.position:
        raise FleetOrderError(
            f"predecessor at {pred.position} m is not ahead of follower at {state.position} m"
        )
    return pred.position - state.position - dynamic_spacing(state.speed, params, s0) - params.length


def platoon_gaps(snapshot: FleetSnapshot, config: ScenarioConfig) -> List[float]:
    """Platoon gap of every HDV, front to back."""
    s0 = config.road.s0
    return [
        platoon_gap(snapshot.states[i - 1], snapshot.states[i], config.vehicles[i][0], s0)
        for i in range(1, len(snapshot.states))
    ]


def cumulative_gap(snapshot: FleetSnapshot, config: ScenarioConfig) -> float:
    """Lead-to-tail distance minus all followers' dynamic spacings and lengths."""
    states = snapshot.states
    if len(states) < 2:
        raise ScenarioError("cumulative gap needs at least two vehicles")
    required = sum(
        dynamic_spacing(states[j].speed, config.vehicles[j][0], config.road.s0)
        + config.vehicles[j][0].length
        for j in range(1, len(states))
    )
    return states[0].position - states[-1].position - required


def make_steady_state_fleet(config: ScenarioConfig) -> FleetSnapshot:
    """Build the control-zone entry state: everyone cruising at v_max.

    Raises AlreadyPlatoonedError when no HDV has a positive platoon gap, since
    there is nothing to form.
    """
    config.validate()
    v_max = config.road.v_max
    snapshot = FleetSnapshot(
        time=config.t_c,
        states=tuple(VehicleState(state.position, v_max, 0.0) for state in config.states),
    )
    gaps = platoon_gaps(snapshot, config)
    if all(gap <= 0 for gap in gaps):
        raise AlreadyPlatoonedError(
            "already platooned: no HDV with positive platoon gap at control-zone entry",
            field="vehicles",
        )
    logger.debug("Steady-state fleet at t=%s with gaps %s", config.t_c, gaps)
    return snapshot


def positions_from_gaps(
    lead_position: float,
    params: Sequence[VehicleParams],
    gaps: Sequence[float],
    speed: float,
    s0: float,
) -> List[float]:
    """Place followers behind a lead so each has the requested platoon gap at ``speed``."""
    if len(gaps) != len(params) - 1:
        raise ValueError("need one gap per follower")
    positions = [lead_position]
    for follower, gap in zip(params[1:], gaps):
        positions.append(
            positions[-1] - follower.length - dynamic_spacing(speed, follower, s0) - gap
        )
    return positions
