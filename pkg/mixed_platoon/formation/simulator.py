# -*- coding: utf-8 -*-
"""Fixed-step fleet simulation.

Each step evaluates every vehicle's raw acceleration (the CAV's schedule while
it is in the control zone, the delayed car-following law otherwise), clamps it
to ``[u_min, u_max]``, then integrates semi-implicitly: speed first, clamped to
``[v_min, v_max]``, then position with the new speed. When the speed clamp
binds, the recorded acceleration is the one actually realized.

The CAV's schedule is sampled at the step midpoint so a transition of
``tau_t`` seconds brakes for exactly ``round(tau_t / dt)`` steps.
"""

import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import List, Optional, Tuple

import numpy as np
import pandas as pd

from .controller import ControlPlan, control_at
from .exceptions import CollisionError, ZoneExitError
from .hdv import NO_PREDECESSOR, DelayHistory, ovm_accel
from .model import (
    FleetSnapshot,
    ScenarioConfig,
    VehicleParams,
    VehicleState,
    make_steady_state_fleet,
)

logger = logging.getLogger(__name__)

TRAJECTORY_COLUMNS = [
    "t",
    "vehicle_id",
    "kind",
    "p",
    "v",
    "u",
    "s_i",
    "delta_i",
    "headway",
    "phase",
]

_TIME_EPS = 1e-9


class Phase(str, Enum):
    """Maneuver phase of a simulation instant."""

    PRE_CONTROL = "PreControl"
    TRANSITION = "Transition"
    STABILIZATION = "Stabilization"
    POST_ZONE = "PostZone"


def fleet_geometry(
    positions: np.ndarray, speeds: np.ndarray, rho: np.ndarray, lengths: np.ndarray, s0: float
) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Dynamic spacings, platoon gaps and headways for one or many instants.

    Works on ``(N,)`` or ``(K, N)`` arrays. The CAV column of the gaps is
    ``+inf`` (no predecessor); its headway is NaN.
    """
    spacing = rho * speeds + s0
    headways = np.full(positions.shape, np.nan)
    headways[..., 1:] = positions[..., :-1] - positions[..., 1:]
    gaps = np.full(positions.shape, NO_PREDECESSOR)
    gaps[..., 1:] = headways[..., 1:] - lengths[1:] - spacing[..., 1:]
    return spacing, gaps, headways


@dataclass
class SimState:
    """Mutable state of one simulation run.

    ``step`` advances it in place; a SimState is never shared between runs.
    """

    config: ScenarioConfig
    plan: ControlPlan
    start_time: float
    positions: np.ndarray
    speeds: np.ndarray
    accels: np.ndarray
    spacing: np.ndarray
    gaps: np.ndarray
    headways: np.ndarray
    histories: List[DelayHistory]
    phase: Phase
    step_index: int = 0
    exited_zone: bool = False
    params: List[VehicleParams] = field(default_factory=list)
    rho: np.ndarray = field(default_factory=lambda: np.zeros(0))
    lengths: np.ndarray = field(default_factory=lambda: np.zeros(0))

    @property
    def time(self) -> float:
        return self.start_time + self.step_index * self.config.dt

    @property
    def snapshot(self) -> FleetSnapshot:
        return FleetSnapshot(
            time=self.time,
            states=tuple(
                VehicleState(float(p), float(v), float(u))
                for p, v, u in zip(self.positions, self.speeds, self.accels)
            ),
        )

    @classmethod
    def initial(
        cls, config: ScenarioConfig, control_plan: ControlPlan, lead_in: float = 0.0
    ) -> "SimState":
        """Steady-state fleet, optionally rolled back ``lead_in`` seconds before t_c."""
        entry = make_steady_state_fleet(config)
        dt = config.dt
        lead_steps = int(round(lead_in / dt))
        if lead_steps < 0:
            raise ValueError("lead_in must be non-negative")
        start_time = config.t_c - lead_steps * dt

        params = config.params
        rho = np.array([p.rho for p in params], dtype=float)
        lengths = np.array([p.length for p in params], dtype=float)
        speeds = np.array([s.speed for s in entry.states], dtype=float)
        positions = np.array([s.position for s in entry.states], dtype=float)
        positions = positions - speeds * (lead_steps * dt)
        spacing, gaps, headways = fleet_geometry(positions, speeds, rho, lengths, config.road.s0)

        histories = [
            DelayHistory.prefilled(
                start_time, dt, config.eta_bar, float(gaps[i]), float(spacing[i]), float(speeds[i])
            )
            for i in range(len(params))
        ]
        sim = cls(
            config=config,
            plan=control_plan,
            start_time=start_time,
            positions=positions,
            speeds=speeds,
            accels=np.zeros(len(params)),
            spacing=spacing,
            gaps=gaps,
            headways=headways,
            histories=histories,
            phase=Phase.TRANSITION,
            params=params,
            rho=rho,
            lengths=lengths,
        )
        sim.phase = _phase_of(sim)
        return sim


def _phase_of(sim: SimState) -> Phase:
    t = sim.time
    if t < sim.plan.t_c - _TIME_EPS:
        return Phase.PRE_CONTROL
    if sim.exited_zone:
        return Phase.POST_ZONE
    if t <= sim.plan.t_s + _TIME_EPS:
        return Phase.TRANSITION
    return Phase.STABILIZATION


def step(sim: SimState, dt: Optional[float] = None) -> SimState:
    """Advance the simulation by one step in place and return it.

    Raises CollisionError when a bumper gap closes and ZoneExitError when the
    CAV leaves the control zone before its transition ends.
    """
    config = sim.config
    if dt is not None and abs(dt - config.dt) > _TIME_EPS:
        raise ValueError(f"step size {dt} differs from the scenario dt {config.dt}")
    dt = config.dt
    road = config.road
    t = sim.time
    t_mid = t + 0.5 * dt

    raw = np.empty(len(sim.params))
    cav_u = None
    if not sim.exited_zone and t_mid >= sim.plan.t_c:
        cav_u = control_at(sim.plan, t_mid)
    if cav_u is None:
        raw[0] = ovm_accel(sim.histories[0], t, sim.params[0], road.v_max, config.gap_scale)
    else:
        raw[0] = cav_u
    for i in range(1, len(sim.params)):
        raw[i] = ovm_accel(sim.histories[i], t, sim.params[i], road.v_max, config.gap_scale)

    accels = np.clip(raw, road.u_min, road.u_max)
    unclamped = sim.speeds + accels * dt
    speeds = np.clip(unclamped, road.v_min, road.v_max)
    clamped = speeds != unclamped
    if clamped.any():
        accels = np.where(clamped, (speeds - sim.speeds) / dt, accels)
    positions = sim.positions + speeds * dt

    sim.step_index += 1
    now = sim.time
    spacing, gaps, headways = fleet_geometry(positions, speeds, sim.rho, sim.lengths, road.s0)
    bumper = headways[1:] - sim.lengths[1:]
    if (bumper <= 0).any():
        follower = int(np.argmax(bumper <= 0))
        raise CollisionError(now, follower + 2, float(bumper[follower]))

    for i, history in enumerate(sim.histories):
        history.record_sample(now, float(gaps[i]), float(spacing[i]), float(speeds[i]))

    sim.positions = positions
    sim.speeds = speeds
    sim.accels = accels
    sim.spacing = spacing
    sim.gaps = gaps
    sim.headways = headways

    if not sim.exited_zone and positions[0] > road.control_length:
        if now < sim.plan.t_s - _TIME_EPS:
            raise ZoneExitError(
                f"CAV left the control zone at t={now:.3f} s before the transition ended "
                f"at t_s={sim.plan.t_s:.3f} s"
            )
        logger.debug("CAV left the control zone at t=%.3f s", now)
        sim.exited_zone = True
    sim.phase = _phase_of(sim)
    return sim


@dataclass
class Trajectory:
    """Time-indexed fleet history with derived spacing series.

    Array shapes are ``(K,)`` for ``times`` and ``phases`` and ``(K, N)`` for
    everything else. CAV columns of ``spacings``, ``gaps`` and ``headways`` are
    NaN.
    """

    config: ScenarioConfig
    plan: Optional[ControlPlan]
    times: np.ndarray
    positions: np.ndarray
    speeds: np.ndarray
    accels: np.ndarray
    spacings: np.ndarray
    gaps: np.ndarray
    headways: np.ndarray
    phases: np.ndarray

    @classmethod
    def from_states(
        cls,
        config: ScenarioConfig,
        times: np.ndarray,
        positions: np.ndarray,
        speeds: np.ndarray,
        accels: Optional[np.ndarray] = None,
        plan: Optional[ControlPlan] = None,
        phases: Optional[np.ndarray] = None,
    ) -> "Trajectory":
        """Build a trajectory from raw state arrays, deriving gaps and headways."""
        times = np.asarray(times, dtype=float)
        positions = np.asarray(positions, dtype=float)
        speeds = np.asarray(speeds, dtype=float)
        accels = np.zeros_like(speeds) if accels is None else np.asarray(accels, dtype=float)
        params = config.params
        rho = np.array([p.rho for p in params], dtype=float)
        lengths = np.array([p.length for p in params], dtype=float)
        spacings, gaps, headways = fleet_geometry(positions, speeds, rho, lengths, config.road.s0)
        spacings[:, 0] = np.nan
        gaps[:, 0] = np.nan
        if phases is None:
            phases = np.full(len(times), Phase.TRANSITION.value, dtype=object)
        return cls(config, plan, times, positions, speeds, accels, spacings, gaps, headways,
                   np.asarray(phases, dtype=object))

    @property
    def n_steps(self) -> int:
        return len(self.times)

    @property
    def n_vehicles(self) -> int:
        return self.positions.shape[1]

    @property
    def dt(self) -> float:
        return self.config.dt

    @property
    def start(self) -> float:
        return float(self.times[0])

    @property
    def end(self) -> float:
        return float(self.times[-1])

    def index_at(self, t: float) -> int:
        """Row index of the sample nearest to ``t``."""
        index = int(round((t - self.start) / self.dt))
        if index < 0 or index >= self.n_steps:
            raise ValueError(f"t={t} is outside the trajectory [{self.start}, {self.end}]")
        return index

    def snapshot(self, index: int) -> FleetSnapshot:
        return FleetSnapshot(
            time=float(self.times[index]),
            states=tuple(
                VehicleState(float(p), float(v), float(u))
                for p, v, u in zip(self.positions[index], self.speeds[index], self.accels[index])
            ),
        )

    def to_frame(self) -> pd.DataFrame:
        """Long-format table with one row per vehicle per step."""
        k, n = self.positions.shape
        kinds = [params.kind.value for params in self.config.params]
        frame = pd.DataFrame(
            {
                "t": np.repeat(self.times, n),
                "vehicle_id": np.tile(np.arange(1, n + 1), k),
                "kind": np.tile(np.array(kinds, dtype=object), k),
                "p": self.positions.ravel(),
                "v": self.speeds.ravel(),
                "u": self.accels.ravel(),
                "s_i": self.spacings.ravel(),
                "delta_i": self.gaps.ravel(),
                "headway": self.headways.ravel(),
                "phase": np.repeat(self.phases, n),
            }
        )
        return frame[TRAJECTORY_COLUMNS]


def run(
    config: ScenarioConfig,
    control_plan: ControlPlan,
    horizon: Optional[float] = None,
    lead_in: float = 0.0,
) -> Trajectory:
    """Simulate from control-zone entry (or ``lead_in`` seconds earlier) to ``horizon``.

    ``horizon`` defaults to the planned formation time plus the scenario's
    ``settle_time``. Collision and zone-exit errors propagate.
    """
    if horizon is None:
        horizon = control_plan.t_p + config.settle_time
    if horizon < control_plan.t_p + config.tolerances.dwell:
        logger.warning(
            "Horizon %.3f s ends before t_p + dwell (%.3f s); formation may not be detectable",
            horizon,
            control_plan.t_p + config.tolerances.dwell,
        )

    sim = SimState.initial(config, control_plan, lead_in)
    n_steps = int(round((horizon - sim.start_time) / config.dt))
    if n_steps < 0:
        raise ValueError(f"horizon {horizon} precedes the simulation start {sim.start_time}")
    rows = n_steps + 1
    n = len(sim.params)
    times = sim.start_time + np.arange(rows) * config.dt
    positions = np.empty((rows, n))
    speeds = np.empty((rows, n))
    accels = np.empty((rows, n))
    spacings = np.empty((rows, n))
    gaps = np.empty((rows, n))
    headways = np.empty((rows, n))
    phases = np.empty(rows, dtype=object)

    def record(k: int) -> None:
        positions[k] = sim.positions
        speeds[k] = sim.speeds
        accels[k] = sim.accels
        spacings[k] = sim.spacing
        gaps[k] = sim.gaps
        headways[k] = sim.headways
        phases[k] = sim.phase.value

    logger.debug("Simulating %d steps of %.4f s for %s", n_steps, config.dt, config.name)
    record(0)
    for k in range(1, rows):
        step(sim)
        record(k)

    spacings[:, 0] = np.nan
    gaps[:, 0] = np.nan
    return Trajectory(config, control_plan, times, positions, speeds, accels, spacings, gaps,
                      headways, phases)
