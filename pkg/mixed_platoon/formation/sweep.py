# -*- coding: utf-8 -*-
"""Robustness sweeps over transition duration, driver delay, time gap and sensitivity.

Every (axis value, fleet size) pair is an independent work item: the scenario
is rebuilt, planned, simulated and scored. On the delay, time-gap and
sensitivity axes the CAV still plans with the nominal stabilization duration
while the HDVs drive with the perturbed parameters.

Points whose planned cruise speed leaves some HDV a positive equilibrium gap
are recorded as ``unformable`` without being simulated: that HDV can never
couple. On the transition-duration axis this covers the long end of the
feasible interval, where ``v_eq`` exceeds ``v_max / 2``.
"""

import logging
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, replace
from enum import Enum
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from .controller import (
    BINDING_CONTROL_ZONE,
    BINDING_EQUILIBRIUM_GAP,
    FeasibilityInputs,
    cruise_gaps,
    feasible_range,
    plan,
    stabilization_duration,
)
from .exceptions import ConfigurationError, FormationError, InfeasibleError
from .metrics import NotReached, detect_formation
from .model import (
    ScenarioConfig,
    cumulative_gap,
    make_steady_state_fleet,
    positions_from_gaps,
)
from .simulator import run

logger = logging.getLogger(__name__)

DEFAULT_SAMPLES = 50
DEFAULT_FLEET_SIZES = (2, 3, 4)


class SweepAxis(str, Enum):
    """Parameter varied by a sweep."""

    TAU = "tau"
    ETA = "eta"
    RHO = "rho"
    ALPHA = "alpha"


AXIS_BOUNDS: Dict[SweepAxis, Tuple[float, float]] = {
    SweepAxis.ETA: (0.0, 1.0),
    SweepAxis.RHO: (0.5, 1.5),
    SweepAxis.ALPHA: (1.0, 2.0),
}


@dataclass(frozen=True)
class SweepSpec:
    """Definition of one sweep.

    ``value_range`` defaults to the axis bounds, or to each fleet's feasible
    interval on the transition-duration axis (where a given range is
    intersected with that interval).
    """

    base: ScenarioConfig
    axis: SweepAxis
    value_range: Optional[Tuple[float, float]] = None
    samples: int = DEFAULT_SAMPLES
    fleet_sizes: Tuple[int, ...] = DEFAULT_FLEET_SIZES
    seed: int = 0
    jitter: float = 0.0
    workers: int = 1

    def validate(self) -> None:
        if self.samples < 1:
            raise ConfigurationError("samples must be at least 1")
        if not self.fleet_sizes or any(n < 2 for n in self.fleet_sizes):
            raise ConfigurationError("fleet sizes must all be at least 2")
        if self.jitter < 0:
            raise ConfigurationError("jitter must be non-negative")
        if self.workers < 1:
            raise ConfigurationError("workers must be at least 1")
        if self.value_range is not None:
            lo, hi = self.value_range
            if lo > hi:
                raise ConfigurationError(f"empty sweep range [{lo}, {hi}]")
            if self.axis in AXIS_BOUNDS:
                bound_lo, bound_hi = AXIS_BOUNDS[self.axis]
                if lo < bound_lo or hi > bound_hi:
                    raise ConfigurationError(
                        f"{self.axis.value} range [{lo}, {hi}] outside [{bound_lo}, {bound_hi}]"
                    )
        if self.axis != SweepAxis.TAU and self.base.t_p is None:
            raise ConfigurationError(f"the {self.axis.value} axis needs t_p in the scenario")


@dataclass(frozen=True)
class SweepPoint:
    """One work item: a concrete scenario and its planned formation time."""

    axis: SweepAxis
    axis_value: float
    n_vehicles: int
    sample_index: int
    scenario: ScenarioConfig
    t_p: float


@dataclass(frozen=True)
class SweepRecord:
    """Outcome of one sweep point; ``deviation_pct`` is set iff formation was reached."""

    axis: str
    axis_value: float
    n_vehicles: int
    sample_index: int
    t_p: float
    feasible: bool
    u_p: Optional[float] = None
    t_ap: Optional[float] = None
    deviation_pct: Optional[float] = None
    binding: Optional[str] = None
    outcome: str = "formed"
    error: Optional[str] = None

    @property
    def formed(self) -> bool:
        return self.deviation_pct is not None

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


@dataclass(frozen=True)
class AxisSummary:
    """Aggregate outcome of every record on one axis."""

    axis: str
    records: int
    min_deviation_pct: Optional[float]
    max_deviation_pct: Optional[float]
    mean_deviation_pct: Optional[float]
    feasibility_fraction: float
    planned_fraction: float
    worst: Dict[str, Any]

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


def resize_fleet(base: ScenarioConfig, n_vehicles: int) -> ScenarioConfig:
    """Rebuild ``base`` with ``n_vehicles`` vehicles.

    The base cumulative gap is split equally over the new HDVs, which reuse the
    base parameters in order and clone the last HDV beyond them.
    """
    if n_vehicles < 2:
        raise ConfigurationError("a fleet needs at least two vehicles")
    if n_vehicles == base.n_vehicles:
        return base
    entry = make_steady_state_fleet(base)
    total_gap = cumulative_gap(entry, base)
    params = [
        base.vehicles[i][0] if i < base.n_vehicles else base.vehicles[-1][0]
        for i in range(n_vehicles)
    ]
    gaps = [total_gap / (n_vehicles - 1)] * (n_vehicles - 1)
    lead = base.vehicles[0][1]
    positions = positions_from_gaps(lead.position, params, gaps, base.road.v_max, base.road.s0)
    states = [replace(lead, position=p) for p in positions]
    return replace(
        base.with_vehicles(list(zip(params, states))), name=f"{base.name}-n{n_vehicles}"
    )


def _perturb(scenario: ScenarioConfig, axis: SweepAxis, value: float, rng_key: Sequence[int],
             jitter: float) -> ScenarioConfig:
    """Set the axis parameter of every HDV, drawing within ``value +/- jitter``."""
    lo, hi = AXIS_BOUNDS[axis]
    rng = np.random.default_rng(list(rng_key)) if jitter > 0 else None
    vehicles = [scenario.vehicles[0]]
    for params, state in scenario.vehicles[1:]:
        drawn = value
        if rng is not None:
            drawn = float(np.clip(rng.uniform(value - jitter, value + jitter), lo, hi))
        vehicles.append((replace(params, **{axis.value: drawn}), state))
    return scenario.with_vehicles(vehicles)


def _tau_values(spec: SweepSpec, scenario: ScenarioConfig) -> Tuple[np.ndarray, Optional[str]]:
    entry = make_steady_state_fleet(scenario)
    tau_s = stabilization_duration(scenario.eta_bar, scenario.tau_r)
    inputs = FeasibilityInputs.from_snapshot(scenario, entry, tau_s)
    try:
        rng = feasible_range(inputs, scenario.n_vehicles)
    except InfeasibleError as e:
        return np.array([]), e.binding
    lo, hi = rng.lower, rng.upper
    if spec.value_range is not None:
        lo, hi = max(lo, spec.value_range[0]), min(hi, spec.value_range[1])
    if lo > hi:
        return np.array([]), BINDING_CONTROL_ZONE
    return np.linspace(lo, hi, spec.samples), None


def build_points(spec: SweepSpec) -> Tuple[List[SweepPoint], List[SweepRecord]]:
    """Expand a spec into work items, plus records for fleets with no feasible value."""
    points: List[SweepPoint] = []
    empty: List[SweepRecord] = []
    for n in spec.fleet_sizes:
        scenario = resize_fleet(spec.base, n)
        if spec.axis == SweepAxis.TAU:
            tau_s = stabilization_duration(scenario.eta_bar, scenario.tau_r)
            values, binding = _tau_values(spec, scenario)
            if binding is not None:
                empty.append(
                    SweepRecord(spec.axis.value, float("nan"), n, 0, float("nan"), False,
                                binding=binding, outcome="infeasible",
                                error="no feasible transition duration")
                )
            for index, tau in enumerate(values):
                points.append(SweepPoint(spec.axis, float(tau), n, index, scenario,
                                         scenario.t_c + float(tau) + tau_s))
            continue

        lo, hi = spec.value_range or AXIS_BOUNDS[spec.axis]
        for index, value in enumerate(np.linspace(lo, hi, spec.samples)):
            perturbed = _perturb(scenario, spec.axis, float(value), (spec.seed, n, index),
                                 spec.jitter)
            points.append(SweepPoint(spec.axis, float(value), n, index, perturbed, spec.base.t_p))
    return points, empty


def evaluate_point(point: SweepPoint) -> SweepRecord:
    """Plan, simulate and score one point; failures are recorded, never raised."""
    common = dict(
        axis=point.axis.value,
        axis_value=point.axis_value,
        n_vehicles=point.n_vehicles,
        sample_index=point.sample_index,
        t_p=point.t_p,
    )
    try:
        entry = make_steady_state_fleet(point.scenario)
        control_plan = plan(point.scenario, entry, point.t_p)
    except InfeasibleError as e:
        return SweepRecord(feasible=False, binding=e.binding, outcome="infeasible",
                           error=str(e), **common)
    except Exception as e:
        return SweepRecord(feasible=False, outcome="invalid",
                           error=f"{type(e).__name__}: {e}", **common)

    eps_delta = point.scenario.tolerances.eps_delta
    open_gaps = [
        (i, gap) for i, gap in enumerate(cruise_gaps(point.scenario, control_plan.v_eq), start=2)
        if gap > eps_delta
    ]
    if open_gaps:
        vehicle_id, gap = open_gaps[0]
        return SweepRecord(
            feasible=True,
            u_p=control_plan.u_p,
            binding=BINDING_EQUILIBRIUM_GAP,
            outcome="unformable",
            error=f"vehicle {vehicle_id} settles at platoon gap {gap:.3f} m "
            f"when cruising at v_eq={control_plan.v_eq:.3f} m/s",
            **common,
        )

    try:
        trajectory = run(point.scenario, control_plan)
        outcome = detect_formation(trajectory, t_p=point.t_p)
    except FormationError as e:
        return SweepRecord(feasible=True, u_p=control_plan.u_p, outcome=type(e).__name__,
                           error=str(e), **common)
    except Exception as e:
        logger.error("Unexpected failure at %s: %s", common, e)
        return SweepRecord(feasible=True, u_p=control_plan.u_p, outcome="error",
                           error=f"{type(e).__name__}: {e}", **common)

    if isinstance(outcome, NotReached):
        return SweepRecord(feasible=True, u_p=control_plan.u_p,
                           outcome=f"not_reached:{outcome.reason}", **common)
    return SweepRecord(feasible=True, u_p=control_plan.u_p, t_ap=outcome.t_ap,
                       deviation_pct=outcome.deviation_pct, **common)


def run_sweep(spec: SweepSpec, output_sink=None) -> List[SweepRecord]:
    """Evaluate every point of ``spec``; order depends only on the spec."""
    spec.validate()
    points, records = build_points(spec)
    logger.info("Sweeping %s over %d points (workers=%d)", spec.axis.value, len(points),
                spec.workers)
    if output_sink is not None:
        output_sink.progress(f"Sweeping {spec.axis.value}: {len(points)} runs")

    started = time.perf_counter()
    if spec.workers > 1 and len(points) > 1:
        with ProcessPoolExecutor(max_workers=spec.workers) as pool:
            evaluated = list(pool.map(evaluate_point, points))
    else:
        evaluated = [evaluate_point(point) for point in points]
    if output_sink is not None:
        output_sink.timing(f"Sweep {spec.axis.value}", time.perf_counter() - started)

    records.extend(evaluated)
    records.sort(key=lambda r: (r.n_vehicles, r.sample_index))
    return records


def records_frame(records: Sequence[SweepRecord]) -> pd.DataFrame:
    """Sweep records as a table, one row per record."""
    return pd.DataFrame([record.to_dict() for record in records])


def aggregate(records: Sequence[SweepRecord]) -> Dict[str, AxisSummary]:
    """Per-axis deviation statistics and the worst-case record."""
    if not records:
        raise ValueError("cannot aggregate an empty record list")
    frame = records_frame(records)
    summaries: Dict[str, AxisSummary] = {}
    for axis, group in frame.groupby("axis", sort=True):
        formed = group[group["deviation_pct"].notna()]
        if formed.empty:
            worst_row = group.iloc[0]
            stats: List[Optional[float]] = [None, None, None]
        else:
            deviations = formed["deviation_pct"].astype(float)
            worst_row = formed.loc[deviations.abs().idxmax()]
            stats = [float(deviations.min()), float(deviations.max()), float(deviations.mean())]
        summaries[str(axis)] = AxisSummary(
            axis=str(axis),
            records=len(group),
            min_deviation_pct=stats[0],
            max_deviation_pct=stats[1],
            mean_deviation_pct=stats[2],
            feasibility_fraction=len(formed) / len(group),
            planned_fraction=float(group["feasible"].astype(bool).mean()),
            worst={
                "axis_value": float(worst_row["axis_value"]),
                "n_vehicles": int(worst_row["n_vehicles"]),
                "sample_index": int(worst_row["sample_index"]),
                "outcome": str(worst_row["outcome"]),
            },
        )
    return summaries
