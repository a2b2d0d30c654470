# -*- coding: utf-8 -*-
"""Closed-form CAV braking maneuver and its feasibility interval.

The CAV brakes at a constant ``u_p`` over the transition window
``[t_c, t_s]`` so the last HDV's platoon gap closes exactly at ``t_s``, then
cruises (``u = 0``) until it leaves the control zone, where it hands over to
the car-following law with no predecessor.

For two vehicles the gap closes when ``2 * delta + u_p * tau**2 = 0``. For
longer fleets the followers' spacings shrink with speed as well, giving
``2 * Delta + u_p * tau**2 - 2 * u_p * tau * C1 = 0`` with ``C1`` the sum of
the middle HDVs' time gaps.
"""

import logging
import math
from dataclasses import dataclass
from typing import List, NamedTuple, Optional, Tuple

from .exceptions import AlreadyPlatoonedError, InfeasibleError
from .hdv import equilibrium_gap
from .model import (
    FleetSnapshot,
    ScenarioConfig,
    cumulative_gap,
    dynamic_spacing,
    platoon_gap,
    platoon_gaps,
)

logger = logging.getLogger(__name__)

# Slack (seconds) accepted when tau_t sits exactly on a feasibility bound.
FEASIBILITY_TOLERANCE = 1e-9

BINDING_CONTROL_BOUND = "control_bound"
BINDING_SPEED_FLOOR = "speed_floor"
BINDING_CONTROL_ZONE = "control_zone"
BINDING_TRANSITION_TOO_SHORT = "transition_too_short"
BINDING_CUMULATIVE_GAP = "cumulative_gap"
BINDING_EQUILIBRIUM_GAP = "equilibrium_gap"


@dataclass(frozen=True)
class FeasibilityInputs:
    """Quantities the feasibility bounds depend on, all taken at ``t_c``.

    ``delta_or_Delta`` is the single platoon gap for two vehicles and the
    cumulative gap otherwise; ``rho_sum`` is zero for two vehicles.
    """

    delta_or_Delta: float
    v1_tc: float
    rho_sum: float
    L_c: float
    u_min: float
    v_min: float
    tau_s: float

    @classmethod
    def from_snapshot(
        cls, config: ScenarioConfig, snapshot: FleetSnapshot, tau_s: float
    ) -> "FeasibilityInputs":
        n = len(snapshot.states)
        if n == 2:
            gap = platoon_gap(snapshot.states[0], snapshot.states[1], config.vehicles[1][0],
                              config.road.s0)
        else:
            gap = cumulative_gap(snapshot, config)
        return cls(
            delta_or_Delta=gap,
            v1_tc=snapshot.states[0].speed,
            rho_sum=middle_rho_sum(config),
            L_c=config.road.control_length,
            u_min=config.road.u_min,
            v_min=config.road.v_min,
            tau_s=tau_s,
        )


class FeasibleRange(NamedTuple):
    """Feasible transition durations ``[lower, upper]``.

    ``lower`` is the larger of the control-bound term and the speed-floor
    term, both kept so callers can tell which one binds.
    """

    lower: float
    upper: float
    accel_bound: float
    speed_bound: float

    @property
    def is_empty(self) -> bool:
        return self.lower > self.upper

    def contains(self, tau: float, tolerance: float = FEASIBILITY_TOLERANCE) -> bool:
        return self.lower - tolerance <= tau <= self.upper + tolerance

    def binding(self, tau: float, tolerance: float = FEASIBILITY_TOLERANCE) -> Optional[str]:
        """Name of the violated bound for ``tau``, or None when feasible."""
        if tau < self.accel_bound - tolerance:
            return BINDING_CONTROL_BOUND
        if tau < self.speed_bound - tolerance:
            return BINDING_SPEED_FLOOR
        if tau > self.upper + tolerance:
            return BINDING_CONTROL_ZONE
        return None


@dataclass(frozen=True)
class ControlPlan:
    """Piecewise-constant CAV control schedule plus the metadata it was built from.

    Plans built by ``plan`` satisfy ``u_min <= u_p < 0`` and lie inside their
    feasible interval. Hand-built plans (e.g. a forced ``u_p = 0``) are accepted
    as-is by the simulator.
    """

    u_p: float
    t_c: float
    t_s: float
    t_f: float
    tau_t: float
    tau_s: float
    feasible_interval: Tuple[float, float]
    v_eq: float = math.nan
    p1_ts: float = math.nan
    n_vehicles: int = 2

    @property
    def t_p(self) -> float:
        """Planned formation time."""
        return self.t_c + self.tau_t + self.tau_s


def middle_rho_sum(config: ScenarioConfig) -> float:
    """Sum of time gaps of HDVs 2..N-1 (excludes the last vehicle)."""
    return sum(params.rho for params, _ in config.vehicles[1:-1])


def stabilization_duration(eta_bar: float, tau_r: float) -> float:
    """Time allowed for speeds to settle after the last gap closes."""
    return eta_bar + tau_r


def solve_up_two(delta2_tc: float, tau_t: float) -> float:
    """Constant braking that closes a single platoon gap in ``tau_t`` seconds."""
    if delta2_tc <= 0:
        raise AlreadyPlatoonedError("already platooned: platoon gap is not positive")
    if tau_t <= 0:
        raise InfeasibleError(
            "transition duration must be positive", binding=BINDING_TRANSITION_TOO_SHORT
        )
    return -2.0 * delta2_tc / (tau_t * tau_t)


def solve_up_multi(Delta_tc: float, tau_t: float, rho_sum: float) -> float:
    """Constant braking that closes the cumulative gap of a longer fleet."""
    if Delta_tc <= 0:
        raise AlreadyPlatoonedError("already platooned: cumulative gap is not positive")
    if tau_t <= 2.0 * rho_sum or tau_t <= 0:
        raise InfeasibleError(
            f"transition too short: tau_t={tau_t} s must exceed 2*sum(rho)={2.0 * rho_sum} s",
            binding=BINDING_TRANSITION_TOO_SHORT,
        )
    return -2.0 * Delta_tc / (tau_t * tau_t - 2.0 * tau_t * rho_sum)


def _check_inputs(inputs: FeasibilityInputs) -> None:
    if inputs.v1_tc <= inputs.v_min:
        raise InfeasibleError(
            f"lead speed {inputs.v1_tc} m/s is not above v_min {inputs.v_min} m/s",
            binding=BINDING_SPEED_FLOOR,
        )
    if inputs.delta_or_Delta <= 0:
        raise AlreadyPlatoonedError("already platooned: gap is not positive")


def feasible_range_two(inputs: FeasibilityInputs) -> FeasibleRange:
    """Feasible transition durations for a CAV and one HDV.

    An empty interval (``lower > upper``) is returned, not raised.
    """
    if inputs.rho_sum != 0:
        raise ValueError("two-vehicle bounds require rho_sum == 0")
    _check_inputs(inputs)
    delta = inputs.delta_or_Delta
    v1 = inputs.v1_tc

    accel_bound = math.sqrt(-2.0 * delta / inputs.u_min)
    speed_bound = 2.0 * delta / (v1 - inputs.v_min)

    zone_slack = inputs.L_c - v1 * inputs.tau_s
    phi1 = (delta + zone_slack) / v1
    phi2 = 2.0 * delta * inputs.tau_s / v1
    discriminant = phi1 * phi1 + 4.0 * phi2
    upper = (phi1 + math.sqrt(discriminant)) / 2.0

    return FeasibleRange(max(accel_bound, speed_bound), upper, accel_bound, speed_bound)


def feasible_range_multi(inputs: FeasibilityInputs) -> FeasibleRange:
    """Feasible transition durations for a CAV followed by several HDVs.

    With ``rho_sum == 0`` this reproduces ``feasible_range_two`` exactly.
    """
    _check_inputs(inputs)
    Delta = inputs.delta_or_Delta
    v1 = inputs.v1_tc
    c1 = inputs.rho_sum

    accel_bound = c1 + math.sqrt(c1 * c1 - 2.0 * Delta / inputs.u_min)
    speed_bound = 2.0 * c1 + 2.0 * Delta / (v1 - inputs.v_min)

    c2 = inputs.L_c - v1 * inputs.tau_s
    phi3 = (2.0 * c1 * v1 + Delta + c2) / v1
    phi4 = (2.0 * Delta * inputs.tau_s - 2.0 * c1 * c2) / v1
    discriminant = phi3 * phi3 + 4.0 * phi4
    if discriminant < 0:
        raise InfeasibleError(
            "no real upper bound on the transition duration: the control zone is too short",
            binding=BINDING_CONTROL_ZONE,
        )
    upper = (phi3 + math.sqrt(discriminant)) / 2.0

    return FeasibleRange(max(accel_bound, speed_bound), upper, accel_bound, speed_bound)


def feasible_range(inputs: FeasibilityInputs, n_vehicles: int) -> FeasibleRange:
    """Dispatch to the two-vehicle or multi-vehicle bounds."""
    if n_vehicles == 2:
        return feasible_range_two(inputs)
    return feasible_range_multi(inputs)


def solve_up(inputs: FeasibilityInputs, tau_t: float, n_vehicles: int) -> float:
    """Dispatch to the two-vehicle or multi-vehicle braking solution."""
    if n_vehicles == 2:
        return solve_up_two(inputs.delta_or_Delta, tau_t)
    return solve_up_multi(inputs.delta_or_Delta, tau_t, inputs.rho_sum)


def plan(config: ScenarioConfig, snapshot: FleetSnapshot, t_p: float) -> ControlPlan:
    """Build the CAV control schedule that forms the platoon by ``t_p``.

    Raises InfeasibleError naming the violated bound, or AlreadyPlatoonedError
    when there is no gap to close.
    """
    tau_s = stabilization_duration(config.eta_bar, config.tau_r)
    t_c = snapshot.time
    tau_t = t_p - t_c - tau_s
    if tau_t <= 0:
        raise InfeasibleError(
            f"t_p={t_p} s leaves no transition time after t_c={t_c} s and tau_s={tau_s} s",
            binding=BINDING_TRANSITION_TOO_SHORT,
        )

    n = len(snapshot.states)
    if n > 2:
        gaps = platoon_gaps(snapshot, config)
        Delta = cumulative_gap(snapshot, config)
        if Delta <= 0:
            if all(gap <= 0 for gap in gaps):
                raise AlreadyPlatoonedError("already platooned: all platoon gaps are closed")
            raise InfeasibleError(
                f"cumulative gap {Delta:.3f} m is not positive although some HDV is decoupled",
                binding=BINDING_CUMULATIVE_GAP,
            )

    inputs = FeasibilityInputs.from_snapshot(config, snapshot, tau_s)
    rng = feasible_range(inputs, n)
    logger.debug("Feasible transition interval for N=%d: [%.6f, %.6f]", n, rng.lower, rng.upper)
    binding = rng.binding(tau_t)
    if binding is not None:
        raise InfeasibleError(
            f"infeasible tau_t={tau_t:.6f} s outside [{rng.lower:.6f}, {rng.upper:.6f}] "
            f"({binding} violated)",
            binding=binding,
        )

    u_p = max(solve_up(inputs, tau_t, n), config.road.u_min)
    v1 = inputs.v1_tc
    v_eq = v1 + u_p * tau_t
    p1_ts = snapshot.states[0].position + v1 * tau_t + 0.5 * u_p * tau_t * tau_t
    t_s = t_c + tau_t
    t_f = t_s + (config.road.control_length - p1_ts) / v_eq
    logger.info("Planned u_p=%.6f m/s^2 over tau_t=%.3f s (v_eq=%.3f m/s)", u_p, tau_t, v_eq)
    return ControlPlan(
        u_p=u_p,
        t_c=t_c,
        t_s=t_s,
        t_f=t_f,
        tau_t=tau_t,
        tau_s=tau_s,
        feasible_interval=(rng.lower, rng.upper),
        v_eq=v_eq,
        p1_ts=p1_ts,
        n_vehicles=n,
    )


def control_at(control_plan: ControlPlan, t: float) -> Optional[float]:
    """CAV acceleration at time ``t``.

    Returns None after ``t_f``: the CAV then follows the car-following law with
    no predecessor.
    """
    if t < control_plan.t_c:
        raise ValueError(f"t={t} precedes control-zone entry t_c={control_plan.t_c}")
    if t <= control_plan.t_s:
        return control_plan.u_p
    if t <= control_plan.t_f:
        return 0.0
    return None


def cruise_gaps(config: ScenarioConfig, v_eq: float) -> List[float]:
    """Platoon gap each HDV settles at once the fleet cruises at ``v_eq``.

    A positive gap means that HDV never couples, whatever the transition
    does: its equilibrium speed at ``delta <= 0`` stays below ``v_eq``. With
    ``tanh(s)`` close to 1 this happens as soon as ``v_eq > v_max / 2``.
    """
    road = config.road
    return [
        equilibrium_gap(v_eq, dynamic_spacing(v_eq, params, road.s0), road.v_max,
                        config.gap_scale)
        for params, _ in config.vehicles[1:]
    ]
