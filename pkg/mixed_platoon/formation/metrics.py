# -*- coding: utf-8 -*-
"""Formation events and outcome metrics over simulated trajectories."""

import logging
from dataclasses import asdict, dataclass, field
from typing import Any, Dict, List, Optional, Union

import numpy as np

from .model import FormationTolerances
from .simulator import Trajectory

logger = logging.getLogger(__name__)

__all__ = [
    "FormationReport",
    "FormationTolerances",
    "NotReached",
    "detect_formation",
    "detect_transition",
    "formation_deviation",
    "headway_spread",
    "steady_state_check",
]


@dataclass(frozen=True)
class NotReached:
    """Verdict for an event that never happened within the horizon."""

    reason: str
    detail: Dict[str, float] = field(default_factory=dict)

    def to_dict(self) -> Dict[str, Any]:
        return {"reached": False, "reason": self.reason, "detail": dict(self.detail)}


@dataclass(frozen=True)
class FormationReport:
    """Observed transition and formation times of one run."""

    t_s_actual: float
    t_ap: float
    deviation_pct: Optional[float]
    v_eq_observed: float
    in_zone: bool

    def to_dict(self) -> Dict[str, Any]:
        return {"reached": True, **asdict(self)}

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "FormationReport":
        return cls(
            t_s_actual=data["t_s_actual"],
            t_ap=data["t_ap"],
            deviation_pct=data.get("deviation_pct"),
            v_eq_observed=data["v_eq_observed"],
            in_zone=data["in_zone"],
        )


FormationOutcome = Union[FormationReport, NotReached]


def formation_deviation(t_ap: float, t_p: float) -> float:
    """Signed lateness of formation in percent of the planned time."""
    if t_p <= 0:
        raise ValueError("planned formation time must be positive")
    return (t_ap - t_p) / t_p * 100.0


def steady_state_check(
    traj: Trajectory, t: float, tol: Optional[FormationTolerances] = None
) -> List[bool]:
    """Whether each consecutive pair (2..N) is in steady state at ``t``.

    A pair qualifies when its platoon gap moved by at most ``eps_delta`` over the
    last ``dwell`` seconds and its speed difference stayed within ``eps_v``.
    Gaps of any sign count.
    """
    tol = tol or traj.config.tolerances
    if t - tol.dwell < traj.start - 1e-9:
        raise ValueError(f"t - dwell = {t - tol.dwell} precedes the trajectory start {traj.start}")
    end = traj.index_at(t)
    begin = traj.index_at(t - tol.dwell)
    gaps = traj.gaps
    speeds = traj.speeds[begin : end + 1]
    flags = []
    for i in range(1, traj.n_vehicles):
        gap_drift = abs(gaps[end, i] - gaps[begin, i])
        speed_diff = np.max(np.abs(speeds[:, i] - speeds[:, i - 1]))
        flags.append(bool(gap_drift <= tol.eps_delta and speed_diff <= tol.eps_v))
    return flags


def detect_transition(traj: Trajectory) -> Union[float, NotReached]:
    """First time every HDV's platoon gap is closed (``<= 0``).

    The crossing is linearly interpolated between the bracketing samples.
    """
    worst = np.max(traj.gaps[:, 1:], axis=1)
    closed = worst <= 0
    if not closed.any():
        return NotReached("transition", {"smallest_open_gap": float(np.min(worst))})
    k = int(np.argmax(closed))
    if k == 0:
        return float(traj.times[0])
    before, after = worst[k - 1], worst[k]
    t0, t1 = traj.times[k - 1], traj.times[k]
    return float(t0 + (t1 - t0) * before / (before - after))


def detect_formation(
    traj: Trajectory,
    tol: Optional[FormationTolerances] = None,
    t_p: Optional[float] = None,
) -> FormationOutcome:
    """Earliest time the fleet stays a platoon for a full dwell window.

    From the transition time on, every HDV must keep ``delta <= eps_delta`` and
    ``|v_i - v_1| <= eps_v`` on every sample of ``[t, t + dwell]``. The
    deviation is measured against ``t_p`` or, if omitted, the plan's ``t_p``.
    """
    tol = tol or traj.config.tolerances
    t_s = detect_transition(traj)
    if isinstance(t_s, NotReached):
        return t_s

    times = traj.times
    start = int(np.searchsorted(times, t_s - 1e-9, side="left"))
    window = int(round(tol.dwell / traj.dt))

    gap_ok = np.all(traj.gaps[:, 1:] <= tol.eps_delta, axis=1)
    speed_ok = np.all(np.abs(traj.speeds[:, 1:] - traj.speeds[:, :1]) <= tol.eps_v, axis=1)
    holds = gap_ok & speed_ok

    counts = np.concatenate(([0], np.cumsum(holds)))
    last_start = len(times) - window
    if last_start <= start:
        return NotReached("dwell", {"t_s_actual": t_s, "remaining": float(times[-1] - t_s)})
    starts = np.arange(start, last_start)
    full = (counts[starts + window + 1] - counts[starts]) == window + 1
    if not full.any():
        gap_failures = float(np.count_nonzero(~gap_ok[start:]) * traj.dt)
        speed_failures = float(np.count_nonzero(~speed_ok[start:]) * traj.dt)
        reason = "speed" if speed_failures >= gap_failures else "gap"
        logger.debug("Formation not reached: %s condition failed longest", reason)
        return NotReached(
            reason,
            {
                "t_s_actual": t_s,
                "gap_failure_seconds": gap_failures,
                "speed_failure_seconds": speed_failures,
            },
        )

    k = int(starts[int(np.argmax(full))])
    t_ap = float(times[k])
    if t_p is None and traj.plan is not None:
        t_p = traj.plan.t_p
    deviation = formation_deviation(t_ap, t_p) if t_p else None
    return FormationReport(
        t_s_actual=t_s,
        t_ap=t_ap,
        deviation_pct=deviation,
        v_eq_observed=float(np.mean(traj.speeds[k : k + window + 1, 0])),
        in_zone=bool(traj.positions[k, 0] <= traj.config.road.control_length),
    )


def headway_spread(traj: Trajectory, window: float = 10.0) -> np.ndarray:
    """Standard deviation of each HDV's headway over the final ``window`` seconds."""
    begin = traj.index_at(max(traj.end - window, traj.start))
    return np.std(traj.headways[begin:, 1:], axis=0)
