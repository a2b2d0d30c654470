# -*- coding: utf-8 -*-
"""Delayed optimal-velocity car-following law for human-driven vehicles.

The equilibrium speed-spacing function is

    V(delta, s) = (v_max / 2) * (tanh(k * delta) + tanh(s))

with ``k`` the per-meter ``gap_scale`` (1.0 reads the formula literally). A
vehicle with no predecessor uses ``delta = +inf`` so the first term is 1.

Delays are realized by reading a per-vehicle ring buffer ``round(eta / dt)``
samples back, so the effective delay differs from ``eta`` by at most ``dt / 2``.
"""

import logging
import math
from collections import deque
from typing import Deque, NamedTuple, Optional

from .exceptions import HistoryError
from .model import VehicleParams

logger = logging.getLogger(__name__)

NO_PREDECESSOR = math.inf

# Relative slack when checking that a sample lands on the dt grid.
_GRID_TOLERANCE = 1e-6


def equilibrium_speed(
    delta: Optional[float], s: float, v_max: float, gap_scale: float = 1.0
) -> float:
    """Speed a driver settles to for platoon gap ``delta`` and spacing ``s``.

    ``delta=None`` (or ``NO_PREDECESSOR``) saturates the gap term at 1.
    """
    if delta is None or delta == NO_PREDECESSOR:
        gap_term = 1.0
    else:
        gap_term = math.tanh(gap_scale * delta)
    return 0.5 * v_max * (gap_term + math.tanh(s))


def equilibrium_gap(v: float, s: float, v_max: float, gap_scale: float = 1.0) -> float:
    """Platoon gap at which a driver holding spacing ``s`` cruises at speed ``v``.

    Inverts ``equilibrium_speed`` in ``delta``. Returns ``+inf`` when no finite
    gap slows the driver down to ``v`` (``2 * v / v_max - tanh(s) >= 1``).
    """
    x = 2.0 * v / v_max - math.tanh(s)
    if x >= 1.0:
        return math.inf
    if x <= -1.0:
        return -math.inf
    return math.atanh(x) / gap_scale


def delay_steps(eta: float, dt: float) -> int:
    """Number of samples a delay of ``eta`` seconds reaches back."""
    return int(round(eta / dt))


class HistorySample(NamedTuple):
    """One recorded (time, platoon gap, dynamic spacing, speed) sample."""

    time: float
    delta: float
    spacing: float
    speed: float


class DelayHistory:
    """Fixed-step ring buffer of one vehicle's recent samples.

    Samples sit on the grid ``start_time + k * dt``. The buffer keeps enough of
    them that a lookup up to ``eta_bar`` seconds back from the newest sample
    always succeeds; anything older than ``newest - eta_bar - dt`` may be evicted.
    """

    def __init__(self, dt: float, eta_bar: float):
        if dt <= 0:
            raise ValueError("dt must be positive")
        if eta_bar < 0:
            raise ValueError("eta_bar must be non-negative")
        self.dt = dt
        self.eta_bar = eta_bar
        self.capacity = delay_steps(eta_bar, dt) + 2
        self._samples: Deque[HistorySample] = deque(maxlen=self.capacity)
        self._start_time = 0.0
        self._count = 0

    @classmethod
    def prefilled(
        cls,
        t: float,
        dt: float,
        eta_bar: float,
        delta: float,
        spacing: float,
        speed: float,
    ) -> "DelayHistory":
        """History holding a constant state for the ``eta_bar`` seconds ending at ``t``."""
        history = cls(dt, eta_bar)
        steps = delay_steps(eta_bar, dt)
        history._start_time = t - steps * dt
        for k in range(steps + 1):
            history._samples.append(
                HistorySample(history._start_time + k * dt, delta, spacing, speed)
            )
        history._count = steps + 1
        return history

    def __len__(self) -> int:
        return len(self._samples)

    @property
    def latest(self) -> HistorySample:
        if not self._samples:
            raise HistoryError("history is empty")
        return self._samples[-1]

    @property
    def earliest(self) -> HistorySample:
        if not self._samples:
            raise HistoryError("history is empty")
        return self._samples[0]

    def _grid_index(self, t: float) -> int:
        return int(round((t - self._start_time) / self.dt))

    def record_sample(
        self, t: float, delta: float, spacing: float, speed: float
    ) -> "DelayHistory":
        """Append the sample for time ``t``, which must be exactly one step after the last."""
        if self._count == 0:
            self._start_time = t
        else:
            expected = self._start_time + self._count * self.dt
            if abs(t - expected) > _GRID_TOLERANCE * self.dt:
                raise HistoryError(
                    f"sample at t={t} does not follow the last sample "
                    f"(expected t={expected}, dt={self.dt})"
                )
        self._samples.append(HistorySample(t, delta, spacing, speed))
        self._count += 1
        return self

    def _sample_at(self, index: int) -> HistorySample:
        first = self._count - len(self._samples)
        if index < first:
            earliest = self._samples[0].time if self._samples else None
            raise HistoryError(
                f"lookup at t={self._start_time + index * self.dt} precedes the earliest "
                f"stored sample (t={earliest})"
            )
        if index >= self._count:
            raise HistoryError(
                f"lookup at t={self._start_time + index * self.dt} is past the latest sample"
            )
        return self._samples[index - first]

    def lookup(self, t: float) -> HistorySample:
        """Sample on the grid point nearest to ``t``."""
        return self._sample_at(self._grid_index(t))

    def delayed(self, t: float, eta: float) -> HistorySample:
        """Sample seen by a driver at time ``t`` with perception delay ``eta``."""
        return self._sample_at(self._grid_index(t) - delay_steps(eta, self.dt))


def ovm_accel(
    history: DelayHistory,
    t: float,
    params: VehicleParams,
    v_max: float,
    gap_scale: float = 1.0,
) -> float:
    """Raw (unclamped) car-following acceleration at time ``t``.

    Gap, spacing and ego speed are all read ``eta`` seconds in the past.
    """
    sample = history.delayed(t, params.eta)
    target = equilibrium_speed(sample.delta, sample.spacing, v_max, gap_scale)
    return params.alpha * (target - sample.speed)
