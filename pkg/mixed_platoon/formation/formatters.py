# -*- coding: utf-8 -*-
"""Result files and console display for the platoon formation tool."""

import json
import logging
import os
from dataclasses import asdict, dataclass, field
from datetime import datetime
from typing import Any, Dict, List, Mapping, Optional, Sequence, Union

import pandas as pd
import yaml

from ..shared.utils import SIGNIFICANT_DIGITS, atomic_write_text, format_number
from .config import Config
from .controller import ControlPlan
from .metrics import FormationOutcome
from .model import ScenarioConfig
from .scenario import scenario_hash
from .simulator import Trajectory
from .sweep import AxisSummary, SweepRecord
from .version import __version__

logger = logging.getLogger(__name__)

FLOAT_FORMAT = f"%.{SIGNIFICANT_DIGITS}g"
PLOT_COLUMNS = ["axis_value", "N", "deviation_pct", "feasible"]


@dataclass
class RunSummary:
    """Everything needed to identify and judge one simulated maneuver."""

    scenario_name: str
    scenario_hash: str
    n_vehicles: int
    dt: float
    plan: Dict[str, Any]
    formation: Dict[str, Any]
    tolerances: Dict[str, float]
    version: str = __version__
    extras: Dict[str, Any] = field(default_factory=dict)

    @property
    def formed(self) -> bool:
        return bool(self.formation.get("reached"))

    @classmethod
    def from_run(
        cls,
        scenario: ScenarioConfig,
        control_plan: ControlPlan,
        outcome: FormationOutcome,
        extras: Optional[Dict[str, Any]] = None,
    ) -> "RunSummary":
        return cls(
            scenario_name=scenario.name,
            scenario_hash=scenario_hash(scenario),
            n_vehicles=scenario.n_vehicles,
            dt=scenario.dt,
            plan={
                "u_p": control_plan.u_p,
                "t_c": control_plan.t_c,
                "t_s": control_plan.t_s,
                "t_p": control_plan.t_p,
                "t_f": control_plan.t_f,
                "tau_t": control_plan.tau_t,
                "tau_s": control_plan.tau_s,
                "feasible_interval": list(control_plan.feasible_interval),
                "v_eq": control_plan.v_eq,
            },
            formation=outcome.to_dict(),
            tolerances=asdict(scenario.tolerances),
            extras=dict(extras or {}),
        )

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "RunSummary":
        return cls(**dict(data))


def write_trajectory(traj: Trajectory, path: str) -> str:
    """Write the long-format trajectory CSV (9 significant digits, fixed row order)."""
    text = traj.to_frame().to_csv(index=False, float_format=FLOAT_FORMAT, lineterminator="\n")
    atomic_write_text(path, text)
    logger.info("Trajectory saved to: %s", path)
    return path


def write_summary(summary: Union[RunSummary, Mapping[str, Any]], path: str,
                  fmt: str = "json") -> str:
    """Write a summary as JSON (default) or YAML."""
    data = summary.to_dict() if hasattr(summary, "to_dict") else dict(summary)
    if fmt == "json":
        text = json.dumps(data, indent=2, sort_keys=True) + "\n"
    elif fmt == "yaml":
        text = yaml.safe_dump(data, default_flow_style=False, sort_keys=True)
    else:
        raise ValueError(f"unsupported summary format: {fmt}")
    atomic_write_text(path, text)
    logger.info("Summary saved to: %s", path)
    return path


def emit_plot_data(records: Sequence[SweepRecord], path: str) -> str:
    """Write ``axis_value,N,deviation_pct,feasible`` rows for plotting."""
    frame = pd.DataFrame(
        {
            "axis_value": [r.axis_value for r in records],
            "N": [r.n_vehicles for r in records],
            "deviation_pct": [r.deviation_pct for r in records],
            "feasible": [r.feasible for r in records],
        },
        columns=PLOT_COLUMNS,
    )
    text = frame.to_csv(index=False, float_format=FLOAT_FORMAT, lineterminator="\n")
    atomic_write_text(path, text)
    logger.info("Plot data saved to: %s", path)
    return path


def write_records(records: Sequence[SweepRecord], path: str) -> str:
    """Write every field of every sweep record as CSV."""
    frame = pd.DataFrame([r.to_dict() for r in records])
    atomic_write_text(path, frame.to_csv(index=False, float_format=FLOAT_FORMAT,
                                         lineterminator="\n"))
    return path


class OutputFormatter:
    """Handles output naming, file operations and console display."""

    def __init__(self, config: Config, output_sink=None):
        """Initialize formatter with configuration and optional output sink."""
        self.config = config
        self.output_sink = output_sink
        self._timestamp = (
            datetime.now().strftime("%Y%m%d_%H%M%S") if config.include_timestamp else ""
        )
        self._ensure_output_directory()

    def _ensure_output_directory(self) -> None:
        """Ensure output directory exists."""
        try:
            os.makedirs(self.config.output_directory, exist_ok=True)
            logger.debug("Output directory ensured: %s", self.config.output_directory)
        except Exception as e:
            logger.error(
                "Failed to create output directory %s: %s", self.config.output_directory, e
            )
            raise

    def _path(self, *parts: str, extension: str) -> str:
        name_parts = [part for part in parts if part]
        if self._timestamp:
            name_parts.append(self._timestamp)
        return os.path.join(self.config.output_directory, "_".join(name_parts) + extension)

    def _summary_formats(self) -> List[str]:
        formats: List[str] = []
        for fmt in self.config.output_formats:
            for resolved in (["json", "yaml"] if fmt == "both" else [fmt]):
                if resolved not in formats:
                    formats.append(resolved)
        return formats

    def save_run(self, trajectory: Trajectory, summary: RunSummary) -> List[str]:
        """Save the trajectory CSV and the summary in every configured format."""
        stem = summary.scenario_name
        saved = [write_trajectory(trajectory, self._path(stem, "trajectory", extension=".csv"))]
        saved.extend(self.save_summary(summary.to_dict(), stem, "summary"))
        return saved

    def save_summary(self, data: Mapping[str, Any], *name: str) -> List[str]:
        saved = []
        for fmt in self._summary_formats():
            saved.append(write_summary(data, self._path(*name, extension=f".{fmt}"), fmt))
        return saved

    def save_sweep(
        self,
        scenario_name: str,
        axis: str,
        records: Sequence[SweepRecord],
        summaries: Mapping[str, AxisSummary],
    ) -> List[str]:
        """Save sweep records, one plot-data file per fleet size and the aggregate."""
        saved = [write_records(records, self._path(scenario_name, "sweep", axis,
                                                   extension=".csv"))]
        for n in sorted({r.n_vehicles for r in records}):
            subset = [r for r in records if r.n_vehicles == n]
            saved.append(emit_plot_data(subset, self._path(scenario_name, "plot", axis, f"N{n}",
                                                           extension=".csv")))
        aggregate = {key: value.to_dict() for key, value in summaries.items()}
        saved.extend(self.save_summary(aggregate, scenario_name, "sweep", axis, "summary"))
        return saved

    def display_results(self, summary: RunSummary) -> None:
        """Display a run summary through the output sink."""
        if self.config.quiet or self.output_sink is None:
            return
        self.output_sink.separator()
        self.output_sink.info("PLATOON FORMATION RESULTS")
        self.output_sink.separator()
        self.output_sink.print_raw(self.format_summary(summary))

    def display_sweep(self, summaries: Mapping[str, AxisSummary]) -> None:
        """Display per-axis sweep statistics as a table."""
        if self.config.quiet or self.output_sink is None:
            return

        def cell(value: Optional[float]) -> str:
            return "-" if value is None else f"{value:+.3f}"

        rows = [
            [
                axis,
                str(s.records),
                cell(s.min_deviation_pct),
                cell(s.max_deviation_pct),
                cell(s.mean_deviation_pct),
                f"{s.feasibility_fraction:.0%}",
            ]
            for axis, s in summaries.items()
        ]
        self.output_sink.table(["axis", "runs", "min %", "max %", "mean %", "formed"], rows)

    def format_summary(self, summary: RunSummary) -> str:
        """Format a short human-readable summary."""
        plan = summary.plan
        formation = summary.formation
        lo, hi = plan["feasible_interval"]
        lines = [
            "📊 Platoon Formation Summary",
            f"🛣️  Scenario: {summary.scenario_name} (N={summary.n_vehicles}, dt={summary.dt})",
            f"🎯 Planned: t_p={plan['t_p']:.3f}s, tau_t={plan['tau_t']:.3f}s "
            f"in [{lo:.3f}, {hi:.3f}]s",
            f"🚗 Braking: u_p={format_number(plan['u_p'])} m/s², v_eq={plan['v_eq']:.3f} m/s",
        ]
        if formation.get("reached"):
            lines.extend(
                [
                    f"🔗 Transition: t_s={formation['t_s_actual']:.3f}s",
                    f"✅ Formed: t_ap={formation['t_ap']:.3f}s "
                    f"({formation['deviation_pct']:+.3f}% vs plan)",
                    f"📍 Inside control zone: {'yes' if formation['in_zone'] else 'no'}",
                ]
            )
        else:
            lines.append(f"❌ Not formed: {formation.get('reason', 'unknown')}")
        return "\n".join(lines)
