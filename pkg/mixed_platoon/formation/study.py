# -*- coding: utf-8 -*-
"""High-level orchestration of feasibility checks, simulations and sweeps."""
import logging
import time
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Tuple

from .config import Config
from .controller import (
    ControlPlan,
    FeasibilityInputs,
    cruise_gaps,
    feasible_range,
    plan,
    solve_up,
    stabilization_duration,
)
from .exceptions import ConfigurationError, FormationError, InfeasibleError
from .formatters import RunSummary
from .metrics import FormationOutcome, detect_formation, headway_spread
from .model import ScenarioConfig, make_steady_state_fleet
from .scenario import load_scenario
from .simulator import Trajectory, run
from .sweep import AxisSummary, SweepAxis, SweepRecord, SweepSpec, aggregate, run_sweep

logger = logging.getLogger(__name__)


class NullOutputSink:
    """Null object pattern for output sink."""

    def progress(self, message):
        """Display progress message (no-op)."""

    def debug_info(self, message):
        """Display debug information (no-op)."""

    def warning(self, message):
        """Display warning message (no-op)."""

    def info(self, message):
        """Display info message (no-op)."""

    def error(self, message):
        """Display error message (no-op)."""

    def metric(self, name, value, unit=""):
        """Display metric (no-op)."""

    def timing(self, operation, duration):
        """Display timing (no-op)."""


@dataclass
class SimulationResult:
    """Products of one planned and simulated maneuver."""

    scenario: ScenarioConfig
    plan: ControlPlan
    trajectory: Trajectory
    outcome: FormationOutcome
    summary: RunSummary


class FormationStudy:
    """Runs the formation workflows behind the command-line surface."""

    def __init__(self, config: Config = None, output_sink=None):
        """Initialize the study with runtime configuration."""
        self.config = config or Config()
        self.config.validate()
        self.output_sink = output_sink or NullOutputSink()

    @staticmethod
    def load(path: str) -> ScenarioConfig:
        return load_scenario(path)

    @staticmethod
    def _resolve_t_p(scenario: ScenarioConfig, t_p: Optional[float]) -> float:
        if t_p is not None:
            return t_p
        if scenario.t_p is None:
            raise ConfigurationError("no desired formation time: pass --t-p or set solver.t_p")
        return scenario.t_p

    def feasibility(self, scenario: ScenarioConfig, t_p: Optional[float] = None) -> Dict[str, Any]:
        """Feasible transition interval and, when a t_p is known, the verdict for it."""
        entry = make_steady_state_fleet(scenario)
        tau_s = stabilization_duration(scenario.eta_bar, scenario.tau_r)
        inputs = FeasibilityInputs.from_snapshot(scenario, entry, tau_s)
        rng = feasible_range(inputs, scenario.n_vehicles)
        result: Dict[str, Any] = {
            "n_vehicles": scenario.n_vehicles,
            "gap": inputs.delta_or_Delta,
            "rho_sum": inputs.rho_sum,
            "tau_s": tau_s,
            "interval": [rng.lower, rng.upper],
            "accel_bound": rng.accel_bound,
            "speed_bound": rng.speed_bound,
            "empty": rng.is_empty,
        }
        if t_p is not None or scenario.t_p is not None:
            tau_t = self._resolve_t_p(scenario, t_p) - scenario.t_c - tau_s
            binding = rng.binding(tau_t)
            result.update({"tau_t": tau_t, "feasible": binding is None, "binding": binding})
        else:
            result["feasible"] = not rng.is_empty
        self.output_sink.debug_info(
            f"Feasible interval [{rng.lower:.6f}, {rng.upper:.6f}] s for N={scenario.n_vehicles}"
        )
        return result

    def solve(self, scenario: ScenarioConfig, tau_t: float) -> Dict[str, Any]:
        """Braking level for a transition of ``tau_t`` seconds, plus its feasibility."""
        entry = make_steady_state_fleet(scenario)
        tau_s = stabilization_duration(scenario.eta_bar, scenario.tau_r)
        inputs = FeasibilityInputs.from_snapshot(scenario, entry, tau_s)
        u_p = solve_up(inputs, tau_t, scenario.n_vehicles)
        rng = feasible_range(inputs, scenario.n_vehicles)
        v_eq = inputs.v1_tc + u_p * tau_t
        return {
            "u_p": u_p,
            "tau_t": tau_t,
            "v_eq": v_eq,
            "cruise_gaps": cruise_gaps(scenario, v_eq),
            "interval": [rng.lower, rng.upper],
            "binding": rng.binding(tau_t),
        }

    def simulate(
        self,
        scenario: ScenarioConfig,
        t_p: Optional[float] = None,
        horizon: Optional[float] = None,
        lead_in: float = 0.0,
    ) -> SimulationResult:
        """Plan, simulate and score one maneuver.

        InfeasibleError and other FormationError subclasses propagate; anything
        else is wrapped into a FormationError.
        """
        target = self._resolve_t_p(scenario, t_p)
        try:
            self.output_sink.progress(f"Planning {scenario.name} for t_p={target}s...")
            entry = make_steady_state_fleet(scenario)
            control_plan = plan(scenario, entry, target)
            self.output_sink.metric("u_p", f"{control_plan.u_p:.6f}", "m/s²")

            self.output_sink.progress("Simulating...")
            started = time.perf_counter()
            trajectory = run(scenario, control_plan, horizon=horizon, lead_in=lead_in)
            self.output_sink.timing("Simulation", time.perf_counter() - started)

            outcome = detect_formation(trajectory, t_p=target)
        except FormationError:
            raise
        except Exception as e:
            logger.error("Simulation of %s failed: %s", scenario.name, e)
            raise FormationError(f"Simulation of {scenario.name} failed: {e}") from e

        window = min(10.0, trajectory.end - trajectory.start)
        spread = headway_spread(trajectory, window)
        summary = RunSummary.from_run(
            scenario,
            control_plan,
            outcome,
            extras={"final_headway_std": [float(x) for x in spread], "horizon": trajectory.end},
        )
        logger.info("Simulation of %s finished: %s", scenario.name, summary.formation)
        return SimulationResult(scenario, control_plan, trajectory, outcome, summary)

    def sweep(
        self,
        scenario: ScenarioConfig,
        axis: str,
        fleet_sizes: Tuple[int, ...],
        samples: int,
        seed: int = 0,
        jitter: float = 0.0,
        value_range: Optional[Tuple[float, float]] = None,
    ) -> Tuple[List[SweepRecord], Dict[str, AxisSummary]]:
        """Run a robustness sweep and aggregate it."""
        spec = SweepSpec(
            base=scenario,
            axis=SweepAxis(axis),
            value_range=value_range,
            samples=samples,
            fleet_sizes=tuple(fleet_sizes),
            seed=seed,
            jitter=jitter,
            workers=self.config.workers,
        )
        records = run_sweep(spec, self.output_sink)
        if not records:
            raise InfeasibleError("sweep produced no records", binding=None)
        return records, aggregate(records)
