# -*- coding: utf-8 -*-
"""Tests for result files and console display."""
import io
import json
import os
from dataclasses import replace
from unittest.mock import Mock

import numpy as np
import pytest
import yaml

from mixed_platoon.formation.config import Config
from mixed_platoon.formation.formatters import (
    OutputFormatter,
    RunSummary,
    emit_plot_data,
    write_summary,
    write_trajectory,
)
from mixed_platoon.formation.metrics import NotReached
from mixed_platoon.formation.simulator import Trajectory
from mixed_platoon.formation.sweep import SweepRecord, aggregate
from mixed_platoon.shared import OutputSink
from mixed_platoon.shared.exceptions import OutputError

from .builders import make_scenario


def _small_trajectory():
    config = make_scenario((50.0,))
    times = np.array([0.0, 0.01, 0.02])
    lead = 30.0 * times
    positions = np.column_stack([lead, lead - 87.0])
    speeds = np.full((3, 2), 30.0)
    return Trajectory.from_states(config, times, positions, speeds)


def _records():
    return [
        SweepRecord("tau", 40.0, 2, 0, 45.0, True, u_p=-0.5, t_ap=50.0, deviation_pct=11.1),
        SweepRecord("tau", 50.0, 2, 1, 55.0, False, binding="control_zone",
                    outcome="infeasible"),
        SweepRecord("tau", 42.2, 3, 0, 47.2, True, u_p=-0.4, t_ap=54.1, deviation_pct=14.6),
    ]


class TestWriteTrajectory:
    """Test write_trajectory."""

    def test_long_format_rows(self, tmp_path):
        """Test header, row count and the NaN rendering of CAV-only columns."""
        path = write_trajectory(_small_trajectory(), str(tmp_path / "traj.csv"))
        lines = open(path, encoding="utf-8").read().split("\n")
        assert lines[0] == "t,vehicle_id,kind,p,v,u,s_i,delta_i,headway,phase"
        assert lines[1] == "0,1,CAV,0,30,0,,,,Transition"
        assert lines[2] == "0,2,HDV,-87,30,0,32,50,87,Transition"
        assert lines[-1] == ""
        assert len(lines) == 1 + 6 + 1

    def test_byte_identical_across_writes(self, tmp_path):
        first = write_trajectory(_small_trajectory(), str(tmp_path / "a.csv"))
        second = write_trajectory(_small_trajectory(), str(tmp_path / "b.csv"))
        with open(first, "rb") as a, open(second, "rb") as b:
            assert a.read() == b.read()

    def test_no_temporary_files_left(self, tmp_path):
        write_trajectory(_small_trajectory(), str(tmp_path / "traj.csv"))
        assert os.listdir(tmp_path) == ["traj.csv"]

    def test_unwritable_target_raises(self, tmp_path):
        blocker = tmp_path / "file.txt"
        blocker.write_text("x", encoding="utf-8")
        with pytest.raises(OutputError):
            write_trajectory(_small_trajectory(), str(blocker / "traj.csv"))


class TestWriteSummary:
    """Test write_summary and emit_plot_data."""

    def test_json_round_trip(self, tmp_path, baseline_result):
        path = write_summary(baseline_result.summary, str(tmp_path / "summary.json"))
        with open(path, encoding="utf-8") as handle:
            data = json.load(handle)
        assert RunSummary.from_dict(data) == baseline_result.summary
        assert data["formation"]["reached"] is True

    def test_yaml_summary(self, tmp_path, baseline_result):
        path = write_summary(baseline_result.summary, str(tmp_path / "summary.yaml"), fmt="yaml")
        with open(path, encoding="utf-8") as handle:
            data = yaml.safe_load(handle)
        assert data["scenario_name"] == "n3_baseline"
        assert data["plan"]["u_p"] == baseline_result.plan.u_p

    def test_unknown_format_raises(self, tmp_path, baseline_result):
        with pytest.raises(ValueError):
            write_summary(baseline_result.summary, str(tmp_path / "summary.txt"), fmt="txt")

    def test_plot_data(self, tmp_path):
        path = emit_plot_data(_records(), str(tmp_path / "plot.csv"))
        lines = open(path, encoding="utf-8").read().splitlines()
        assert lines[0] == "axis_value,N,deviation_pct,feasible"
        assert lines[1] == "40,2,11.1,True"
        assert lines[2] == "50,2,,False"


class TestOutputFormatter:
    """Test the OutputFormatter class."""

    def test_save_run_file_names(self, tmp_path, baseline_result):
        """Test that runs are saved under scenario-derived names."""
        config = Config(output_formats=["both"], output_directory=str(tmp_path),
                        include_timestamp=False)
        formatter = OutputFormatter(config)
        saved = formatter.save_run(baseline_result.trajectory, baseline_result.summary)
        assert [os.path.basename(p) for p in saved] == [
            "n3_baseline_trajectory.csv",
            "n3_baseline_summary.json",
            "n3_baseline_summary.yaml",
        ]
        assert all(os.path.exists(p) for p in saved)

    def test_timestamped_names(self, tmp_path, baseline_result):
        config = Config(output_directory=str(tmp_path))
        formatter = OutputFormatter(config)
        saved = formatter.save_summary(baseline_result.summary.to_dict(), "n3_baseline", "summary")
        name = os.path.basename(saved[0])
        assert name.startswith("n3_baseline_summary_")
        assert name.endswith(".json")

    def test_save_sweep_file_names(self, tmp_path):
        """Test records, per-fleet plot data and aggregate files."""
        config = Config(output_directory=str(tmp_path), include_timestamp=False)
        records = _records()
        saved = OutputFormatter(config).save_sweep("demo", "tau", records, aggregate(records))
        assert [os.path.basename(p) for p in saved] == [
            "demo_sweep_tau.csv",
            "demo_plot_tau_N2.csv",
            "demo_plot_tau_N3.csv",
            "demo_sweep_tau_summary.json",
        ]

    def test_format_summary(self, tmp_path, baseline_result):
        formatter = OutputFormatter(Config(output_directory=str(tmp_path)))
        text = formatter.format_summary(baseline_result.summary)
        assert "n3_baseline" in text
        assert "Formed" in text

        failed = replace(baseline_result.summary, formation=NotReached("transition").to_dict())
        assert not failed.formed
        assert "Not formed: transition" in formatter.format_summary(failed)

    def test_display_results(self, tmp_path, baseline_result):
        stream = io.StringIO()
        formatter = OutputFormatter(Config(output_directory=str(tmp_path)),
                                    OutputSink(stream=stream))
        formatter.display_results(baseline_result.summary)
        assert "PLATOON FORMATION RESULTS" in stream.getvalue()

    def test_display_suppressed_when_quiet(self, tmp_path, baseline_result):
        sink = Mock()
        formatter = OutputFormatter(Config(output_directory=str(tmp_path), quiet=True), sink)
        formatter.display_results(baseline_result.summary)
        sink.separator.assert_not_called()

    def test_display_sweep_table(self, tmp_path):
        stream = io.StringIO()
        formatter = OutputFormatter(Config(output_directory=str(tmp_path)),
                                    OutputSink(stream=stream))
        formatter.display_sweep(aggregate(_records()))
        output = stream.getvalue().splitlines()
        assert output[0].split() == ["axis", "runs", "min", "%", "max", "%", "mean", "%",
                                     "formed"]
        assert output[2].split()[:2] == ["tau", "3"]
