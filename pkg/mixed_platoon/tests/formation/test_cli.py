# -*- coding: utf-8 -*-
"""Tests for platoon formation CLI module."""
import argparse
import logging
import os
from unittest.mock import Mock, patch

import pytest

from mixed_platoon.formation.cli import (
    EXIT_INTERNAL,
    EXIT_INVALID_INPUT,
    EXIT_NOT_FORMED,
    EXIT_OK,
    create_parser,
    main,
    setup_logging,
)
from mixed_platoon.formation.config import Config
from mixed_platoon.formation.exceptions import (
    CollisionError,
    InfeasibleError,
    ScenarioError,
)
from mixed_platoon.formation.scenario import bundled_scenario_path
from mixed_platoon.shared.exceptions import OutputError

CLI = "mixed_platoon.formation.cli"


class TestSetupLogging:
    """Test the setup_logging function."""

    @patch(f"{CLI}.logging.basicConfig")
    def test_setup_logging_default(self, mock_basic_config):
        """Test setup_logging with default parameters."""
        setup_logging()

        mock_basic_config.assert_called_once()
        call_args = mock_basic_config.call_args
        assert call_args[1]["level"] == logging.INFO
        assert "%(asctime)s - %(name)s - %(levelname)s - %(message)s" in call_args[1]["format"]

    @patch(f"{CLI}.logging.basicConfig")
    def test_setup_logging_debug(self, mock_basic_config):
        """Test setup_logging with debug enabled."""
        setup_logging(debug=True)

        assert mock_basic_config.call_args[1]["level"] == logging.DEBUG

    @patch(f"{CLI}.logging.basicConfig")
    def test_setup_logging_quiet(self, mock_basic_config):
        """Test setup_logging with quiet enabled."""
        setup_logging(quiet=True)

        assert mock_basic_config.call_args[1]["level"] == logging.ERROR


class TestCreateParser:
    """Test the create_parser function."""

    def test_create_parser_basic(self):
        """Test that parser is created with correct structure."""
        parser = create_parser()

        assert isinstance(parser, argparse.ArgumentParser)
        assert parser.prog == "platoon-formation"

    def test_simulate_defaults(self):
        """Test parsing simulate with the scenario only."""
        args = create_parser().parse_args(["simulate", "s.yaml"])

        assert args.command == "simulate"
        assert args.scenario == "s.yaml"
        assert args.output_format == "json"
        assert args.output_dir == "./platoon-results"
        assert args.t_p is None
        assert args.horizon is None
        assert args.lead_in == 0.0
        assert args.quiet is False
        assert args.debug is False
        assert args.no_timestamp is False

    def test_sweep_arguments(self):
        """Test parsing sweep with every option."""
        args = create_parser().parse_args(
            [
                "sweep",
                "s.yaml",
                "--axis",
                "eta",
                "--n",
                "2,3",
                "--samples",
                "7",
                "--seed",
                "3",
                "--jitter",
                "0.1",
                "--range",
                "0.2",
                "0.8",
                "--workers",
                "2",
                "--out",
                "/tmp/results",
            ]
        )

        assert args.axis == "eta"
        assert args.n == "2,3"
        assert args.samples == 7
        assert args.seed == 3
        assert args.jitter == 0.1
        assert args.range == [0.2, 0.8]
        assert args.workers == 2
        assert args.output_dir == "/tmp/results"

    @pytest.mark.parametrize(
        "argv",
        [
            [],
            ["simulate"],
            ["solve", "s.yaml"],
            ["sweep", "s.yaml", "--axis", "speed"],
            ["simulate", "s.yaml", "--output-format", "xml"],
        ],
    )
    def test_parser_rejects(self, argv):
        """Test parser rejects missing or invalid arguments."""
        with pytest.raises(SystemExit):
            create_parser().parse_args(argv)


@patch(f"{CLI}.setup_logging")
@patch(f"{CLI}.OutputSink")
@patch(f"{CLI}.OutputFormatter")
@patch(f"{CLI}.FormationStudy")
class TestMain:
    """Test the main function with the study mocked out."""

    def test_simulate_formed(self, mock_study, mock_formatter, mock_output_sink, mock_logging):
        """Test a successful simulation returns 0."""
        result = Mock()
        result.summary.formed = True
        mock_study.return_value.simulate.return_value = result
        mock_formatter.return_value.save_run.return_value = ["a.csv", "a.json"]

        assert main(["simulate", "s.yaml", "--t-p", "50"]) == EXIT_OK
        mock_logging.assert_called_once_with(False, False)
        mock_study.return_value.simulate.assert_called_once_with(
            mock_study.return_value.load.return_value, t_p=50.0, horizon=None, lead_in=0.0
        )
        mock_formatter.return_value.display_results.assert_called_once_with(result.summary)

    def test_simulate_not_formed(self, mock_study, mock_formatter, mock_output_sink,
                                 mock_logging):
        """Test a run without formation returns 1."""
        result = Mock()
        result.summary.formed = False
        result.summary.formation = {"reached": False, "reason": "dwell"}
        mock_study.return_value.simulate.return_value = result
        mock_formatter.return_value.save_run.return_value = []

        assert main(["simulate", "s.yaml"]) == EXIT_NOT_FORMED
        mock_output_sink.return_value.warning.assert_called_with("Platoon not formed: dwell")

    def test_config_creation(self, mock_study, mock_formatter, mock_output_sink, mock_logging):
        """Test that Config is created correctly from CLI args."""
        mock_study.return_value.sweep.return_value = ([], {})
        mock_formatter.return_value.save_sweep.return_value = []

        result = main(
            [
                "sweep",
                "s.yaml",
                "--axis",
                "tau",
                "--n",
                "2,3",
                "--samples",
                "5",
                "--range",
                "40",
                "50",
                "--output-format",
                "both",
                "--out",
                "/custom/dir",
                "--no-timestamp",
                "--workers",
                "3",
                "--quiet",
            ]
        )

        assert result == EXIT_OK
        config = mock_study.call_args[0][0]
        assert isinstance(config, Config)
        assert config.output_formats == ["json", "yaml"]
        assert config.output_directory == "/custom/dir"
        assert config.include_timestamp is False
        assert config.workers == 3
        assert config.quiet is True
        mock_study.return_value.sweep.assert_called_once_with(
            mock_study.return_value.load.return_value,
            "tau",
            (2, 3),
            5,
            seed=0,
            jitter=0.0,
            value_range=(40.0, 50.0),
        )

    @pytest.mark.parametrize(
        "error,code,prefix",
        [
            (ScenarioError("bad key", field="road.v_mn", line=3), EXIT_INVALID_INPUT,
             "Invalid input"),
            (InfeasibleError("too short", binding="control_bound"), EXIT_NOT_FORMED,
             "Infeasible"),
            (CollisionError(1.0, 2, -0.1), EXIT_INTERNAL, "Platoon formation error"),
            (OutputError("x.csv", "disk full"), EXIT_INTERNAL, "Platoon formation error"),
            (RuntimeError("boom"), EXIT_INTERNAL, "Unexpected error"),
        ],
    )
    def test_error_exit_codes(self, mock_study, mock_formatter, mock_output_sink, mock_logging,
                              error, code, prefix):
        """Test that each error family maps to its exit code."""
        mock_study.return_value.load.side_effect = error

        assert main(["validate", "s.yaml"]) == code
        mock_output_sink.return_value.error.assert_called_once_with(f"{prefix}: {error}")

    def test_invalid_args(self, mock_study, mock_formatter, mock_output_sink, mock_logging):
        """Test main returns 2 on argument errors instead of exiting."""
        assert main(["simulate", "s.yaml", "--invalid-arg"]) == EXIT_INVALID_INPUT
        mock_study.assert_not_called()

    def test_help(self, mock_study, mock_formatter, mock_output_sink, mock_logging):
        assert main(["--help"]) == EXIT_OK


@patch(f"{CLI}.setup_logging")
class TestCLIIntegration:
    """Run commands against the bundled scenario."""

    def test_validate(self, mock_logging, capsys):
        assert main(["validate", bundled_scenario_path()]) == EXIT_OK
        assert "n3_baseline is valid (3 vehicles)" in capsys.readouterr().out

    def test_feasible(self, mock_logging, capsys):
        assert main(["feasible", bundled_scenario_path()]) == EXIT_OK
        out = capsys.readouterr().out
        assert "interval: [36.170000, 58.79" in out
        assert "verdict: feasible" in out

    def test_infeasible_target(self, mock_logging, capsys):
        assert main(["feasible", bundled_scenario_path(), "--t-p", "20", "-q"]) == EXIT_NOT_FORMED
        assert "verdict: infeasible (control_bound)" in capsys.readouterr().out

    def test_solve(self, mock_logging, capsys):
        assert main(["solve", bundled_scenario_path(), "--tau-t", "42.2"]) == EXIT_OK
        out = capsys.readouterr().out
        assert "u_p: -0.402843602 m/s^2" in out
        assert "positive platoon gap" not in out

    def test_solve_warns_when_platoon_cannot_couple(self, mock_logging, capsys):
        assert main(["solve", bundled_scenario_path(), "--tau-t", "70"]) == EXIT_OK
        out = capsys.readouterr().out
        assert "positive platoon gap" in out
        assert "control_zone" in out

    def test_missing_scenario(self, mock_logging, tmp_path, capsys):
        assert main(["validate", str(tmp_path / "absent.yaml")]) == EXIT_INVALID_INPUT
        assert "cannot read scenario" in capsys.readouterr().err

    @pytest.mark.integration
    def test_simulate_writes_results(self, mock_logging, tmp_path):
        argv = ["simulate", bundled_scenario_path(), "--out", str(tmp_path), "--no-timestamp",
                "-q"]
        assert main(argv) == EXIT_OK
        assert sorted(os.listdir(tmp_path)) == ["n3_baseline_summary.json",
                                                "n3_baseline_trajectory.csv"]
