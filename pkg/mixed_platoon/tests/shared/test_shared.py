# -*- coding: utf-8 -*-
"""Tests for the shared output sink and helpers."""
import io

import pytest

from mixed_platoon.shared import OutputSink, format_number, parse_int_list, stable_hash


class TestOutputSink:
    """Test the OutputSink class."""

    def _sink(self, **kwargs):
        out, err = io.StringIO(), io.StringIO()
        return OutputSink(stream=out, err_stream=err, **kwargs), out, err

    def test_quiet_suppresses_everything_but_errors_and_verdicts(self):
        """Test that quiet mode keeps only errors and verdicts."""
        sink, out, err = self._sink(quiet=True, debug=True)
        sink.info("info")
        sink.success("done")
        sink.warning("careful")
        sink.progress("working")
        sink.table(["a"], [["1"]])
        sink.verdict("u_p", "-0.4")
        sink.error("broken")

        assert out.getvalue() == "u_p: -0.4\n"
        assert err.getvalue() == "❌ broken\n"

    def test_debug_only_messages(self):
        """Test that progress and metrics need debug mode."""
        sink, out, _ = self._sink()
        sink.progress("working")
        sink.metric("u_p", "-0.4", "m/s²")
        assert out.getvalue() == ""

        sink, out, _ = self._sink(debug=True)
        sink.metric("u_p", "-0.4", "m/s²")
        sink.timing("Simulation", 1.234)
        assert out.getvalue() == "📊 u_p: -0.4 m/s²\n⏱️  Simulation: 1.23s\n"

    def test_table_alignment(self):
        sink, out, _ = self._sink()
        sink.table(["axis", "runs"], [["tau", "100"]])
        assert out.getvalue().splitlines() == ["axis  runs", "----  ----", "tau   100 "]


class TestUtils:
    """Test the shared helper functions."""

    def test_parse_int_list(self):
        assert parse_int_list("2,3,4") == [2, 3, 4]
        assert parse_int_list(" 2, 5 ,") == [2, 5]

    @pytest.mark.parametrize("text", ["", "two", "2,x"])
    def test_parse_int_list_rejects(self, text):
        with pytest.raises(ValueError):
            parse_int_list(text)

    def test_stable_hash_ignores_key_order(self):
        assert stable_hash({"a": 1, "b": [1.5, 2]}) == stable_hash({"b": [1.5, 2], "a": 1})
        assert stable_hash({"a": 1}) != stable_hash({"a": 2})

    def test_format_number(self):
        assert format_number(-0.40284360189573459) == "-0.402843602"
        assert format_number(30.0) == "30"
