# -*- coding: utf-8 -*-
"""Shared utilities for the platoon toolkit."""

from .exceptions import OutputError, PlatoonToolkitError
from .output_sink import OutputSink
from .utils import atomic_write_text, format_number, parse_int_list, stable_hash

__all__ = [
    "PlatoonToolkitError",
    "OutputError",
    "OutputSink",
    "atomic_write_text",
    "format_number",
    "parse_int_list",
    "stable_hash",
]
