# -*- coding: utf-8 -*-
"""Shared exceptions for the mixed-traffic platoon toolkit."""


class PlatoonToolkitError(Exception):
    """Base error for every tool in the toolkit."""


class OutputError(PlatoonToolkitError):
    """Raised when a result file cannot be written."""

    def __init__(self, path: str, reason: str):
        self.path = path
        self.reason = reason
        super().__init__(f"Failed to write {path}: {reason}")
