# -*- coding: utf-8 -*-
"""Shared output sink for managing console output across platoon tools."""

import sys
from typing import Optional, Sequence, TextIO


class OutputSink:
    """Manages console output with different verbosity levels."""

    def __init__(
        self,
        quiet: bool = False,
        debug: bool = False,
        stream: Optional[TextIO] = None,
        err_stream: Optional[TextIO] = None,
    ):
        """Initialize output sink with verbosity settings and optional streams."""
        self.quiet = quiet
        self.debug = debug
        self._stream = stream
        self._err_stream = err_stream

    @property
    def stream(self) -> TextIO:
        return self._stream or sys.stdout

    @property
    def err_stream(self) -> TextIO:
        return self._err_stream or sys.stderr

    def _emit(self, message: str) -> None:
        print(message, file=self.stream)

    def info(self, message: str) -> None:
        """Print informational message (suppressed in quiet mode)."""
        if not self.quiet:
            self._emit(message)

    def success(self, message: str) -> None:
        """Print success message (suppressed in quiet mode)."""
        if not self.quiet:
            self._emit(f"✅ {message}")

    def warning(self, message: str) -> None:
        """Print warning message (suppressed in quiet mode)."""
        if not self.quiet:
            self._emit(f"⚠️  {message}")

    def error(self, message: str) -> None:
        """Print error message (always shown, even in quiet mode)."""
        print(f"❌ {message}", file=self.err_stream)

    def debug_info(self, message: str) -> None:
        """Print debug message (only in debug mode)."""
        if self.debug and not self.quiet:
            self._emit(f"🔍 {message}")

    def progress(self, message: str) -> None:
        """Print progress message (only in debug mode)."""
        if self.debug and not self.quiet:
            self._emit(f"⏳ {message}")

    def separator(self, char: str = "=", length: int = 80) -> None:
        """Print separator line (suppressed in quiet mode)."""
        if not self.quiet:
            self._emit(char * length)

    def print_raw(self, message: str) -> None:
        """Print raw message without decoration (respects quiet mode)."""
        if not self.quiet:
            self._emit(message)

    def verdict(self, label: str, value: str) -> None:
        """Print a headline result such as u_p or a feasibility verdict.

        Verdicts are the primary output of one-shot commands, so they are shown
        even in quiet mode.
        """
        self._emit(f"{label}: {value}")

    def metric(self, name: str, value: str, unit: str = "") -> None:
        """Print metric information (debug mode only)."""
        if self.debug and not self.quiet:
            suffix = f" {unit}" if unit else ""
            self._emit(f"📊 {name}: {value}{suffix}")

    def timing(self, operation: str, duration: float) -> None:
        """Print timing information (debug mode only)."""
        if self.debug and not self.quiet:
            self._emit(f"⏱️  {operation}: {duration:.2f}s")

    def table(self, header: Sequence[str], rows: Sequence[Sequence[str]]) -> None:
        """Print a left-aligned text table (suppressed in quiet mode)."""
        if self.quiet:
            return
        widths = [len(h) for h in header]
        for row in rows:
            widths = [max(w, len(cell)) for w, cell in zip(widths, row)]
        self._emit("  ".join(h.ljust(w) for h, w in zip(header, widths)))
        self._emit("  ".join("-" * w for w in widths))
        for row in rows:
            self._emit("  ".join(cell.ljust(w) for cell, w in zip(row, widths)))
