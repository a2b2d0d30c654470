# -*- coding: utf-8 -*-
"""Shared helper functions: number formatting, hashing and atomic writes."""
import hashlib
import json
import os
import tempfile
from typing import Any, List

from .exceptions import OutputError

SIGNIFICANT_DIGITS = 9


def format_number(value: float, digits: int = SIGNIFICANT_DIGITS) -> str:
    """Format a float with a fixed number of significant digits."""
    return f"{value:.{digits}g}"


def stable_hash(payload: Any) -> str:
    """Return a sha256 hex digest of a JSON-serializable payload.

    Keys are sorted so logically equal mappings hash identically.
    """
    canonical = json.dumps(payload, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


def parse_int_list(text: str) -> List[int]:
    """Parse a comma separated list of integers, e.g. ``"2,3,4"``."""
    try:
        values = [int(part) for part in text.split(",") if part.strip()]
    except ValueError as e:
        raise ValueError(f"Expected comma separated integers, got {text!r}") from e
    if not values:
        raise ValueError("Expected at least one integer")
    return values


def atomic_write_text(path: str, text: str) -> str:
    """Write ``text`` to ``path`` through a temporary file and a rename."""
    directory = os.path.dirname(os.path.abspath(path))
    try:
        os.makedirs(directory, exist_ok=True)
        fd, tmp_path = tempfile.mkstemp(prefix=".tmp-", dir=directory)
        try:
            with os.fdopen(fd, "w", encoding="utf-8", newline="") as handle:
                handle.write(text)
            os.replace(tmp_path, path)
        except BaseException:
            if os.path.exists(tmp_path):
                os.unlink(tmp_path)
            raise
    except OSError as e:
        raise OutputError(path, str(e)) from e
    return path
