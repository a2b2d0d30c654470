# -*- coding: utf-8 -*-
"""Runtime configuration for the platoon formation tool."""

import os
from dataclasses import dataclass
from typing import List

from .exceptions import ConfigurationError


@dataclass
class Config:
    """Runtime settings; scenario physics live in the scenario file instead."""

    # Output Configuration
    output_formats: List[str] = None
    output_directory: str = "./platoon-results"
    include_timestamp: bool = True

    # Sweep Configuration
    workers: int = 1

    # Behavior Configuration
    debug: bool = False
    quiet: bool = False

    def __post_init__(self):
        """Initialize configuration from environment variables."""
        if self.output_formats is None:
            self.output_formats = ["json"]

        self.output_directory = os.getenv("PLATOON_OUTPUT_DIR", self.output_directory)
        workers = os.getenv("PLATOON_WORKERS")
        if workers:
            try:
                self.workers = int(workers)
            except ValueError as e:
                raise ConfigurationError(f"PLATOON_WORKERS must be an integer: {workers}") from e
        if os.getenv("PLATOON_DEBUG", "").lower() == "true":
            self.debug = True
        if os.getenv("PLATOON_QUIET", "").lower() == "true":
            self.quiet = True

    def validate(self) -> None:
        """Validate configuration settings."""
        valid_formats = ["json", "yaml", "both"]
        for fmt in self.output_formats:
            if fmt not in valid_formats:
                raise ConfigurationError(
                    f"Invalid output format: {fmt}. Must be one of {valid_formats}"
                )

        if self.workers < 1:
            raise ConfigurationError("Workers must be at least 1")
