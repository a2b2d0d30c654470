# -*- coding: utf-8 -*-
"""Package version, kept apart so result writers can stamp it without import cycles."""

__version__ = "1.0.0"
