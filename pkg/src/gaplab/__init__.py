"""Explicit prime-gap thresholds between consecutive powers."""

__version__ = "0.1.0"
