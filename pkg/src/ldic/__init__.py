"""Capacity engine for the two-user linear deterministic interference channel
with intermittent passive feedback."""

__version__ = "0.1.0"
