"""Predictive convex-hull collision avoidance for multi-link robots."""

__version__ = "0.1.0"
