"""Exact computations for monotone Lagrangians built from intersections of quadrics."""

__version__ = "0.1.0"
