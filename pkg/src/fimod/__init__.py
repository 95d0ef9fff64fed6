"""Exact computations with truncated FI-modules over small coefficient rings."""

__version__ = "0.1.0"
