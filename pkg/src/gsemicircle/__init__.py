"""Moments and norms of sums of G-independent semicircle variables."""

__version__ = "0.1.0"
