"""Cyclic isogeny degrees of elliptic curves over a fixed quadratic field."""

__version__ = "0.1.0"
