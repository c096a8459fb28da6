"""Numerical laboratory for non-symmetric coherent-entangled states of light."""

__version__ = "0.1.0"
