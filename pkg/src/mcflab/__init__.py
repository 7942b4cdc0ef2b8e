"""Multidimensional continued fractions as integer-matrix fibred systems."""

__version__ = "0.1.0"
