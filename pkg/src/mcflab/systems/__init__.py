"""Fibred systems: digits, branch matrices, domains, cylinders, duals."""

from .base import BOUNDARY, OK, OUTSIDE, CylinderSpec, DualSystem, Expansion, FibredSystem, dualize
from .catalog import ALGORITHMS, registry, jump
from .domains import EPS_CELL, Box, Halfspace, Simplex, order_simplex

__all__ = [
    "ALGORITHMS",
    "BOUNDARY",
    "Box",
    "CylinderSpec",
    "DualSystem",
    "EPS_CELL",
    "Expansion",
    "FibredSystem",
    "Halfspace",
    "OK",
    "OUTSIDE",
    "Simplex",
    "dualize",
    "jump",
    "order_simplex",
    "registry",
]
