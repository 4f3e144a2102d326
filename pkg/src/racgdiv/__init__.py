"""Divergence of 2-dimensional right-angled Coxeter groups."""

from .graph import DefiningGraph, cycle_graph, gamma_d, parse_graph, validate
from .words import RACG, RaySpec

__version__ = "0.1.0"

__all__ = ["DefiningGraph", "RACG", "RaySpec", "cycle_graph", "gamma_d", "parse_graph", "validate"]
