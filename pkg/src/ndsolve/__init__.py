"""Exact IP models and desk-scale solvers for graphs of bounded
neighborhood diversity: capacitated domination, sum coloring, max-q-cut."""

from .graphs import Graph, TypeGraph, TypePartition, twin_partition, type_graph

__all__ = ["Graph", "TypeGraph", "TypePartition", "twin_partition", "type_graph"]
__version__ = "0.1.0"
