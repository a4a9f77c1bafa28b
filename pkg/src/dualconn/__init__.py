"""Embedded graphs on orientable surfaces: duals, connectivity of duals,
surgery that controls it, explicit constructions and witness search."""

from .connectivity import isomorphic, kappa, vertex_connectivity
from .dual import dual, is_simple
from .embedding import EmbeddedGraph, parse, serialize

__all__ = [
    "EmbeddedGraph",
    "dual",
    "is_simple",
    "isomorphic",
    "kappa",
    "parse",
    "serialize",
    "vertex_connectivity",
]

__version__ = "0.1.0"
