"""Embedded duals and simplicity queries."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

from .embedding import EmbeddedGraph


@dataclass(frozen=True)
class DualGraph:
    """The dual embedding together with its back-references.

    Dart ``d`` of the dual crosses dart ``d`` of the primal, so dual edge ``i``
    crosses primal edge ``i``.  Primal face ``k`` is dual vertex ``k + 1``.
    """

    graph: EmbeddedGraph
    primal: EmbeddedGraph

    def vertex_of_face(self, fid: int) -> int:
        return fid + 1

    def face_of_vertex(self, v: int) -> int:
        return v - 1

    def primal_vertex_of_face(self, dual_fid: int) -> int:
        """The primal vertex whose rotation is the dual face ``dual_fid``."""
        return self.primal.tail[self.graph.faces[dual_fid][0]]

    def edge_crossref(self) -> dict[int, int]:
        """Primal edge id to dual edge id (1-based, as written in .rot files)."""
        return {i + 1: i + 1 for i in range(self.primal.e)}


def dual(g: EmbeddedGraph) -> DualGraph:
    """Dual embedding: each face becomes a vertex whose rotation is its facial walk."""
    if g.e == 0:
        return DualGraph(EmbeddedGraph([[]], name=_dual_name(g)), g)
    rotations = [list(face) for face in g.faces]
    dg = EmbeddedGraph(rotations, edge_labels=g.edge_labels, name=_dual_name(g))
    return DualGraph(dg, g)


def _dual_name(g: EmbeddedGraph) -> str | None:
    return f"{g.name}-dual" if g.name else None


@dataclass(frozen=True)
class SimplicityReport:
    has_loop: bool
    has_parallel: bool
    # (kind, edge ids) of the first offending edge(s); 0-based edge indices
    witness: tuple | None = None

    @property
    def simple(self) -> bool:
        return not (self.has_loop or self.has_parallel)

    def __bool__(self) -> bool:
        return self.simple


def is_simple(g: EmbeddedGraph) -> SimplicityReport:
    has_loop = has_parallel = False
    witness = None
    seen: dict[tuple[int, int], int] = {}
    for i, (a, b) in enumerate(g.edges()):
        if a == b:
            if not has_loop and witness is None:
                witness = ("loop", (i,))
            has_loop = True
            continue
        key = (min(a, b), max(a, b))
        if key in seen:
            if witness is None:
                witness = ("parallel", (seen[key], i))
            has_parallel = True
        else:
            seen[key] = i
    return SimplicityReport(has_loop, has_parallel, witness)


def dual_is_simple(g: EmbeddedGraph) -> SimplicityReport:
    return is_simple(dual(g).graph)


def face_size_census(g: EmbeddedGraph) -> dict[int, int]:
    return dict(sorted(Counter(len(f) for f in g.faces).items()))


def faces_sharing(g: EmbeddedGraph, f1: int, f2: int) -> int:
    """Number of edges with one dart in face ``f1`` and the other in ``f2``."""
    fo = g.face_of
    if f1 == f2:
        return sum(1 for d in g.faces[f1] if fo[d ^ 1] == f1 and d % 2 == 0)
    return sum(1 for d in g.faces[f1] if fo[d ^ 1] == f2)
