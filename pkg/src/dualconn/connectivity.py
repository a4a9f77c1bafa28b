"""Vertex connectivity, minimum cuts and small-graph isomorphism.

Connectivity works on the underlying simple graph: loops are dropped and
parallel edges collapsed.  Isomorphism tests keep edge multiplicities.
"""

from __future__ import annotations

from collections import Counter, deque
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable

import networkx as nx

from .embedding import EmbeddedGraph


class IsomorphismTimeout(RuntimeError):
    """The search budget ran out before an answer was found."""


def simple_graph(g) -> nx.Graph:
    """Underlying simple graph of an embedded graph, adjacency dict or nx graph."""
    h = nx.Graph()
    if isinstance(g, EmbeddedGraph):
        h.add_nodes_from(g.vertices())
        h.add_edges_from((a, b) for a, b in g.edges() if a != b)
    elif isinstance(g, nx.Graph):
        h.add_nodes_from(g.nodes)
        h.add_edges_from((a, b) for a, b in g.edges() if a != b)
    else:
        h.add_nodes_from(g)
        h.add_edges_from((a, b) for a, nbrs in g.items() for b in nbrs if a != b)
    return h


def is_disconnected_by(h: nx.Graph, cut: Iterable) -> bool:
    cut = set(cut)
    rest = [u for u in h if u not in cut]
    if len(rest) < 2:
        return False
    seen = {rest[0]}
    queue = deque([rest[0]])
    while queue:
        u = queue.popleft()
        for w in h[u]:
            if w not in cut and w not in seen:
                seen.add(w)
                queue.append(w)
    return len(seen) < len(rest)


@dataclass(frozen=True)
class CutReport:
    kappa: int
    min_cuts: list[tuple[int, ...]] = field(default_factory=list)
    exhaustive: bool = True


def _is_complete(h: nx.Graph) -> bool:
    n = h.number_of_nodes()
    return h.number_of_edges() == n * (n - 1) // 2


def vertex_connectivity(g, max_cuts: int | None = None) -> CutReport:
    """Exact vertex connectivity and the minimum cutsets in sorted order.

    Complete graphs report ``n - 1`` with no cuts.  ``max_cuts`` truncates
    the list (``exhaustive`` is then false when cuts were dropped).
    """
    h = simple_graph(g)
    if h.number_of_nodes() < 2:
        raise ValueError("connectivity needs at least two vertices")
    if not nx.is_connected(h):
        return CutReport(0, [()], True)
    if _is_complete(h):
        return CutReport(h.number_of_nodes() - 1, [], True)
    kappa = nx.node_connectivity(h)
    cuts = sorted(tuple(sorted(c)) for c in nx.all_node_cuts(h, k=kappa))
    cuts = [c for c in cuts if len(c) == kappa and is_disconnected_by(h, c)]
    exhaustive = True
    if max_cuts is not None and len(cuts) > max_cuts:
        cuts = cuts[:max_cuts]
        exhaustive = False
    return CutReport(kappa, cuts, exhaustive)


def kappa(g) -> int:
    h = simple_graph(g)
    if h.number_of_nodes() < 2:
        raise ValueError("connectivity needs at least two vertices")
    if not nx.is_connected(h):
        return 0
    if _is_complete(h):
        return h.number_of_nodes() - 1
    return nx.node_connectivity(h)


def has_cut_of_size_at_most(g, k: int) -> tuple[int, ...] | None:
    """A vertex cut of size at most ``k`` (the first minimum cut), or None."""
    if k < 0:
        raise ValueError("k must be non-negative")
    h = simple_graph(g)
    if not nx.is_connected(h):
        return ()
    if _is_complete(h):
        return None
    report = vertex_connectivity(h, max_cuts=1)
    if report.kappa > k:
        return None
    return report.min_cuts[0]


def brute_force_connectivity(g) -> tuple[int, list[tuple[int, ...]]]:
    """Subset enumeration; only for small graphs (used as a test oracle)."""
    h = simple_graph(g)
    nodes = sorted(h)
    n = len(nodes)
    for size in range(0, n - 1):
        cuts = [c for c in combinations(nodes, size) if is_disconnected_by(h, c)]
        if cuts:
            return size, cuts
    return n - 1, []


# ----------------------------------------------------------------------
# isomorphism


@dataclass(frozen=True)
class IsoCertificate:
    mapping: dict | None

    @property
    def isomorphic(self) -> bool:
        return self.mapping is not None

    def __bool__(self) -> bool:
        return self.mapping is not None


def _multi_adjacency(g) -> dict:
    """vertex -> Counter(neighbour -> multiplicity); loops count once per loop."""
    adj: dict = {}
    if isinstance(g, EmbeddedGraph):
        for u in g.vertices():
            adj[u] = Counter()
        for a, b in g.edges():
            adj[a][b] += 1
            if a != b:
                adj[b][a] += 1
    elif isinstance(g, nx.Graph):
        for u in g.nodes:
            adj[u] = Counter()
        for a, b in g.edges():
            adj[a][b] += 1
            if a != b:
                adj[b][a] += 1
    else:
        for u, nbrs in g.items():
            adj.setdefault(u, Counter())
            for w in nbrs:
                adj[u][w] += 1
    return adj


def _refine(adj: dict, colours: dict) -> dict:
    while True:
        sigs = {
            u: (colours[u], tuple(sorted((colours[w], m) for w, m in adj[u].items())))
            for u in adj
        }
        palette = {s: k for k, s in enumerate(sorted(set(sigs.values()), key=repr))}
        new = {u: palette[sigs[u]] for u in adj}
        if len(set(new.values())) == len(set(colours.values())):
            return new
        colours = new


def isomorphic(g1, g2, budget: int = 2_000_000) -> IsoCertificate:
    """Abstract multigraph isomorphism by refinement and backtracking.

    Raises :class:`IsomorphismTimeout` when more than ``budget`` search nodes
    are visited; that outcome says nothing about isomorphism.
    """
    a1, a2 = _multi_adjacency(g1), _multi_adjacency(g2)
    if len(a1) != len(a2):
        return IsoCertificate(None)
    if sorted(sum(c.values()) for c in a1.values()) != sorted(sum(c.values()) for c in a2.values()):
        return IsoCertificate(None)
    # refine both graphs jointly so colours are comparable
    joint = {("a", u): Counter({("a", w): m for w, m in c.items()}) for u, c in a1.items()}
    joint.update({("b", u): Counter({("b", w): m for w, m in c.items()}) for u, c in a2.items()})
    colours = _refine(joint, {u: 0 for u in joint})
    c1 = {u: colours[("a", u)] for u in a1}
    c2 = {u: colours[("b", u)] for u in a2}
    if Counter(c1.values()) != Counter(c2.values()):
        return IsoCertificate(None)

    # vertex order: BFS per component starting from rarest colour
    freq = Counter(c1.values())
    order: list = []
    placed: set = set()
    for s in sorted(a1, key=lambda u: (freq[c1[u]], c1[u], repr(u))):
        if s in placed:
            continue
        placed.add(s)
        queue = deque([s])
        while queue:
            u = queue.popleft()
            order.append(u)
            for w in sorted(a1[u], key=lambda x: (freq[c1[x]], repr(x))):
                if w not in placed:
                    placed.add(w)
                    queue.append(w)
    by_colour: dict = {}
    for u in sorted(a2, key=repr):
        by_colour.setdefault(c2[u], []).append(u)

    mapping: dict = {}
    used: set = set()
    nodes = 0

    def consistent(u, x) -> bool:
        if a1[u].get(u, 0) != a2[x].get(x, 0):
            return False
        for w, m in a1[u].items():
            if w in mapping and a2[x].get(mapping[w], 0) != m:
                return False
        mapped_nbrs = sum(1 for w in a1[u] if w in mapping and w != u)
        return mapped_nbrs == sum(1 for y in a2[x] if y in used and y != x)

    def candidates(u):
        anchor = next((w for w in a1[u] if w in mapping and w != u), None)
        pool = a2[mapping[anchor]] if anchor is not None else by_colour[c1[u]]
        return [x for x in sorted(pool, key=repr) if x not in used and c2[x] == c1[u]]

    def search(k: int) -> bool:
        nonlocal nodes
        if k == len(order):
            return True
        nodes += 1
        if nodes > budget:
            raise IsomorphismTimeout(f"isomorphism search exceeded {budget} nodes")
        u = order[k]
        for x in candidates(u):
            if consistent(u, x):
                mapping[u] = x
                used.add(x)
                if search(k + 1):
                    return True
                del mapping[u]
                used.discard(x)
        return False

    import sys

    limit = sys.getrecursionlimit()
    sys.setrecursionlimit(max(limit, 4 * len(order) + 100))
    try:
        found = search(0)
    finally:
        sys.setrecursionlimit(limit)
    if not found:
        return IsoCertificate(None)
    # re-check edge by edge
    for u, c in a1.items():
        for w, m in c.items():
            if a2[mapping[u]].get(mapping[w], 0) != m:
                raise AssertionError("isomorphism search produced an invalid mapping")
    return IsoCertificate(dict(mapping))


def embedded_isomorphism(
    g1: EmbeddedGraph, g2: EmbeddedGraph, allow_mirror: bool = True
) -> dict[int, int] | None:
    """Dart bijection carrying rotations and reversal of ``g1`` onto ``g2``.

    With ``allow_mirror`` an orientation-reversing map is also accepted.
    Returns the vertex mapping, or None.
    """
    if (g1.v, g1.e) != (g2.v, g2.e) or g1.e == 0:
        if g1.e == 0 and g2.e == 0 and g1.v == g2.v == 1:
            return {1: 1}
        return None
    d0 = min(range(g1.num_darts), key=lambda d: (g1.degree(g1.tail[d]), d))
    deg0 = g1.degree(g1.tail[d0])
    for mirrored in ((False, True) if allow_mirror else (False,)):
        step2 = g2.pred if mirrored else g2.succ
        for t in range(g2.num_darts):
            if g2.degree(g2.tail[t]) != deg0:
                continue
            dmap = {d0: t}
            stack = [d0]
            ok = True
            while stack and ok:
                d = stack.pop()
                x = dmap[d]
                for a, b in ((g1.succ[d], step2[x]), (d ^ 1, x ^ 1)):
                    if a in dmap:
                        if dmap[a] != b:
                            ok = False
                            break
                    else:
                        dmap[a] = b
                        stack.append(a)
            if not ok or len(dmap) != g1.num_darts or len(set(dmap.values())) != g1.num_darts:
                continue
            vmap = {}
            for d, x in dmap.items():
                u, y = g1.tail[d], g2.tail[x]
                if vmap.setdefault(u, y) != y:
                    ok = False
                    break
            if ok:
                return vmap
    return None
