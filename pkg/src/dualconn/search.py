"""Searches over rotation systems and over small structured families.

Results are deterministic: candidates are visited in a fixed canonical order
and, when work is split across processes, the canonically first hit wins.
"""

from __future__ import annotations

import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations, permutations
from typing import Callable, Iterable, Iterator, Sequence

import networkx as nx

from .connectivity import kappa, simple_graph
from .dual import dual, is_simple
from .embedding import EmbeddedGraph, serialize
from .surgery import glue_copies


class BudgetExceeded(RuntimeError):
    pass


# ----------------------------------------------------------------------
# rotation enumeration


def _adjacency(graph) -> dict[int, list[int]]:
    if isinstance(graph, EmbeddedGraph):
        graph = simple_graph(graph)
    if isinstance(graph, nx.Graph):
        if nx.number_of_selfloops(graph):
            raise ValueError("rotation enumeration needs a simple graph")
        adj = {u: sorted(graph[u]) for u in graph}
    else:
        adj = {u: sorted(ws) for u, ws in graph.items()}
    nodes = sorted(adj)
    if nodes != list(range(1, len(nodes) + 1)):
        relabel = {u: k + 1 for k, u in enumerate(nodes)}
        adj = {relabel[u]: sorted(relabel[w] for w in ws) for u, ws in adj.items()}
    return adj


def cyclic_orders(items: Sequence[int]) -> Iterator[tuple[int, ...]]:
    """All cyclic orders of ``items``, each starting with the first item, in lexicographic order."""
    if not items:
        yield ()
        return
    head, rest = items[0], sorted(items[1:])
    for perm in permutations(rest):
        yield (head,) + perm


def first_orders(items: Sequence[int], mirror_reduced: bool) -> list[tuple[int, ...]]:
    """Cyclic orders allowed at vertex 1; with ``mirror_reduced`` one per reflection pair."""
    orders = list(cyclic_orders(items))
    if mirror_reduced:
        orders = [o for o in orders if len(o) < 3 or o[1] < o[-1]]
    return orders


def count_rotation_systems(graph, mirror_reduced: bool = True) -> int:
    adj = _adjacency(graph)
    total = len(first_orders(adj[1], mirror_reduced))
    for v, ws in adj.items():
        if v == 1:
            continue
        for k in range(2, len(ws)):
            total *= k
    return total


class _Enumerator:
    def __init__(self, adj: dict[int, list[int]], max_genus: int | None, budget: int | None):
        self.adj = adj
        self.n = len(adj)
        self.max_genus = max_genus
        self.budget = budget
        self.nodes = 0
        # darts: edge i = (a, b) with a < b owns 2i (a->b) and 2i+1 (b->a)
        self.edges = sorted((a, b) for a in adj for b in adj[a] if a < b)
        self.dart_of = {}
        for i, (a, b) in enumerate(self.edges):
            self.dart_of[(a, b)] = 2 * i
            self.dart_of[(b, a)] = 2 * i + 1
        self.nd = 2 * len(self.edges)
        self.head = [0] * self.nd
        for (a, b), d in self.dart_of.items():
            self.head[d] = b
        self.succ = [-1] * self.nd
        simple_min2 = all(len(ws) >= 2 for ws in adj.values())
        self.min_face = 3 if simple_min2 else 1
        self.euler = 2 - self.n + len(self.edges)

    def genus_lower_bound(self) -> int:
        """Genus forced by the rotations assigned so far.

        Known face successors split the darts into closed faces and open
        chains.  Every future face joins one or more open chains and has at
        least ``min_face`` darts, and a chain longer than that uses up the
        surplus on its own.
        """
        succ, m = self.succ, self.min_face
        seen = [False] * self.nd
        chains = chain_darts = surplus = 0
        for s in range(self.nd):
            # the rotation at the tail of s is open, so nothing precedes s yet
            if succ[s] != -1:
                continue
            d, length = s, 0
            while d != -1:
                seen[d] = True
                length += 1
                d = succ[d ^ 1]
            chains += 1
            chain_darts += length
            surplus += max(0, length - m)
        closed = 0
        for s in range(self.nd):
            if seen[s]:
                continue
            d = s
            while not seen[d]:
                seen[d] = True
                d = succ[d ^ 1]
            closed += 1
        fmax = closed + min(chains, (chain_darts - surplus) // m)
        lb = self.euler - fmax
        return (lb + 1) // 2 if lb > 0 else 0

    def assign(self, v: int, order: Sequence[int]) -> None:
        darts = [self.dart_of[(v, w)] for w in order]
        for j, d in enumerate(darts):
            self.succ[d] = darts[(j + 1) % len(darts)]

    def clear(self, v: int) -> None:
        for w in self.adj[v]:
            self.succ[self.dart_of[(v, w)]] = -1

    def build(self, rotation: dict[int, tuple[int, ...]], name: str | None) -> EmbeddedGraph:
        rots = [[self.dart_of[(v, w)] for w in rotation[v]] for v in range(1, self.n + 1)]
        return EmbeddedGraph(rots, name=name)

    def run(self, prefix: dict[int, tuple[int, ...]], start: int) -> Iterator[dict[int, tuple[int, ...]]]:
        rotation = dict(prefix)
        for v, order in prefix.items():
            self.assign(v, order)

        def rec(v: int):
            self.nodes += 1
            if self.budget is not None and self.nodes > self.budget:
                raise BudgetExceeded(f"rotation enumeration exceeded {self.budget} nodes")
            if self.max_genus is not None and self.genus_lower_bound() > self.max_genus:
                return
            if v > self.n:
                yield dict(rotation)
                return
            for order in cyclic_orders(self.adj[v]):
                rotation[v] = order
                self.assign(v, order)
                yield from rec(v + 1)
                self.clear(v)
            del rotation[v]

        yield from rec(start)


def enumerate_rotations(
    graph,
    genus: int | None = None,
    max_genus: int | None = None,
    budget: int | None = None,
    name: str | None = None,
    mirror_reduced: bool = True,
) -> Iterator[EmbeddedGraph]:
    """Rotation systems of a simple graph in lexicographic order of their tables.

    With ``mirror_reduced`` only one of each pair of mirror images is
    produced: vertex 1's rotation ``(a, b, ..., z)`` (starting at its smallest
    neighbour) must have ``b < z``.  With ``genus`` only embeddings of exactly
    that genus are produced; ``max_genus`` prunes partial systems whose genus
    must exceed it.  ``budget`` bounds the number of search nodes.
    """
    adj = _adjacency(graph)
    if max_genus is None:
        max_genus = genus
    en = _Enumerator(adj, max_genus, budget)
    for first in first_orders(adj[1], mirror_reduced):
        en.succ = [-1] * en.nd
        for rot in en.run({1: first}, 2):
            g = en.build(rot, name)
            if genus is None or g.genus() == genus:
                yield g


def random_rotation_system(
    rng: random.Random, max_vertices: int = 10, multigraph: bool = False
) -> EmbeddedGraph:
    """Random connected graph on 2..``max_vertices`` vertices with a uniform
    random rotation at every vertex.

    With ``multigraph`` loops and parallel edges may occur.
    """
    n = rng.randint(2, max_vertices)
    edges = [(rng.randint(1, v - 1), v) for v in range(2, n + 1)]
    pairs = [(a, b) for a in range(1, n + 1) for b in range(a if multigraph else a + 1, n + 1)]
    present = set(edges)
    for a, b in rng.sample(pairs, rng.randint(0, len(pairs))):
        if multigraph or (a, b) not in present:
            edges.append((a, b))
            present.add((a, b))
    rots: list[list[int]] = [[] for _ in range(n)]
    for i, (a, b) in enumerate(edges):
        rots[a - 1].append(2 * i)
        rots[b - 1].append(2 * i + 1)
    for r in rots:
        rng.shuffle(r)
    return EmbeddedGraph(rots)


# ----------------------------------------------------------------------
# witnesses


Predicate = Callable[[EmbeddedGraph], bool]


def pred_genus(value: int) -> Predicate:
    return lambda g: g.genus() == value


def pred_simple(g: EmbeddedGraph) -> bool:
    return g.is_simple_graph()


def pred_dual_simple(g: EmbeddedGraph) -> bool:
    return is_simple(dual(g).graph).simple


def pred_kappa_at_least(k: int) -> Predicate:
    return lambda g: kappa(g) >= k


def pred_dual_kappa_at_most(k: int) -> Predicate:
    return lambda g: kappa(dual(g).graph) <= k


def pred_dual_kappa_exactly(k: int) -> Predicate:
    return lambda g: kappa(dual(g).graph) == k


def pred_nonplanar(g: EmbeddedGraph) -> bool:
    return not nx.check_planarity(simple_graph(g))[0]


def pred_dual_nonplanar(g: EmbeddedGraph) -> bool:
    return not nx.check_planarity(simple_graph(dual(g).graph))[0]


@dataclass
class SearchSpec:
    """What to look for and where.

    ``family`` is ``"rotations"`` (all rotation systems of ``base``) or
    ``"disk-gluing"`` (two plane wheels glued along ``glue_points`` angles
    of their outer faces).
    """

    predicates: list[tuple[str, Predicate]]
    family: str = "rotations"
    base: list = field(default_factory=list)
    genus: int | None = None
    max_vertices: int = 12
    glue_points: int = 3
    node_budget: int | None = None
    seconds: float | None = None


@dataclass(frozen=True)
class Witness:
    graph: EmbeddedGraph
    report: dict
    canonical: str


@dataclass(frozen=True)
class SearchResult:
    witness: Witness | None
    candidates: int
    exhausted: bool


def evaluate(g: EmbeddedGraph, predicates: Iterable[tuple[str, Predicate]]) -> dict | None:
    report = {}
    for label, pred in predicates:
        ok = pred(g)
        report[label] = ok
        if not ok:
            return None
    return report


def canonical_form(g: EmbeddedGraph) -> str:
    return serialize(g.with_name(None), edge_ids=False)


def wheel(k: int) -> EmbeddedGraph:
    """Plane wheel: hub 1, rim 2..k+1 in counterclockwise order."""
    rim = list(range(2, k + 2))
    rot = {1: rim}
    for j, v in enumerate(rim):
        rot[v] = [rim[(j + 1) % k], 1, rim[j - 1]]
    g = EmbeddedGraph.from_rotation(rot, name=f"wheel-{k}")
    assert g.genus() == 0
    return g


def outer_face(g: EmbeddedGraph) -> int:
    """The face of a wheel avoiding the hub."""
    return next(k for k, f in enumerate(g.faces) if all(g.tail[d] != 1 for d in f))


def disk_gluings(max_vertices: int, m: int) -> Iterator[tuple[tuple, EmbeddedGraph]]:
    """Two wheels glued at ``m`` outer-face angles, in canonical parameter order.

    Parameters are ``(a, b, positions in a, positions in b, shift, mirrored)``.
    """
    for total in range(2 * (m + 1) - m, max_vertices + 1):
        for a in range(3, total):
            b = total + m - 2 - a
            if b < 3 or b > a:
                continue
            wa, wb = wheel(a), wheel(b)
            fa, fb = outer_face(wa), outer_face(wb)
            for mirrored in (False, True):
                hb = wb.mirror() if mirrored else wb
                ang_a = {wa.tail[d]: d for d in wa.faces[fa]}
                ang_b = {hb.tail[d]: (hb.pred[d] if mirrored else d) for d in wb.faces[fb]}
                for pa in combinations(range(2, a + 2), m):
                    for pb in combinations(range(2, b + 2), m):
                        for shift in range(m):
                            pairs = [(pa[j], pb[(j + shift) % m]) for j in range(m)]
                            try:
                                g = glue_copies(
                                    wa, hb, pairs,
                                    {u: ang_a[u] for u, _ in pairs},
                                    {w: ang_b[w] for _, w in pairs},
                                    name="glued",
                                )
                            except ValueError:
                                continue
                            yield (a, b, pa, pb, shift, mirrored), g


def _candidates(spec: SearchSpec) -> Iterator[tuple[tuple, EmbeddedGraph]]:
    if spec.family == "rotations":
        for k, base in enumerate(spec.base):
            for g in enumerate_rotations(base, genus=spec.genus, budget=spec.node_budget):
                yield (k,), g
    elif spec.family == "disk-gluing":
        for params, g in disk_gluings(spec.max_vertices, spec.glue_points):
            if spec.genus is None or g.genus() == spec.genus:
                yield params, g
    else:
        raise ValueError(f"unknown search family {spec.family!r}")


def find_witness(spec: SearchSpec) -> SearchResult:
    """First candidate in canonical order satisfying every predicate.

    Raises :class:`BudgetExceeded` when the node or time budget runs out
    before the candidate space is exhausted.
    """
    t0 = time.monotonic()
    seen = 0
    for params, g in _candidates(spec):
        seen += 1
        if spec.seconds is not None and time.monotonic() - t0 > spec.seconds:
            raise BudgetExceeded(f"search exceeded {spec.seconds} s after {seen} candidates")
        report = evaluate(g, spec.predicates)
        if report is not None:
            report = {"parameters": list(map(str, params)), **report}
            return SearchResult(Witness(g, report, canonical_form(g)), seen, False)
    return SearchResult(None, seen, True)


def _first_in_subtree(args) -> tuple | None:
    adj, max_genus, genus, v1_order, v2_order, predicates_key = args
    en = _Enumerator(adj, max_genus, None)
    for rot in en.run({1: v1_order, 2: v2_order}, 3):
        g = en.build(rot, None)
        if (genus is None or g.genus() == genus) and evaluate(g, PREDICATE_SETS[predicates_key]()):
            return canonical_form(g), rot
    return None


# named predicate sets usable from worker processes
PREDICATE_SETS: dict[str, Callable[[], list[tuple[str, Predicate]]]] = {
    "simple-dual": lambda: [("dual simple", pred_dual_simple)],
    "self-dual": lambda: [("dual simple", pred_dual_simple), ("self-dual", _self_dual)],
    "any": lambda: [],
}


def _self_dual(g: EmbeddedGraph) -> bool:
    from .connectivity import isomorphic

    return bool(isomorphic(dual(g).graph, g))


def find_rotation_witness(
    graph, predicates_key: str, genus: int | None = None, workers: int = 1
) -> EmbeddedGraph | None:
    """First rotation system of ``graph`` (canonical order) meeting a named predicate set.

    With several workers the choices for vertices 1 and 2 are spread over
    processes; the result is the same for every worker count.
    """
    adj = _adjacency(graph)
    if workers <= 1 or len(adj) < 2:
        preds = PREDICATE_SETS[predicates_key]()
        for g in enumerate_rotations(adj, genus=genus):
            if evaluate(g, preds) is not None:
                return g
        return None
    jobs = [
        (adj, genus, genus, o1, o2, predicates_key)
        for o1 in first_orders(adj[1], True)
        for o2 in cyclic_orders(adj[2])
    ]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        hits = [h for h in pool.map(_first_in_subtree, jobs) if h is not None]
    if not hits:
        return None
    # subtrees are in canonical order, so the first hit is the canonical minimum
    rot = hits[0][1]
    en = _Enumerator(adj, None, None)
    return en.build(rot, None)


# ----------------------------------------------------------------------
# plane graphs


def _is_new(h: nx.Graph, buckets: dict) -> bool:
    key = (h.number_of_nodes(), h.number_of_edges(), nx.weisfeiler_lehman_graph_hash(h))
    for other in buckets.get(key, []):
        if nx.is_isomorphic(h, other):
            return False
    buckets.setdefault(key, []).append(h)
    return True


def _three_connected_planar(h: nx.Graph) -> bool:
    return nx.check_planarity(h)[0] and nx.node_connectivity(h) >= 3


def polyhedral_graphs(max_n: int) -> list[nx.Graph]:
    """All 3-connected planar graphs with at most ``max_n`` vertices.

    Starts from wheels and closes under edge addition and vertex splitting,
    keeping planarity and 3-connectivity; by Tutte's wheel theorem and minor
    closure of planarity this reaches every such graph.
    """
    buckets: dict = {}
    out: list[nx.Graph] = []
    queue: list[nx.Graph] = []
    for k in range(3, max_n):
        w = nx.wheel_graph(k + 1)
        if _is_new(w, buckets):
            out.append(w)
            queue.append(w)
    while queue:
        h = queue.pop()
        nodes = sorted(h)
        new = []
        for u, v in combinations(nodes, 2):
            if not h.has_edge(u, v):
                h2 = h.copy()
                h2.add_edge(u, v)
                new.append(h2)
        if h.number_of_nodes() < max_n:
            fresh = max(nodes) + 1
            for v in nodes:
                nb = sorted(h[v])
                if len(nb) < 4:
                    continue
                for r in range(2, len(nb) - 1):
                    for part in combinations(nb, r):
                        if nb[0] not in part:
                            continue
                        h2 = h.copy()
                        h2.add_node(fresh)
                        for w in nb:
                            if w not in part:
                                h2.remove_edge(v, w)
                                h2.add_edge(fresh, w)
                        h2.add_edge(v, fresh)
                        new.append(h2)
        for h2 in new:
            if _three_connected_planar(h2) and _is_new(h2, buckets):
                h2 = nx.convert_node_labels_to_integers(h2)
                out.append(h2)
                queue.append(h2)
    return sorted(out, key=lambda x: (x.number_of_nodes(), x.number_of_edges()))


def plane_embedding(h: nx.Graph) -> EmbeddedGraph:
    """Planar rotation system of ``h`` (counterclockwise), vertices relabelled 1..n."""
    ok, emb = nx.check_planarity(h)
    if not ok:
        raise ValueError("graph is not planar")
    nodes = sorted(h)
    idx = {u: k + 1 for k, u in enumerate(nodes)}
    rot = {idx[u]: [idx[w] for w in reversed(list(emb.neighbors_cw_order(u)))] for u in nodes}
    g = EmbeddedGraph.from_rotation(rot)
    assert g.genus() == 0
    return g


@dataclass(frozen=True)
class PlaneDualSurvey:
    graphs: int
    by_order: dict[int, int]
    counterexamples: list[str]
    embeddings_checked: int


def plane_dual_survey(max_n: int, whitney_up_to: int = 0) -> PlaneDualSurvey:
    """Check every 3-connected plane graph up to ``max_n`` vertices for a
    simple, 3-connected dual.

    For graphs with at most ``whitney_up_to`` vertices all rotation systems
    are searched as well, confirming that the plane embedding is unique up
    to reflection.
    """
    graphs = polyhedral_graphs(max_n)
    by_order: dict[int, int] = {}
    bad = []
    checked = 0
    for h in graphs:
        by_order[h.number_of_nodes()] = by_order.get(h.number_of_nodes(), 0) + 1
        g = plane_embedding(h)
        dg = dual(g).graph
        if not is_simple(dg).simple or kappa(dg) < 3:
            bad.append(canonical_form(g))
        if h.number_of_nodes() <= whitney_up_to:
            embs = list(enumerate_rotations(g, genus=0))
            checked += 1
            if len(embs) != 1:
                bad.append(f"{len(embs)} plane embeddings: " + canonical_form(g))
    return PlaneDualSurvey(len(graphs), dict(sorted(by_order.items())), bad, checked)
