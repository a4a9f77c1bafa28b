"""Cutset analysis: boundary faces, the boundary multigraph, bridges and the
instance checkers built on them.

Throughout, ``V_c`` is a vertex cutset of an embedded graph ``G``.  A face of
``G`` is a boundary face when its walk meets ``V_c`` at two or more positions.
The boundary multigraph ``G_b`` has one edge per such meeting; ``bar G_b`` is
``G`` with those edges drawn into the corresponding angles.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import ceil
from typing import Iterable, Sequence

import networkx as nx

from .connectivity import is_disconnected_by, simple_graph, vertex_connectivity
from .dual import dual, is_simple
from .embedding import EmbeddedGraph
from .surgery import rebuild


class NotACutset(ValueError):
    pass


class PreconditionUnmet(ValueError):
    pass


# ----------------------------------------------------------------------
# cutset analysis


@dataclass(frozen=True)
class CutsetAnalysis:
    graph: EmbeddedGraph
    cutset: tuple[int, ...]
    components: tuple[tuple[int, ...], ...]
    boundary_faces: tuple[int, ...]
    # per component index
    boundary_faces_of: tuple[tuple[int, ...], ...]
    faces_of: tuple[tuple[int, ...], ...]

    def component_of(self, v: int) -> int | None:
        for k, comp in enumerate(self.components):
            if v in comp:
                return k
        return None


def analyze_cutset(g: EmbeddedGraph, cutset: Iterable[int]) -> CutsetAnalysis:
    vc = tuple(sorted(set(cutset)))
    if any(not 1 <= v <= g.v for v in vc):
        raise NotACutset(f"cutset {vc} has vertices outside 1..{g.v}")
    h = simple_graph(g)
    h.remove_nodes_from(vc)
    comps = sorted((tuple(sorted(c)) for c in nx.connected_components(h)), key=lambda c: c[0])
    if len(comps) < 2:
        raise NotACutset(f"removing {vc} leaves the graph connected")
    cut = set(vc)
    comp_of = {v: k for k, c in enumerate(comps) for v in c}
    fb = []
    for fid, walk in enumerate(g.faces):
        hits = sum(1 for d in walk if g.tail[d] in cut)
        if hits >= 2:
            fb.append(fid)
    fbset = set(fb)
    fbc = [[] for _ in comps]
    fc = [[] for _ in comps]
    for fid, walk in enumerate(g.faces):
        verts = {g.tail[d] for d in walk}
        touched = sorted({comp_of[v] for v in verts if v not in cut})
        if fid in fbset:
            for k in touched:
                fbc[k].append(fid)
        elif len(touched) == 1:
            fc[touched[0]].append(fid)
        elif len(touched) > 1:
            raise AssertionError(f"face {fid} meets two components but is not a boundary face")
    return CutsetAnalysis(
        g, vc, tuple(comps), tuple(fb), tuple(map(tuple, fbc)), tuple(map(tuple, fc))
    )


# ----------------------------------------------------------------------
# boundary multigraph


@dataclass(frozen=True)
class BoundaryMultigraph:
    analysis: CutsetAnalysis
    # G plus the G_b edges; vertices 1..n are those of G, then one per boundary face
    bar: EmbeddedGraph
    # edge ids of bar that belong to G_b
    gb_edges: frozenset[int]
    face_vertex: dict[int, int]
    gb: EmbeddedGraph
    genus_bar: int

    @property
    def genus_gb(self) -> list[int]:
        return self.gb.component_genera()

    def gb_connected(self) -> bool:
        return self.gb.is_connected()


@dataclass(frozen=True)
class Induced:
    """Subgraph with the embedding induced by its host."""

    graph: EmbeddedGraph
    # host dart -> subgraph dart, and back
    to_sub: dict[int, int]
    to_host: dict[int, int]
    # subgraph vertex -> host vertex
    host_vertex: tuple[int, ...]


def induced_subgraph(host: EmbeddedGraph, edge_ids: Iterable[int]) -> Induced:
    keep = set(edge_ids)
    if not keep:
        raise ValueError("subgraph needs at least one edge")
    rots = {}
    for v in host.vertices():
        darts = [d for d in host.darts_at(v) if (d >> 1) in keep]
        if darts:
            rots[v] = darts
    sub, dmap = rebuild(host, rots, name=None, allow_disconnected=True)
    hv = tuple(sorted(rots))
    return Induced(sub, dmap, {b: a for a, b in dmap.items()}, hv)


def boundary_multigraph(a: CutsetAnalysis) -> BoundaryMultigraph:
    g = a.graph
    cut = set(a.cutset)
    rots = {v: list(g.darts_at(v)) for v in g.vertices()}
    face_vertex = {}
    labels = {}
    nd = g.num_darts
    for k, fid in enumerate(a.boundary_faces):
        fv = g.n + 1 + k
        face_vertex[fid] = fv
        labels[fv] = ("face", fid)
        at_face = []
        for d in g.faces[fid]:
            if g.tail[d] not in cut:
                continue
            # the new edge sits in the angle that ends with d
            rot = rots[g.tail[d]]
            rot.insert(rot.index(d), nd)
            at_face.append(nd + 1)
            nd += 2
        rots[fv] = at_face[::-1]
    edge_labels = {i: ("gb", i) for i in range(g.e, nd // 2)}
    bar, _ = rebuild(g, rots, labels, edge_labels, name=g.name)
    gb_edges = frozenset(range(g.e, bar.e))
    if bar.genus() != g.genus():
        raise AssertionError("bar G_b has a different genus than G")
    gb = induced_subgraph(bar, gb_edges).graph
    return BoundaryMultigraph(a, bar, gb_edges, face_vertex, gb, bar.genus())


# ----------------------------------------------------------------------
# bridges


@dataclass(frozen=True)
class Bridge:
    kind: str  # "chord" or "component"
    inner: tuple[int, ...]  # host vertices not in the subgraph
    edges: tuple[int, ...]  # host edge ids
    attachments: tuple[int, ...]  # host vertices of the subgraph


@dataclass(frozen=True)
class InternalComponent:
    graph: EmbeddedGraph
    # vertex of the internal component -> host vertex it copies
    origin: tuple[int, ...]
    genus: int
    # faces of the internal component that are faces of the host
    interior_faces: int


SIMPLE_PLANE = "simple internally plane"
SIMPLE_NONPLANE = "simple internally non-plane"
BRIDGED = "bridged"


@dataclass
class BridgeDecomposition:
    host: EmbeddedGraph
    sub: Induced
    bridges: list[Bridge]
    faces_of_bridge: list[frozenset[int]]
    bridges_in_face: dict[int, list[int]]
    classification: dict[int, str]
    internal: dict[int, InternalComponent] = field(default_factory=dict)

    @property
    def s_np(self) -> int:
        return sum(1 for c in self.classification.values() if c == SIMPLE_NONPLANE)

    @property
    def b(self) -> int:
        return sum(1 for c in self.classification.values() if c == BRIDGED)

    def face_host_vertices(self, fid: int) -> list[int]:
        g = self.sub.graph
        return [self.sub.host_vertex[g.tail[d] - 1] for d in g.faces[fid]]


def _angle_face(host: EmbeddedGraph, sub: Induced, x: int) -> tuple[int, int]:
    """Face of the subgraph and walk position of the angle holding host dart ``x``."""
    d = host.succ[x]
    while d not in sub.to_sub:
        d = host.succ[d]
    sd = sub.to_sub[d]
    fid = sub.graph.face_of[sd]
    return fid, sub.graph.faces[fid].index(sd)


def decompose_bridges(host: EmbeddedGraph, sub_edges: Iterable[int]) -> BridgeDecomposition:
    """Bridges of the subgraph spanned by ``sub_edges`` and the face classes."""
    sub = induced_subgraph(host, sub_edges)
    vs = set(sub.host_vertex)
    inner_edges = [i for i in range(host.e) if 2 * i not in sub.to_sub]
    # components of host - V(sub)
    comp_of: dict[int, int] = {}
    comps: list[list[int]] = []
    for s in host.vertices():
        if s in vs or s in comp_of:
            continue
        comp_of[s] = len(comps)
        stack, comp = [s], []
        while stack:
            u = stack.pop()
            comp.append(u)
            for w in host.neighbours(u):
                if w not in vs and w not in comp_of:
                    comp_of[w] = len(comps)
                    stack.append(w)
        comps.append(sorted(comp))
    bridges: list[Bridge] = []
    bridge_of_edge: dict[int, int] = {}
    comp_edges: list[list[int]] = [[] for _ in comps]
    for i in inner_edges:
        a, b = host.edge_ends(i)
        if a in vs and b in vs:
            bridge_of_edge[i] = len(bridges)
            bridges.append(Bridge("chord", (), (i,), tuple(sorted({a, b}))))
        else:
            comp_edges[comp_of[a if a not in vs else b]].append(i)
    for k, comp in enumerate(comps):
        att = sorted({x for i in comp_edges[k] for x in host.edge_ends(i) if x in vs})
        for i in comp_edges[k]:
            bridge_of_edge[i] = len(bridges)
        bridges.append(Bridge("component", tuple(comp), tuple(comp_edges[k]), tuple(att)))

    faces_of: list[set[int]] = [set() for _ in bridges]
    for i, bi in bridge_of_edge.items():
        for x in (2 * i, 2 * i + 1):
            if host.tail[x] in vs:
                faces_of[bi].add(_angle_face(host, sub, x)[0])
    nfaces = len(sub.graph.faces)
    inside: dict[int, list[int]] = {f: [] for f in range(nfaces)}
    for bi, fs in enumerate(faces_of):
        for f in fs:
            inside[f].append(bi)
    classes: dict[int, str] = {}
    internal: dict[int, InternalComponent] = {}
    for f in range(nfaces):
        if any(len(faces_of[bi]) > 1 for bi in inside[f]):
            classes[f] = BRIDGED
            continue
        ic = internal_component(host, sub, f, [bridges[bi] for bi in inside[f]])
        internal[f] = ic
        classes[f] = SIMPLE_PLANE if ic.genus == 0 else SIMPLE_NONPLANE
    return BridgeDecomposition(
        host, sub, bridges, [frozenset(s) for s in faces_of], inside, classes, internal
    )


def internal_component(
    host: EmbeddedGraph, sub: Induced, fid: int, bridges: Sequence[Bridge]
) -> InternalComponent:
    """The face's boundary with repeated vertices split, plus its bridges."""
    sg = sub.graph
    walk = [sub.to_host[d] for d in sg.faces[fid]]
    m = len(walk)
    bridge_edges = sorted(i for b in bridges for i in b.edges)
    eidx = {i: m + k for k, i in enumerate(bridge_edges)}

    def new_dart(x: int) -> int:
        return 2 * eidx[x >> 1] + (x & 1)

    # copy vertices 0..m-1, then inner vertices
    inner = sorted({v for b in bridges for v in b.inner})
    rotations: list[list[int]] = []
    origin: list[int] = []
    for j in range(m):
        incoming = walk[j - 1] ^ 1
        row = [2 * ((j - 1) % m) + 1]
        x = host.succ[incoming]
        while x != walk[j]:
            row.append(new_dart(x))
            x = host.succ[x]
        row.append(2 * j)
        rotations.append(row)
        origin.append(host.tail[walk[j]])
    for v in inner:
        rotations.append([new_dart(x) for x in host.darts_at(v)])
        origin.append(v)
    ic = EmbeddedGraph(rotations, vertex_labels=origin)
    cycle = set(range(2 * m))
    interior = sum(1 for face in ic.faces if not cycle.intersection(face))
    return InternalComponent(ic, tuple(origin), ic.genus(), interior)


# ----------------------------------------------------------------------
# lemma checkers


@dataclass(frozen=True)
class JordanResult:
    s_np: int
    b: int
    genus: int
    sub_genus: int

    @property
    def holds(self) -> bool:
        return self.s_np + Fraction(self.b, 2) <= self.genus - self.sub_genus


def check_jordan(g: EmbeddedGraph, sub_edges: Iterable[int]) -> JordanResult:
    dec = decompose_bridges(g, sub_edges)
    if not dec.sub.graph.is_connected():
        raise PreconditionUnmet("the subgraph must be connected")
    return JordanResult(dec.s_np, dec.b, g.genus(), dec.sub.graph.genus())


def random_connected_edges(g: EmbeddedGraph, rng: random.Random) -> list[int]:
    """A random connected edge set grown from a random edge."""
    target = rng.randint(1, g.e)
    start = rng.randrange(g.e)
    chosen = {start}
    verts = set(g.edge_ends(start))
    frontier = [i for v in verts for i in {d >> 1 for d in g.darts_at(v)} if i not in chosen]
    while len(chosen) < target and frontier:
        i = frontier.pop(rng.randrange(len(frontier)))
        if i in chosen:
            continue
        chosen.add(i)
        for v in g.edge_ends(i):
            if v not in verts:
                verts.add(v)
                frontier.extend(d >> 1 for d in g.darts_at(v) if (d >> 1) not in chosen)
    return sorted(chosen)


@dataclass(frozen=True)
class BoundaryCut:
    cut: tuple[int, ...]  # dual vertices (face id + 1)
    side_a: tuple[int, ...]
    side_b: tuple[int, ...]


def check_boundary_cut(a: CutsetAnalysis) -> BoundaryCut:
    """Removing the boundary faces of the first component with inner faces
    disconnects the dual."""
    with_faces = [k for k, fc in enumerate(a.faces_of) if fc]
    if len(with_faces) < 2:
        raise PreconditionUnmet("need two components with faces free of the cutset")
    k1, k2 = with_faces[0], with_faces[1]
    dg = simple_graph(dual(a.graph).graph)
    cut = tuple(f + 1 for f in a.boundary_faces_of[k1])
    rest = dg.copy()
    rest.remove_nodes_from(cut)
    f1, f2 = a.faces_of[k1][0] + 1, a.faces_of[k2][0] + 1
    if nx.has_path(rest, f1, f2):
        raise AssertionError("boundary faces of a component do not separate the dual")
    side_a = tuple(sorted(nx.node_connected_component(rest, f1)))
    side_b = tuple(sorted(set(rest) - set(side_a)))
    return BoundaryCut(cut, side_a, side_b)


def small_face_bound(k: int, genus: int, n2: int, second_form: bool = False) -> Fraction:
    """Lower bound on the number of faces of size below ``2k``."""
    if second_form:
        if k <= 2:
            raise ValueError("second form needs k > 2")
        return Fraction(k - 1, k - 2) - Fraction(2 * k, k - 2) * genus + n2
    if k <= 1:
        raise ValueError("k must exceed 1")
    return Fraction(k, k - 1) - Fraction(2 * k, k - 1) * genus + Fraction(k - 2, k - 1) * n2


@dataclass(frozen=True)
class SmallFaceCheck:
    i: int
    bound: Fraction
    required: int

    @property
    def holds(self) -> bool:
        return self.i >= self.required


def check_small_face_bound(gb: EmbeddedGraph, k: int, two_face_cap: bool = False) -> SmallFaceCheck:
    """Count faces of size below ``2k`` in a one-vertex-side bipartite embedding.

    The side with a single vertex is the vertex of largest degree; with
    ``two_face_cap`` the second form is used, which needs at most one face of
    size 2.
    """
    if not gb.is_connected():
        raise PreconditionUnmet("the multigraph must be connected")
    h = simple_graph(gb)
    if any(a == b for a, b in gb.edges()) or not nx.is_bipartite(h):
        raise PreconditionUnmet("need a loopless bipartite multigraph")
    colour = nx.bipartite.color(h)
    sides = [[v for v in gb.vertices() if colour[v] == c] for c in (0, 1)]
    single = [s for s in sides if len(s) == 1]
    if not single:
        raise PreconditionUnmet("one side must be a single vertex")
    v1 = single[0][0]
    v2 = [v for v in gb.vertices() if v != v1]
    if any(gb.degree(v) < 2 for v in v2):
        raise PreconditionUnmet("vertices on the large side need degree at least 2")
    sizes = [len(f) for f in gb.faces]
    if two_face_cap and sizes.count(2) > 1:
        raise PreconditionUnmet("more than one face of size 2")
    i = sum(1 for s in sizes if s < 2 * k)
    bound = small_face_bound(k, gb.genus(), len(v2), two_face_cap)
    return SmallFaceCheck(i, bound, max(0, ceil(bound)))


def _require_simple_pair(g: EmbeddedGraph) -> None:
    if not g.is_simple_graph():
        raise PreconditionUnmet("graph must be simple")
    if not is_simple(dual(g).graph):
        raise PreconditionUnmet("dual must be simple")


@dataclass(frozen=True)
class Verdict:
    applicable: bool
    holds: bool
    detail: dict


def check_lemma_atleast5(bm: BoundaryMultigraph) -> Verdict:
    a = bm.analysis
    if len(a.cutset) != 1:
        raise PreconditionUnmet("needs a 1-cut")
    _require_simple_pair(a.graph)
    if not bm.gb.is_connected():
        raise AssertionError("G_b of a 1-cut is disconnected")
    empty = [k for k, fc in enumerate(a.faces_of) if not fc]
    holds = not empty or len(a.boundary_faces) >= 5
    return Verdict(bool(empty), holds, {"components_without_faces": empty,
                                        "boundary_faces": len(a.boundary_faces)})


def check_lemma_2face(bm: BoundaryMultigraph, dec: BridgeDecomposition | None = None) -> Verdict:
    a = bm.analysis
    _require_simple_pair(a.graph)
    dec = dec or decompose_bridges(bm.bar, bm.gb_edges)
    results = []
    holds = True
    for f, walk in enumerate(dec.sub.graph.faces):
        if len(walk) != 2:
            continue
        comps = [bi for bi in dec.bridges_in_face[f] if dec.bridges[bi].kind == "component"]
        ok = len(comps) == 1
        if ok:
            k = a.component_of(dec.bridges[comps[0]].inner[0])
            ok = bool(a.faces_of[k])
        holds &= ok
        results.append((f, len(comps), ok))
    return Verdict(bool(results), holds, {"two_faces": results})


def check_in_different_faces(dec: BridgeDecomposition) -> Verdict:
    """No face of the subgraph has two different bridges inside it."""
    crowded = {f: bs for f, bs in dec.bridges_in_face.items() if len(bs) > 1}
    return Verdict(True, not crowded, {"faces_with_several_bridges": crowded})


def check_bridges_have_cycles(bm: BoundaryMultigraph, dec: BridgeDecomposition) -> Verdict:
    """For a 1-cut every bridge contains a cycle."""
    if len(bm.analysis.cutset) != 1:
        raise PreconditionUnmet("needs a 1-cut")
    _require_simple_pair(bm.analysis.graph)
    bad = []
    for bi, b in enumerate(dec.bridges):
        h = nx.Graph(bm.bar.edge_ends(i) for i in b.edges)
        if nx.is_forest(h):
            bad.append(bi)
    return Verdict(True, not bad, {"acyclic_bridges": bad})


def classify_bridge_faces(bm: BoundaryMultigraph, dec: BridgeDecomposition) -> dict[tuple[int, int], str]:
    """Label every (bridge, face) incidence with one of three classes.

    ``a``: simple face whose internal component has a face of G;
    ``b``: bridged face; ``c``: simple internally non-plane face.
    Incidences fitting none of them get ``None``.
    """
    out = {}
    for bi, fs in enumerate(dec.faces_of_bridge):
        for f in fs:
            cls = dec.classification[f]
            if cls == BRIDGED:
                out[(bi, f)] = "b"
            elif cls == SIMPLE_NONPLANE:
                out[(bi, f)] = "c"
            elif dec.internal[f].interior_faces > 0:
                out[(bi, f)] = "a"
            else:
                out[(bi, f)] = None
    return out


# ----------------------------------------------------------------------
# small dual cuts


@dataclass(frozen=True)
class DualCut:
    cut: tuple[int, ...]  # dual vertex ids
    bound: int
    primal_cut: tuple[int, ...]
    constructive: bool
    confirmed: bool


def dual_cut_bound(genus: int, cut_size: int) -> int:
    if cut_size == 1 and genus == 1:
        return 3
    if cut_size == 1 and genus == 2:
        return 5
    if cut_size == 2 and genus == 1:
        return 5
    raise PreconditionUnmet(f"no bound known for a {cut_size}-cut at genus {genus}")


def _primal_cuts(g: EmbeddedGraph, size: int) -> list[tuple[int, ...]]:
    h = simple_graph(g)
    return [c for c in combinations(sorted(h), size) if is_disconnected_by(h, c)]


def boundary_face_cuts(g: EmbeddedGraph, cutset: Sequence[int]) -> list[tuple[int, ...]]:
    """Dual cut candidates from simple faces of G_b.

    A simple face of G_b whose internal component holds a face of G, while
    some face of G lies outside it, yields the boundary faces on it as a dual
    cutset.
    """
    a = analyze_cutset(g, cutset)
    bm = boundary_multigraph(a)
    dec = decompose_bridges(bm.bar, bm.gb_edges)
    fv_to_face = {v: f for f, v in bm.face_vertex.items()}
    inner_total = g.f - len(a.boundary_faces)
    out = []
    for f, cls in sorted(dec.classification.items()):
        if cls == BRIDGED:
            continue
        ic = dec.internal[f]
        if ic.interior_faces == 0 or ic.interior_faces >= inner_total:
            continue
        faces = sorted({fv_to_face[v] for v in dec.face_host_vertices(f) if v in fv_to_face})
        out.append(tuple(x + 1 for x in faces))
    return out


def find_small_dual_cut(g: EmbeddedGraph, exhaustive_fallback: bool = True) -> DualCut:
    """A dual cutset within the bound for the genus and the primal cut size."""
    if not is_simple(dual(g).graph):
        raise PreconditionUnmet("dual must be simple")
    genus = g.genus()
    primal = None
    for size in (1, 2):
        cuts = _primal_cuts(g, size)
        if cuts:
            primal = cuts
            break
    if primal is None:
        raise PreconditionUnmet("graph has no cut of size at most 2")
    bound = dual_cut_bound(genus, len(primal[0]))
    dg = simple_graph(dual(g).graph)
    best = None
    for pc in primal:
        for cand in boundary_face_cuts(g, pc):
            if len(cand) <= bound and is_disconnected_by(dg, cand):
                key = (len(cand), cand)
                if best is None or key < best[0]:
                    best = (key, pc)
    if best is not None:
        cut, pc, constructive = best[0][1], best[1], True
    else:
        if not exhaustive_fallback:
            raise AssertionError("no boundary-face cut found")
        report = vertex_connectivity(dg, max_cuts=1)
        if report.kappa > bound:
            raise AssertionError(f"dual connectivity {report.kappa} exceeds the bound {bound}")
        cut, pc, constructive = report.min_cuts[0], primal[0], False
    confirmed = is_disconnected_by(dg, cut) and vertex_connectivity(dg).kappa <= len(cut)
    return DualCut(tuple(cut), bound, pc, constructive, confirmed)
