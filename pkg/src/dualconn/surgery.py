"""Operations that change an embedding.

All operations return new graphs.  Darts keep their identity where the
operation allows it, so callers can follow edges through a modification
via ``edge_labels``.
"""

from __future__ import annotations

from collections import Counter, deque
from dataclasses import dataclass
from typing import Hashable, Iterable, Mapping, Sequence

from .connectivity import is_disconnected_by, isomorphic, simple_graph
from .dual import SimplicityReport, dual, faces_sharing, is_simple
from .embedding import Disconnected, EmbeddedGraph


class SurgeryError(ValueError):
    pass


class SameVertex(SurgeryError):
    pass


class DegreeNot3(SurgeryError):
    pass


class SharedNeighbours(SurgeryError):
    pass


class ProducesLoopOrParallel(SurgeryError):
    pass


class ChordOnFace(SurgeryError):
    pass


class FacesNotDistinct(SurgeryError):
    pass


class NoCandidateChord(SurgeryError):
    pass


class Disconnects(SurgeryError):
    pass


class ParallelEdgeCreated(SurgeryError):
    pass


@dataclass(frozen=True)
class Angle:
    """Two consecutive outgoing darts ``first, second`` around ``vertex``."""

    vertex: int
    first: int
    second: int

    @classmethod
    def before(cls, g: EmbeddedGraph, d: int) -> "Angle":
        """The angle that ends with dart ``d``."""
        return cls(g.tail[d], g.pred[d], d)

    @classmethod
    def after(cls, g: EmbeddedGraph, d: int) -> "Angle":
        """The angle that starts with dart ``d``."""
        return cls(g.tail[d], d, g.succ[d])

    def check(self, g: EmbeddedGraph) -> None:
        if g.tail[self.second] != self.vertex or g.succ[self.first] != self.second:
            raise SurgeryError(f"{self} is not an angle of the graph")

    def face(self, g: EmbeddedGraph) -> int:
        return g.face_of[self.second]


@dataclass(frozen=True)
class SurgeryOutcome:
    graph: EmbeddedGraph
    genus_delta: int
    simplicity: SimplicityReport


def rebuild(
    g: EmbeddedGraph,
    rotations: Mapping[int, Sequence[int]],
    vertex_labels: Mapping[int, Hashable] | None = None,
    new_edge_labels: Mapping[int, Hashable] | None = None,
    name: str | None = None,
    allow_disconnected: bool = False,
) -> tuple[EmbeddedGraph, dict[int, int]]:
    """Assemble a graph from rotations given as lists of darts.

    Keys of ``rotations`` are vertex keys ordered by sort order; darts are
    darts of ``g`` or new darts ``>= g.num_darts`` whose edges are labelled
    through ``new_edge_labels`` (keyed by edge index ``d >> 1``).  Returns the
    graph and the map from the darts used to the new dart ids.
    """
    used = sorted({d >> 1 for rot in rotations.values() for d in rot})
    index = {i: k for k, i in enumerate(used)}
    dmap = {}
    for rot in rotations.values():
        for d in rot:
            dmap[d] = 2 * index[d >> 1] + (d & 1)
    if len(dmap) != 2 * len(used):
        raise SurgeryError("rotation darts are not closed under reversal")
    new_edge_labels = new_edge_labels or {}
    labels = [
        g.edge_labels[i] if i < g.e else new_edge_labels.get(i, ("new", i)) for i in used
    ]
    keys = sorted(rotations)
    vlabels = [
        (vertex_labels or {}).get(k, g.vertex_labels[k - 1] if isinstance(k, int) and k <= g.n else k)
        for k in keys
    ]
    new = EmbeddedGraph(
        [[dmap[d] for d in rotations[k]] for k in keys],
        labels,
        vlabels,
        name=name,
        allow_disconnected=allow_disconnected,
    )
    return new, dmap


def _rotations(g: EmbeddedGraph) -> dict[int, list[int]]:
    return {v: list(g.darts_at(v)) for v in g.vertices()}


def identify_angles(g: EmbeddedGraph, a1: Angle, a2: Angle) -> SurgeryOutcome:
    """Merge the two angle vertices into one with concatenated rotation.

    The merged vertex keeps the number of ``a1.vertex``; its rotation runs
    through ``a1.vertex`` starting at ``a1.second`` and then through
    ``a2.vertex`` starting at ``a2.second``.
    """
    if a1.vertex == a2.vertex:
        raise SameVertex("angles must be at different vertices")
    a1.check(g)
    a2.check(g)
    same_face = a1.face(g) == a2.face(g)
    rots = _rotations(g)
    rots[a1.vertex] = g.rotation_from(a1.vertex, a1.second) + g.rotation_from(a2.vertex, a2.second)
    del rots[a2.vertex]
    new, _ = rebuild(g, rots, name=g.name)
    delta = new.genus() - g.genus()
    expected = 0 if same_face else 1
    if delta != expected:
        raise AssertionError(f"angle identification changed genus by {delta}, expected {expected}")
    return SurgeryOutcome(new, delta, is_simple(new))


# ----------------------------------------------------------------------
# H-operation


@dataclass(frozen=True)
class HRoles:
    x: int
    y: int
    v: int
    w_prime: int
    w: int
    v_prime: int
    # angles identified in the two steps
    at_v: Angle
    at_v_prime: Angle
    at_w: Angle
    at_w_prime: Angle


def h_roles(g: EmbeddedGraph, x: int, y: int) -> HRoles:
    """Read off the neighbourhood roles of the directed edge ``(x, y)``.

    Around ``x`` the rotation is ``y, w', v`` and around ``y`` it is
    ``x, w, v'``.
    """
    dxy = next((d for d in g.darts_at(x) if g.head(d) == y), None)
    if dxy is None:
        raise SurgeryError(f"{x} and {y} are not adjacent")
    if g.degree(x) != 3 or g.degree(y) != 3:
        raise DegreeNot3(f"H-operation needs degree 3 at both ends of {{{x}, {y}}}")
    dyx = dxy ^ 1
    _, x_wp, x_v = g.rotation_from(x, dxy)
    _, y_w, y_vp = g.rotation_from(y, dyx)
    v, wp, w, vp = g.head(x_v), g.head(x_wp), g.head(y_w), g.head(y_vp)
    if len({x, y, v, wp, w, vp}) != 6:
        raise SharedNeighbours(f"neighbours of {x} and {y} are not pairwise different")
    d_vx, d_wpx, d_wy, d_vpy = x_v ^ 1, x_wp ^ 1, y_w ^ 1, y_vp ^ 1
    return HRoles(
        x, y, v, wp, w, vp,
        at_v=Angle.before(g, d_vx),
        at_v_prime=Angle.before(g, d_vpy),
        at_w=Angle.after(g, d_wy),
        at_w_prime=Angle.after(g, d_wpx),
    )


def h_operation(
    g: EmbeddedGraph, x: int, y: int, require_simple: bool = True, check: bool = True
) -> SurgeryOutcome:
    """Apply the H-operation to the edge ``{x, y}``, oriented as ``(x, y)``.

    With ``check`` the outcome is verified: genus grows by one, the two merged
    vertices separate ``x`` and ``y`` from the rest, and the dual is unchanged
    up to isomorphism.
    """
    roles = h_roles(g, x, y)
    rots = _rotations(g)
    first = g.rotation_from(roles.v, roles.at_v.second) + g.rotation_from(
        roles.v_prime, roles.at_v_prime.second
    )
    second = g.rotation_from(roles.w, roles.at_w.second) + g.rotation_from(
        roles.w_prime, roles.at_w_prime.second
    )
    rots[roles.v] = first
    rots[roles.w] = second
    del rots[roles.v_prime]
    del rots[roles.w_prime]
    new, _ = rebuild(g, rots, name=f"{g.name}-h" if g.name else None)
    simplicity = is_simple(new)
    if require_simple and not simplicity.simple:
        raise ProducesLoopOrParallel(f"H-operation on {{{x}, {y}}} creates {simplicity.witness}")
    delta = new.genus() - g.genus()
    if check:
        if delta != 1:
            raise AssertionError(f"H-operation changed genus by {delta}")
        pos = {lab: k + 1 for k, lab in enumerate(new.vertex_labels)}
        sep = (pos[g.vertex_labels[roles.v - 1]], pos[g.vertex_labels[roles.w - 1]])
        h = simple_graph(new)
        if not is_disconnected_by(h, sep):
            raise AssertionError("merged vertices do not form a cut")
        if not isomorphic(dual(new).graph, dual(g).graph):
            raise AssertionError("dual changed under the H-operation")
    return SurgeryOutcome(new, delta, simplicity)


def merged_pair(g: EmbeddedGraph, result: EmbeddedGraph, x: int, y: int) -> tuple[int, int]:
    """Vertex ids in ``result`` of the two merged vertices of ``h_operation(g, x, y)``."""
    roles = h_roles(g, x, y)
    pos = {lab: k + 1 for k, lab in enumerate(result.vertex_labels)}
    return pos[g.vertex_labels[roles.v - 1]], pos[g.vertex_labels[roles.w - 1]]


def h_precondition(g: EmbeddedGraph, v1: int) -> bool:
    """Sufficient condition for every H-operation at ``v1`` to stay simple.

    All faces have size at least 5, the dual is simple, and every vertex at
    distance at most 2 from ``v1`` has degree 3.
    """
    if any(len(f) < 5 for f in g.faces):
        return False
    if not is_simple(dual(g).graph).simple:
        return False
    dist = {v1: 0}
    queue = deque([v1])
    while queue:
        u = queue.popleft()
        if g.degree(u) != 3:
            return False
        if dist[u] == 2:
            continue
        for w in g.neighbours(u):
            if w not in dist:
                dist[w] = dist[u] + 1
                queue.append(w)
    return True


# ----------------------------------------------------------------------
# chord exchange


def _edge_between(g: EmbeddedGraph, v: int, w: int) -> int:
    found = [d >> 1 for d in g.darts_at(v) if g.head(d) == w]
    if len(found) != 1:
        raise SurgeryError(f"expected exactly one edge between {v} and {w}, found {len(found)}")
    return found[0]


def chord_exchange(
    g: EmbeddedGraph,
    v: int,
    w: int,
    face: int,
    at_v: int | None = None,
    at_w: int | None = None,
) -> SurgeryOutcome:
    """Move the edge ``{v, w}`` so that it subdivides ``face``.

    The edge is inserted before dart ``at_v`` around ``v`` and before
    ``at_w`` around ``w``; by default the first darts of the face walk that
    leave ``v`` and ``w``.
    """
    if v == w:
        raise SurgeryError("chord endpoints must differ")
    i = _edge_between(g, v, w)
    dv, dw = (2 * i, 2 * i + 1) if g.tail[2 * i] == v else (2 * i + 1, 2 * i)
    fo = g.face_of
    if fo[dv] == face or fo[dw] == face:
        raise ChordOnFace(f"{{{v}, {w}}} is an edge of face {face}")
    if fo[dv] == fo[dw]:
        raise FacesNotDistinct(f"both sides of {{{v}, {w}}} lie in face {fo[dv]}")
    walk = g.faces[face]
    if at_v is None:
        at_v = next((d for d in walk if g.tail[d] == v), None)
    if at_w is None:
        at_w = next((d for d in walk if g.tail[d] == w), None)
    if at_v is None or at_w is None:
        raise SurgeryError(f"{v} and {w} must both lie on face {face}")
    if fo[at_v] != face or fo[at_w] != face or g.tail[at_v] != v or g.tail[at_w] != w:
        raise SurgeryError("insertion darts must leave v and w inside the face")
    rots = _rotations(g)
    for u, d, before in ((v, dv, at_v), (w, dw, at_w)):
        rot = rots[u]
        rot.remove(d)
        rot.insert(rot.index(before), d)
    new, _ = rebuild(g, rots, name=g.name)
    if (new.v, new.e, new.f) != (g.v, g.e, g.f):
        raise AssertionError("chord exchange changed the vertex, edge or face count")
    return SurgeryOutcome(new, 0, is_simple(new))


def pentagon_pairs_sharing_two(g: EmbeddedGraph) -> int:
    pents = [k for k, f in enumerate(g.faces) if len(f) == 5]
    return sum(
        1
        for a in range(len(pents))
        for b in range(a + 1, len(pents))
        if faces_sharing(g, pents[a], pents[b]) >= 2
    )


def _measure(g: EmbeddedGraph) -> tuple:
    sizes = Counter(len(f) for f in g.faces)
    top = max(sizes)
    rep = is_simple(dual(g).graph)
    defects = 0
    if not rep.simple:
        dg = dual(g).graph
        pairs = Counter((min(a, b), max(a, b)) for a, b in dg.edges())
        defects = sum(m - 1 for (a, b), m in pairs.items() if a != b) + sum(
            m for (a, b), m in pairs.items() if a == b
        )
    big = (top, sizes[top]) if top > 5 else (5, 0)
    return big + (pentagon_pairs_sharing_two(g), defects)


def _done(m: tuple) -> bool:
    return m == (5, 0, 0, 0)


def _chord_moves(g: EmbeddedGraph) -> Iterable[tuple[int, int, int, int, int]]:
    fo = g.face_of
    for fid in sorted(range(len(g.faces)), key=lambda k: -len(g.faces[k])):
        walk = g.faces[fid]
        if len(walk) < 4:
            continue
        for p in range(len(walk)):
            for q in range(len(walk)):
                d1, d2 = walk[p], walk[q]
                v, w = g.tail[d1], g.tail[d2]
                if v >= w:
                    continue
                cands = [d for d in g.darts_at(v) if g.head(d) == w]
                if len(cands) != 1:
                    continue
                d = cands[0]
                if fo[d] == fid or fo[d ^ 1] == fid or fo[d] == fo[d ^ 1]:
                    continue
                yield v, w, fid, d1, d2


def reduce_to_simple_dual(g: EmbeddedGraph, max_steps: int = 64) -> tuple[EmbeddedGraph, list]:
    """Chord exchanges until faces have size at most 5, no two pentagons share
    two edges, and the dual is simple.

    Every accepted step strictly decreases the measure
    ``(max face size above 5, how many faces have it, pentagon pairs sharing
    two edges, dual loops and parallels)``.  When no single exchange helps, a
    pair of consecutive exchanges is tried.  Among improving moves the one
    with the smallest resulting measure and then smallest endpoints wins.
    Returns the final graph and the list of applied ``(v, w, face)`` moves.
    """
    genus0 = g.genus()
    cur = g
    history = []
    m = _measure(cur)
    for _ in range(max_steps):
        if _done(m):
            break
        best = None
        for v, w, fid, d1, d2 in _chord_moves(cur):
            out = chord_exchange(cur, v, w, fid, d1, d2).graph
            key = (_measure(out), v, w, fid)
            if key[0] < m and (best is None or key < best[0]):
                best = (key, out, [(v, w, fid)])
        if best is None:
            for v, w, fid, d1, d2 in _chord_moves(cur):
                mid = chord_exchange(cur, v, w, fid, d1, d2).graph
                for v2, w2, fid2, e1, e2 in _chord_moves(mid):
                    out = chord_exchange(mid, v2, w2, fid2, e1, e2).graph
                    key = (_measure(out), v, w, fid, v2, w2, fid2)
                    if key[0] < m and (best is None or key < best[0]):
                        best = (key, out, [(v, w, fid), (v2, w2, fid2)])
        if best is None:
            raise NoCandidateChord(f"no improving chord exchange from measure {m}")
        cur = best[1]
        history.extend(best[2])
        m = best[0][0]
    else:
        if not _done(m):
            raise NoCandidateChord(f"step limit reached at measure {m}")
    if cur.genus() != genus0:
        raise AssertionError("chord exchanges changed the genus")
    return cur, history


# ----------------------------------------------------------------------
# deletion and gluing


def delete_vertex(g: EmbeddedGraph, v: int) -> EmbeddedGraph:
    """Remove ``v`` and its edges; refuses when the rest falls apart."""
    gone = {d >> 1 for d in g.darts_at(v)}
    rots = {
        u: [d for d in g.darts_at(u) if (d >> 1) not in gone] for u in g.vertices() if u != v
    }
    try:
        new, _ = rebuild(g, rots, name=g.name)
    except Disconnected:
        raise Disconnects(f"deleting {v} disconnects the graph") from None
    return new


def add_edge_in_face(
    g: EmbeddedGraph, at_a: int, at_b: int, label: Hashable = None
) -> EmbeddedGraph:
    """Insert a new edge from ``tail(at_a)`` to ``tail(at_b)`` before those darts.

    When both darts lie in the same face, the new edge subdivides it.
    """
    a, b = g.tail[at_a], g.tail[at_b]
    nd = g.num_darts
    rots = _rotations(g)
    rots[a].insert(rots[a].index(at_a), nd)
    rots[b].insert(rots[b].index(at_b), nd + 1)
    new, _ = rebuild(
        g, rots, new_edge_labels={nd >> 1: label if label is not None else ("new", nd >> 1)},
        name=g.name,
    )
    return new


def glue_copies(
    g1: EmbeddedGraph,
    g2: EmbeddedGraph,
    pairs: Sequence[tuple[int, int]],
    angles1: Mapping[int, int],
    angles2: Mapping[int, int],
    name: str | None = None,
) -> EmbeddedGraph:
    """Identify vertex ``a`` of ``g1`` with ``b`` of ``g2`` for every pair.

    The merged rotation is the rotation of ``a`` starting at dart
    ``angles1[a]`` followed by the rotation of ``b`` starting at
    ``angles2[b]``.  Vertices of ``g1`` keep labels ``(1, label)`` and those of
    ``g2`` get ``(2, label)``; merged vertices carry the ``g1`` label.
    """
    bij = dict(pairs)
    if len(bij) != len(pairs) or len(set(bij.values())) != len(pairs):
        raise SurgeryError("gluing map is not a bijection")
    # parallel edges between identified vertices
    adj1 = {(min(a, b), max(a, b)) for a, b in g1.edges() if a in bij and b in bij}
    inv = {b: a for a, b in bij.items()}
    for a, b in g2.edges():
        if a in inv and b in inv:
            x, y = inv[a], inv[b]
            if (min(x, y), max(x, y)) in adj1:
                raise ParallelEdgeCreated(
                    f"g1 edge {{{x}, {y}}} would be doubled by g2 edge {{{a}, {b}}}"
                )
    off = g1.num_darts
    keys: dict = {}
    rotations = []
    labels = []
    for u in g1.vertices():
        rot = list(g1.darts_at(u)) if u not in bij else g1.rotation_from(u, angles1[u])
        if u in bij:
            b = bij[u]
            rot += [d + off for d in g2.rotation_from(b, angles2[b])]
        keys[(1, u)] = len(rotations)
        rotations.append(rot)
        labels.append((1, g1.vertex_labels[u - 1]))
    for u in g2.vertices():
        if u in inv:
            continue
        rotations.append([d + off for d in g2.darts_at(u)])
        labels.append((2, g2.vertex_labels[u - 1]))
    edge_labels = [(1, lab) for lab in g1.edge_labels] + [(2, lab) for lab in g2.edge_labels]
    return EmbeddedGraph(rotations, edge_labels, labels, name=name)
