"""Dart-based combinatorial embeddings on oriented surfaces.

Every undirected edge ``i`` owns the two darts ``2*i`` and ``2*i + 1``; the
reverse of a dart ``d`` is ``d ^ 1``.  A rotation system stores, for every
vertex, the cyclic order of its outgoing darts.  The face successor of a dart
``(a, b)`` is the rotation successor of ``(b, a)`` around ``b``.

Vertices are numbered ``1..n``.  Faces are numbered ``0..f-1`` in the order of
their smallest dart, and every face is stored starting at that dart.
"""

from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass
from typing import Hashable, Iterable, Iterator, Mapping, Sequence


class EmbeddingError(ValueError):
    """Base class for invalid rotation systems."""


class ConsistencyError(EmbeddingError):
    pass


class UnpairedEdge(ConsistencyError):
    pass


class DanglingNeighbour(EmbeddingError):
    pass


class EmptyGraph(EmbeddingError):
    pass


class Disconnected(EmbeddingError):
    pass


class RotationSyntaxError(EmbeddingError):
    def __init__(self, message: str, lineno: int):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


def rev(d: int) -> int:
    return d ^ 1


def _sorted_keys(keys: Iterable[Hashable]) -> list:
    keys = list(keys)
    try:
        return sorted(keys)
    except TypeError:
        return sorted(keys, key=repr)


class EmbeddedGraph:
    """An immutable connected (unless stated otherwise) rotation system.

    Use :meth:`from_rotation` or :func:`parse` to build one.
    """

    __slots__ = (
        "n",
        "tail",
        "succ",
        "pred",
        "rotation",
        "edge_labels",
        "vertex_labels",
        "name",
        "_faces",
        "_face_of",
        "_components",
    )

    def __init__(
        self,
        rotations: Sequence[Sequence[int]],
        edge_labels: Sequence[Hashable] | None = None,
        vertex_labels: Sequence[Hashable] | None = None,
        name: str | None = None,
        allow_disconnected: bool = False,
    ):
        # rotations[k] holds the outgoing darts of vertex k + 1
        n = len(rotations)
        if n == 0:
            raise EmptyGraph("graph has no vertices")
        ndarts = sum(len(r) for r in rotations)
        if ndarts % 2:
            raise ConsistencyError("odd number of darts")
        tail = [0] * ndarts
        succ = [-1] * ndarts
        pred = [-1] * ndarts
        for k, rot in enumerate(rotations):
            m = len(rot)
            for j, d in enumerate(rot):
                if not 0 <= d < ndarts or succ[d] != -1:
                    raise ConsistencyError(f"dart {d} is invalid or used twice")
                tail[d] = k + 1
                succ[d] = rot[(j + 1) % m]
            for j, d in enumerate(rot):
                pred[succ[d]] = d
        self.n = n
        self.tail = tuple(tail)
        self.succ = tuple(succ)
        self.pred = tuple(pred)
        self.rotation = tuple(tuple(r) for r in rotations)
        e = ndarts // 2
        self.edge_labels = tuple(edge_labels) if edge_labels is not None else tuple(range(e))
        if len(self.edge_labels) != e:
            raise ConsistencyError("edge label count does not match edge count")
        self.vertex_labels = (
            tuple(vertex_labels) if vertex_labels is not None else tuple(range(1, n + 1))
        )
        self.name = name
        self._faces = None
        self._face_of = None
        self._components = None
        if not allow_disconnected and not self.is_connected():
            raise Disconnected("embedded graph is not connected")

    # ------------------------------------------------------------------
    # construction

    @classmethod
    def from_rotation(
        cls,
        rotation: Mapping[Hashable, Sequence],
        name: str | None = None,
        allow_disconnected: bool = False,
    ) -> "EmbeddedGraph":
        """Build from per-vertex ordered neighbour lists.

        An entry is either a neighbour key or a ``(neighbour, edge_id)`` pair.
        Entries without an edge id are paired with the unique reverse
        occurrence at the neighbour; parallel edges and multiple loops need
        explicit ids.  Vertex keys are relabelled ``1..n`` in sorted order and
        kept in ``vertex_labels``.
        """
        keys = _sorted_keys(rotation)
        if not keys:
            raise EmptyGraph("graph has no vertices")
        index = {key: k for k, key in enumerate(keys)}
        entries: list[list[tuple[int, Hashable | None]]] = []
        for key in keys:
            row = []
            for item in rotation[key]:
                if item in index:
                    nbr, label = item, None
                elif isinstance(item, tuple) and len(item) == 2:
                    nbr, label = item
                else:
                    nbr, label = item, None
                if nbr not in index:
                    raise DanglingNeighbour(f"vertex {key!r} lists unknown neighbour {nbr!r}")
                row.append((index[nbr], label))
            entries.append(row)

        labelled: dict[Hashable, list[tuple[int, int]]] = {}
        plain: dict[tuple[int, int], list[tuple[int, int]]] = {}
        for u, row in enumerate(entries):
            for pos, (w, label) in enumerate(row):
                if label is None:
                    plain.setdefault((min(u, w), max(u, w)), []).append((u, pos))
                else:
                    labelled.setdefault(label, []).append((u, pos))

        # partner[(u, pos)] = (w, pos'), the reverse occurrence
        partner: dict[tuple[int, int], tuple[int, int]] = {}
        for label, occ in labelled.items():
            if len(occ) != 2:
                raise UnpairedEdge(f"edge id {label!r} occurs {len(occ)} times")
            (u, pu), (w, pw) = occ
            if entries[u][pu][0] != w or entries[w][pw][0] != u:
                raise ConsistencyError(f"edge id {label!r} has inconsistent endpoints")
            partner[occ[0]] = occ[1]
            partner[occ[1]] = occ[0]
        for (a, b), occ in plain.items():
            if a == b:
                if len(occ) != 2:
                    raise ConsistencyError(
                        f"vertex {keys[a]!r}: loops need explicit edge ids ({len(occ)} occurrences)"
                    )
                partner[occ[0]] = occ[1]
                partner[occ[1]] = occ[0]
                continue
            at_a = [o for o in occ if o[0] == a]
            at_b = [o for o in occ if o[0] == b]
            if len(at_a) != len(at_b):
                raise UnpairedEdge(f"edge {{{keys[a]!r}, {keys[b]!r}}} is not listed at both ends")
            if len(at_a) > 1:
                raise ConsistencyError(
                    f"parallel edges between {keys[a]!r} and {keys[b]!r} need explicit edge ids"
                )
            partner[at_a[0]] = at_b[0]
            partner[at_b[0]] = at_a[0]

        dart_of: dict[tuple[int, int], int] = {}
        labels: list[Hashable] = []
        rotations: list[list[int]] = []
        for u, row in enumerate(entries):
            rot = []
            for pos, (w, label) in enumerate(row):
                occ = (u, pos)
                if occ not in dart_of:
                    i = len(labels)
                    labels.append(label if label is not None else i)
                    dart_of[occ] = 2 * i
                    dart_of[partner[occ]] = 2 * i + 1
                rot.append(dart_of[occ])
            rotations.append(rot)
        return cls(rotations, labels, keys, name=name, allow_disconnected=allow_disconnected)

    # ------------------------------------------------------------------
    # basic queries

    @property
    def v(self) -> int:
        return self.n

    @property
    def e(self) -> int:
        return len(self.tail) // 2

    @property
    def f(self) -> int:
        isolated = sum(1 for rot in self.rotation if not rot)
        return len(self.faces) + isolated

    @property
    def num_darts(self) -> int:
        return len(self.tail)

    def vertices(self) -> range:
        return range(1, self.n + 1)

    def head(self, d: int) -> int:
        return self.tail[d ^ 1]

    def face_next(self, d: int) -> int:
        return self.succ[d ^ 1]

    def darts_at(self, v: int) -> tuple[int, ...]:
        return self.rotation[v - 1]

    def degree(self, v: int) -> int:
        return len(self.rotation[v - 1])

    def neighbours(self, v: int) -> list[int]:
        return [self.tail[d ^ 1] for d in self.rotation[v - 1]]

    def edge_ends(self, i: int) -> tuple[int, int]:
        return self.tail[2 * i], self.tail[2 * i + 1]

    def edges(self) -> Iterator[tuple[int, int]]:
        for i in range(self.e):
            yield self.edge_ends(i)

    def rotation_from(self, v: int, d: int) -> list[int]:
        """Outgoing darts at ``v`` in rotation order starting with ``d``."""
        rot = self.rotation[v - 1]
        j = rot.index(d)
        return list(rot[j:] + rot[:j])

    def rotation_table(self) -> dict[int, list[tuple[int, Hashable]]]:
        return {
            v: [(self.head(d), self.edge_labels[d >> 1]) for d in self.rotation[v - 1]]
            for v in self.vertices()
        }

    # ------------------------------------------------------------------
    # faces and genus

    @property
    def faces(self) -> tuple[tuple[int, ...], ...]:
        if self._faces is None:
            self._trace()
        return self._faces

    @property
    def face_of(self) -> tuple[int, ...]:
        if self._face_of is None:
            self._trace()
        return self._face_of

    def _trace(self) -> None:
        nd = self.num_darts
        face_of = [-1] * nd
        faces = []
        for start in range(nd):
            if face_of[start] != -1:
                continue
            walk = []
            d = start
            while face_of[d] == -1:
                face_of[d] = len(faces)
                walk.append(d)
                d = self.succ[d ^ 1]
            if d != start:
                raise ConsistencyError("face tracing did not close")
            faces.append(tuple(walk))
        self._faces = tuple(faces)
        self._face_of = tuple(face_of)

    def face_size(self, fid: int) -> int:
        return len(self.faces[fid])

    def face_vertices(self, fid: int) -> list[int]:
        """Vertices of the facial walk, one entry per position."""
        return [self.tail[d] for d in self.faces[fid]]

    def components(self) -> list[list[int]]:
        if self._components is None:
            seen = [False] * (self.n + 1)
            comps = []
            for s in self.vertices():
                if seen[s]:
                    continue
                seen[s] = True
                comp, stack = [], [s]
                while stack:
                    u = stack.pop()
                    comp.append(u)
                    for d in self.rotation[u - 1]:
                        w = self.tail[d ^ 1]
                        if not seen[w]:
                            seen[w] = True
                            stack.append(w)
                comps.append(sorted(comp))
            self._components = comps
        return self._components

    def is_connected(self) -> bool:
        return len(self.components()) == 1

    def euler_residue(self) -> int:
        """``2 - v + e - f``; twice the genus for a connected graph."""
        return 2 - self.v + self.e - self.f

    def genus(self) -> int:
        if not self.is_connected():
            raise Disconnected("genus is only defined for connected embedded graphs")
        r = self.euler_residue()
        if r % 2 or r < 0:
            raise ConsistencyError(f"invalid Euler residue {r}")
        return r // 2

    def component_genera(self) -> list[int]:
        """Genus of every connected component, in component order."""
        comp_of = {}
        for k, comp in enumerate(self.components()):
            for u in comp:
                comp_of[u] = k
        counts = [[len(c), 0, 0] for c in self.components()]
        for i in range(self.e):
            counts[comp_of[self.tail[2 * i]]][1] += 1
        for face in self.faces:
            counts[comp_of[self.tail[face[0]]]][2] += 1
        for k, comp in enumerate(self.components()):
            if len(comp) == 1 and not self.rotation[comp[0] - 1]:
                counts[k][2] += 1
        out = []
        for v, e, f in counts:
            r = 2 - v + e - f
            if r % 2 or r < 0:
                raise ConsistencyError(f"invalid Euler residue {r}")
            out.append(r // 2)
        return out

    # ------------------------------------------------------------------
    # simple derived structures

    def is_simple_graph(self) -> bool:
        seen = set()
        for a, b in self.edges():
            if a == b or (min(a, b), max(a, b)) in seen:
                return False
            seen.add((min(a, b), max(a, b)))
        return True

    def mirror(self) -> "EmbeddedGraph":
        """The same graph with every rotation reversed."""
        rots = [list(reversed(r)) for r in self.rotation]
        return EmbeddedGraph(
            rots, self.edge_labels, self.vertex_labels, name=self.name,
            allow_disconnected=not self.is_connected(),
        )

    def with_name(self, name: str | None) -> "EmbeddedGraph":
        return EmbeddedGraph(
            self.rotation, self.edge_labels, self.vertex_labels, name=name,
            allow_disconnected=not self.is_connected(),
        )

    def __repr__(self) -> str:
        tag = f" {self.name}" if self.name else ""
        return f"<EmbeddedGraph{tag} v={self.v} e={self.e} f={self.f}>"


def build(
    rotation: Mapping[Hashable, Sequence], name: str | None = None, allow_disconnected: bool = False
) -> EmbeddedGraph:
    return EmbeddedGraph.from_rotation(rotation, name=name, allow_disconnected=allow_disconnected)


@dataclass(frozen=True)
class FaceCensus:
    faces: tuple[tuple[int, ...], ...]
    # angles[k][j] is the dart that closes the j-th angle of face k; the angle
    # runs from pred(dart) to dart around tail(dart)
    angles: tuple[tuple[int, ...], ...]

    @property
    def sizes(self) -> list[int]:
        return [len(f) for f in self.faces]

    def size_counts(self) -> dict[int, int]:
        return dict(sorted(Counter(self.sizes).items()))


def trace_faces(g: EmbeddedGraph) -> FaceCensus:
    faces = g.faces
    # the angle entered by dart d of a face is the one before face_next(d)
    angles = tuple(tuple(g.face_next(d) for d in face) for face in faces)
    return FaceCensus(faces, angles)


def genus(g: EmbeddedGraph) -> int:
    return g.genus()


# ----------------------------------------------------------------------
# .rot text format

_ENTRY = re.compile(r"^(-?\d+)(?:\[([^\]\s]+)\])?$")


def _edge_token(tok: str) -> Hashable:
    return int(tok) if re.fullmatch(r"-?\d+", tok) else tok


def parse(text: str, allow_disconnected: bool = False) -> EmbeddedGraph:
    """Parse the rotation-table text format.

    ``# comment`` lines and an optional ``graph <name>`` header are allowed;
    every other line reads ``<v>: <n1> <n2> ...`` with neighbours in rotation
    order, optionally written ``<n>[<edge id>]``.
    """
    name = None
    rotation: dict[int, list] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line.startswith("graph"):
            if rotation or name is not None:
                raise RotationSyntaxError("misplaced graph header", lineno)
            name = line[len("graph"):].strip() or None
            continue
        head, sep, rest = line.partition(":")
        if not sep or not re.fullmatch(r"\d+", head.strip()):
            raise RotationSyntaxError(f"expected '<vertex>: <neighbours>', got {raw!r}", lineno)
        v = int(head)
        if v in rotation:
            raise RotationSyntaxError(f"vertex {v} listed twice", lineno)
        row = []
        for tok in rest.split():
            m = _ENTRY.match(tok)
            if not m:
                raise RotationSyntaxError(f"bad neighbour token {tok!r}", lineno)
            nbr = int(m.group(1))
            row.append((nbr, _edge_token(m.group(2))) if m.group(2) is not None else nbr)
        rotation[v] = row
    if not rotation:
        raise EmptyGraph("no vertex lines found")
    if sorted(rotation) != list(range(1, len(rotation) + 1)):
        missing = sorted(set(range(1, max(rotation) + 1)) - set(rotation))
        if missing:
            raise DanglingNeighbour(f"vertices must be numbered 1..n; missing {missing}")
    for v, row in rotation.items():
        for item in row:
            nbr = item[0] if isinstance(item, tuple) else item
            if nbr not in rotation:
                raise DanglingNeighbour(f"vertex {v} lists unknown neighbour {nbr}")
    return EmbeddedGraph.from_rotation(rotation, name=name, allow_disconnected=allow_disconnected)


def serialize(g: EmbeddedGraph, edge_ids: bool | None = None, comments: Sequence[str] = ()) -> str:
    """Render ``g`` in the rotation-table format.

    Edge ids (1-based edge indices) are written when the graph is not simple,
    or when ``edge_ids`` is true.
    """
    if edge_ids is None:
        edge_ids = not g.is_simple_graph()
    lines = [f"# {c}" for c in comments]
    if g.name:
        lines.append(f"graph {g.name}")
    for v in g.vertices():
        toks = []
        for d in g.darts_at(v):
            w = g.head(d)
            toks.append(f"{w}[{(d >> 1) + 1}]" if edge_ids else str(w))
        lines.append(f"{v}: " + " ".join(toks) if toks else f"{v}:")
    return "\n".join(lines) + "\n"


def normalize_table(text: str) -> list[str]:
    """Vertex lines of a table with whitespace collapsed (comments dropped)."""
    out = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("#") or line.startswith("graph"):
            continue
        head, _, rest = line.partition(":")
        out.append(f"{head.strip()}: {' '.join(rest.split())}".rstrip())
    return out
