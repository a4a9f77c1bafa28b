"""Generators for the explicit embedded families and the related arithmetic."""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from importlib import resources
from pathlib import Path

from .connectivity import is_disconnected_by, kappa, simple_graph
from .dual import dual, is_simple
from .embedding import EmbeddedGraph, parse
from .surgery import add_edge_in_face, delete_vertex, glue_copies


class BadParity(ValueError):
    pass


class OutOfRange(ValueError):
    pass


class FixtureCorrupt(RuntimeError):
    pass


class DegenerateParams(ValueError):
    pass


# ----------------------------------------------------------------------
# Ringel embeddings of K_{p,q}


@dataclass(frozen=True)
class RingelParams:
    p: int
    q: int

    def __post_init__(self):
        if self.p < 3 or self.p % 2 == 0:
            raise BadParity(f"p must be odd and at least 3, got {self.p}")
        if self.q < 6 or self.q % 4 != 2:
            raise BadParity(f"q must be 2 mod 4 and at least 6, got {self.q}")


def _alternating(start: int, steps: tuple[int, int], q: int) -> list[int]:
    out, x = [], start
    for k in range(q):
        out.append(x)
        x = (x + steps[k % 2] - 1) % q + 1
    return out


def ringel_rotations(p: int, q: int) -> dict[int, list[int]]:
    """Rotation of K_{p,q}; vertex ``i`` of V_p is ``i`` and ``j'`` of V_q is ``p + j``."""
    RingelParams(p, q)
    rot: dict[int, list[int]] = {}
    rot[1] = [p + j for j in _alternating(q - 1, (1, -3), q)]
    rot[2] = [p + j for j in _alternating(2, (1, 3), q)]
    for i in range(3, p + 1):
        order = range(q, 0, -1) if i % 2 else range(1, q + 1)
        rot[i] = [p + j for j in order]
    for j in range(1, q + 1):
        rot[p + j] = list(range(1, p + 1)) if j % 2 else list(range(p, 0, -1))
    return rot


def vertex_name(p: int, v: int) -> str:
    """Printable name in a Ringel-based graph: ``i`` for V_p, ``j'`` for V_q."""
    return str(v) if v <= p else f"{v - p}'"


def ringel_embedding(p: int, q: int) -> EmbeddedGraph:
    g = EmbeddedGraph.from_rotation(ringel_rotations(p, q), name=f"ringel-{p}-{q}")
    if any(len(f) != 4 for f in g.faces):
        raise AssertionError("Ringel rotation produced a face that is not a quadrangle")
    if g.genus() != (p - 2) * (q - 2) // 4:
        raise AssertionError("Ringel rotation has the wrong genus")
    if not is_simple(dual(g).graph):
        raise AssertionError("Ringel embedding has a non-simple dual")
    return g


# ----------------------------------------------------------------------
# the delta_1 construction


def delta1_parameters(c: int) -> tuple[int, int]:
    if c < 7:
        raise OutOfRange("the construction needs c >= 7")
    p = c if c % 2 else c + 1
    q = math.ceil(Fraction(c, 2) + 1)
    while q % 4 != 2:
        q += 1
    return p, q


def _largest_face_with(g: EmbeddedGraph, a: int, b: int) -> tuple[int, int, int]:
    """Largest face with both ``a`` and ``b`` on it, and their first darts there."""
    best = None
    for fid, walk in enumerate(g.faces):
        da = next((d for d in walk if g.tail[d] == a), None)
        db = next((d for d in walk if g.tail[d] == b), None)
        if da is None or db is None:
            continue
        if best is None or len(walk) > len(g.faces[best[0]]):
            best = (fid, da, db)
    if best is None:
        raise AssertionError(f"no face contains both {a} and {b}")
    return best


def extra_edges(p: int) -> list[tuple[int, int]]:
    out = []
    for k in range(1, p // 4 + 1):
        out += [(4 * k - 1, 4 * k), (4 * k, 4 * k + 1)]
    if p % 4 == 3:
        out.append((p, 1))
    return out


@dataclass
class Delta1Report:
    c: int
    p: int
    q: int
    v: int
    e: int
    f: int
    genus: int
    genus_formula: int
    genus_bound: Fraction
    kappa: int
    dual_simple: bool
    dual_cut_vertex: int
    big_face_size: int
    checks: dict[str, bool] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(self.checks.values())


def g1_graph(p: int, q: int) -> EmbeddedGraph:
    """Ringel K_{p,q} with vertex 1' removed."""
    g = delete_vertex(ringel_embedding(p, q), p + 1)
    if (g.v, g.e, g.f) != (p + q - 1, p * q - p, p * q // 2 - p + 1):
        raise AssertionError("unexpected counts after deleting 1'")
    return g


def g2_graph(p: int, q: int) -> EmbeddedGraph:
    """G1 plus the extra edges between V_p vertices inside the big face."""
    g = g1_graph(p, q)
    pos = {lab: k + 1 for k, lab in enumerate(g.vertex_labels)}
    for a, b in extra_edges(p):
        _, da, db = _largest_face_with(g, pos[a], pos[b])
        g = add_edge_in_face(g, da, db, label=("extra", a, b))
    return g


def big_face(g: EmbeddedGraph) -> int:
    return max(range(len(g.faces)), key=lambda k: (len(g.faces[k]), -k))


def delta1_construction(c: int) -> tuple[EmbeddedGraph, Delta1Report]:
    """Glue two copies of G2 along their big faces.

    Vertex ``i`` of V_p in the first copy is identified with vertex
    ``(i + 2)`` of the second copy (indices mod p in 1..p).  Each merged
    rotation is the rotation in the first copy followed by the second copy's
    rotation, both cut open at their big-face angle.
    """
    p, q = delta1_parameters(c)
    g2 = g2_graph(p, q)
    pos = {lab: k + 1 for k, lab in enumerate(g2.vertex_labels)}
    bf = big_face(g2)
    walk = g2.faces[bf]
    angle = {}
    for i in range(1, p + 1):
        darts = [d for d in walk if g2.tail[d] == pos[i]]
        if len(darts) != 1:
            raise AssertionError(f"vertex {i} should meet the big face exactly once")
        angle[pos[i]] = darts[0]
    # both copies keep their orientation; with this bijection the two big
    # faces merge into a single face
    pairs = [(pos[i], pos[(i + 1) % p + 1]) for i in range(1, p + 1)]
    g3 = glue_copies(g2, g2, pairs, angle, angle, name=f"delta1-{c}")

    genus = g3.genus()
    formula = ((p - 2) * (q - 1) + 1) // 2
    bound = Fraction(c * c + 6 * c - 5, 4)
    dg = dual(g3).graph
    simple_dual = is_simple(dg).simple
    bigs = [k for k, f in enumerate(g3.faces) if len(f) > 4]
    cut_vertex = bigs[0] + 1 if len(bigs) == 1 else 0
    k = kappa(g3)
    checks = {
        "simple": is_simple(g3).simple,
        "vertex count": g3.v == 2 * (p + q - 1) - p,
        "face count": g3.f == p * q - 2 * p + 1 + 2 * len(extra_edges(p)),
        "genus formula": genus == formula,
        "genus bound": genus <= bound,
        "kappa": k >= c,
        "dual simple": simple_dual,
        "dual cut vertex": cut_vertex > 0 and is_disconnected_by(simple_graph(dg), (cut_vertex,)),
        "spanning K_{p,2(q-1)}": _has_spanning_bipartite(g3, p, q),
    }
    report = Delta1Report(
        c, p, q, g3.v, g3.e, g3.f, genus, formula, bound, k, simple_dual, cut_vertex,
        len(g3.faces[bigs[0]]) if bigs else 0, checks,
    )
    return g3, report


def _has_spanning_bipartite(g3: EmbeddedGraph, p: int, q: int) -> bool:
    side = [k + 1 for k, lab in enumerate(g3.vertex_labels) if lab[0] == 1 and lab[1] <= p]
    other = [k + 1 for k in range(g3.v) if k + 1 not in side]
    if len(side) != p or len(other) != 2 * (q - 1):
        return False
    h = simple_graph(g3)
    return all(h.has_edge(a, b) for a in side for b in other)


# ----------------------------------------------------------------------
# hexagonal tilings of the torus


@dataclass(frozen=True)
class HexTorusParams:
    p: int
    r: int
    q: int

    def __post_init__(self):
        if self.p <= 0 or self.r <= 0 or not 0 <= self.q < self.p:
            raise ValueError("need p, r > 0 and 0 <= q < p")


# counterclockwise neighbour directions in the triangular lattice
_DIRS = ((1, 0), (0, 1), (-1, 1), (-1, 0), (0, -1), (1, -1))


def torus_triangulation(params: HexTorusParams) -> EmbeddedGraph:
    """6-regular triangulation on the lattice modulo (p, 0) and (q, r)."""
    p, r, q = params.p, params.r, params.q

    def reduce(i: int, j: int) -> tuple[int, int]:
        k = j // r
        return ((i - k * q) % p, j - k * r)

    rot = {}
    for i in range(p):
        for j in range(r):
            row = []
            for k, (di, dj) in enumerate(_DIRS):
                w = reduce(i + di, j + dj)
                if k < 3:
                    row.append((w, ((i, j), k)))
                else:
                    row.append((w, (w, k - 3)))
            rot[(i, j)] = row
    return EmbeddedGraph.from_rotation(rot, name=f"tri-torus-{p}-{r}-{q}")


@dataclass(frozen=True)
class HexTorus:
    tiling: EmbeddedGraph
    dual: EmbeddedGraph
    tiling_simple: bool
    dual_simple: bool
    kappa: int | None


def hexagonal_torus(p: int, r: int, q: int) -> HexTorus:
    """Hexagonal tiling of the torus together with its triangulated dual.

    Degenerate parameters (non-simple tiling or dual) are reported through
    the flags; ``kappa`` is only computed when both are simple.
    """
    tri = torus_triangulation(HexTorusParams(p, r, q))
    tiling = dual(tri).graph.with_name(f"hex-torus-{p}-{r}-{q}")
    if (tiling.v, tiling.e, tiling.f) != (2 * p * r, 3 * p * r, p * r) or tiling.genus() != 1:
        raise AssertionError("hexagonal tiling has unexpected counts")
    ts, ds = is_simple(tiling).simple, is_simple(tri).simple
    k = None
    if ts and ds:
        k = kappa(tiling)
        if k < 3:
            raise AssertionError("simple hexagonal tiling with simple dual is not 3-connected")
    return HexTorus(tiling, tri, ts, ds, k)


# ----------------------------------------------------------------------
# fixed embeddings


def k7_torus() -> EmbeddedGraph:
    """K7 on the torus, rotation i: i+1, i+3, i+2, i+6, i+4, i+5 (mod 7)."""
    rot = {i + 1: [(i + s) % 7 + 1 for s in (1, 3, 2, 6, 4, 5)] for i in range(7)}
    return EmbeddedGraph.from_rotation(rot, name="k7-torus")


FIXTURE_NAMES = (
    "k8",
    "k8-dual",
    "k8-hop",
    "k9",
    "k9-dual",
    "k10",
    "k10-dual",
    "k14",
    "k14-dual",
    "k11-minus-matching",
    "k15-minus-matching",
    "k7-torus",
    "dodecahedron",
    "icosahedron",
)


@lru_cache(maxsize=1)
def _manifest() -> dict:
    text = resources.files("dualconn.fixtures").joinpath("manifest.json").read_text()
    return json.loads(text)


def fixture_text(name: str) -> str:
    if name not in FIXTURE_NAMES:
        raise KeyError(f"unknown fixture {name!r}")
    return resources.files("dualconn.fixtures").joinpath(f"{name}.rot").read_text()


def fixture_claims(name: str) -> dict:
    return dict(_manifest()[name])


def validate_fixture(name: str, text: str, claims: dict) -> EmbeddedGraph:
    """Parse a fixture and check every recorded invariant, then the checksum.

    Invariants come first so that a damaged table reports what broke.
    """
    try:
        g = parse(text)
    except ValueError as exc:
        raise FixtureCorrupt(f"{name}: {exc}") from exc
    got = {"genus": g.genus(), "v": g.v, "e": g.e, "f": g.f}
    wrong = [f"{k} is {val}, expected {claims[k]}" for k, val in got.items() if claims[k] != val]
    if wrong:
        raise FixtureCorrupt(f"{name}: " + "; ".join(wrong))
    if claims.get("simple") and not g.is_simple_graph():
        raise FixtureCorrupt(f"{name}: graph is not simple")
    if claims.get("dual_simple") and not is_simple(dual(g).graph):
        raise FixtureCorrupt(f"{name}: dual is not simple")
    if "kappa" in claims and kappa(g) != claims["kappa"]:
        raise FixtureCorrupt(f"{name}: connectivity differs from {claims['kappa']}")
    if hashlib.sha256(text.encode()).hexdigest() != claims["sha256"]:
        raise FixtureCorrupt(f"{name}: checksum mismatch")
    return g


@lru_cache(maxsize=None)
def load_fixture(name: str, directory: str | None = None) -> EmbeddedGraph:
    """Validated fixture, from the bundled files or from ``directory``."""
    if directory is None:
        text = fixture_text(name)
    else:
        if name not in FIXTURE_NAMES:
            raise KeyError(f"unknown fixture {name!r}")
        text = Path(directory, f"{name}.rot").read_text()
    return validate_fixture(name, text, fixture_claims(name))


def wedge(g1: EmbeddedGraph, g2: EmbeddedGraph, v1: int = 1, v2: int = 1) -> EmbeddedGraph:
    """One-point union identifying ``v1`` of ``g1`` with ``v2`` of ``g2``.

    Genera add and the merged vertex is a cut vertex.
    """
    out = glue_copies(
        g1, g2, [(v1, v2)], {v1: g1.darts_at(v1)[0]}, {v2: g2.darts_at(v2)[0]},
        name=f"{g1.name}+{g2.name}",
    )
    assert out.genus() == g1.genus() + g2.genus()
    return out


def complete_graph_fixtures() -> dict[str, EmbeddedGraph]:
    names = ("k8", "k9", "k10", "k14", "k7-torus", "k11-minus-matching",
             "k15-minus-matching", "dodecahedron", "icosahedron")
    return {n: load_fixture(n) for n in names}


# ----------------------------------------------------------------------
# arithmetic


def genus_complete(c: int) -> int:
    """Minimum genus of K_{c+1}."""
    if c < 2:
        return 0
    return -(-(c - 2) * (c - 3) // 12)


def bigfaces_d(c: int) -> int:
    if c < 3:
        raise OutOfRange("c must be at least 3")
    base = (c - 2) * (c - 3)
    return next(d for d in range(0, 12, 2) if (base + d) % 12 == 0)


@dataclass(frozen=True)
class BigFaces:
    c: int
    d: int
    f: Fraction
    excess: Fraction


def bigfaces_arithmetic(c: int) -> BigFaces:
    d = bigfaces_d(c)
    f = Fraction(c * c, 3) + Fraction(c, 3) - Fraction(d, 6)
    return BigFaces(c, d, f, Fraction(d, 2))


@dataclass(frozen=True)
class BlockedBound:
    c: int
    d: int
    f: Fraction
    bound: Fraction
    # blocked vertices when a single face is not a triangle
    single_face: int
    # every embedding has an unblocked dual vertex
    verdict: bool


def blocked_bound(c: int) -> BlockedBound:
    bf = bigfaces_arithmetic(c)
    bound = Fraction(13 * bf.d, 2)
    single = 0 if bf.d == 0 else 3 * (3 + bf.d // 2) + 1
    return BlockedBound(c, bf.d, bf.f, bound, single, bf.f > bound)


@dataclass(frozen=True)
class Interval:
    lo: int
    hi: int

    def __contains__(self, x: int) -> bool:
        return self.lo <= x <= self.hi


def delta_table(k: int, c: int) -> int | Interval:
    """Known value of delta_k(c), or the interval it is known to lie in."""
    if not 1 <= k <= c:
        raise OutOfRange(f"need 1 <= k <= c, got k={k}, c={c}")
    low = genus_complete(c)
    if k == 1:
        small = {1: 0, 2: 1, 3: 1, 4: 2, 5: 2, 6: 3}
        if c in small:
            return small[c]
        return Interval(low, (c * c + 6 * c - 5) // 4)
    if k == 2:
        small = {2: 0, 3: 1, 4: 1, 5: 1, 6: 2}
        if c in small:
            return small[c]
        return Interval(low, low + 1)
    return 0 if c <= 5 else low
