import pytest
from hypothesis import given

from dualconn.connectivity import embedded_isomorphism, isomorphic
from dualconn.constructions import load_fixture
from dualconn.dual import dual, dual_is_simple, face_size_census, faces_sharing, is_simple
from dualconn.embedding import parse

from strategies import rotation_systems

CUBE_DUALS = [("dodecahedron", "icosahedron"), ("icosahedron", "dodecahedron")]


def test_counts_swap():
    g = load_fixture("k8")
    d = dual(g).graph
    assert (d.v, d.e, d.f) == (g.f, g.e, g.v)


def test_dual_rotation_is_face_walk():
    g = load_fixture("k7-torus")
    dg = dual(g)
    for k, walk in enumerate(g.faces):
        assert dg.graph.darts_at(dg.vertex_of_face(k)) == walk


def test_dual_edge_crosses_same_edge():
    g = load_fixture("k9")
    dg = dual(g)
    for d in range(g.num_darts):
        # dart d of the dual joins the faces on the two sides of primal dart d
        assert dg.graph.tail[d] == g.face_of[d] + 1
        assert dg.graph.tail[d ^ 1] == g.face_of[d ^ 1] + 1
    assert dg.edge_crossref() == {i: i for i in range(1, g.e + 1)}


def test_dual_face_back_to_primal_vertex():
    g = load_fixture("k8")
    dg = dual(g)
    assert sorted(dg.primal_vertex_of_face(k) for k in range(dg.graph.f)) == list(g.vertices())


@pytest.mark.parametrize("a, b", CUBE_DUALS)
def test_platonic_duals(a, b):
    assert isomorphic(dual(load_fixture(a)).graph, load_fixture(b))


def test_k7_torus_dual_is_heawood():
    h = dual(load_fixture("k7-torus")).graph
    assert (h.v, h.e) == (14, 21)
    assert set(h.degree(v) for v in h.vertices()) == {3}
    assert face_size_census(h) == {6: 7}


def test_loop_and_parallel_detection():
    # one vertex with a loop: its dual has two faces joined twice
    g = parse("1: 2[1] 2[2]\n2: 1[2] 1[1]\n")
    rep = is_simple(g)
    assert rep.has_parallel and not rep.has_loop
    assert rep.witness == ("parallel", (0, 1))
    tree = parse("1: 2\n2: 1\n")
    assert dual(tree).graph.v == 1
    assert dual_is_simple(tree).has_loop


def test_faces_sharing_counts_edges():
    g = parse("1: 2 3 4\n2: 1 4 3\n3: 1 2 4\n4: 1 3 2\n")
    assert all(faces_sharing(g, a, b) == 1 for a in range(4) for b in range(4) if a != b)


@given(rotation_systems())
def test_double_dual_is_the_same_embedding(g):
    dd = dual(dual(g).graph).graph
    assert embedded_isomorphism(dd, g, allow_mirror=False) is not None


@given(rotation_systems())
def test_dual_keeps_genus(g):
    dg = dual(g).graph
    assert dg.genus() == g.genus()
    assert sum(face_size_census(g).get(k, 0) * k for k in face_size_census(g)) == 2 * g.e


@given(rotation_systems())
def test_dual_degrees_are_face_sizes(g):
    dg = dual(g).graph
    assert sorted(dg.degree(v) for v in dg.vertices()) == sorted(len(f) for f in g.faces)
