import pytest
from hypothesis import given, strategies as st

from dualconn.connectivity import embedded_isomorphism, isomorphic, kappa, vertex_connectivity
from dualconn.constructions import load_fixture, wedge
from dualconn.dual import dual, face_size_census, is_simple
from dualconn.embedding import parse
from dualconn.surgery import (
    Angle,
    ChordOnFace,
    DegreeNot3,
    Disconnects,
    FacesNotDistinct,
    ParallelEdgeCreated,
    SameVertex,
    SharedNeighbours,
    add_edge_in_face,
    chord_exchange,
    delete_vertex,
    glue_copies,
    h_operation,
    h_precondition,
    h_roles,
    identify_angles,
    merged_pair,
    reduce_to_simple_dual,
)

from strategies import rotation_systems

K4 = "1: 2 3 4\n2: 1 4 3\n3: 1 2 4\n4: 1 3 2\n"


def test_h_operation_on_k8_dual_reproduces_table():
    k8 = load_fixture("k8")
    out = h_operation(dual(k8).graph, 1, 2)
    target = load_fixture("k8-hop")
    assert out.genus_delta == 1
    assert embedded_isomorphism(out.graph, target, allow_mirror=True) is not None
    assert isomorphic(dual(out.graph).graph, k8)


@pytest.mark.parametrize("x, y", [(1, 2), (2, 1)])
def test_h_operation_on_table_dual_needs_no_reflection(x, y):
    out = h_operation(load_fixture("k8-dual"), x, y).graph
    assert embedded_isomorphism(out, load_fixture("k8-hop"), allow_mirror=False) is not None


def test_h_operation_dodecahedron():
    dod = load_fixture("dodecahedron")
    x, y = dod.edge_ends(0)
    out = h_operation(dod, x, y).graph
    assert (out.v, out.e, out.genus()) == (18, 30, 1)
    assert kappa(out) == 2
    a, b = merged_pair(dod, out, x, y)
    assert tuple(sorted((a, b))) in vertex_connectivity(out).min_cuts


def test_h_roles_read_rotation():
    dod = load_fixture("dodecahedron")
    x, y = dod.edge_ends(0)
    r = h_roles(dod, x, y)
    assert [dod.head(d) for d in dod.rotation_from(x, next(d for d in dod.darts_at(x) if dod.head(d) == y))] \
        == [y, r.w_prime, r.v]


def test_h_operation_needs_degree_three():
    with pytest.raises(DegreeNot3):
        h_operation(load_fixture("k8"), 1, 2)


def test_h_operation_on_triangle_sharing_neighbours():
    with pytest.raises(SharedNeighbours):
        h_operation(parse(K4), 1, 2)


def test_h_precondition():
    assert h_precondition(load_fixture("dodecahedron"), 1)
    assert not h_precondition(load_fixture("icosahedron"), 1)


def test_identify_angles_genus_change():
    g = parse(K4)
    # the two angles lie in different faces: one handle is added
    d1, d2 = g.darts_at(1)[0], g.darts_at(2)[0]
    a1, a2 = Angle.before(g, d1), Angle.before(g, d2)
    out = identify_angles(g, a1, a2)
    assert out.genus_delta == (0 if a1.face(g) == a2.face(g) else 1)
    with pytest.raises(SameVertex):
        identify_angles(g, a1, a1)


def test_chord_exchange_keeps_counts():
    g = delete_vertex(load_fixture("k7-torus"), 7)
    assert face_size_census(g) == {3: 8, 6: 1}
    big = next(k for k, f in enumerate(g.faces) if len(f) == 6)
    out = chord_exchange(g, 1, 2, big).graph
    assert (out.v, out.e, out.f, out.genus()) == (g.v, g.e, g.f, g.genus())
    assert face_size_census(out) == {3: 7, 4: 1, 5: 1}


def test_chord_exchange_errors():
    g = delete_vertex(load_fixture("k7-torus"), 7)
    f12 = g.face_of[next(d for d in g.darts_at(1) if g.head(d) == 2)]
    with pytest.raises(ChordOnFace):
        chord_exchange(g, 1, 2, f12)
    # triangle with a pendant edge: both sides of {3, 4} lie in the outer face
    g = parse("1: 2 3\n2: 3 1\n3: 1 2 4\n4: 3\n")
    inner = next(k for k, f in enumerate(g.faces) if len(f) == 3)
    with pytest.raises(FacesNotDistinct):
        chord_exchange(g, 3, 4, inner)


def test_reduce_to_simple_dual_on_hexagon():
    g = delete_vertex(load_fixture("k7-torus"), 7)
    out, history = reduce_to_simple_dual(g)
    assert history
    assert max(len(f) for f in out.faces) <= 5
    assert is_simple(dual(out).graph).simple
    assert out.genus() == g.genus()


def test_reduce_is_noop_when_done():
    g = load_fixture("k8")
    out, history = reduce_to_simple_dual(g)
    assert history == [] and out is g


def test_delete_vertex():
    g = delete_vertex(load_fixture("k8"), 8)
    assert (g.v, g.e) == (7, 21)
    with pytest.raises(Disconnects):
        delete_vertex(parse("1: 2\n2: 1 3\n3: 2\n"), 2)


def test_add_edge_in_face_splits_it():
    g = parse("1: 2 4\n2: 3 1\n3: 4 2\n4: 1 3\n")
    walk = g.faces[0]
    a = walk[0]
    b = next(d for d in walk if g.tail[d] not in (g.tail[a], g.head(a)) and g.head(d) != g.tail[a])
    out = add_edge_in_face(g, a, b)
    assert (out.e, out.f, out.genus()) == (5, 3, 0)


def test_wedge_adds_genus_and_cut_vertex():
    k7, ico = load_fixture("k7-torus"), load_fixture("icosahedron")
    w = wedge(k7, ico)
    assert (w.v, w.genus()) == (18, 1)
    assert kappa(w) == 1


def test_glue_rejects_parallel_edges():
    g = parse(K4)
    pairs = [(1, 1), (2, 2)]
    with pytest.raises(ParallelEdgeCreated):
        glue_copies(g, g, pairs, {1: g.darts_at(1)[0], 2: g.darts_at(2)[0]},
                    {1: g.darts_at(1)[0], 2: g.darts_at(2)[0]})


@given(rotation_systems(), st.data())
def test_random_angle_identification(g, data):
    if g.v < 2:
        return
    u = data.draw(st.sampled_from(list(g.vertices())))
    w = data.draw(st.sampled_from([x for x in g.vertices() if x != u]))
    a1 = Angle.before(g, data.draw(st.sampled_from(g.darts_at(u))))
    a2 = Angle.before(g, data.draw(st.sampled_from(g.darts_at(w))))
    out = identify_angles(g, a1, a2)
    assert out.graph.v == g.v - 1 and out.graph.e == g.e
