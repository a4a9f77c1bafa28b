import pytest
from hypothesis import given

from dualconn.embedding import (
    ConsistencyError,
    DanglingNeighbour,
    Disconnected,
    EmbeddedGraph,
    EmptyGraph,
    RotationSyntaxError,
    UnpairedEdge,
    parse,
    serialize,
    trace_faces,
)

from strategies import rotation_systems

K4_PLANE = """
1: 2 3 4
2: 1 4 3
3: 1 2 4
4: 1 3 2
"""


def test_k4_plane_counts():
    g = parse(K4_PLANE)
    assert (g.v, g.e, g.f, g.genus()) == (4, 6, 4, 0)
    assert trace_faces(g).size_counts() == {3: 4}


def test_k4_torus_rotation():
    g = parse("1: 2 3 4\n2: 1 3 4\n3: 1 2 4\n4: 1 2 3\n")
    assert g.genus() == 1
    assert sorted(len(f) for f in g.faces) == [4, 8]


def test_face_rule_follows_reverse_dart():
    g = parse(K4_PLANE)
    for d in range(g.num_darts):
        assert g.face_next(d) == g.succ[d ^ 1]
        assert g.face_of[g.face_next(d)] == g.face_of[d]


def test_faces_partition_darts():
    g = parse(K4_PLANE)
    darts = sorted(d for f in g.faces for d in f)
    assert darts == list(range(g.num_darts))


def test_round_trip_keeps_rotation():
    g = parse(K4_PLANE)
    h = parse(serialize(g))
    assert h.rotation_table() == g.rotation_table()


def test_multigraph_needs_edge_ids():
    text = "1: 2[1] 2[2] 1[3] 1[3]\n2: 1[2] 1[1]\n"
    g = parse(text)
    assert (g.v, g.e) == (2, 3)
    assert not g.is_simple_graph()
    out = serialize(g)
    assert "[" in out
    assert parse(out).genus() == g.genus()


def test_graph_header_sets_name():
    g = parse("# a comment\ngraph tiny\n1: 2\n2: 1\n")
    assert g.name == "tiny"
    assert serialize(g).splitlines()[0] == "graph tiny"


@pytest.mark.parametrize(
    "text, error",
    [
        ("", EmptyGraph),
        ("# only a comment\n", EmptyGraph),
        ("1: 2\n2: 1\n1: 2\n", RotationSyntaxError),
        ("1 2 3\n", RotationSyntaxError),
        ("1: 2 x\n2: 1\n", RotationSyntaxError),
        ("1: 3\n3: 1\n", DanglingNeighbour),
        ("1: 2 2\n2: 1\n", UnpairedEdge),
        ("1: 2\n2: 1\n3: 4\n4: 3\n", Disconnected),
    ],
)
def test_parse_errors(text, error):
    with pytest.raises(error):
        parse(text)


def test_syntax_error_reports_line():
    with pytest.raises(RotationSyntaxError) as info:
        parse("1: 2\n2 1\n")
    assert info.value.lineno == 2


def test_dart_used_twice_rejected():
    with pytest.raises(ConsistencyError):
        EmbeddedGraph([[0, 1], [0, 1]])


def test_disconnected_allowed_on_request():
    g = parse("1: 2\n2: 1\n3: 4\n4: 3\n", allow_disconnected=True)
    assert len(g.components()) == 2
    assert g.component_genera() == [0, 0]


def test_mirror_reverses_rotations():
    g = parse("1: 2 3 4\n2: 1 3 4\n3: 1 2 4\n4: 1 2 3\n")
    m = g.mirror()
    for v in g.vertices():
        start = g.darts_at(v)[0]
        fwd = [g.head(d) for d in g.rotation_from(v, start)]
        back = [m.head(d) for d in m.rotation_from(v, start)]
        assert back == fwd[:1] + fwd[:0:-1]


@given(rotation_systems())
def test_euler_characteristic_is_even(g):
    assert (g.v - g.e + g.f) % 2 == 0
    assert g.genus() >= 0


@given(rotation_systems())
def test_genus_bounded_by_cycle_rank(g):
    assert 2 * g.genus() <= g.e - g.v + 1


@given(rotation_systems())
def test_serialize_parse_round_trip(g):
    h = parse(serialize(g, edge_ids=True))
    assert (h.v, h.e, h.f, h.genus()) == (g.v, g.e, g.f, g.genus())
    assert sorted(map(len, h.faces)) == sorted(map(len, g.faces))


@given(rotation_systems())
def test_mirror_keeps_genus_and_face_sizes(g):
    m = g.mirror()
    assert m.genus() == g.genus()
    assert sorted(map(len, m.faces)) == sorted(map(len, g.faces))
    assert m.mirror().rotation == g.rotation
