import random
from fractions import Fraction

import networkx as nx
import pytest
from hypothesis import given, strategies as st

from dualconn.connectivity import is_disconnected_by, simple_graph
from dualconn.constructions import load_fixture, wedge
from dualconn.cuts import (
    BRIDGED,
    SIMPLE_NONPLANE,
    SIMPLE_PLANE,
    NotACutset,
    PreconditionUnmet,
    analyze_cutset,
    boundary_multigraph,
    check_boundary_cut,
    check_bridges_have_cycles,
    check_in_different_faces,
    check_jordan,
    check_lemma_2face,
    check_lemma_atleast5,
    check_small_face_bound,
    decompose_bridges,
    dual_cut_bound,
    find_small_dual_cut,
    random_connected_edges,
    small_face_bound,
)
from dualconn.dual import dual
from dualconn.embedding import parse
from dualconn.surgery import h_operation

from strategies import rotation_systems


@pytest.fixture(scope="module")
def k7_ico():
    return wedge(load_fixture("k7-torus"), load_fixture("icosahedron"))


@pytest.fixture(scope="module")
def dod_h():
    dod = load_fixture("dodecahedron")
    return h_operation(dod, *dod.edge_ends(0)).graph


def test_not_a_cutset():
    with pytest.raises(NotACutset):
        analyze_cutset(load_fixture("k8"), [1, 2])


def test_wedge_cut_analysis(k7_ico):
    a = analyze_cutset(k7_ico, [1])
    assert a.cutset == (1,)
    assert len(a.components) == 2
    assert all(a.faces_of)
    bm = boundary_multigraph(a)
    assert bm.genus_bar == k7_ico.genus()
    assert bm.gb_connected()
    assert nx.is_bipartite(simple_graph(bm.gb))


def test_two_cut_boundary_multigraph(dod_h):
    cut = next(c for c in [(a, b) for a in dod_h.vertices() for b in dod_h.vertices() if a < b]
               if is_disconnected_by(simple_graph(dod_h), c))
    a = analyze_cutset(dod_h, cut)
    bm = boundary_multigraph(a)
    assert bm.genus_bar == dod_h.genus()
    # every G_b edge records one occurrence of a cut vertex on a boundary face
    occ = sum(1 for f in a.boundary_faces for d in dod_h.faces[f] if dod_h.tail[d] in cut)
    assert bm.gb.e == occ


def test_boundary_faces_separate_dual(k7_ico):
    bc = check_boundary_cut(analyze_cutset(k7_ico, [1]))
    dg = simple_graph(dual(k7_ico).graph)
    assert is_disconnected_by(dg, bc.cut)
    assert bc.side_a and bc.side_b


def test_lemma_verdicts_on_wedges(k7_ico):
    for g in (k7_ico, wedge(load_fixture("k7-torus"), load_fixture("k7-torus"))):
        bm = boundary_multigraph(analyze_cutset(g, [1]))
        dec = decompose_bridges(bm.bar, bm.gb_edges)
        assert check_lemma_atleast5(bm).holds
        assert check_lemma_2face(bm, dec).holds
        assert check_in_different_faces(dec).holds
        assert check_bridges_have_cycles(bm, dec).holds


def test_lemma_needs_one_cut(dod_h):
    h = simple_graph(dod_h)
    cut = next((a, b) for a in sorted(h) for b in sorted(h) if a < b and is_disconnected_by(h, (a, b)))
    bm = boundary_multigraph(analyze_cutset(dod_h, cut))
    with pytest.raises(PreconditionUnmet):
        check_lemma_atleast5(bm)


def test_bridge_classification_plane_cycle():
    # plane hexagon with one chord
    g = parse("1: 2 6 4\n2: 3 1\n3: 4 2\n4: 5 3 1\n5: 6 4\n6: 1 5\n")
    cycle = [i for i in range(g.e) if set(g.edge_ends(i)) != {1, 4}]
    dec = decompose_bridges(g, cycle)
    assert len(dec.bridges) == 1 and dec.bridges[0].kind == "chord"
    assert set(dec.classification.values()) <= {SIMPLE_PLANE, SIMPLE_NONPLANE, BRIDGED}
    assert dec.s_np == 0


def test_small_face_bound_instantiations():
    assert small_face_bound(4, 1, 4) == Fraction(4, 3)
    assert small_face_bound(6, 1, 5, second_form=True) == Fraction(13, 4)
    with pytest.raises(ValueError):
        small_face_bound(2, 1, 3, second_form=True)


def test_small_face_count_on_boundary_multigraph(k7_ico):
    gb = boundary_multigraph(analyze_cutset(k7_ico, [1])).gb
    res = check_small_face_bound(gb, 4)
    assert res.holds
    assert res.required >= 0


def test_small_face_needs_single_vertex_side():
    with pytest.raises(PreconditionUnmet):
        check_small_face_bound(parse("1: 2 4\n2: 3 1\n3: 4 2\n4: 1 3\n"), 3)


@pytest.mark.parametrize("name", ["k8", "k9", "k7-torus", "dodecahedron", "k8-hop"])
def test_jordan_on_fixtures(name):
    g = load_fixture(name)
    rng = random.Random(7)
    for _ in range(40):
        assert check_jordan(g, random_connected_edges(g, rng)).holds


@given(rotation_systems(max_vertices=8), st.randoms(use_true_random=False))
def test_jordan_on_random_embeddings(g, rnd):
    if g.e == 0:
        return
    edges = random_connected_edges(g, rnd)
    res = check_jordan(g, edges)
    assert res.holds
    assert res.sub_genus <= res.genus


def test_dual_cut_bounds():
    assert dual_cut_bound(1, 1) == 3
    assert dual_cut_bound(2, 1) == 5
    assert dual_cut_bound(1, 2) == 5
    with pytest.raises(PreconditionUnmet):
        dual_cut_bound(3, 2)


def test_small_dual_cut_genus_one(k7_ico):
    r = find_small_dual_cut(k7_ico)
    assert r.constructive and r.confirmed
    assert len(r.cut) <= 3


def test_small_dual_cut_two_cut_torus(dod_h):
    r = find_small_dual_cut(dod_h)
    assert r.bound == 5 and len(r.cut) <= 5 and r.confirmed
    assert is_disconnected_by(simple_graph(dual(dod_h).graph), r.cut)


def test_small_dual_cut_needs_small_primal_cut():
    with pytest.raises(PreconditionUnmet):
        find_small_dual_cut(load_fixture("k8"))
