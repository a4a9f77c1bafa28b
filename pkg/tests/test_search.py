import random
from collections import Counter
from itertools import permutations

import networkx as nx
import pytest
from networkx.generators.atlas import graph_atlas, graph_atlas_g

from dualconn.connectivity import isomorphic, kappa
from dualconn.dual import dual, is_simple
from dualconn.embedding import EmbeddedGraph
from dualconn.search import (
    BudgetExceeded,
    SearchSpec,
    canonical_form,
    count_rotation_systems,
    disk_gluings,
    enumerate_rotations,
    find_rotation_witness,
    find_witness,
    plane_dual_survey,
    plane_embedding,
    polyhedral_graphs,
    pred_dual_kappa_at_most,
    pred_dual_kappa_exactly,
    pred_dual_nonplanar,
    pred_dual_simple,
    pred_genus,
    pred_kappa_at_least,
    pred_nonplanar,
    pred_simple,
    random_rotation_system,
    wheel,
)
from dualconn.verify import figure4_spec


def complete(n):
    return nx.relabel_nodes(nx.complete_graph(n), lambda x: x + 1)


def brute_force_genera(h):
    """Genus census over every rotation system, by direct enumeration."""
    nodes = sorted(h)
    orders = []
    for v in nodes:
        nb = sorted(h[v])
        orders.append([(nb[0],) + p for p in permutations(nb[1:])])
    census = Counter()

    def rec(k, rot):
        if k == len(nodes):
            census[EmbeddedGraph.from_rotation(dict(rot)).genus()] += 1
            return
        for o in orders[k]:
            rot[nodes[k]] = o
            rec(k + 1, rot)

    rec(0, {})
    return census


def test_k4_counts_mirror_pair():
    full = Counter(g.genus() for g in enumerate_rotations(complete(4), mirror_reduced=False))
    assert full == brute_force_genera(complete(4))
    assert full[0] == 2
    reduced = Counter(g.genus() for g in enumerate_rotations(complete(4)))
    assert reduced[0] == 1
    assert sum(reduced.values()) * 2 == sum(full.values())


def test_k4_sphere_embedding_is_all_triangles():
    (g,) = list(enumerate_rotations(complete(4), genus=0))
    assert sorted(len(f) for f in g.faces) == [3, 3, 3, 3]


@pytest.mark.parametrize("n", [4, 5])
def test_count_matches_enumeration(n):
    for mirror in (True, False):
        total = sum(1 for _ in enumerate_rotations(complete(n), mirror_reduced=mirror))
        assert total == count_rotation_systems(complete(n), mirror_reduced=mirror)


def test_k5_genus_census_matches_brute_force():
    got = Counter(g.genus() for g in enumerate_rotations(complete(5), mirror_reduced=False))
    assert got == brute_force_genera(complete(5))


def test_pruned_enumeration_finds_every_low_genus_system():
    h = complete(5)
    pruned = [canonical_form(g) for g in enumerate_rotations(h, genus=1)]
    plain = [canonical_form(g) for g in enumerate_rotations(h) if g.genus() == 1]
    assert pruned == plain


def test_enumeration_is_lexicographic():
    forms = [canonical_form(g) for g in enumerate_rotations(complete(4))]
    rows = [[tuple(map(int, line.split(":")[1].split())) for line in f.strip().splitlines()] for f in forms]
    assert rows == sorted(rows)


def test_budget_exceeded():
    with pytest.raises(BudgetExceeded):
        list(enumerate_rotations(complete(7), genus=1, budget=1000))


def test_k5_has_self_dual_torus_embedding():
    g = find_rotation_witness(complete(5), "self-dual", genus=1)
    assert g is not None and g.genus() == 1
    assert isomorphic(dual(g).graph, g)


def test_witness_independent_of_worker_count():
    a = find_rotation_witness(complete(5), "self-dual", genus=1, workers=1)
    b = find_rotation_witness(complete(5), "self-dual", genus=1, workers=3)
    assert canonical_form(a) == canonical_form(b)


def test_k7_torus_embeddings_are_triangulations():
    # genus one forces f = 14 = 2e/3; checked on every hit of a bounded search
    found = []
    try:
        for g in enumerate_rotations(complete(7), genus=1, budget=250_000):
            found.append(g)
    except BudgetExceeded:
        pass
    assert found
    for g in found:
        assert sorted(len(f) for f in g.faces) == [3] * 14
        assert isomorphic(dual(g).graph, dual(found[0]).graph)


def test_figure4_witness():
    res = find_witness(figure4_spec())
    w = res.witness
    assert w is not None
    g = w.graph
    assert g.genus() == 1 and g.is_simple_graph() and g.v <= 12
    assert kappa(g) >= 3
    dg = dual(g).graph
    assert is_simple(dg).simple and kappa(dg) == 1
    # deterministic
    assert find_witness(figure4_spec()).witness.canonical == w.canonical


def test_disk_gluing_parameters_are_ordered():
    params = [p for p, _ in disk_gluings(9, 3)]
    totals = [p[0] + p[1] - 1 for p in params]
    assert totals == sorted(totals)


@pytest.mark.slow
def test_figure10_analogue():
    # atlas graph 1191: 7 vertices, 15 edges, nonplanar and 3-connected
    h = nx.relabel_nodes(graph_atlas(1191), lambda x: x + 1)
    spec = SearchSpec(
        predicates=[
            ("simple", pred_simple),
            ("kappa >= 3", pred_kappa_at_least(3)),
            ("nonplanar", pred_nonplanar),
            ("dual simple", pred_dual_simple),
            ("dual has a 2-cut", pred_dual_kappa_exactly(2)),
            ("dual nonplanar", pred_dual_nonplanar),
        ],
        base=[h],
        genus=1,
    )
    res = find_witness(spec)
    assert res.witness is not None
    g = res.witness.graph
    assert g.genus() == 1 and kappa(dual(g).graph) == 2


def test_absent_is_not_an_error():
    spec = SearchSpec(predicates=[("dual 1-cut", pred_dual_kappa_at_most(1))], base=[complete(4)], genus=0)
    res = find_witness(spec)
    assert res.witness is None and res.exhausted and res.candidates == 1


def test_wheel_is_plane():
    w = wheel(5)
    assert (w.v, w.e, w.genus()) == (6, 10, 0)


def test_polyhedral_graphs_against_atlas():
    ours = Counter(h.number_of_nodes() for h in polyhedral_graphs(7))
    ref = Counter(
        h.number_of_nodes() for h in graph_atlas_g()
        if h.number_of_nodes() >= 4 and nx.is_connected(h) and nx.check_planarity(h)[0]
        and nx.node_connectivity(h) >= 3
    )
    assert ours == ref


def test_plane_embedding_round_trip():
    for h in polyhedral_graphs(6):
        g = plane_embedding(h)
        assert g.genus() == 0
        assert nx.is_isomorphic(nx.convert_node_labels_to_integers(h),
                                nx.convert_node_labels_to_integers(nx.Graph(list(g.edges()))))


def test_plane_dual_survey_small():
    s = plane_dual_survey(7, whitney_up_to=6)
    assert s.counterexamples == []
    assert s.by_order == {4: 1, 5: 2, 6: 7, 7: 34}
    assert s.embeddings_checked == 10


def test_two_connected_plane_graphs_have_two_connected_simple_duals():
    for h in graph_atlas_g()[1:]:
        n = h.number_of_nodes()
        if n < 3 or n > 6 or not nx.is_biconnected(h) or not nx.check_planarity(h)[0]:
            continue
        h = nx.relabel_nodes(h, lambda x: x + 1)
        for g in enumerate_rotations(h, genus=0):
            dg = dual(g).graph
            if is_simple(dg).simple:
                assert kappa(dg) >= 2


def test_random_rotation_system_reproducible():
    a = random_rotation_system(random.Random(5), 10)
    b = random_rotation_system(random.Random(5), 10)
    assert a.rotation == b.rotation
    assert 2 <= a.v <= 10 and a.is_connected()


def test_predicates():
    g = EmbeddedGraph.from_rotation({1: [2, 3, 4], 2: [1, 4, 3], 3: [1, 2, 4], 4: [1, 3, 2]})
    assert pred_genus(0)(g) and pred_simple(g) and pred_dual_simple(g)
    assert pred_kappa_at_least(3)(g) and not pred_nonplanar(g)
