from fractions import Fraction

import pytest

from dualconn.connectivity import isomorphic, kappa
from dualconn.constructions import (
    FIXTURE_NAMES,
    BadParity,
    FixtureCorrupt,
    Interval,
    OutOfRange,
    bigfaces_arithmetic,
    blocked_bound,
    complete_graph_fixtures,
    delta1_construction,
    delta1_parameters,
    delta_table,
    extra_edges,
    fixture_claims,
    fixture_text,
    genus_complete,
    hexagonal_torus,
    k7_torus,
    load_fixture,
    ringel_embedding,
    validate_fixture,
)
from dualconn.dual import dual, face_size_census, is_simple

ADMISSIBLE = [(p, q) for p in (3, 5, 7, 9, 11) for q in (6, 10)]


@pytest.mark.parametrize("p, q, genus, faces", [(7, 6, 5, 21), (9, 6, 7, 27)])
def test_ringel_examples(p, q, genus, faces):
    g = ringel_embedding(p, q)
    assert g.genus() == genus
    assert face_size_census(g) == {4: faces}


@pytest.mark.parametrize("p, q", ADMISSIBLE)
def test_ringel_family(p, q):
    g = ringel_embedding(p, q)
    assert (g.v, g.e) == (p + q, p * q)
    assert Fraction(g.genus()) == Fraction((p - 2) * (q - 2), 4)
    assert set(len(f) for f in g.faces) == {4}
    assert is_simple(dual(g).graph).simple


@pytest.mark.parametrize("p, q", [(7, 8), (6, 6), (7, 2)])
def test_ringel_bad_parity(p, q):
    with pytest.raises(BadParity):
        ringel_embedding(p, q)


def test_delta1_parameters():
    assert delta1_parameters(7) == (7, 6)
    assert delta1_parameters(8) == (9, 6)
    assert delta1_parameters(9) == (9, 6)


def test_extra_edges_pattern():
    assert extra_edges(7) == [(3, 4), (4, 5), (7, 1)]
    assert extra_edges(9) == [(3, 4), (4, 5), (7, 8), (8, 9)]


@pytest.mark.parametrize("c, genus", [(7, 13), (8, 18)])
def test_delta1_construction(c, genus):
    g3, rep = delta1_construction(c)
    assert rep.ok, rep.checks
    assert g3.genus() == rep.genus == genus
    assert rep.genus <= Fraction(c * c + 6 * c - 5, 4)
    assert kappa(g3) >= c
    assert kappa(dual(g3).graph) == 1
    # the merged big face is the cut vertex of the dual
    assert dual(g3).graph.degree(rep.dual_cut_vertex) == rep.big_face_size


def test_hex_torus_counts():
    ht = hexagonal_torus(3, 3, 0)
    t = ht.tiling
    assert (t.v, t.e, t.f, t.genus()) == (18, 27, 9, 1)
    assert face_size_census(t) == {6: 9}
    assert set(ht.dual.degree(v) for v in ht.dual.vertices()) == {6}
    assert ht.kappa == 3


def test_hex_torus_recovers_k7():
    k7 = k7_torus()
    hits = [q for q in range(7) if hexagonal_torus(7, 1, q).dual_simple
            and isomorphic(hexagonal_torus(7, 1, q).dual, k7)]
    assert hits
    for q in hits:
        d = hexagonal_torus(7, 1, q).dual
        # genus one forces every face of K7 to be a triangle
        assert d.genus() == 1 and face_size_census(d) == {3: 14}


def test_hex_torus_degenerate():
    ht = hexagonal_torus(1, 1, 0)
    assert not ht.dual_simple
    assert ht.kappa is None
    with pytest.raises(ValueError):
        hexagonal_torus(3, 0, 0)


@pytest.mark.parametrize("c, g", [(7, 2), (8, 3), (9, 4), (13, 10)])
def test_genus_complete(c, g):
    assert genus_complete(c) == g


@pytest.mark.parametrize("name", ["k8", "k9", "k10", "k14"])
def test_complete_fixtures_have_minimum_genus(name):
    g = load_fixture(name)
    assert g.genus() == genus_complete(g.v - 1)
    assert kappa(g) == g.v - 1


def test_k11_minus_matching_degrees():
    g = load_fixture("k11-minus-matching")
    degs = sorted(g.degree(v) for v in g.vertices())
    assert degs == [9] * 10 + [10]


def test_k15_minus_matching_counts():
    g = load_fixture("k15-minus-matching")
    assert (g.v, g.e, g.f, g.genus()) == (15, 98, 65, 10)


def test_all_fixtures_load():
    for name in FIXTURE_NAMES:
        g = load_fixture(name)
        claims = fixture_claims(name)
        assert (g.v, g.e, g.f, g.genus()) == (claims["v"], claims["e"], claims["f"], claims["genus"])
    assert set(complete_graph_fixtures()) >= {"k8", "k9", "k10", "k14", "k7-torus"}


def test_k7_torus_fixture_matches_generator():
    assert fixture_text("k7-torus")
    assert isomorphic(load_fixture("k7-torus"), k7_torus())


def test_corrupted_fixture_is_rejected():
    text = fixture_text("k9")
    lines = text.splitlines()
    i = next(k for k, line in enumerate(lines) if line.startswith("1:"))
    head, rest = lines[i].split(":")
    toks = rest.split()
    toks[0], toks[1] = toks[1], toks[0]
    lines[i] = head + ": " + " ".join(toks)
    with pytest.raises(FixtureCorrupt, match="genus"):
        validate_fixture("k9", "\n".join(lines) + "\n", fixture_claims("k9"))


def test_checksum_guards_cosmetic_edits():
    text = fixture_text("k8") + "# trailing note\n"
    with pytest.raises(FixtureCorrupt, match="checksum"):
        validate_fixture("k8", text, fixture_claims("k8"))


def test_bigfaces_examples():
    assert (bigfaces_arithmetic(13).d, bigfaces_arithmetic(13).f) == (10, 59)
    b = blocked_bound(13)
    assert (b.bound, b.single_face) == (65, 25)
    assert (bigfaces_arithmetic(11).d, bigfaces_arithmetic(11).f, blocked_bound(11).bound) == (0, 44, 0)
    b8 = bigfaces_arithmetic(8)
    assert (b8.d, b8.f, b8.excess) == (6, 23, 3)


@pytest.mark.parametrize("name", ["k8", "k9", "k10", "k14"])
def test_bigfaces_agree_with_fixture_census(name):
    g = load_fixture(name)
    bf = bigfaces_arithmetic(g.v - 1)
    assert g.f == bf.f
    assert sum(len(f) - 3 for f in g.faces) == bf.excess


def test_bigfaces_d_range():
    for c in range(3, 40):
        d = bigfaces_arithmetic(c).d
        assert d % 2 == 0 and 0 <= d <= 10
        assert ((c - 2) * (c - 3) + d) % 12 == 0


def test_blocked_verdict_for_large_c():
    assert all(blocked_bound(c).verdict for c in range(14, 60))


@pytest.mark.parametrize("k, c, value", [(2, 6, 2), (3, 5, 0), (1, 4, 2), (1, 6, 3), (1, 1, 0)])
def test_delta_table_values(k, c, value):
    assert delta_table(k, c) == value


def test_delta_table_intervals():
    assert delta_table(2, 7) == Interval(2, 3)
    iv = delta_table(1, 7)
    assert iv == Interval(2, (49 + 42 - 5) // 4)
    assert 13 in iv
    with pytest.raises(OutOfRange):
        delta_table(5, 3)


def test_delta_lower_bound():
    for c in range(6, 20):
        for k in range(1, c + 1):
            v = delta_table(k, c)
            lo = v.lo if isinstance(v, Interval) else v
            assert lo >= genus_complete(c)
