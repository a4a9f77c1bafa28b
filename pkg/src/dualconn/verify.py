"""Reproduction checks for the main claims, one check per claim.

Every check records measured values as strings (exact integers and
fractions only) and a pass/fail status.  A failing expectation never stops
the remaining expectations of the same check.
"""

from __future__ import annotations

import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from .connectivity import (
    embedded_isomorphism,
    is_disconnected_by,
    isomorphic,
    kappa,
    simple_graph,
    vertex_connectivity,
)
from .constructions import (
    bigfaces_arithmetic,
    blocked_bound,
    delta1_construction,
    delta_table,
    genus_complete,
    load_fixture,
    ringel_embedding,
    wedge,
)
from .cuts import (
    analyze_cutset,
    boundary_multigraph,
    check_jordan,
    check_small_face_bound,
    find_small_dual_cut,
    random_connected_edges,
    small_face_bound,
)
from .dual import dual, face_size_census, is_simple
from .embedding import parse, serialize
from .search import (
    SearchSpec,
    find_witness,
    plane_dual_survey,
    pred_dual_kappa_at_most,
    pred_dual_simple,
    pred_genus,
    pred_kappa_at_least,
    pred_simple,
    random_rotation_system,
)
from .surgery import h_operation


@dataclass
class CheckResult:
    id: str
    anchor: str
    status: str  # "pass", "fail" or "skipped"
    measured: dict[str, str] = field(default_factory=dict)
    failures: list[str] = field(default_factory=list)
    runtime_ms: int = 0
    reason: str | None = None

    @property
    def passed(self) -> bool:
        return self.status == "pass"

    def as_dict(self) -> dict:
        out = {
            "id": self.id,
            "anchor": self.anchor,
            "status": self.status,
            "measured": dict(sorted(self.measured.items())),
            "failures": list(self.failures),
            "runtime_ms": str(self.runtime_ms),
        }
        if self.reason is not None:
            out["reason"] = self.reason
        return out


class Probe:
    """Collects measurements and failed expectations for one check."""

    def __init__(self, fixtures: str | None, seed: int):
        self.fixtures = fixtures
        self.seed = seed
        self.measured: dict[str, str] = {}
        self.failures: list[str] = []

    def load(self, name: str):
        return load_fixture(name, self.fixtures)

    def record(self, key: str, value) -> None:
        self.measured[key] = _render(value)

    def expect(self, key: str, got, want) -> bool:
        self.record(key, got)
        if got != want:
            self.failures.append(f"{key}: got {_render(got)}, expected {_render(want)}")
            return False
        return True

    def require(self, key: str, ok: bool) -> bool:
        return self.expect(key, bool(ok), True)


def _render(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, dict):
        return ",".join(f"{k}:{_render(v)}" for k, v in sorted(value.items()))
    if isinstance(value, (list, tuple)):
        return "[" + ",".join(_render(v) for v in value) + "]"
    return str(value)


# ----------------------------------------------------------------------
# checks


def check_fixture_tables(p: Probe) -> None:
    dual_sizes = {"k8": 18, "k9": 23, "k10": 29, "k14": 59}
    genera = {"k8": 2, "k9": 3, "k10": 4, "k14": 10}
    for name, size in dual_sizes.items():
        g = p.load(name)
        c = g.v - 1
        p.expect(f"{name}.genus", g.genus(), genera[name])
        p.require(f"{name}.simple", g.is_simple_graph())
        dg = dual(g).graph
        p.require(f"{name}.dual_simple", is_simple(dg).simple)
        census = face_size_census(g)
        p.record(f"{name}.face_sizes", census)
        if name != "k8":
            p.expect(f"{name}.non_triangles", g.f - census.get(3, 0), 1)
        table = p.load(f"{name}-dual")
        p.expect(f"{name}.dual_vertices", dg.v, size)
        p.expect(f"{name}.table_dual_vertices", table.v, size)
        p.expect(f"{name}.face_formula", bigfaces_arithmetic(c).f, Fraction(size))
        p.require(f"{name}.dual_matches_table", isomorphic(dg, table))


def check_h_operation(p: Probe) -> None:
    k8 = p.load("k8")
    target = p.load("k8-hop")
    computed = dual(k8).graph
    out = h_operation(computed, 1, 2).graph
    p.expect("genus", out.genus(), 3)
    p.require("embedded_iso_to_table", embedded_isomorphism(out, target, allow_mirror=True) is not None)
    p.require("abstract_iso_to_table", isomorphic(out, target))
    p.expect("kappa", kappa(out), 2)
    p.require("dual_iso_k8", isomorphic(dual(out).graph, k8))
    # the tabulated dual gives the same result without reflection
    table_out = h_operation(p.load("k8-dual"), 1, 2).graph
    p.require("table_route_embedded_iso", embedded_isomorphism(table_out, target, allow_mirror=False) is not None)


def check_matching_deleted(p: Probe) -> None:
    for name, c, k_ref, conn in (
        ("k11-minus-matching", 9, "k10", 9),
        ("k15-minus-matching", 13, "k14", 13),
    ):
        g = p.load(name)
        p.expect(f"{name}.kappa", kappa(g), conn)
        p.expect(f"{name}.genus", g.genus(), genus_complete(c))
        p.expect(f"{name}.genus_equals_{k_ref}", g.genus(), p.load(k_ref).genus())
        p.require(f"{name}.dual_simple", is_simple(dual(g).graph).simple)


def check_delta_witnesses(p: Probe) -> None:
    dod, ico = p.load("dodecahedron"), p.load("icosahedron")
    x, y = dod.edge_ends(0)
    g = h_operation(dod, x, y).graph
    p.expect("dodecahedron_h.genus", g.genus(), 1)
    p.require("dodecahedron_h.simple", g.is_simple_graph())
    p.expect("dodecahedron_h.kappa", kappa(g), 2)
    p.require("dodecahedron_h.dual_iso_icosahedron", isomorphic(dual(g).graph, ico))
    p.expect("icosahedron.kappa", kappa(ico), 5)
    p.expect("delta2_3_to_5", [delta_table(2, c) for c in (3, 4, 5)], [1, 1, 1])

    k7 = p.load("k7-torus")
    heawood = dual(k7).graph
    x, y = heawood.edge_ends(0)
    g = h_operation(heawood, x, y).graph
    p.expect("heawood_h.genus", g.genus(), 2)
    p.expect("heawood_h.kappa", kappa(g), 2)
    p.require("heawood_h.dual_iso_k7", isomorphic(dual(g).graph, k7))
    p.expect("k7.kappa", kappa(k7), 6)
    p.expect("delta2_6", delta_table(2, 6), 2)


def check_ringel(p: Probe) -> None:
    for pp, q in ((7, 6), (9, 6), (7, 10), (9, 10)):
        g = ringel_embedding(pp, q)
        key = f"K{pp},{q}"
        p.expect(f"{key}.genus", Fraction(g.genus()), Fraction((pp - 2) * (q - 2), 4))
        p.expect(f"{key}.face_sizes", face_size_census(g), {4: pp * q // 2})
        p.require(f"{key}.dual_simple", is_simple(dual(g).graph).simple)


def check_delta1(p: Probe) -> None:
    for c in (7, 8, 9):
        g3, r = delta1_construction(c)
        key = f"c{c}"
        p.record(f"{key}.pq", (r.p, r.q))
        p.require(f"{key}.kappa_at_least_c", r.kappa >= c)
        p.require(f"{key}.dual_simple", r.dual_simple)
        p.require(f"{key}.dual_cut_vertex", kappa(dual(g3).graph) == 1)
        p.expect(f"{key}.genus", Fraction(r.genus), Fraction((r.p - 2) * (r.q - 1) + 1, 2))
        p.require(f"{key}.genus_within_bound", r.genus <= Fraction(c * c + 6 * c - 5, 4))
        p.require(f"{key}.all_checks", r.ok)
        if c == 7:
            p.expect(f"{key}.genus_exact", r.genus, 13)


JORDAN_FIXTURES = (
    "k8", "k9", "k10", "k8-hop", "k7-torus", "dodecahedron", "icosahedron",
    "k11-minus-matching", "k8-dual", "k9-dual",
)

BIGFACES_ROWS = (
    (13, 10, 59, 65),
    (12, 6, 51, 39),
    (11, 0, 44, 0),
    (10, 4, 36, 26),
    (9, 6, 29, 39),
    (8, 6, 23, 39),
    (7, 4, 18, 26),
    (6, 0, 14, 0),
)


def check_lemma_checkers(p: Probe) -> None:
    rng = random.Random(p.seed)
    graphs = [p.load(n) for n in JORDAN_FIXTURES]
    fails = 0
    for k in range(1000):
        g = graphs[k % len(graphs)]
        if not check_jordan(g, random_connected_edges(g, rng)).holds:
            fails += 1
    p.expect("jordan_violations_in_1000", fails, 0)

    b1 = small_face_bound(4, 1, 4)
    b2 = small_face_bound(6, 1, 5, second_form=True)
    p.expect("small_face_bound_first", b1, Fraction(4, 3))
    p.expect("small_face_required_first", -(-b1.numerator // b1.denominator), 2)
    p.expect("small_face_bound_second", b2, Fraction(13, 4))
    p.expect("small_face_required_second", -(-b2.numerator // b2.denominator), 4)
    # the counting bound on real boundary multigraphs
    for name, g in _one_cut_instances(p).items():
        gb = boundary_multigraph(analyze_cutset(g, [1])).gb
        res = check_small_face_bound(gb, 4)
        p.require(f"{name}.small_face_bound_holds", res.holds)

    rows = []
    for c, d, f, bound in BIGFACES_ROWS:
        bb = blocked_bound(c)
        rows.append((bb.c, bb.d, bb.f, bb.bound))
    p.expect("bigfaces_rows", rows, [tuple(map(Fraction, r)) for r in BIGFACES_ROWS])


def check_duality_properties(p: Probe) -> None:
    rng = random.Random(p.seed)
    bad = []
    names = [
        "k8", "k8-dual", "k8-hop", "k9", "k9-dual", "k10", "k10-dual", "k14",
        "k14-dual", "k11-minus-matching", "k15-minus-matching", "k7-torus",
        "dodecahedron", "icosahedron",
    ]
    samples = [(n, p.load(n)) for n in names]
    samples += [(f"random{k}", random_rotation_system(rng, 10, multigraph=True)) for k in range(200)]
    for label, g in samples:
        dg = dual(g).graph
        if dg.genus() != g.genus():
            bad.append(f"{label}: genus")
        elif embedded_isomorphism(dual(dg).graph, g, allow_mirror=False) is None:
            bad.append(f"{label}: involution")
    p.record("samples", len(samples))
    p.expect("violations", bad, [])


def figure4_spec() -> SearchSpec:
    return SearchSpec(
        predicates=[
            ("genus 1", pred_genus(1)),
            ("simple", pred_simple),
            ("kappa >= 3", pred_kappa_at_least(3)),
            ("dual simple", pred_dual_simple),
            ("dual has a 1-cut", pred_dual_kappa_at_most(1)),
        ],
        family="disk-gluing",
        genus=1,
        max_vertices=12,
        glue_points=3,
        seconds=60,
    )


def revalidate_witness(text: str) -> dict[str, object]:
    """Recompute the witness properties from its serialized form."""
    g = parse(text)
    dg = dual(g).graph
    return {
        "genus": g.genus(),
        "simple": g.is_simple_graph(),
        "kappa": kappa(g),
        "dual_simple": is_simple(dg).simple,
        "dual_kappa": kappa(dg),
    }


def check_search_witnesses(p: Probe) -> None:
    res = find_witness(figure4_spec())
    p.require("witness_found", res.witness is not None)
    if res.witness is not None:
        text = serialize(res.witness.graph)
        p.record("witness", res.witness.canonical.strip().replace("\n", " / "))
        props = revalidate_witness(text)
        p.expect("witness.genus", props["genus"], 1)
        p.require("witness.simple", props["simple"])
        p.require("witness.kappa_at_least_3", props["kappa"] >= 3)
        p.require("witness.dual_simple", props["dual_simple"])
        p.expect("witness.dual_kappa", props["dual_kappa"], 1)
        p.expect("witness.vertices_at_most_12", res.witness.graph.v <= 12, True)
    survey = plane_dual_survey(8, whitney_up_to=7)
    p.record("plane.graphs_by_order", survey.by_order)
    p.record("plane.unique_embedding_checks", survey.embeddings_checked)
    p.expect("plane.counterexamples", survey.counterexamples, [])


def _one_cut_instances(p: Probe) -> dict:
    k7, ico = p.load("k7-torus"), p.load("icosahedron")
    return {"k7-torus+icosahedron": wedge(k7, ico), "k7-torus+k7-torus": wedge(k7, k7)}


def check_dual_cuts(p: Probe) -> None:
    cases = _one_cut_instances(p)
    dod = p.load("dodecahedron")
    cases["dodecahedron-h"] = h_operation(dod, *dod.edge_ends(0)).graph
    for name, g in cases.items():
        r = find_small_dual_cut(g)
        dg = simple_graph(dual(g).graph)
        p.record(f"{name}.genus", g.genus())
        p.record(f"{name}.cut", r.cut)
        p.record(f"{name}.constructive", r.constructive)
        p.require(f"{name}.within_bound_{r.bound}", len(r.cut) <= r.bound)
        independent = is_disconnected_by(dg, r.cut) and vertex_connectivity(dg).kappa <= len(r.cut)
        p.require(f"{name}.confirmed", r.confirmed and independent)
    p.expect("bounds", {n: find_small_dual_cut(g).bound for n, g in cases.items()},
             {"k7-torus+icosahedron": 3, "k7-torus+k7-torus": 5, "dodecahedron-h": 5})


@dataclass(frozen=True)
class Check:
    id: str
    anchor: str
    tags: tuple[str, ...]
    run: Callable[[Probe], None]


CHECKS: tuple[Check, ...] = (
    Check("01-fixture-tables", "complete graph tables: simple, simple duals, one non-triangle face, dual sizes 18/23/29/59",
          ("fixtures",), check_fixture_tables),
    Check("02-h-operation", "H-operation on dual(K8) edge {1,2} gives the genus-3 table with dual K8",
          ("h-operation", "surgery"), check_h_operation),
    Check("03-matching-deleted", "K11-M and K15-M reach the genus of K10 and K14 with connectivity 9 and 13",
          ("fixtures",), check_matching_deleted),
    Check("04-delta-witnesses", "dodecahedron and Heawood H-operations witness delta_2 values",
          ("h-operation", "surgery"), check_delta_witnesses),
    Check("05-ringel", "quadrangular K_{p,q} embeddings of genus (p-2)(q-2)/4",
          ("constructions",), check_ringel),
    Check("06-delta1-construction", "glued Ringel copies: c-connected, simple dual with a cut vertex",
          ("constructions",), check_delta1),
    Check("07-lemma-checkers", "Jordan-type inequality, small-face counting, blocked-vertex table",
          ("cuts",), check_lemma_checkers),
    Check("08-duality-properties", "dual involution and genus preservation",
          ("duality",), check_duality_properties),
    Check("09-search-witnesses", "toroidal 3-connected graph whose simple dual has a cut vertex; plane duality sanity check",
          ("search",), check_search_witnesses),
    Check("10-dual-cuts", "small dual cuts at genus 1 and 2 confirmed by connectivity",
          ("cuts",), check_dual_cuts),
)


def select(only: str | None) -> list[Check]:
    """Checks whose id contains ``only`` or that carry it as a tag."""
    if not only:
        return list(CHECKS)
    return [c for c in CHECKS if only in c.id or only in c.tags]


def run_check(check: Check, fixtures: str | None = None, seed: int = 0) -> CheckResult:
    probe = Probe(fixtures, seed)
    t0 = time.perf_counter_ns()
    try:
        check.run(probe)
    except Exception as exc:  # reported, never fatal for the harness
        probe.failures.append(f"{type(exc).__name__}: {exc}")
    ms = (time.perf_counter_ns() - t0) // 1_000_000
    status = "fail" if probe.failures else "pass"
    return CheckResult(check.id, check.anchor, status, probe.measured, probe.failures, ms)


def _run_by_id(args: tuple[str, str | None, int]) -> CheckResult:
    cid, fixtures, seed = args
    check = next(c for c in CHECKS if c.id == cid)
    return run_check(check, fixtures, seed)


def run_all(
    only: str | None = None, jobs: int = 1, fixtures: str | None = None, seed: int = 0
) -> list[CheckResult]:
    """Run the selected checks; results come back ordered by check id."""
    chosen = select(only)
    skipped = [
        CheckResult(c.id, c.anchor, "skipped", reason=f"filtered out by --only {only}")
        for c in CHECKS if c not in chosen
    ]
    if jobs > 1 and len(chosen) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            done = list(pool.map(_run_by_id, [(c.id, fixtures, seed) for c in chosen]))
    else:
        done = [run_check(c, fixtures, seed) for c in chosen]
    return sorted(done + skipped, key=lambda r: r.id)


def summary_line(r: CheckResult) -> str:
    return f"{r.status.upper():7s} {r.id}  ({r.runtime_ms} ms)"


if __name__ == "__main__":  # pragma: no cover
    for res in run_all():
        print(summary_line(res))
        for f in res.failures:
            print("   ", f)
