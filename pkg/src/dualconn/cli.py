"""Command line entry point: ``dualconn <subcommand> ...``.

Exit codes: 0 success, 1 a check or expectation failed, 2 bad input.
JSON output is key-sorted and renders every number as a string.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from . import constructions as cons
from .connectivity import (
    IsomorphismTimeout,
    embedded_isomorphism,
    isomorphic,
    kappa,
    vertex_connectivity,
)
from .cuts import (
    PreconditionUnmet,
    analyze_cutset,
    boundary_face_cuts,
    boundary_multigraph,
    check_bridges_have_cycles,
    check_in_different_faces,
    check_lemma_2face,
    check_lemma_atleast5,
    decompose_bridges,
    find_small_dual_cut,
)
from .dual import dual, face_size_census, is_simple
from .embedding import EmbeddedGraph, EmbeddingError, parse, serialize
from .search import (
    BudgetExceeded,
    SearchSpec,
    find_witness,
    pred_dual_kappa_at_most,
    pred_dual_simple,
    pred_genus,
    pred_kappa_at_least,
    pred_simple,
)
from .surgery import SurgeryError, chord_exchange, h_operation
from .verify import run_all, summary_line


class InputError(Exception):
    """Bad command line input; exit code 2."""


def _stringify(x):
    if isinstance(x, bool) or x is None:
        return x
    if isinstance(x, (int, Fraction)):
        return str(x)
    if isinstance(x, dict):
        return {str(k): _stringify(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_stringify(v) for v in x]
    return x


def emit(args, report: dict, text_lines: list[str] | None = None) -> None:
    if args.format == "json":
        print(json.dumps(_stringify(report), indent=2, sort_keys=True))
        return
    if text_lines is None:
        width = max((len(k) for k in report), default=0)
        text_lines = [f"{k:<{width}}  {_plain(v)}" for k, v in sorted(report.items())]
    print("\n".join(text_lines))


def _plain(v) -> str:
    if isinstance(v, bool):
        return "yes" if v else "no"
    if isinstance(v, dict):
        return " ".join(f"{k}:{_plain(x)}" for k, x in v.items())
    if isinstance(v, (list, tuple)):
        if not v:
            return "-"
        return " ".join("(" + ",".join(map(str, x)) + ")" if isinstance(x, (list, tuple)) else _plain(x)
                        for x in v)
    return str(v)


def read_graph(path: str) -> EmbeddedGraph:
    try:
        text = sys.stdin.read() if path == "-" else Path(path).read_text()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from None
    try:
        return parse(text)
    except EmbeddingError as exc:
        raise InputError(f"{path}: {exc}") from None


def write_graph(g: EmbeddedGraph, out: str | None, comments=()) -> str:
    text = serialize(g, comments=comments)
    if out:
        Path(out).write_text(text)
    return text


def _int_list(s: str) -> list[int]:
    try:
        return [int(x) for x in s.replace(" ", "").split(",") if x]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma separated integers, got {s!r}") from None


def _pair(s: str) -> tuple[int, int]:
    vals = _int_list(s)
    if len(vals) != 2:
        raise argparse.ArgumentTypeError(f"expected two integers like 1,2, got {s!r}")
    return vals[0], vals[1]


def graph_summary(g: EmbeddedGraph) -> dict:
    dg = dual(g).graph
    out = {
        "name": g.name,
        "v": g.v,
        "e": g.e,
        "f": g.f,
        "genus": g.genus(),
        "simple": g.is_simple_graph(),
        "face_sizes": face_size_census(g),
        "dual_simple": is_simple(dg).simple,
    }
    out["kappa"] = kappa(g) if g.v > 1 else None
    out["dual_kappa"] = kappa(dg) if dg.v > 1 else None
    return out


# ----------------------------------------------------------------------
# subcommands


def cmd_analyze(args) -> int:
    g = read_graph(args.path)
    report = graph_summary(g)
    failed = []
    for item in args.expect or []:
        key, sep, want = item.partition("=")
        if not sep or key not in report:
            raise InputError(f"bad --expect {item!r}; keys: {', '.join(sorted(report))}")
        got = _plain(report[key]) if isinstance(report[key], bool) else str(report[key])
        if got != want:
            failed.append(f"{key}: got {got}, expected {want}")
    report["expectations_failed"] = failed
    emit(args, report)
    return 1 if failed else 0


def cmd_dual(args) -> int:
    g = read_graph(args.path)
    d = dual(g)
    source = g.name or Path(args.path).name
    text = write_graph(d.graph, args.out, comments=[f"dual-of: {source}"])
    crossref = {
        "primal_edge_to_dual_edge": d.edge_crossref(),
        "face_to_dual_vertex": {k: d.vertex_of_face(k) for k in range(g.f)},
        "face_walks": {k: [g.tail[x] for x in walk] for k, walk in enumerate(g.faces)},
    }
    if args.out:
        Path(args.out + ".crossref.json").write_text(
            json.dumps(_stringify(crossref), indent=2, sort_keys=True) + "\n"
        )
    if args.format == "json":
        emit(args, {"rot": text, "crossref": crossref, "v": d.graph.v, "e": d.graph.e,
                    "genus": d.graph.genus()})
    elif not args.out:
        sys.stdout.write(text)
    else:
        print(f"wrote {args.out} and {args.out}.crossref.json")
    return 0


def cmd_connectivity(args) -> int:
    g = read_graph(args.path)
    target = dual(g).graph if args.dual else g
    if target.v < 2:
        raise InputError("connectivity needs at least two vertices")
    rep = vertex_connectivity(target, max_cuts=args.max_cuts)
    emit(args, {"graph": "dual" if args.dual else "primal", "kappa": rep.kappa,
                "min_cuts": [list(c) for c in rep.min_cuts], "exhaustive": rep.exhaustive})
    return 0


def cmd_cut_analysis(args) -> int:
    g = read_graph(args.path)
    try:
        a = analyze_cutset(g, args.cutset)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    bm = boundary_multigraph(a)
    dec = decompose_bridges(bm.bar, bm.gb_edges)
    report = {
        "cutset": list(a.cutset),
        "components": [list(c) for c in a.components],
        "boundary_faces": list(a.boundary_faces),
        "faces_per_component": [len(fc) for fc in a.faces_of],
        "gb": {"v": bm.gb.v, "e": bm.gb.e, "f": bm.gb.f, "connected": bm.gb_connected()},
        "genus_gb_components": bm.genus_gb,
        "genus_bar": bm.genus_bar,
        "face_classes": {f: c for f, c in sorted(dec.classification.items())},
        "boundary_face_dual_cuts": [list(c) for c in boundary_face_cuts(g, a.cutset)],
        "in_different_faces": check_in_different_faces(dec).holds,
    }
    verdicts = {}
    for label, fn in (
        ("at_least_5_boundary_faces", lambda: check_lemma_atleast5(bm)),
        ("two_faces_hold_one_component", lambda: check_lemma_2face(bm, dec)),
        ("bridges_have_cycles", lambda: check_bridges_have_cycles(bm, dec)),
    ):
        try:
            v = fn()
            verdicts[label] = "holds" if v.holds else "fails"
        except PreconditionUnmet as exc:
            verdicts[label] = f"not applicable ({exc})"
    report["checks"] = verdicts
    try:
        dc = find_small_dual_cut(g)
        report["small_dual_cut"] = {"cut": list(dc.cut), "bound": dc.bound,
                                    "constructive": dc.constructive, "confirmed": dc.confirmed}
    except PreconditionUnmet as exc:
        report["small_dual_cut"] = f"not applicable ({exc})"
    emit(args, report)
    return 1 if any(v == "fails" for v in verdicts.values()) else 0


def _surgery_report(args, before: EmbeddedGraph, after: EmbeddedGraph, extra: dict) -> int:
    text = write_graph(after, args.out)
    report = {"genus_before": before.genus(), "genus_after": after.genus(), **extra}
    report["result"] = graph_summary(after)
    if args.format == "json":
        report["rot"] = text
        emit(args, report)
    else:
        emit(args, {k: v for k, v in report.items() if k != "result"})
        if not args.out:
            sys.stdout.write(text)
    return 0


def cmd_h_op(args) -> int:
    g = read_graph(args.path)
    x, y = args.edge
    try:
        res = h_operation(g, x, y, require_simple=not args.allow_multi)
    except SurgeryError as exc:
        raise InputError(f"{type(exc).__name__}: {exc}") from None
    return _surgery_report(args, g, res.graph, {
        "edge": [x, y],
        "dual_isomorphic": bool(isomorphic(dual(res.graph).graph, dual(g).graph)),
    })


def cmd_chord_exchange(args) -> int:
    g = read_graph(args.path)
    v, w = args.edge
    try:
        res = chord_exchange(g, v, w, args.face)
    except SurgeryError as exc:
        raise InputError(f"{type(exc).__name__}: {exc}") from None
    return _surgery_report(args, g, res.graph, {
        "edge": [v, w], "face": args.face,
        "dual_simple_after": is_simple(dual(res.graph).graph).simple,
    })


def cmd_construct(args) -> int:
    try:
        if args.family == "ringel":
            g = cons.ringel_embedding(args.p, args.q)
            props = {"p": args.p, "q": args.q}
        elif args.family == "delta1":
            g, rep = cons.delta1_construction(args.c)
            props = {"c": rep.c, "p": rep.p, "q": rep.q, "genus_bound": rep.genus_bound,
                     "dual_cut_vertex": rep.dual_cut_vertex, "checks": rep.checks}
        elif args.family == "hextorus":
            ht = cons.hexagonal_torus(args.p, args.r, args.q)
            g = ht.tiling
            props = {"tiling_simple": ht.tiling_simple, "dual_simple": ht.dual_simple,
                     "tiling_kappa": ht.kappa}
        else:
            g = cons.load_fixture(args.name)
            props = {"fixture": args.name}
    except (ValueError, KeyError) as exc:
        raise InputError(f"{type(exc).__name__}: {exc}") from None
    text = write_graph(g, args.out)
    report = {**props, "summary": graph_summary(g)}
    if args.report:
        Path(args.report).write_text(json.dumps(_stringify(report), indent=2, sort_keys=True) + "\n")
    if args.format == "json":
        emit(args, {**report, "rot": text})
    elif args.out:
        emit(args, {**props, **graph_summary(g)})
    else:
        sys.stdout.write(text)
    return 0


def cmd_search(args) -> int:
    preds = []
    if args.genus is not None:
        preds.append((f"genus {args.genus}", pred_genus(args.genus)))
    preds.append(("simple", pred_simple))
    if args.kappa is not None:
        preds.append((f"kappa >= {args.kappa}", pred_kappa_at_least(args.kappa)))
    if args.dual_simple:
        preds.append(("dual simple", pred_dual_simple))
    if args.dual_cut_le is not None:
        preds.append((f"dual kappa <= {args.dual_cut_le}", pred_dual_kappa_at_most(args.dual_cut_le)))
    base = []
    if args.family == "rotations":
        if not args.base:
            raise InputError("--family rotations needs --base FILE")
        base = [read_graph(p) for p in args.base]
    spec = SearchSpec(
        predicates=preds, family=args.family, base=base, genus=args.genus,
        max_vertices=args.max_vertices, glue_points=args.glue_points, seconds=args.budget,
    )
    try:
        res = find_witness(spec)
    except BudgetExceeded as exc:
        emit(args, {"status": "budget exceeded", "detail": str(exc)})
        return 1
    if res.witness is None:
        emit(args, {"status": "absent", "candidates": res.candidates, "exhausted": res.exhausted})
        return 1
    text = write_graph(res.witness.graph, args.out)
    report = {"status": "found", "candidates": res.candidates,
              "predicates": res.witness.report, "summary": graph_summary(res.witness.graph)}
    if args.format == "json":
        emit(args, {**report, "rot": text})
    else:
        emit(args, {"status": "found", "candidates": res.candidates})
        if not args.out:
            sys.stdout.write(text)
    return 0


def cmd_verify_paper(args) -> int:
    results = run_all(only=args.only, jobs=args.jobs, fixtures=args.fixtures, seed=args.seed)
    if args.format == "json":
        print(json.dumps([r.as_dict() for r in results], indent=2, sort_keys=True))
    else:
        for r in results:
            print(summary_line(r))
            for f in r.failures:
                print(f"    {f}")
    return 0 if all(r.status != "fail" for r in results) else 1


def cmd_iso(args) -> int:
    g1, g2 = read_graph(args.a), read_graph(args.b)
    report: dict = {}
    try:
        cert = isomorphic(g1, g2)
    except IsomorphismTimeout as exc:
        emit(args, {"abstract": "undecided", "detail": str(exc)})
        return 1
    report["abstract"] = cert.isomorphic
    report["mapping"] = dict(sorted(cert.mapping.items())) if cert.mapping else None
    report["embedded"] = embedded_isomorphism(g1, g2, allow_mirror=False) is not None
    report["embedded_up_to_mirror"] = embedded_isomorphism(g1, g2, allow_mirror=True) is not None
    emit(args, report)
    return 0 if cert.isomorphic else 1


# ----------------------------------------------------------------------
# parser


def _common(top: bool) -> argparse.ArgumentParser:
    # shared flags, accepted both before and after the subcommand; only the
    # top level carries real defaults so a later subparser cannot reset them
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--format", choices=("json", "text"), default="text" if top else argparse.SUPPRESS)
    p.add_argument("--seed", type=int, default=0 if top else argparse.SUPPRESS,
                   help="seed for randomized checks")
    p.add_argument("--budget", type=int, default=None if top else argparse.SUPPRESS,
                   help="time budget in seconds for searches")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common(top=False)
    ap = argparse.ArgumentParser(prog="dualconn", parents=[_common(top=True)],
                                 description="Embedded graphs, their duals and dual connectivity.")
    sub = ap.add_subparsers(dest="command", required=True)

    def add(name, fn, help_):
        p = sub.add_parser(name, parents=[common], help=help_)
        p.set_defaults(func=fn)
        return p

    p = add("analyze", cmd_analyze, "counts, genus, face sizes and connectivity of a .rot file")
    p.add_argument("path")
    p.add_argument("--expect", action="append", metavar="KEY=VALUE",
                   help="fail with exit code 1 unless the report has this value")

    p = add("dual", cmd_dual, "write the dual embedding")
    p.add_argument("path")
    p.add_argument("-o", "--out", help="output .rot; a .crossref.json sidecar is written next to it")

    p = add("connectivity", cmd_connectivity, "vertex connectivity and minimum cuts")
    p.add_argument("path")
    p.add_argument("--max-cuts", type=int, default=None)
    p.add_argument("--dual", action="store_true", help="analyze the dual instead")

    p = add("cut-analysis", cmd_cut_analysis, "boundary faces, G_b and bridge structure of a cutset")
    p.add_argument("path")
    p.add_argument("--cutset", type=_int_list, required=True, help="comma separated vertices")

    p = add("h-op", cmd_h_op, "H-operation on an edge joining two degree-3 vertices")
    p.add_argument("path")
    p.add_argument("--edge", type=_pair, required=True, help="X,Y")
    p.add_argument("--allow-multi", action="store_true", help="accept loops or parallel edges")
    p.add_argument("-o", "--out")

    p = add("chord-exchange", cmd_chord_exchange, "move an edge so that it splits a face")
    p.add_argument("path")
    p.add_argument("--edge", type=_pair, required=True, help="V,W")
    p.add_argument("--face", type=int, required=True, help="face id (0-based)")
    p.add_argument("-o", "--out")

    p = add("construct", cmd_construct, "build an explicit embedding")
    fam = p.add_subparsers(dest="family", required=True)
    r = fam.add_parser("ringel", parents=[common])
    r.add_argument("--p", type=int, required=True)
    r.add_argument("--q", type=int, required=True)
    r = fam.add_parser("delta1", parents=[common])
    r.add_argument("--c", type=int, required=True)
    r = fam.add_parser("hextorus", parents=[common])
    r.add_argument("--p", type=int, required=True)
    r.add_argument("--r", type=int, required=True)
    r.add_argument("--q", type=int, required=True)
    r = fam.add_parser("fixture", parents=[common])
    r.add_argument("--name", choices=cons.FIXTURE_NAMES, required=True)
    for r in fam.choices.values():
        r.add_argument("-o", "--out", help="write the .rot here")
        r.add_argument("--report", help="write the JSON property report here")

    p = add("search", cmd_search, "search for an embedding with prescribed properties")
    p.add_argument("--genus", type=int)
    p.add_argument("--kappa", type=int, help="minimum connectivity")
    p.add_argument("--dual-simple", action="store_true")
    p.add_argument("--dual-cut-le", type=int, help="dual connectivity at most N")
    p.add_argument("--max-vertices", type=int, default=12)
    p.add_argument("--family", choices=("disk-gluing", "rotations"), default="disk-gluing")
    p.add_argument("--glue-points", type=int, default=3)
    p.add_argument("--base", action="append", help="base graph .rot for --family rotations")
    p.add_argument("-o", "--out")

    p = add("verify-paper", cmd_verify_paper, "run every reproduction check")
    p.add_argument("--only", help="check id fragment or tag, e.g. h-operation")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--fixtures", help="directory to read fixture .rot files from")

    p = add("iso", cmd_iso, "abstract and embedded isomorphism of two .rot files")
    p.add_argument("a")
    p.add_argument("b")
    return ap


def main(argv: list[str] | None = None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
