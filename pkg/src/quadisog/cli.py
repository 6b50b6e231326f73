"""Command line interface: ``quadisog [global flags] <subcommand> ...``."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .catalogue import CatalogueDB, CatalogueError
from .isogeny import ModPolyDB, isogeny_graph
from .lfunction_rank import DEFAULT_BITS
from .minimally_finite import ExcludedField, IndeterminateOracle, compute_mf, load_s2_table
from .pipeline import COMPLETE, MissingOracleData, SearchConfig, emit_report, search_convenient, solve_field

EXIT_OK = 0
EXIT_INCOMPLETE = 1
EXIT_USAGE = 2


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="quadisog", description="Cyclic isogenies of elliptic curves over quadratic fields.")
    p.add_argument("--catalogue", help="catalogue JSON file (default: bundled)")
    p.add_argument("--modpoly-dir", help="directory with phi_<l>.txt files, searched before the bundled ones")
    p.add_argument("--precision", type=int, default=DEFAULT_BITS, help="bits for central L-values")
    p.add_argument("--threads", type=int, default=1, help="worker processes for the search")
    p.add_argument("--format", choices=("text", "structured"), default="text")
    p.add_argument("--s2", help="S2 data file (default: bundled)")
    sub = p.add_subparsers(dest="command", required=True)

    m = sub.add_parser("mf", help="minimally finite levels for Q(sqrt d)")
    m.add_argument("d", type=int)
    m.add_argument("--s2-primes", help="comma separated S2 primes, overriding the data file")

    s = sub.add_parser("solve", help="all cyclic isogeny degrees over Q(sqrt d)")
    s.add_argument("d", type=int)
    s.add_argument("--figure-dir", help="write matplotlib figures here")

    c = sub.add_parser("search", help="convenient fields in a range of d")
    c.add_argument("lo", type=int)
    c.add_argument("hi", type=int)
    c.add_argument("--growth", help="J0+(163) growth data file")
    c.add_argument("--threshold", type=int, default=100)
    c.add_argument("--allow", default="125,163,169", help="allowed large levels")

    g = sub.add_parser("isogeny-graph", help="K-rational isogeny graph of a j-invariant")
    g.add_argument("j", help="j-invariant, using w for sqrt d")
    g.add_argument("--d", type=int, default=1)
    g.add_argument("--primes", default="2,3,5,7,11,13,17,19")
    g.add_argument("--max-degree", type=int, default=10**4)
    g.add_argument("--figure-dir", help="write matplotlib figures here")

    sub.add_parser("verify-catalogue", help="run all catalogue checks")
    return p


def _config(args, **kw) -> SearchConfig:
    return SearchConfig(
        s2_path=args.s2,
        catalogue_path=args.catalogue,
        modpoly_dir=args.modpoly_dir,
        threads=max(1, args.threads),
        precision=args.precision,
        **kw,
    )


def _ints(text: str) -> list[int]:
    return [int(x) for x in text.split(",") if x.strip()]


def cmd_mf(args) -> int:
    if args.s2_primes is not None:
        s2 = _ints(args.s2_primes)
    else:
        table = load_s2_table(args.s2)
        if args.d not in table:
            print(f"no S2 data for d = {args.d}; pass --s2-primes", file=sys.stderr)
            return EXIT_USAGE
        s2 = table[args.d].primes
    code = EXIT_OK
    try:
        res = compute_mf(args.d, s2)
    except IndeterminateOracle as exc:
        res = exc.args[1]
        code = EXIT_INCOMPLETE
    out = {
        "d": res.d,
        "S1": sorted(res.s1),
        "B": sorted(res.b),
        "S2": sorted(res.s2),
        "S3": sorted(res.s3),
        "MF": sorted(res.mf),
        "indeterminate": sorted(res.indeterminate_levels),
    }
    if args.format == "structured":
        print(json.dumps({"schema": "quadisog.mf/1", **out}, sort_keys=True))
    else:
        for k, v in out.items():
            print(f"{k}\t{v if isinstance(v, int) else ', '.join(map(str, v))}")
    return code


def cmd_solve(args) -> int:
    report = solve_field(args.d, _config(args))
    sys.stdout.write(emit_report(report, args.format))
    if args.figure_dir:
        from .figures import plot_report

        out = Path(args.figure_dir)
        out.mkdir(parents=True, exist_ok=True)
        path = plot_report(report, out / f"table_{args.d}.png")
        print(f"figure\t{path}", file=sys.stderr)
    return EXIT_OK if report.status == COMPLETE else EXIT_INCOMPLETE


def cmd_search(args) -> int:
    cfg = _config(args, d_range=(args.lo, args.hi), growth_path=args.growth, known_threshold=args.threshold,
                  allowed_large=frozenset(_ints(args.allow)))
    try:
        traces = search_convenient(None, cfg)
    except MissingOracleData as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    passed = [t.d for t in traces if t.passed]
    if args.format == "structured":
        doc = {
            "schema": "quadisog.search/1",
            "range": [args.lo, args.hi],
            "convenient": passed,
            "traces": [{"d": t.d, "passed": t.passed, "conditions": [list(c) for c in t.conditions]} for t in traces],
        }
        print(json.dumps(doc, sort_keys=True))
    else:
        for t in traces:
            conds = "; ".join(f"{n}:{'ok' if ok else 'fail'} {why}".strip() for n, ok, why in t.conditions)
            print(f"{t.d}\t{'pass' if t.passed else 'fail'}\t{conds}")
        print(f"# {len(passed)} convenient")
    return EXIT_OK


def cmd_graph(args) -> int:
    db = ModPolyDB(args.modpoly_dir) if args.modpoly_dir else ModPolyDB.default()
    cat = CatalogueDB.load(args.catalogue) if args.catalogue else CatalogueDB.default()
    primes = _ints(args.primes)
    g = isogeny_graph(args.j, args.d, primes, db, cat.known_pairs(set(primes)), args.max_degree)
    if args.format == "structured":
        doc = {
            "schema": "quadisog.graph/1",
            "d": args.d,
            "nodes": [str(j) for j in g.nodes],
            "edges": [list(e) for e in g.edges],
            "cyclic_degrees": sorted(g.cyclic_degrees),
        }
        print(json.dumps(doc, sort_keys=True))
    else:
        for i, j in enumerate(g.nodes):
            print(f"node\t{i}\t{j}")
        for a, b, l, m in g.edges:
            print(f"edge\t{a}\t{b}\t{l}\t{m}")
        print(f"cyclic degrees\t{', '.join(map(str, sorted(g.cyclic_degrees)))}")
    if args.figure_dir:
        from .figures import plot_isogeny_graph

        out = Path(args.figure_dir)
        out.mkdir(parents=True, exist_ok=True)
        path = plot_isogeny_graph(g, out / "isogeny_graph.png")
        print(f"figure\t{path}", file=sys.stderr)
    return EXIT_OK


def cmd_verify(args) -> int:
    try:
        db = CatalogueDB.load(args.catalogue) if args.catalogue else CatalogueDB.load()
        lines = db.verify()
    except (CatalogueError, ValueError, KeyError) as exc:
        print(f"FAIL\t{exc}")
        return EXIT_INCOMPLETE
    for line in lines:
        print(f"ok\t{line}")
    return EXIT_OK


COMMANDS = {
    "mf": cmd_mf,
    "solve": cmd_solve,
    "search": cmd_search,
    "isogeny-graph": cmd_graph,
    "verify-catalogue": cmd_verify,
}


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except ExcludedField as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    raise SystemExit(main())
