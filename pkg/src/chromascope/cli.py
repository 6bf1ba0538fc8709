"""chromascope command line.

Exit codes: 0 all checks passed, 1 a check failed, 2 bad input,
3 an enumeration cap or search budget was hit.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import commands as cmd
from .chromatic import DEFAULT_NODE_BUDGET, BudgetExhausted
from .expectation import DEFAULT_ENUMERATION_CAP, EnumerationCapExceeded
from .graph import GraphError
from .spectral import ENVELOPE_C

EXIT_OK, EXIT_CHECK, EXIT_INPUT, EXIT_LIMIT = 0, 1, 2, 3


def _common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--format", choices=["json", "csv", "text"], default="text")
    parser.add_argument("--report", metavar="PATH", help="write the report here instead of stdout")


def _with_graph(parser):
    parser.add_argument("--graph", required=True, metavar="PATH",
                        help="edge-list or DIMACS file, or a built-in name (K4, C7, M5, KG6,2, petersen, G3)")


def _with_p(parser, required=True):
    group = parser.add_mutually_exclusive_group(required=required)
    group.add_argument("--p", help="probability, decimal or A/B")
    group.add_argument("--p-frac", metavar="A/B", help="probability as an exact fraction")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="chromascope",
                                     description="Expected chromatic numbers of random subgraphs.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate a graph family")
    p.add_argument("family", choices=["complete", "cycle", "path", "mycielski", "kneser", "petersen",
                                      "zykov", "catalog", "critical"])
    p.add_argument("params", nargs="*")
    p.add_argument("--out", help="output file; zykov writes <stem>.base, <stem>.partI")
    _common(p)

    p = sub.add_parser("expect", help="E[chi(G_p)], exact or Monte Carlo")
    _with_graph(p)
    _with_p(p)
    p.add_argument("--mode", choices=["exact", "mc"], default="exact")
    p.add_argument("--samples", type=int, default=100_000)
    p.add_argument("--seed", type=int)
    p.add_argument("--edge-cap", type=int, default=DEFAULT_ENUMERATION_CAP)
    _common(p)

    p = sub.add_parser("poly", help="export the exact expectation polynomial as JSON")
    _with_graph(p)
    p.add_argument("--edge-cap", type=int, default=DEFAULT_ENUMERATION_CAP)
    p.add_argument("--out")

    p = sub.add_parser("verify-catalog", help="exact values of the four-triangle catalog")
    _common(p)

    p = sub.add_parser("curve", help="E[chi(G_p)] along a p grid, as CSV")
    _with_graph(p)
    p.add_argument("--p-min", type=float, default=0.0)
    p.add_argument("--p-max", type=float, default=1.0)
    p.add_argument("--steps", type=int, default=11)
    p.add_argument("--mode", choices=["exact", "mc"], default="exact")
    p.add_argument("--samples", type=int, default=10_000)
    p.add_argument("--seed", type=int)
    p.add_argument("--edge-cap", type=int, default=DEFAULT_ENUMERATION_CAP)
    p.add_argument("--out", help="CSV path; printed to stdout when omitted")
    _common(p)

    p = sub.add_parser("compare-complete", help="Mycielski M_k against K_k along a p grid")
    p.add_argument("k", type=int)
    p.add_argument("--p-min", type=float, default=0.05)
    p.add_argument("--p-max", type=float, default=0.5)
    p.add_argument("--steps", type=int, default=10)
    p.add_argument("--mode", choices=["auto", "exact", "mc"], default="auto")
    p.add_argument("--samples", type=int, default=100_000)
    p.add_argument("--seed", type=int)
    p.add_argument("--edge-cap", type=int, default=DEFAULT_ENUMERATION_CAP)
    p.add_argument("--out", help="CSV of the comparison rows")
    _common(p)

    p = sub.add_parser("bounds", help="chi, alpha, Hoffman and spectral bounds side by side")
    _with_graph(p)
    _with_p(p, required=False)
    p.add_argument("--c", type=float, default=1.0)
    _common(p)

    p = sub.add_parser("verify-product-bound", help="tightness of the product bound on the polynomial family")
    p.add_argument("q", type=int)
    p.add_argument("n", type=int)
    p.add_argument("t", type=int)
    _common(p)

    p = sub.add_parser("deviation-bench", help="norm of A(G_p) - p A(G) over seeded trials")
    _with_graph(p)
    _with_p(p)
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", type=int)
    p.add_argument("--c", type=float, default=ENVELOPE_C)
    p.add_argument("--out", help="per-trial CSV")
    _common(p)

    p = sub.add_parser("verify-shinkar", help="max |V(H)|/alpha(H) over induced subgraphs of KG(sk,k)")
    p.add_argument("s", type=int)
    p.add_argument("k", type=int)
    p.add_argument("--samples", type=int, help="sample subsets instead of enumerating all")
    p.add_argument("--seed", type=int)
    _common(p)

    p = sub.add_parser("critical", help="edge-criticality of a graph")
    _with_graph(p)
    _common(p)

    for name in ("expect", "bounds", "critical", "verify-product-bound", "verify-shinkar"):
        sub.choices[name].add_argument("--node-budget", type=int, help="branch-node budget for chi")
    return parser


def _probability(args, default=None):
    text = args.p_frac if args.p_frac is not None else args.p
    if text is None:
        return default
    return cmd.parse_probability(text)


def _emit(report, args) -> int:
    text = report.render(args.format)
    if args.report:
        Path(args.report).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK if report.ok else EXIT_CHECK


def run(args) -> int:
    budget = getattr(args, "node_budget", None) or DEFAULT_NODE_BUDGET
    c = args.command
    if c == "gen":
        report, text = cmd.cmd_gen(args.family, args.params, args.out)
        if args.out is None:
            sys.stdout.write(text)
            return EXIT_OK
        return _emit(report, args)
    if c == "poly":
        data = cmd.cmd_poly(cmd.resolve_graph(args.graph), args.edge_cap)
        text = json.dumps(data) + "\n"
        if args.out:
            Path(args.out).write_text(text)
        else:
            sys.stdout.write(text)
        return EXIT_OK
    if c == "verify-catalog":
        return _emit(cmd.cmd_verify_catalog(), args)
    if c == "verify-product-bound":
        return _emit(cmd.cmd_verify_product_bound(args.q, args.n, args.t, budget), args)
    if c == "verify-shinkar":
        return _emit(cmd.cmd_verify_shinkar(args.s, args.k, args.samples, args.seed, budget), args)
    if c == "compare-complete":
        return _emit(cmd.cmd_compare_complete(args.k, args.p_min, args.p_max, args.steps, args.mode,
                                              args.samples, args.seed, args.edge_cap, args.out), args)

    g = cmd.resolve_graph(args.graph)
    if c == "expect":
        return _emit(cmd.cmd_expect(g, _probability(args), args.mode, args.samples, args.seed,
                                    args.edge_cap, args.graph, budget), args)
    if c == "curve":
        report, text = cmd.cmd_curve(g, args.p_min, args.p_max, args.steps, args.mode, args.samples,
                                     args.seed, args.out, args.edge_cap, args.graph)
        if args.out is None and args.report is None and args.format == "text":
            sys.stdout.write(text)
            return EXIT_OK if report.ok else EXIT_CHECK
        return _emit(report, args)
    if c == "bounds":
        from fractions import Fraction

        return _emit(cmd.cmd_bounds(g, _probability(args, Fraction(1, 2)), args.c, args.graph, budget), args)
    if c == "deviation-bench":
        report, text = cmd.cmd_deviation_bench(g, _probability(args), args.trials, args.seed, args.c,
                                               args.out, args.graph)
        return _emit(report, args)
    if c == "critical":
        return _emit(cmd.cmd_critical(g, args.graph, budget), args)
    raise AssertionError(c)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return run(args)
    except EnumerationCapExceeded as exc:
        print(f"chromascope: {exc}", file=sys.stderr)
        return EXIT_LIMIT
    except BudgetExhausted as exc:
        print(f"chromascope: {exc}", file=sys.stderr)
        return EXIT_LIMIT
    except (GraphError, ValueError, OSError) as exc:
        print(f"chromascope: error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
