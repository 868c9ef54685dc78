"""Command line: ``canon`` for single expressions, ``bench`` for timings."""

from __future__ import annotations

import argparse
import sys

from .bench import CSV_HEADER, degree_means, run_bench
from .dummy import METRICS, SearchLimitError
from .expr import ExpressionError, load_definitions, parse_expression
from .frontend import CanonOptions, canonicalize_traced
from .perm import PermutationError, parse_cycles


def _base_arg(text: str):
    if text in ("sgs", "natural"):
        return text
    try:
        return [int(t) for t in text.replace(",", " ").split()]
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"expected 'sgs', 'natural' or a point list, got {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dummycanon",
        description="Canonical forms of tensor monomials with free and dummy indices.")
    sub = parser.add_subparsers(dest="command", required=True)

    c = sub.add_parser("canon", help="canonicalize one expression")
    c.add_argument("--defs", required=True, help="symmetry definition file")
    c.add_argument("--metric", choices=METRICS, help="override the metric symmetry")
    c.add_argument("--trace", action="store_true",
                   help="print g1, g2, h, g3, g4, g5 before the result")
    c.add_argument("--base", type=_base_arg, default="natural",
                   help="'natural' (1..N-1, default), 'sgs' or explicit points")
    c.add_argument("--merged-gen", action="append", metavar="CYCLES",
                   help="use these generators for the merged tensor instead of "
                        "the ones derived from the factors (repeatable)")
    c.add_argument("--anticommuting", action="store_true",
                   help="treat factors as anticommuting")
    c.add_argument("expr", help="expression, or '-' to read lines from stdin")

    b = sub.add_parser("bench", help="time random Riemann scalar invariants")
    b.add_argument("--max-degree", type=int, required=True)
    b.add_argument("--min-degree", type=int, default=1)
    b.add_argument("--samples", type=int, required=True)
    b.add_argument("--seed", type=int, required=True)
    b.add_argument("--drop-zeros", action="store_true",
                   help="leave out samples that vanish")
    b.add_argument("--plot-data", metavar="FILE",
                   help="write 'degree mean_seconds' lines to FILE")
    b.add_argument("--repeats", type=int, default=1,
                   help="timed runs per sample (after one warm-up)")
    b.add_argument("--jobs", type=int, default=1)
    return parser


def cmd_canon(args, out=None, err=None, stdin=None) -> int:
    out, err, stdin = out or sys.stdout, err or sys.stderr, stdin or sys.stdin
    try:
        with open(args.defs) as fh:
            reg = load_definitions(fh.read())
    except OSError as exc:
        print(f"error: {exc}", file=err)
        return 1
    except ExpressionError as exc:
        print(f"error: {args.defs}: {exc}", file=err)
        return 1
    exprs = [ln for ln in stdin.read().splitlines() if ln.strip()] if args.expr == "-" \
        else [args.expr]
    status = 0
    for text in exprs:
        try:
            gens = None
            if args.merged_gen:
                mono = parse_expression(text, reg, args.metric)
                slots = sum(f.symbol.rank for f in mono.factors)
                gens = [parse_cycles(c, slots) for c in args.merged_gen]
            opts = CanonOptions(metric=args.metric, base=args.base, generators=gens,
                                commutation="anticommuting" if args.anticommuting
                                else "commuting")
            tr = canonicalize_traced(text, reg, opts)
        except (ExpressionError, PermutationError) as exc:
            print(f"error: {exc}", file=err)
            status = max(status, 1)
            continue
        except (AssertionError, SearchLimitError) as exc:
            print(f"internal error: {exc}", file=err)
            status = 2
            continue
        if args.trace:
            for line in tr.lines():
                print(line, file=out)
        print(tr.text, file=out)
    return status


def cmd_bench(args, out=None) -> int:
    out = out or sys.stdout
    rows = run_bench(args.max_degree, args.samples, args.seed, args.min_degree,
                     args.repeats, args.jobs)
    if args.drop_zeros:
        rows = [r for r in rows if r.result_kind != "zero"]
    print(CSV_HEADER, file=out)
    for r in rows:
        print(r.csv(), file=out)
    means = degree_means(rows)
    for d, mean in means.items():
        print(f"{d},mean,{args.seed},{round(mean * 1e9)},summary", file=out)
    if args.plot_data:
        with open(args.plot_data, "w") as fh:
            for d, mean in means.items():
                fh.write(f"{d} {mean:.9e}\n")
    return 0


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "canon":
        return cmd_canon(args)
    return cmd_bench(args)


if __name__ == "__main__":
    sys.exit(main())
