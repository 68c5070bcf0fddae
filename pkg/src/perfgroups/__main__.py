"""Command line interface: ``python3 -m perfgroups <command> ...``."""

from __future__ import annotations

import argparse
import logging
import math
import sys
import time

from . import budget
from .errors import BudgetExceeded, InvariantViolation, SearchExhausted
from .pipeline.bounds import holt_bounds, log10_bounds, parse_rational, stats_csv
from .pipeline.catalog import PerfectCatalog
from .pipeline.engine import enumerate_up_to, oracle_count
from .pipeline.seeds import load_seeds

EXIT_OK, EXIT_BUDGET, EXIT_BUG = 0, 2, 3
log = logging.getLogger("perfgroups")


def _budget_arg(text):
    key, sep, val = text.partition("=")
    if not sep:
        raise argparse.ArgumentTypeError("expected KEY=VALUE")
    if key not in budget.DEFAULTS:
        raise argparse.ArgumentTypeError(f"unknown budget key {key!r}; known: {', '.join(budget.DEFAULTS)}")
    return key, int(val)


def _range_arg(text):
    a, sep, b = text.partition("..")
    if not sep:
        raise argparse.ArgumentTypeError("expected A..B")
    return int(a), int(b)


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--budget", action="append", type=_budget_arg, default=[], metavar="KEY=VALUE",
                        help="override a work cap (repeatable)")
    common.add_argument("--seed-file", help="extra simple groups (see pipeline.seeds.read_seed_file)")
    common.add_argument("--out", default="catalog", help="catalog directory (default: ./catalog)")
    common.add_argument("-v", "--verbose", action="store_true")

    ap = argparse.ArgumentParser(prog="perfgroups", description="Enumerate finite perfect groups.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("enumerate", parents=[common], help="build the catalog up to an order")
    p.add_argument("--max-order", type=int, required=True)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--resume", action="store_true", help="continue from the catalog in --out")

    p = sub.add_parser("order", parents=[common], help="perfect groups of a single order")
    p.add_argument("n", type=int)
    p.add_argument("--jobs", type=int, default=1)

    p = sub.add_parser("counts", parents=[common], help="counts per order as TSV")
    p.add_argument("--range", type=_range_arg, default=None)

    p = sub.add_parser("bounds", parents=[common], help="lower and upper bounds on the count at order n")
    p.add_argument("n", type=int)
    p.add_argument("--c", type=parse_rational, default=parse_rational("11/36"))

    sub.add_parser("stats", parents=[common], help="permutation degree statistics as CSV")

    p = sub.add_parser("verify", parents=[common], help="compare against the slow all-cocycles path")
    p.add_argument("--oracle", action="store_true", required=True)
    p.add_argument("--max-order", type=int, required=True)
    return ap


def _progress(n, recs):
    log.info("order %d: %d group(s)", n, len(recs))


def cmd_enumerate(args):
    cat = PerfectCatalog.load(args.out) if args.resume else PerfectCatalog()
    t = time.time()
    cat = enumerate_up_to(args.max_order, cat, seed_file=args.seed_file, jobs=args.jobs,
                          out_dir=args.out, on_order=_progress)
    _print_counts(cat.counts(1, args.max_order))
    log.info("done in %.1f s", time.time() - t)


def cmd_order(args):
    cat = PerfectCatalog.load(args.out)
    if cat.frontier < args.n - 1:
        cat = enumerate_up_to(args.n - 1, cat, seed_file=args.seed_file, jobs=args.jobs,
                              out_dir=args.out, on_order=_progress)
    if cat.frontier < args.n:
        cat = enumerate_up_to(args.n, cat, seed_file=args.seed_file, jobs=args.jobs, out_dir=args.out)
    for r in cat.groups.get(args.n, []):
        print(f"{r.order}\t{r.index}\t{r.degree}\t{r.construction}")


def _print_counts(counts):
    print("order\tcount")
    for n, k in counts.items():
        print(f"{n}\t{k}")
    print(f"total\t{sum(counts.values())}")


def cmd_counts(args):
    cat = PerfectCatalog.load(args.out)
    lo, hi = args.range if args.range else (1, cat.frontier)
    if hi > cat.frontier:
        log.warning("catalog is only complete up to order %d", cat.frontier)
    _print_counts(cat.counts(lo, min(hi, cat.frontier)))


def cmd_bounds(args):
    lo, hi = holt_bounds(args.n, args.c)
    l10, h10 = log10_bounds(args.n, args.c)
    print(f"lower\t{lo:.3g}\tlog10={l10:.4f}")
    print(f"upper\t{hi:.3g}\tlog10={h10:.4f}")


def cmd_stats(args):
    cat = PerfectCatalog.load(args.out)
    text = stats_csv(cat)
    sys.stdout.write(text)
    for n, recs in cat.groups.items():
        for r in recs:
            if r.degree > 10 * math.sqrt(n):
                log.warning("group %d/%d has degree %d > 10 sqrt(order)", n, r.index, r.degree)


def cmd_verify(args):
    seeds = load_seeds(args.max_order, args.seed_file)
    cat = PerfectCatalog()
    bad = 0
    print("order\tfast\toracle")
    for n in range(1, args.max_order + 1):
        enumerate_up_to(n, cat, seeds=seeds)
        fast = len(cat.groups.get(n, []))
        slow = oracle_count(n, cat, seeds) if n >= 60 else 0
        if fast or slow:
            print(f"{n}\t{fast}\t{slow}", flush=True)
        bad += fast != slow
    if bad:
        print(f"MISMATCH at {bad} order(s)")
        return 1
    return 0


COMMANDS = {"enumerate": cmd_enumerate, "order": cmd_order, "counts": cmd_counts,
            "bounds": cmd_bounds, "stats": cmd_stats, "verify": cmd_verify}


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    budget.reset()
    for key, val in args.budget:
        budget.set_cap(key, val)
    try:
        return COMMANDS[args.command](args) or EXIT_OK
    except (BudgetExceeded, SearchExhausted) as exc:
        print(f"error: {exc}; finished orders and cells are saved, rerun with --resume", file=sys.stderr)
        return EXIT_BUDGET
    except InvariantViolation as exc:
        print(f"internal error (invariant violated): {exc}", file=sys.stderr)
        return EXIT_BUG


if __name__ == "__main__":
    sys.exit(main())
