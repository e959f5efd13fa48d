#!/usr/bin/env python3
"""Enumerate every small isomorphism class and check the 5/6 and 29/30 bounds on each.

Exit status 0 when nothing contradicts the bounds, 3 on the first counterexample
(a JSON dump of it is written by the checker).
"""
import argparse
import sys
from collections import Counter

from setpairs import ContradictionError
from setpairs.analysis import check_main_theorem
from setpairs.search import SearchBudgetExceeded, SearchConfig, enumerate_classes

DEFAULT_SIZES = ["2,2", "1,2", "1,1"]


def sweep(a: int, b: int, budget: float) -> Counter:
    tally = Counter()
    for S in enumerate_classes(SearchConfig(a, b, allow_exceptions=True, time_budget=budget)):
        if S.m < 2:
            continue
        _, report, _ = check_main_theorem(S)
        tally["excepted" if report else "plain"] += 1
    return tally


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("sizes", nargs="*", default=DEFAULT_SIZES, help="a,b pairs (default: 2,2 1,2 1,1)")
    ap.add_argument("--time-budget", type=float, default=120.0)
    ap.add_argument("--quiet", action="store_true")
    args = ap.parse_args(argv)
    for spec in args.sizes:
        a, b = (int(x) for x in spec.split(","))
        try:
            tally = sweep(a, b, args.time_budget)
        except ContradictionError as exc:
            print(f"({a},{b}): CONTRADICTION {exc} (dump: {exc.dump_path})", file=sys.stderr)
            return 3
        except SearchBudgetExceeded:
            print(f"({a},{b}): budget exhausted, sweep incomplete", file=sys.stderr)
            return 1
        if not args.quiet:
            print(f"({a},{b}): {tally['plain']} classes without exceptions, {tally['excepted']} with")
    return 0


if __name__ == "__main__":
    sys.exit(main())
