#!/usr/bin/env python3
"""Table of m(a, b, 1) for small bounds, next to the 5/6 ceiling and the construction size."""
import argparse

from setpairs.constructions import power_construction_size
from setpairs.search import SearchConfig, search_max, theorem_ceiling

DEFAULT = ["1,1", "1,2", "1,3", "2,2", "2,3"]


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("sizes", nargs="*", default=DEFAULT)
    ap.add_argument("--time-budget", type=float, default=300.0)
    ap.add_argument("--workers", type=int, default=1)
    args = ap.parse_args(argv)
    print(f"{'(a,b)':<7} {'exc':<4} {'m':>4} {'exact':<6} {'classes':>7} {'ceiling':>7} {'constr':>6} {'nodes':>9} {'secs':>7}")
    for spec in args.sizes:
        a, b = (int(x) for x in spec.split(","))
        # with a singleton side the exceptions are what the extremal systems look like
        allow = min(a, b) == 1
        out = search_max(SearchConfig(a, b, allow_exceptions=allow, time_budget=args.time_budget,
                                      worker_count=args.workers))
        ceiling = theorem_ceiling(a, b) if min(a, b) >= 2 else "-"
        constr = power_construction_size(min(a, b)) if min(a, b) >= 2 else "-"
        print(f"({a},{b}){'':<2} {'yes' if allow else 'no':<4} {out.max_m:>4} {str(out.proof_of_maximality):<6} "
              f"{out.class_count:>7} {ceiling:>7} {constr:>6} {out.nodes_explored:>9} {out.elapsed:>7.2f}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
