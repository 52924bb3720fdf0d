#!/usr/bin/env python3
"""Cross-check every solver against the brute-force oracle on random graphs.

Draws a seeded sample of connected graphs, solves each with the exhaustive
oracle, the twin-class solver, and the bounded branching solver, and runs
the linear-time approximation alongside.  Prints one row per graph and a
summary line; exits nonzero on any disagreement.
"""

import argparse
import random
import sys

from safeset.branching import branch_solve
from safeset.generators import random_connected_graph
from safeset.graph import is_safe_set, max_degree
from safeset.nd import solve_nd
from safeset.oracle import connected_safe_number_bf, safe_number_bf
from safeset.preprocess import approx_safe_set


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--count", type=int, default=60, help="graphs to sample")
    parser.add_argument("--max-n", type=int, default=9, help="largest vertex count")
    parser.add_argument("--seed", type=int, default=2024)
    parser.add_argument(
        "--connected", action="store_true", help="also require the solution connected"
    )
    args = parser.parse_args(argv)

    rng = random.Random(args.seed)
    mismatches = 0
    worst_ratio = 0.0
    print(f"{'n':>3} {'m':>3} {'deg':>3} {'oracle':>6} {'nd':>4} {'branch':>6} {'approx':>6}")
    for _ in range(args.count):
        n = rng.randint(2, args.max_n)
        g = random_connected_graph(rng, n, extra=rng.choice([0.0, 0.2, 0.5]))
        exact = (
            connected_safe_number_bf(g) if args.connected else safe_number_bf(g)
        )
        nd = solve_nd(g, connected=args.connected)
        br = branch_solve(g, g.n, connected=args.connected)
        ap = approx_safe_set(g)
        assert ap.feasible and is_safe_set(g, ap.witness)
        row_ok = nd.size == exact.size == br.size
        mismatches += 0 if row_ok else 1
        worst_ratio = max(worst_ratio, ap.size / exact.size)
        flag = "" if row_ok else "   <-- MISMATCH"
        print(
            f"{g.n:>3} {g.m:>3} {max_degree(g):>3} {exact.size:>6}"
            f" {nd.size:>4} {br.size:>6} {ap.size:>6}{flag}"
        )
    print(
        f"\n{args.count} graphs, {mismatches} mismatches,"
        f" worst approximation ratio {worst_ratio:.2f}"
    )
    return 1 if mismatches else 0


if __name__ == "__main__":
    sys.exit(main())
