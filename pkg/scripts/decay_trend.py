"""Bipartite-decoder error as N grows with T chosen at a fixed rate gap.

Prints one row per N: slots, empirical error with 95% interval, and the
union bound over odd cycles through the active edge.
"""

import argparse
import os

from partition_mac import analysis
from partition_mac.random_coding import TrialConfig, monte_carlo_error, slots_for_rate


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, nargs="+", default=[64, 256, 1024])
    ap.add_argument("--p", type=float, default=0.3)
    ap.add_argument("--xi", type=float, default=0.09)
    ap.add_argument("--trials", type=int, default=10_000)
    ap.add_argument("--seed", type=int, default=42)
    ap.add_argument("--threads", type=int, default=os.cpu_count() or 1)
    args = ap.parse_args()

    print(f"C({args.p}) = {analysis.c_rate(args.p):.5f}, xi = {args.xi}")
    print(f"{'N':>6} {'T':>4} {'error':>8} {'ci_low':>8} {'ci_high':>8} {'union_bound':>12}")
    for n in args.n:
        t = slots_for_rate(n, args.p, args.xi)
        cfg = TrialConfig(n, 2, t, args.p, args.trials, args.seed, threads=args.threads)
        est = monte_carlo_error(cfg)
        bound = analysis.one_odd_union_bound(n, args.p, t)
        print(f"{n:>6} {t:>4} {est.point:8.4f} {est.ci_low:8.4f} {est.ci_high:8.4f} {bound:12.4g}")


if __name__ == "__main__":
    main()
