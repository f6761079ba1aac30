"""Source-coding and brute-force error against the codebook-size bound.

For each (N, K) and L = ceil(2^(W + j)), prints the exact ensemble error,
both empirical estimates and the bound exp(-2^(log2 L - W)).
"""

import argparse
import math
import os

from partition_mac.brute_force import empirical_brute_force_error
from partition_mac.source_coding import (
    empirical_source_error,
    exact_source_error,
    partition_information_bits,
    theorem1_bound,
)


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--pairs", default="6:3,8:2,10:2", help="comma list of N:K")
    ap.add_argument("--steps", type=int, default=5)
    ap.add_argument("--trials", type=int, default=10_000)
    ap.add_argument("--seed", type=int, default=7)
    ap.add_argument("--threads", type=int, default=os.cpu_count() or 1)
    args = ap.parse_args()

    print(f"{'N':>3} {'K':>2} {'L':>4} {'W':>7} {'exact':>8} {'source':>8} {'brute':>8} {'bound':>8}")
    for pair in args.pairs.split(","):
        n, k = (int(v) for v in pair.split(":"))
        w = partition_information_bits(n, k)
        for j in range(args.steps):
            l = math.ceil(2 ** (w + j))
            src = empirical_source_error(n, k, l, args.trials, args.seed, threads=args.threads)
            bf = empirical_brute_force_error(n, k, l, args.trials, args.seed, threads=args.threads)
            print(
                f"{n:>3} {k:>2} {l:>4} {w:7.4f} {exact_source_error(n, k, l):8.5f}"
                f" {src.point:8.5f} {bf.point:8.5f} {theorem1_bound(l, w):8.5f}"
            )


if __name__ == "__main__":
    main()
