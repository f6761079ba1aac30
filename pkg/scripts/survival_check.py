"""Compare every closed-form cycle survival probability with simulation."""

import argparse
import math

import numpy as np

from partition_mac import analysis as an


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--p", type=float, default=0.4)
    ap.add_argument("--lengths", type=int, nargs="+", default=[3, 5, 7])
    ap.add_argument("--samples", type=int, default=10**6)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    rng = np.random.default_rng(args.seed)
    print(f"{'type':>4} {'slot':>6} {'M':>3} {'formula':>9} {'simulated':>9} {'z':>6}")
    for cycle_type in an.CYCLE_TYPES:
        for slot in an.SLOT_CLASSES:
            for m in args.lengths:
                q = an.SurvivalQuery(cycle_type, slot, m, args.p)
                mu = an.survival_prob(q)
                est = an.simulate_survival(q, args.samples, rng)
                sigma = math.sqrt(max(mu * (1 - mu), 1e-300) / args.samples)
                print(f"{cycle_type:>4} {str(slot):>6} {m:>3} {mu:9.6f} {est:9.6f} {(est - mu) / sigma:6.2f}")


if __name__ == "__main__":
    main()
