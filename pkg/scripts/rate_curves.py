"""Rate curves C(p) and C_g(p) with their maxima, written as CSV."""

import argparse
import csv
import sys

import numpy as np

from partition_mac import analysis


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--points", type=int, default=999)
    ap.add_argument("--out", default="-")
    args = ap.parse_args()

    grid = np.linspace(0, 1, args.points + 2)[1:-1]
    fh = sys.stdout if args.out == "-" else open(args.out, "w", newline="")
    w = csv.writer(fh, lineterminator="\r\n")
    w.writerow(["p", "c_rate", "c_group", "gap"])
    for p in grid:
        c, g = analysis.c_rate(p), analysis.c_group(p)
        w.writerow([f"{p:.6f}", f"{c:.8f}", f"{g:.8f}", f"{c - g:.8f}"])

    pc, c = analysis.maximize_rate(analysis.c_rate)
    pg, g = analysis.maximize_rate(analysis.c_group)
    print(f"max C   = {c:.5f} at p = {pc:.5f}", file=sys.stderr)
    print(f"max C_g = {g:.5f} at p = {pg:.5f}", file=sys.stderr)
    if fh is not sys.stdout:
        fh.close()


if __name__ == "__main__":
    main()
