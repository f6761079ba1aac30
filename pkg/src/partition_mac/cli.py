"""``partition-mac`` command line: rate curves, simulations, the worked example.

Exit codes: 0 success, 2 configuration error, 3 I/O error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time
from contextlib import contextmanager

import numpy as np

from . import analysis
from .brute_force import empirical_brute_force_error
from .core import AccessMatrix, InvalidInput, StatusVector, distortion, or_channel
from .hypergraph import apply_slot, candidate_set, complete
from .random_coding import (
    DECODERS,
    TrialConfig,
    bipartite_decode_k2,
    monte_carlo_error,
    slots_for_rate,
)
from .source_coding import (
    empirical_source_error,
    exact_source_error,
    optimal_group_sizes,
    partition_information_bits,
    theorem1_bound,
)

EXIT_CONFIG = 2
EXIT_IO = 3

DEMO_MATRIX = np.array([[1, 0, 1], [1, 0, 0], [0, 1, 1], [0, 0, 0]], dtype=bool)
DEMO_ACTIVE = (1, 2)


class ConfigError(Exception):
    pass


def parse_grid(text: str) -> list[float]:
    """``lo:hi:step`` (inclusive) or a comma list; empty string gives []."""
    text = text.strip()
    if not text:
        return []
    try:
        if ":" in text:
            lo, hi, step = (float(v) for v in text.split(":"))
            if step <= 0 or hi < lo:
                raise ValueError
            count = int(round((hi - lo) / step)) + 1
            return [round(lo + i * step, 12) for i in range(count)]
        return [float(v) for v in text.split(",")]
    except ValueError:
        raise ConfigError(f"bad grid {text!r}; use lo:hi:step or a comma list") from None


def parse_ints(text) -> list[int]:
    if isinstance(text, int):
        return [text]
    if isinstance(text, list):
        return [int(v) for v in text]
    try:
        return [int(v) for v in str(text).split(",") if v.strip()]
    except ValueError:
        raise ConfigError(f"bad integer list {text!r}") from None


@contextmanager
def _output(path: str | None):
    if path in (None, "-"):
        yield sys.stdout
        return
    with open(path, "w", newline="") as fh:
        yield fh


def _write_csv(path, header, rows):
    buf = io.StringIO(newline="")
    writer = csv.writer(buf, lineterminator="\r\n")
    writer.writerow(header)
    writer.writerows(rows)
    with _output(path) as fh:
        fh.write(buf.getvalue())


def _write_json(path, obj):
    text = json.dumps(obj, indent=2, sort_keys=True) + "\n"
    with _output(path) as fh:
        fh.write(text)


def _fmt(x: float) -> str:
    return repr(float(x))


def cmd_rates(args) -> None:
    grid = parse_grid(args.grid)
    if any(not 0 < p < 1 for p in grid):
        raise ConfigError("rate grid points must lie strictly inside (0, 1)")
    rows = [[_fmt(p), _fmt(analysis.c_rate(p)), _fmt(analysis.c_group(p))] for p in grid]
    pc, sc = analysis.maximize_rate(analysis.c_rate)
    pg, sg = analysis.maximize_rate(analysis.c_group)
    rows.append(["max", _fmt(sc), _fmt(sg)])
    rows.append(["argmax", _fmt(pc), _fmt(pg)])
    _write_csv(args.out, ["p", "c_rate", "c_group"], rows)


def cmd_fib(args) -> None:
    if args.kmax < 1:
        raise ConfigError("--kmax must be >= 1")
    grid = parse_grid(args.grid)
    if any(not 0 < p <= 1 for p in grid):
        raise ConfigError("fib grid points must lie in (0, 1]")
    rows = []
    for p in grid:
        for k in range(1, args.kmax + 1):
            rec = analysis.fib_extended(k, p)
            closed = analysis.fib_closed_form(k, p)
            rows.append(
                [
                    k,
                    _fmt(p),
                    _fmt(rec),
                    _fmt(closed),
                    _fmt(abs(rec - closed)),
                    _fmt(analysis.no_consec_zeros_prob(k, p)),
                    _fmt(analysis.phi(p)),
                    _fmt(analysis.psi(p)),
                ]
            )
    header = ["k", "p", "fib_recurrence", "fib_closed_form", "abs_diff", "no_consec_zeros", "phi", "psi"]
    _write_csv(args.out, header, rows)


def _simulate_cell(scheme: str, n: int, args) -> dict:
    k = args.k
    cell = {"scheme": scheme, "n": n, "k": k, "seed": args.seed, "trials": args.trials}
    if scheme == "brute-force":
        if args.l is None:
            raise ConfigError("brute-force simulation needs --l (codebook size)")
        w = partition_information_bits(n, k)
        cfg = TrialConfig(
            n, k, k * args.l, 0.0, args.trials, args.seed, "brute-force",
            codebook_size=args.l, randomize_active=args.randomize_active, threads=args.threads,
        )
        cell.update(l=args.l, t=k * args.l, w_bits=w)
        reference = {"kind": "source_coding_bound", "value": theorem1_bound(args.l, w)}
    else:
        if args.p is None:
            raise ConfigError(f"{scheme} simulation needs --p")
        t = args.t if args.t is not None else slots_for_rate(n, args.p, args.xi)
        cfg = TrialConfig(
            n, k, t, args.p, args.trials, args.seed, scheme,
            randomize_active=args.randomize_active, threads=args.threads,
        )
        cell.update(p=args.p, t=t, xi=args.xi if args.t is None else None)
        if k == 2:
            reference = {"kind": "one_odd_cycle_union_bound", "value": analysis.one_odd_union_bound(n, args.p, t)}
        else:
            reference = None
    start = time.perf_counter()
    est = monte_carlo_error(cfg)
    cell["wall_clock_s"] = time.perf_counter() - start
    cell["estimate"] = est.to_dict()
    cell["reference"] = reference
    return cell


def cmd_simulate(args) -> None:
    if args.seed is None:
        raise ConfigError("--seed is required for simulations")
    if args.trials is None or args.trials < 1:
        raise ConfigError("--trials must be >= 1")
    if args.threads < 1:
        raise ConfigError("--threads must be >= 1")
    ns = parse_ints(args.n)
    if not ns:
        raise ConfigError("--n needs at least one value")
    cells = []
    try:
        for n in ns:
            cells.append(_simulate_cell(args.scheme, n, args))
    except InvalidInput as exc:
        raise ConfigError(str(exc)) from None
    _write_json(args.out, {"command": "simulate", "cells": cells})


def cmd_source(args) -> None:
    if args.seed is None:
        raise ConfigError("--seed is required for simulations")
    if args.trials is None or args.trials < 1:
        raise ConfigError("--trials must be >= 1")
    try:
        w = partition_information_bits(args.n, args.k)
        start = time.perf_counter()
        source = empirical_source_error(
            args.n, args.k, args.l, args.trials, args.seed, fixed_codebook=args.fixed_codebook, threads=args.threads
        )
        brute = empirical_brute_force_error(
            args.n, args.k, args.l, args.trials, args.seed, fixed_codebook=args.fixed_codebook, threads=args.threads
        )
        elapsed = time.perf_counter() - start
    except InvalidInput as exc:
        raise ConfigError(str(exc)) from None
    report = {
        "command": "source",
        "n": args.n,
        "k": args.k,
        "l": args.l,
        "seed": args.seed,
        "group_sizes": list(optimal_group_sizes(args.n, args.k).sizes),
        "w_bits": w,
        "bound": theorem1_bound(args.l, w),
        "exact_ensemble_error": None if args.fixed_codebook else exact_source_error(args.n, args.k, args.l),
        "source_estimate": source.to_dict(),
        "brute_force_estimate": brute.to_dict(),
        "wall_clock_s": elapsed,
    }
    _write_json(args.out, report)


def demo_trace() -> tuple[str, dict]:
    """Replay the four-user, three-slot worked example."""
    x = AccessMatrix(DEMO_MATRIX)
    n, k = x.n_users, len(DEMO_ACTIVE)
    s = StatusVector(n, DEMO_ACTIVE)
    y = or_channel(x, s)
    out = [f"users N={n}, active K={k}, true active set {set(s.active)}", "access matrix X:"]
    out += ["  user %d: %s" % (i + 1, " ".join(str(int(b)) for b in row)) for i, row in enumerate(x.bits)]
    out.append(f"feedback y = {y.tolist()}")
    h = complete(n, k)
    out.append(f"start: complete graph, edges {h.sorted_edges()}")
    for t in range(x.n_slots):
        writers = x.writers(t)
        nxt = apply_slot(h, writers, y.bits[t])
        rule = "clique deletion" if y.bits[t] else "vertex deletion"
        removed = sorted(h.edges - nxt.edges)
        out.append(f"slot {t + 1}: writers {sorted(writers)}, y={int(y.bits[t])} ({rule}) removes {removed}")
        h = nxt
    edges = h.sorted_edges()
    out.append(f"remaining edges {edges}")
    assert {st.active for st in candidate_set(n, k, x, y)} == set(edges)
    z = bipartite_decode_k2(n, x, y)
    out.append(f"partition z = {list(z.labels)}; separates users 1 and 2: {distortion(s, z) == 0}")
    summary = {"feedback": y.tolist(), "edges": edges, "partition": list(z.labels)}
    return "\n".join(out) + "\n", summary


def cmd_demo(args) -> None:
    text, _ = demo_trace()
    with _output(args.out) as fh:
        fh.write(text)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="partition-mac", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("rates", help="C(p) and C_g(p) on a grid, with maxima")
    p.add_argument("--grid", default="0.01:0.99:0.01")
    p.add_argument("--out")
    p.set_defaults(func=cmd_rates)

    p = sub.add_parser("simulate", help="Monte Carlo decoding error per N")
    p.add_argument("--config", help="JSON file of defaults; flags override it")
    p.add_argument("--scheme", choices=DECODERS, default="bipartite-k2")
    p.add_argument("--n", default="64", help="comma-separated list of N")
    p.add_argument("--k", type=int, default=2)
    p.add_argument("--p", type=float)
    p.add_argument("--xi", type=float, default=0.09)
    p.add_argument("--t", type=int, help="slots; default from --p and --xi")
    p.add_argument("--l", type=int, help="codebook size for brute force")
    p.add_argument("--trials", type=int, default=10000)
    p.add_argument("--seed", type=int)
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--randomize-active", action="store_true")
    p.add_argument("--out")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("source", help="source-coding and brute-force error against the bound")
    p.add_argument("--config", help="JSON file of defaults; flags override it")
    p.add_argument("--n", type=int, default=6)
    p.add_argument("--k", type=int, default=3)
    p.add_argument("--l", type=int, default=64)
    p.add_argument("--trials", type=int, default=100000)
    p.add_argument("--seed", type=int)
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--fixed-codebook", action="store_true")
    p.add_argument("--out")
    p.set_defaults(func=cmd_source)

    p = sub.add_parser("demo", help="replay the four-user example")
    p.add_argument("--out")
    p.set_defaults(func=cmd_demo)

    p = sub.add_parser("fib", help="extended Fibonacci table")
    p.add_argument("--kmax", type=int, default=40)
    p.add_argument("--grid", default="0.1:0.9:0.1")
    p.add_argument("--out")
    p.set_defaults(func=cmd_fib)
    return parser


def _parse(parser, argv):
    args = parser.parse_args(argv)
    path = getattr(args, "config", None)
    if not path:
        return args
    try:
        with open(path) as fh:
            file_cfg = json.load(fh)
    except OSError as exc:
        raise OSError(f"cannot read config {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path} is not valid JSON: {exc}") from None
    if not isinstance(file_cfg, dict):
        raise ConfigError(f"config {path} must hold a JSON object")
    # re-parse so that explicit flags win over file values
    subparser = parser._subparsers._group_actions[0].choices[args.command]
    known = {a.dest for a in subparser._actions}
    unknown = set(file_cfg) - known
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    subparser.set_defaults(**file_cfg)
    return parser.parse_args(argv)


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = _parse(parser, argv)
        args.func(args)
    except ConfigError as exc:
        print(f"partition-mac: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except InvalidInput as exc:
        print(f"partition-mac: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"partition-mac: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    return 0


if __name__ == "__main__":
    sys.exit(main())
