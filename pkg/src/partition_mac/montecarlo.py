"""Seeded trial streams, Wilson intervals and a deterministic parallel fold."""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import partial
from statistics import NormalDist
from typing import Callable

import numpy as np


@dataclass(frozen=True)
class ErrorEstimate:
    point: float
    ci_low: float
    ci_high: float
    trials: int
    failures: int

    @property
    def sigma(self) -> float:
        """Binomial standard error of ``point``."""
        return math.sqrt(self.point * (1.0 - self.point) / self.trials)

    def to_dict(self) -> dict:
        return {
            "point": self.point,
            "ci_low": self.ci_low,
            "ci_high": self.ci_high,
            "trials": self.trials,
            "failures": self.failures,
            "sigma": self.sigma,
        }


def wilson_interval(failures: int, trials: int, confidence: float = 0.95) -> tuple[float, float]:
    if trials < 1:
        raise ValueError("trials must be >= 1")
    z = NormalDist().inv_cdf(0.5 + confidence / 2)
    phat = failures / trials
    denom = 1 + z * z / trials
    centre = (phat + z * z / (2 * trials)) / denom
    half = z * math.sqrt(phat * (1 - phat) / trials + z * z / (4 * trials * trials)) / denom
    # clamp so the point estimate is always inside despite rounding
    return max(0.0, min(centre - half, phat)), min(1.0, max(centre + half, phat))


def estimate(failures: int, trials: int, confidence: float = 0.95) -> ErrorEstimate:
    lo, hi = wilson_interval(failures, trials, confidence)
    return ErrorEstimate(failures / trials, lo, hi, trials, failures)


def trial_rng(master_seed: int, trial: int) -> np.random.Generator:
    """Independent stream for one trial; depends only on (seed, index)."""
    return np.random.default_rng([int(master_seed), int(trial)])


def _count_failures(trial_fn, master_seed, indices) -> int:
    return sum(0 if trial_fn(trial_rng(master_seed, i)) else 1 for i in indices)


def count_failures(
    trial_fn: Callable[[np.random.Generator], bool],
    trials: int,
    master_seed: int,
    threads: int = 1,
) -> int:
    """Run ``trial_fn`` once per trial index and count the ``False`` outcomes.

    ``trial_fn`` must be picklable when ``threads > 1``. The count is a sum of
    per-index outcomes, so it does not depend on ``threads``.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    if threads <= 1:
        return _count_failures(trial_fn, master_seed, range(trials))
    chunks = [range(lo, min(lo + 256, trials)) for lo in range(0, trials, 256)]
    work = partial(_count_failures, trial_fn, master_seed)
    with ProcessPoolExecutor(max_workers=threads) as pool:
        return sum(pool.map(work, chunks))
