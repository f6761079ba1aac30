"""Brute-force channel code: K group-indicator slots per codebook partition.

Block ``l`` of the access matrix has user ``i`` write in its group's slot
under partition ``z_l``. The active users light every slot of a block exactly
when that partition separates them.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import (
    AccessMatrix,
    Feedback,
    InvalidInput,
    PartitionVector,
    StatusVector,
    or_channel,
)
from .montecarlo import ErrorEstimate, count_failures, estimate
from .source_coding import SourceCodebook, generate_codebook, random_status


class DecodingFailure(LookupError):
    """The feedback does not validate any partition the decoder can offer."""


@dataclass(frozen=True)
class BruteForceCode:
    codebook: SourceCodebook
    matrix: AccessMatrix

    @property
    def n_slots(self) -> int:
        return self.matrix.n_slots


def build_matrix(cb: SourceCodebook) -> BruteForceCode:
    """Concatenate one N x K indicator block per codebook entry (T = K*L)."""
    k = cb.n_groups
    onehot = cb.labels[:, :, None] == np.arange(1, k + 1)  # L x N x K
    bits = onehot.transpose(1, 0, 2).reshape(cb.n_users, cb.size * k)
    return BruteForceCode(cb, AccessMatrix(bits))


def decode(code: BruteForceCode, y: Feedback) -> PartitionVector:
    """Partition of the first block whose K feedback bits are all ones."""
    k, l = code.codebook.n_groups, code.codebook.size
    if len(y) != k * l:
        raise InvalidInput(f"feedback has {len(y)} slots, code uses {k * l}")
    full = y.bits.reshape(l, k).all(axis=1)
    hits = np.flatnonzero(full)
    if hits.size == 0:
        raise DecodingFailure("no block of the feedback is all ones")
    return code.codebook[int(hits[0]) + 1]


def run_trial(cb: SourceCodebook, s: StatusVector) -> bool:
    """Transmit with the brute-force code and report whether decoding succeeded."""
    code = build_matrix(cb)
    try:
        decode(code, or_channel(code.matrix, s))
    except DecodingFailure:
        return False
    return True


@dataclass(frozen=True)
class BruteForceTrial:
    n: int
    k: int
    l: int
    randomize_active: bool = True
    codebook: SourceCodebook | None = None

    def __call__(self, rng: np.random.Generator) -> bool:
        if self.randomize_active:
            s = random_status(self.n, self.k, rng)
        else:
            s = StatusVector.first(self.n, self.k)
        cb = self.codebook if self.codebook is not None else generate_codebook(self.n, self.k, self.l, rng)
        return run_trial(cb, s)


def empirical_brute_force_error(
    n: int,
    k: int,
    l: int,
    trials: int,
    seed: int,
    *,
    randomize_active: bool = True,
    fixed_codebook: bool = False,
    confidence: float = 0.95,
    threads: int = 1,
) -> ErrorEstimate:
    if trials < 1:
        raise InvalidInput("trials must be >= 1")
    cb = generate_codebook(n, k, l, np.random.default_rng(seed)) if fixed_codebook else None
    trial = BruteForceTrial(n, k, l, randomize_active, cb)
    return estimate(count_failures(trial, trials, seed, threads), trials, confidence)
