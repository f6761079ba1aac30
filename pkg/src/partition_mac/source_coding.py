"""Partition information and random source codebooks of balanced partitions."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .core import GroupSizes, InvalidInput, PartitionVector, StatusVector
from .montecarlo import ErrorEstimate, count_failures, estimate


class NoValidCodeword(LookupError):
    """No codebook entry separates the active users."""


def optimal_group_sizes(n: int, k: int) -> GroupSizes:
    """Balanced split of N users into K groups, larger groups first.

    This split maximises the product of group sizes.
    """
    if not 1 <= k <= n:
        raise InvalidInput(f"need 1 <= K <= N, got N={n}, K={k}")
    q, r = divmod(n, k)
    return GroupSizes((q + 1,) * r + (q,) * (k - r))


def partition_information_bits(n: int, k: int) -> float:
    """log2(C(N,K) / prod n*_k), the minimum information needed to partition."""
    sizes = optimal_group_sizes(n, k)
    return math.log2(math.comb(n, k)) - sum(math.log2(m) for m in sizes)


def theorem1_bound(l: int, w: float) -> float:
    """Average error bound exp(-2^(log2 L - W)) for a random codebook of size L."""
    if l < 1:
        raise InvalidInput("codebook size must be >= 1")
    return math.exp(-(2.0 ** (math.log2(l) - w)))


def exact_source_error(n: int, k: int, l: int) -> float:
    """Exact codebook-averaged source error (1 - 2^-W)^L.

    A uniformly drawn balanced partition separates a fixed active set with
    probability prod(n*_k) / C(N, K).
    """
    good = math.prod(optimal_group_sizes(n, k).sizes) / math.comb(n, k)
    return (1.0 - good) ** l


def _blocks(sizes: GroupSizes) -> np.ndarray:
    return np.repeat(np.arange(1, sizes.k + 1), sizes.sizes)


def sample_uniform_partition(sizes: GroupSizes, rng: np.random.Generator) -> PartitionVector:
    """Uniform draw from all partitions with exactly these group sizes."""
    labels = np.empty(sizes.n, dtype=np.int64)
    labels[rng.permutation(sizes.n)] = _blocks(sizes)
    return PartitionVector(tuple(labels.tolist()), sizes.k)


@dataclass(frozen=True, eq=False)
class SourceCodebook:
    """L balanced partitions stored as an L x N label array."""

    labels: np.ndarray = field(repr=False)
    n_groups: int

    def __post_init__(self):
        labels = np.atleast_2d(np.asarray(self.labels, dtype=np.int64))
        if labels.shape[0] < 1:
            raise InvalidInput("a codebook needs at least one entry")
        labels.flags.writeable = False
        object.__setattr__(self, "labels", labels)
        k = self.n_groups
        if labels.min() < 1 or labels.max() > k:
            raise InvalidInput(f"codebook labels must lie in 1..{k}")
        present = (labels[:, :, None] == np.arange(1, k + 1)).any(axis=1)
        if not present.all():
            raise InvalidInput(f"every codebook entry must use all {k} groups")

    @classmethod
    def from_partitions(cls, entries) -> "SourceCodebook":
        entries = list(entries)
        if not entries:
            raise InvalidInput("a codebook needs at least one entry")
        k = entries[0].k
        return cls(np.array([z.labels for z in entries]), k)

    @property
    def n_users(self) -> int:
        return self.labels.shape[1]

    @property
    def size(self) -> int:
        return self.labels.shape[0]

    def __len__(self):
        return self.size

    def __getitem__(self, ell: int) -> PartitionVector:
        """Entry ``ell`` counted from 1."""
        if not 1 <= ell <= self.size:
            raise IndexError(ell)
        return PartitionVector(tuple(self.labels[ell - 1].tolist()), self.n_groups)

    @property
    def entries(self) -> list[PartitionVector]:
        return [self[ell] for ell in range(1, self.size + 1)]

    def __eq__(self, other):
        if not isinstance(other, SourceCodebook):
            return NotImplemented
        return self.n_groups == other.n_groups and np.array_equal(self.labels, other.labels)


def generate_codebook(n: int, k: int, l: int, rng: np.random.Generator) -> SourceCodebook:
    """L i.i.d. uniform partitions with the optimal group sizes."""
    if l < 1:
        raise InvalidInput("codebook size must be >= 1")
    sizes = optimal_group_sizes(n, k)
    labels = rng.permuted(np.tile(_blocks(sizes), (l, 1)), axis=1)
    return SourceCodebook(labels, k)


def separating_rows(cb: SourceCodebook, s: StatusVector) -> np.ndarray:
    """Boolean mask over codebook entries with zero distortion for ``s``."""
    if s.n_users != cb.n_users or s.k != cb.n_groups:
        raise InvalidInput("status vector does not match the codebook dimensions")
    cols = np.sort(cb.labels[:, np.asarray(s.active) - 1], axis=1)
    return (np.diff(cols, axis=1) != 0).all(axis=1)


def source_encode(cb: SourceCodebook, s: StatusVector) -> int:
    """Smallest 1-based index of an entry that separates ``s``.

    Raises NoValidCodeword when no entry does.
    """
    hits = np.flatnonzero(separating_rows(cb, s))
    if hits.size == 0:
        raise NoValidCodeword(f"no entry separates {s.active}")
    return int(hits[0]) + 1


def random_status(n: int, k: int, rng: np.random.Generator) -> StatusVector:
    return StatusVector(n, tuple(sorted((rng.choice(n, size=k, replace=False) + 1).tolist())))


@dataclass(frozen=True)
class SourceTrial:
    n: int
    k: int
    l: int
    codebook: SourceCodebook | None = None

    def __call__(self, rng: np.random.Generator) -> bool:
        s = random_status(self.n, self.k, rng)
        cb = self.codebook if self.codebook is not None else generate_codebook(self.n, self.k, self.l, rng)
        return bool(separating_rows(cb, s).any())


def empirical_source_error(
    n: int,
    k: int,
    l: int,
    trials: int,
    seed: int,
    *,
    fixed_codebook: bool = False,
    confidence: float = 0.95,
    threads: int = 1,
) -> ErrorEstimate:
    """Fraction of uniform status vectors that no codebook entry separates.

    By default a fresh codebook is drawn for every trial, which averages over
    the random code ensemble. With ``fixed_codebook`` one codebook (drawn from
    ``seed`` alone) is shared by all trials.
    """
    if trials < 1:
        raise InvalidInput("trials must be >= 1")
    cb = generate_codebook(n, k, l, np.random.default_rng(seed)) if fixed_codebook else None
    failures = count_failures(SourceTrial(n, k, l, cb), trials, seed, threads)
    return estimate(failures, trials, confidence)
