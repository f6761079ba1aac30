"""Random Bernoulli access matrices, MAP and bipartite decoding, Monte Carlo error."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import permutations, product

import numpy as np

from . import analysis
from .brute_force import BruteForceTrial, DecodingFailure
from .core import (
    AccessMatrix,
    Feedback,
    InvalidInput,
    PartitionVector,
    StatusVector,
    distortion,
    or_channel,
)
from .hypergraph import (
    Hypergraph,
    NotColorable,
    graph_from_survivors,
    reduce,
    strong_color,
)
from .montecarlo import ErrorEstimate, count_failures, estimate
from .source_coding import generate_codebook, optimal_group_sizes, random_status

DECODERS = ("map", "bipartite-k2", "brute-force")

# label vectors scored per MAP call: K**N (or the balanced count) must stay below this
MAP_SEARCH_LIMIT = 2_000_000


@dataclass(frozen=True)
class TrialConfig:
    n_users: int
    n_active: int
    n_slots: int
    bernoulli_p: float
    trials: int
    master_seed: int
    decoder: str = "bipartite-k2"
    codebook_size: int | None = None
    randomize_active: bool = False
    fixed_matrix: bool = False
    map_balanced: bool = False
    threads: int = field(default=1, compare=False)

    def __post_init__(self):
        if self.decoder not in DECODERS:
            raise InvalidInput(f"decoder must be one of {DECODERS}, got {self.decoder!r}")
        if not 1 <= self.n_active <= self.n_users:
            raise InvalidInput(f"need 1 <= K <= N, got N={self.n_users}, K={self.n_active}")
        if not 0.0 <= self.bernoulli_p <= 1.0:
            raise InvalidInput(f"p must lie in [0, 1], got {self.bernoulli_p}")
        if self.trials < 1:
            raise InvalidInput(f"trials must be >= 1, got {self.trials}")
        if self.decoder == "brute-force":
            if self.codebook_size is None or self.codebook_size < 1:
                raise InvalidInput("brute-force decoding needs codebook_size >= 1")
        elif self.n_slots < 0:
            raise InvalidInput(f"n_slots must be >= 0, got {self.n_slots}")
        if self.decoder == "bipartite-k2" and self.n_active != 2:
            raise InvalidInput("the bipartite decoder only handles K = 2")


def bernoulli_matrix(n: int, t: int, p: float, rng: np.random.Generator) -> AccessMatrix:
    return AccessMatrix(rng.random((n, t)) < p)


@lru_cache(maxsize=32)
def _label_vectors(n: int, k: int, balanced: bool) -> np.ndarray:
    """Candidate partitions in lexicographic order of their label vectors."""
    if balanced:
        blocks = np.repeat(np.arange(1, k + 1), optimal_group_sizes(n, k).sizes)
        count = math.factorial(n) // math.prod(math.factorial(m) for m in optimal_group_sizes(n, k))
        if count > MAP_SEARCH_LIMIT:
            raise InvalidInput(f"MAP search over {count} partitions is too large")
        rows = np.array(sorted(set(permutations(blocks.tolist()))), dtype=np.int8)
        rows.flags.writeable = False
        return rows
    if k**n > MAP_SEARCH_LIMIT:
        raise InvalidInput(f"MAP search over {k}^{n} label vectors is too large")
    z = np.array(list(product(range(1, k + 1), repeat=n)), dtype=np.int8)
    uses_all = (z[:, :, None] == np.arange(1, k + 1)).any(axis=1).all(axis=1)
    z = z[uses_all]
    z.flags.writeable = False
    return z


def _separated_counts(z: np.ndarray, h: Hypergraph) -> np.ndarray:
    """For each label vector, how many edges of ``h`` get pairwise distinct labels."""
    if not h.edges:
        return np.zeros(len(z), dtype=np.int64)
    e = np.array(h.sorted_edges()) - 1
    lab = z[:, e]  # rows x edges x K
    lab = np.sort(lab, axis=2)
    return (np.diff(lab, axis=2) != 0).all(axis=2).sum(axis=1)


def map_decode(n: int, k: int, x: AccessMatrix, y: Feedback, *, balanced: bool = False) -> PartitionVector:
    """Partition separating the most status vectors consistent with ``y``.

    Searches every partition in Z_{K;N}, or only the balanced ones when
    ``balanced`` is set. Ties go to the lexicographically smallest label vector.
    """
    z, _ = map_decode_scored(n, k, x, y, balanced=balanced)
    return z


def map_decode_scored(
    n: int, k: int, x: AccessMatrix, y: Feedback, *, balanced: bool = False
) -> tuple[PartitionVector, int]:
    h = reduce(n, k, x, y)
    z = _label_vectors(n, k, balanced)
    scores = _separated_counts(z, h)
    best = int(np.argmax(scores))
    return PartitionVector(tuple(z[best].tolist()), k), int(scores[best])


def bipartite_decode_k2(n: int, x: AccessMatrix, y: Feedback) -> PartitionVector:
    """2-colour the reduced graph, or raise DecodingFailure if it has an odd cycle."""
    h = graph_from_survivors(n, x, y)
    try:
        return strong_color(h, 2)
    except NotColorable as exc:
        raise DecodingFailure("reduced graph is not bipartite") from exc


def slots_for_rate(n: int, p: float, xi: float) -> int:
    """Smallest T with log2(N) / T <= C(p) - xi."""
    margin = analysis.c_rate(p) - xi
    if margin <= 0:
        raise InvalidInput(f"xi={xi} leaves no rate margin below C({p})={analysis.c_rate(p):.4f}")
    return math.ceil(math.log2(n) / margin)


@dataclass(frozen=True)
class RandomCodingTrial:
    cfg: TrialConfig
    matrix: AccessMatrix | None = None

    def __call__(self, rng: np.random.Generator) -> bool:
        cfg = self.cfg
        n, k = cfg.n_users, cfg.n_active
        if cfg.randomize_active:
            s = random_status(n, k, rng)
        else:
            s = StatusVector.first(n, k)
        x = self.matrix if self.matrix is not None else bernoulli_matrix(n, cfg.n_slots, cfg.bernoulli_p, rng)
        y = or_channel(x, s)
        try:
            if cfg.decoder == "map":
                z = map_decode(n, k, x, y, balanced=cfg.map_balanced)
            else:
                z = bipartite_decode_k2(n, x, y)
        except DecodingFailure:
            return False
        return distortion(s, z) == 0


def monte_carlo_error(cfg: TrialConfig, confidence: float = 0.95) -> ErrorEstimate:
    """Estimate the decoding error of ``cfg.decoder`` with a Wilson interval.

    Every trial draws its own matrix (unless ``fixed_matrix``) from a stream
    keyed by (master_seed, trial index), so the estimate does not depend on
    ``cfg.threads``.
    """
    if cfg.decoder == "brute-force":
        cb = None
        if cfg.fixed_matrix:
            cb = generate_codebook(cfg.n_users, cfg.n_active, cfg.codebook_size, np.random.default_rng(cfg.master_seed))
        trial = BruteForceTrial(cfg.n_users, cfg.n_active, cfg.codebook_size, cfg.randomize_active, cb)
    else:
        x = None
        if cfg.fixed_matrix:
            x = bernoulli_matrix(cfg.n_users, cfg.n_slots, cfg.bernoulli_p, np.random.default_rng(cfg.master_seed))
        trial = RandomCodingTrial(cfg, x)
    failures = count_failures(trial, cfg.trials, cfg.master_seed, cfg.threads)
    return estimate(failures, cfg.trials, confidence)
