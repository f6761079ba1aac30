"""Domain types and the noiseless Boolean OR channel.

User ids and group labels are 1-based throughout the public interface.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np


class InvalidInput(ValueError):
    """Raised when arguments violate a documented precondition."""


@dataclass(frozen=True)
class StatusVector:
    """Which K of the N users are active."""

    n_users: int
    active: tuple[int, ...]

    def __post_init__(self):
        active = tuple(int(i) for i in self.active)
        object.__setattr__(self, "active", active)
        if self.n_users < 1:
            raise InvalidInput(f"n_users must be positive, got {self.n_users}")
        if not active:
            raise InvalidInput("at least one active user is required")
        if len(set(active)) != len(active):
            raise InvalidInput(f"active ids must be distinct: {active}")
        if min(active) < 1 or max(active) > self.n_users:
            raise InvalidInput(f"active ids must lie in 1..{self.n_users}: {active}")

    @property
    def k(self) -> int:
        return len(self.active)

    def indicator(self) -> np.ndarray:
        s = np.zeros(self.n_users, dtype=bool)
        s[np.asarray(self.active) - 1] = True
        return s

    @classmethod
    def first(cls, n_users: int, k: int) -> "StatusVector":
        return cls(n_users, tuple(range(1, k + 1)))


@dataclass(frozen=True)
class PartitionVector:
    """An ordered K-partition: ``labels[i-1]`` is the group of user ``i``.

    ``k`` defaults to the largest label; every label in 1..k must occur.
    """

    labels: tuple[int, ...]
    k: int = 0

    def __post_init__(self):
        labels = tuple(int(z) for z in self.labels)
        object.__setattr__(self, "labels", labels)
        if not labels:
            raise InvalidInput("a partition needs at least one user")
        k = self.k or max(labels)
        object.__setattr__(self, "k", k)
        if min(labels) < 1 or max(labels) > k:
            raise InvalidInput(f"labels must lie in 1..{k}: {labels}")
        if len(set(labels)) != k:
            raise InvalidInput(f"every group 1..{k} must be non-empty: {labels}")

    @property
    def n_users(self) -> int:
        return len(self.labels)

    def group_sizes(self) -> "GroupSizes":
        counts = Counter(self.labels)
        return GroupSizes(tuple(counts[g] for g in range(1, self.k + 1)))

    def relabel(self, perm: Sequence[int]) -> "PartitionVector":
        """Apply the label map ``g -> perm[g-1]``."""
        return PartitionVector(tuple(perm[z - 1] for z in self.labels), self.k)


@dataclass(frozen=True)
class GroupSizes:
    sizes: tuple[int, ...]

    def __post_init__(self):
        sizes = tuple(int(n) for n in self.sizes)
        object.__setattr__(self, "sizes", sizes)
        if not sizes or min(sizes) < 1:
            raise InvalidInput(f"group sizes must be positive: {sizes}")

    @property
    def n(self) -> int:
        return sum(self.sizes)

    @property
    def k(self) -> int:
        return len(self.sizes)

    def __iter__(self):
        return iter(self.sizes)


@dataclass(frozen=True, eq=False)
class AccessMatrix:
    """N x T binary schedule; row ``i-1`` is the codeword of user ``i``."""

    bits: np.ndarray = field(repr=False)

    def __post_init__(self):
        bits = np.ascontiguousarray(self.bits)
        if bits.ndim != 2:
            raise InvalidInput(f"access matrix must be 2-D, got shape {bits.shape}")
        if bits.shape[0] < 1:
            raise InvalidInput("access matrix needs at least one user")
        if bits.dtype != bool:
            if not np.isin(bits, (0, 1)).all():
                raise InvalidInput("access matrix entries must be 0/1")
            bits = bits.astype(bool)
        bits.flags.writeable = False
        object.__setattr__(self, "bits", bits)

    @property
    def n_users(self) -> int:
        return self.bits.shape[0]

    @property
    def n_slots(self) -> int:
        return self.bits.shape[1]

    def writers(self, t: int) -> frozenset[int]:
        """1-based ids of users scheduled to write in 0-based slot ``t``."""
        return frozenset((np.flatnonzero(self.bits[:, t]) + 1).tolist())

    def __eq__(self, other):
        if not isinstance(other, AccessMatrix):
            return NotImplemented
        return np.array_equal(self.bits, other.bits)

    def __repr__(self):
        return f"AccessMatrix(n_users={self.n_users}, n_slots={self.n_slots})"


@dataclass(frozen=True, eq=False)
class Feedback:
    bits: np.ndarray

    def __post_init__(self):
        bits = np.asarray(self.bits).astype(bool).ravel()
        bits.flags.writeable = False
        object.__setattr__(self, "bits", bits)

    def __len__(self):
        return self.bits.size

    def __eq__(self, other):
        if not isinstance(other, Feedback):
            return NotImplemented
        return np.array_equal(self.bits, other.bits)

    def tolist(self) -> list[int]:
        return self.bits.astype(int).tolist()


def or_channel(x: AccessMatrix, s: StatusVector) -> Feedback:
    """Slot-wise OR of the codewords of the active users."""
    if s.n_users != x.n_users:
        raise InvalidInput(f"status has N={s.n_users} but matrix has N={x.n_users}")
    rows = x.bits[np.asarray(s.active) - 1]
    return Feedback(rows.any(axis=0))


def distortion(s: StatusVector, z: PartitionVector) -> int:
    """0 if every active user sits in its own group, else 1."""
    if s.n_users != z.n_users:
        raise InvalidInput(f"status has N={s.n_users} but partition has N={z.n_users}")
    groups = [z.labels[i - 1] for i in s.active]
    return 0 if len(set(groups)) == len(groups) else 1


def compatible_status_count(z: PartitionVector) -> int:
    """Number of K-subsets of users that ``z`` separates: the product of group sizes."""
    return math.prod(z.group_sizes().sizes)


def compatible_partition_count(n: int, k: int, sizes: GroupSizes | Iterable[int]) -> int:
    """Partitions with the given group sizes that separate a fixed K-subset.

    Equals ``K! * (N-K)! / prod((n_k - 1)!)``; it does not depend on which
    subset is fixed.
    """
    sizes = sizes if isinstance(sizes, GroupSizes) else GroupSizes(tuple(sizes))
    if sizes.k != k or sizes.n != n:
        raise InvalidInput(f"sizes {sizes.sizes} do not describe a {k}-partition of {n}")
    return math.factorial(k) * multinomial(n - k, [m - 1 for m in sizes])


def multinomial(n: int, parts: Iterable[int]) -> int:
    parts = list(parts)
    if sum(parts) != n or min(parts, default=0) < 0:
        raise InvalidInput(f"parts {parts} do not sum to {n}")
    out = math.factorial(n)
    for m in parts:
        out //= math.factorial(m)
    return out
