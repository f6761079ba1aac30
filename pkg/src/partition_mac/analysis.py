"""Closed-form rates and odd-cycle survival probabilities for K = 2.

Logarithms are base 2 throughout. ``fib_extended``, ``fib_sum`` and
``no_consec_zeros_prob`` accept ``fractions.Fraction`` arguments and then
compute exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .core import InvalidInput

GOLDEN = (math.sqrt(5) - 1) / 2


def _check_p(p):
    if not 0 <= p <= 1:
        raise InvalidInput(f"p must lie in [0, 1], got {p}")


def phi(p: float) -> float:
    """Larger root of x^2 = p x + p (1 - p)."""
    _check_p(p)
    return (p + math.sqrt(4 * p - 3 * p * p)) / 2


def psi(p: float) -> float:
    """Smaller root of x^2 = p x + p (1 - p)."""
    _check_p(p)
    return (p - math.sqrt(4 * p - 3 * p * p)) / 2


def fib_extended(k: int, p):
    """F(k, p) from F(k) = p F(k-1) + p (1-p) F(k-2), F(0) = 0, F(1) = 1."""
    if k < 1:
        raise InvalidInput(f"k must be >= 1, got {k}")
    _check_p(p)
    prev, cur = 0 * p, 1 + 0 * p
    for _ in range(k - 1):
        prev, cur = cur, p * cur + p * (1 - p) * prev
    return cur


def fib_closed_form(k: int, p: float) -> float:
    """(phi^k - psi^k) / (phi - psi); loses precision as p -> 0."""
    if k < 1:
        raise InvalidInput(f"k must be >= 1, got {k}")
    if p == 0:
        return 1.0 if k == 1 else 0.0
    a, b = phi(p), psi(p)
    return (a**k - b**k) / (a - b)


def fib_sum(k: int, p):
    """Sum over j of C(k-1-j, j) p^(k-1-j) (1-p)^j."""
    if k < 1:
        raise InvalidInput(f"k must be >= 1, got {k}")
    return sum(math.comb(k - 1 - j, j) * p ** (k - 1 - j) * (1 - p) ** j for j in range((k - 1) // 2 + 1))


def no_consec_zeros_prob(m: int, p):
    """J_M(p): chance that M i.i.d. Bernoulli(p) bits contain no "00".

    Equals F(M+2, p) / p. J_0 = J_1 = 1. For M = -1 the same identity gives
    F(1, p) / p = 1 / p, which closes the 3-cycle case of the type-3 survival
    formula.
    """
    _check_p(p)
    if m == -1:
        if p == 0:
            raise InvalidInput("J_{-1}(p) = 1/p is undefined at p = 0")
        return 1 / p
    if m < -1:
        raise InvalidInput(f"M must be >= -1, got {m}")
    if m == 0:
        return 1 + 0 * p
    # probability mass of valid prefixes ending in 1 and ending in 0
    ones, zeros = p, 1 - p
    for _ in range(m - 1):
        ones, zeros = (ones + zeros) * p, ones * (1 - p)
    return ones + zeros


CYCLE_TYPES = ("1", "2a", "2b", "3")
SLOT_CLASSES = ((0, 0), (0, 1), (1, 0), (1, 1))


@dataclass(frozen=True)
class SurvivalQuery:
    """One odd cycle of length M and one slot with (x_1t, x_2t) = slot.

    Users 1 and 2 are active. Type ``"1"`` cycles run 1, 2, i_1, ..., i_{M-2};
    ``"2a"`` cycles contain user 1 but not 2; ``"2b"`` contain user 2 but not
    1; ``"3"`` cycles contain neither.
    """

    cycle_type: str
    slot: tuple[int, int]
    m: int
    p: float

    def __post_init__(self):
        object.__setattr__(self, "cycle_type", str(self.cycle_type))
        object.__setattr__(self, "slot", tuple(int(b) for b in self.slot))
        if self.cycle_type not in CYCLE_TYPES:
            raise InvalidInput(f"cycle type must be one of {CYCLE_TYPES}")
        if self.slot not in SLOT_CLASSES:
            raise InvalidInput(f"slot class must be a pair of bits, got {self.slot}")
        if self.m < 3 or self.m % 2 == 0:
            raise InvalidInput(f"cycle length must be odd and >= 3, got {self.m}")
        _check_p(self.p)

    def cycle(self) -> list[int]:
        """Vertex sequence around the cycle; 1 and 2 are the active users,
        other vertices are numbered from 3."""
        extra = {"1": self.m - 2, "2a": self.m - 1, "2b": self.m - 1, "3": self.m}[self.cycle_type]
        head = {"1": [1, 2], "2a": [1], "2b": [2], "3": []}[self.cycle_type]
        return head + list(range(3, 3 + extra))


def survival_prob(q: SurvivalQuery) -> float:
    """Probability the cycle loses no edge in one slot of the given class."""
    p, m = q.p, q.m
    J = no_consec_zeros_prob
    if q.slot == (0, 0):
        # silent slot: every inactive vertex on the cycle must stay silent
        return (1 - p) ** sum(v > 2 for v in q.cycle())
    if q.cycle_type == "1":
        return J(m - 2, p) if q.slot == (1, 1) else p * J(m - 3, p)
    if q.cycle_type in ("2a", "2b"):
        # the active member of the cycle is silent in exactly one slot class
        silent = (0, 1) if q.cycle_type == "2a" else (1, 0)
        return p * p * J(m - 3, p) if q.slot == silent else J(m - 1, p)
    # both ends of the closing edge silent, their neighbours writing
    wrap = p * (1 - p) ** 2 if m == 3 else p * p * (1 - p) ** 2 * J(m - 4, p)
    return J(m, p) - wrap


def simulate_survival(q: SurvivalQuery, samples: int, rng: np.random.Generator) -> float:
    """Monte Carlo estimate of ``survival_prob`` by direct deletion rules.

    Draws the codeword bits of the non-active cycle vertices for one slot,
    computes the feedback of users 1 and 2, and checks whether the slot's
    vertex or clique deletion removes any cycle edge.
    """
    cyc = q.cycle()
    bits = rng.random((samples, len(cyc))) < q.p
    for col, v in enumerate(cyc):
        if v in (1, 2):
            bits[:, col] = bool(q.slot[v - 1])
    y = bool(q.slot[0] or q.slot[1])
    if not y:
        survived = ~bits.any(axis=1)
    else:
        silent = ~bits
        both_silent = silent & np.roll(silent, -1, axis=1)
        survived = ~both_silent.any(axis=1)
    return float(survived.mean())


def binary_entropy(x: float) -> float:
    if not 0 <= x <= 1:
        raise InvalidInput(f"entropy argument must lie in [0, 1], got {x}")
    if x in (0, 1):
        return 0.0
    return -x * math.log2(x) - (1 - x) * math.log2(1 - x)


def c_rate(p: float) -> float:
    """Achievable rate of random coding with the bipartite decoder (K = 2)."""
    _check_p(p)
    if p in (0, 1):
        return 0.0
    q2 = (1 - p) ** 2
    return -(1 - q2) * math.log2(phi(p)) - q2 * math.log2(1 - p)


def c_group(p: float) -> float:
    """Random-coding group-testing rate for K = 2."""
    _check_p(p)
    return min((1 - p) * binary_entropy(p), 0.5 * binary_entropy((1 - p) ** 2))


@dataclass(frozen=True)
class RatePoint:
    p: float
    value: float


def rate_curve(f: Callable[[float], float], grid) -> list[RatePoint]:
    return [RatePoint(float(p), f(float(p))) for p in grid]


def _golden_max(f, a: float, b: float, tol: float) -> float:
    c, d = b - GOLDEN * (b - a), a + GOLDEN * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - GOLDEN * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + GOLDEN * (b - a)
            fd = f(d)
    return (a + b) / 2


def is_unimodal(values, slack: float = 1e-12) -> bool:
    v = np.asarray(values, dtype=float)
    i = int(np.argmax(v))
    dv = np.diff(v)
    return bool((dv[:i] >= -slack).all() and (dv[i:] <= slack).all())


def maximize_rate(
    f: Callable[[float], float], tol: float = 1e-9, grid_points: int = 1000
) -> tuple[float, float]:
    """Maximiser and maximum of ``f`` on (0, 1).

    A grid scan checks unimodality and brackets the peak; golden-section
    search then refines inside the bracket. A non-unimodal scan falls back
    to the grid argmax.
    """
    grid = np.linspace(0, 1, grid_points + 2)[1:-1]
    vals = np.array([f(float(p)) for p in grid])
    i = int(np.argmax(vals))
    if not is_unimodal(vals):
        return float(grid[i]), float(vals[i])
    lo = grid[i - 1] if i > 0 else 0.0
    hi = grid[i + 1] if i + 1 < len(grid) else 1.0
    p_star = _golden_max(f, float(lo), float(hi), tol)
    best = f(p_star)
    if best < vals[i]:
        return float(grid[i]), float(vals[i])
    return p_star, best


def cycle_error_bound(m: int, p: float, t: int) -> float:
    """2^(-(M-2) C(p) T): survival bound for one 1-odd cycle of length M."""
    if m < 3 or m % 2 == 0:
        raise InvalidInput(f"cycle length must be odd and >= 3, got {m}")
    return 2.0 ** (-(m - 2) * c_rate(p) * t)


def one_odd_union_bound(n: int, p: float, t: int) -> float:
    """Union bound over all 1-odd cycles: sum over odd M <= N of N^(M-2) 2^(-(M-2) C(p) T).

    Not clipped to 1; returns ``inf`` when T is too short for the terms to decay.
    """
    gap = math.log2(n) - c_rate(p) * t
    total = 0.0
    for m in range(3, n + 1, 2):
        exponent = (m - 2) * gap
        if exponent > 1000:
            return math.inf
        total += 2.0**exponent
    return total


def asymptotic_partition_rate(eta: float) -> float:
    """Per-user partition information -(1-eta) log2(1-eta) when K = eta N."""
    if not 0 < eta < 1:
        raise InvalidInput(f"eta must lie in (0, 1), got {eta}")
    return -(1 - eta) * math.log2(1 - eta)


def asymptotic_gt_rate(eta: float) -> float:
    """Per-user information to identify the actives, H(eta), when K = eta N."""
    if not 0 < eta < 1:
        raise InvalidInput(f"eta must lie in (0, 1), got {eta}")
    return binary_entropy(eta)
