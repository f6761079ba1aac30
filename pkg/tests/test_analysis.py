import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from oracles import no_00_probability

from partition_mac import analysis as an
from partition_mac.core import InvalidInput

P_GRID = [round(0.1 * i, 1) for i in range(1, 10)]
probs = st.floats(0.01, 0.99)


# ---- characteristic roots ----


@pytest.mark.parametrize("p, a, b", [(1.0, 1.0, 0.0), (0.0, 0.0, 0.0), (0.5, 0.809017, -0.309017)])
def test_roots(p, a, b):
    assert an.phi(p) == pytest.approx(a, abs=1e-6)
    assert an.psi(p) == pytest.approx(b, abs=1e-6)


@given(probs)
def test_root_identities(p):
    a, b = an.phi(p), an.psi(p)
    assert a + b == pytest.approx(p, abs=1e-12)
    assert a * b == pytest.approx(-p * (1 - p), abs=1e-12)
    assert 1 >= a >= 0 >= b >= -1


def test_roots_reject_bad_p():
    with pytest.raises(InvalidInput):
        an.phi(1.2)


# ---- extended Fibonacci ----


def test_fib_examples():
    assert all(an.fib_extended(k, 1.0) == 1 for k in range(1, 30))
    assert an.fib_extended(3, 0.5) == pytest.approx(0.5)
    assert an.fib_sum(3, 0.5) == pytest.approx(0.5)
    assert an.fib_closed_form(3, 0.5) == pytest.approx(0.5)
    assert an.fib_extended(4, 0.5) == pytest.approx(0.375)


def test_fib_at_zero():
    assert an.fib_extended(1, 0.0) == an.fib_sum(1, 0.0) == an.fib_closed_form(1, 0.0) == 1
    for k in range(2, 8):
        assert an.fib_extended(k, 0.0) == an.fib_sum(k, 0.0) == an.fib_closed_form(k, 0.0) == 0


def test_fib_rejects_k0():
    with pytest.raises(InvalidInput):
        an.fib_extended(0, 0.5)


@pytest.mark.parametrize("p", P_GRID)
def test_fib_three_ways(p):
    for k in range(1, 61):
        rec = an.fib_extended(k, p)
        assert abs(rec - an.fib_closed_form(k, p)) <= 1e-10
        assert abs(rec - an.fib_sum(k, p)) <= 1e-10


def test_fib_exact_at_half():
    half = Fraction(1, 2)
    for k in range(1, 26):
        assert an.fib_extended(k, half) == an.fib_sum(k, half)


# ---- no consecutive zeros ----


def test_j_examples():
    assert all(an.no_consec_zeros_prob(1, p) == 1 for p in P_GRID)
    assert an.no_consec_zeros_prob(0, 0.3) == 1
    assert an.no_consec_zeros_prob(2, 0.5) == pytest.approx(0.75)
    assert an.no_consec_zeros_prob(5, Fraction(1, 2)) == Fraction(13, 32)


def test_j_minus_one():
    assert an.no_consec_zeros_prob(-1, 0.25) == pytest.approx(4.0)
    with pytest.raises(InvalidInput):
        an.no_consec_zeros_prob(-1, 0.0)
    with pytest.raises(InvalidInput):
        an.no_consec_zeros_prob(-2, 0.5)


@pytest.mark.parametrize("p", [0.25, 0.5, 0.75])
def test_j_matches_enumeration(p):
    for m in range(0, 17):
        assert abs(an.no_consec_zeros_prob(m, p) - no_00_probability(m, p)) <= 1e-12


@given(probs, st.integers(-1, 40))
def test_j_is_fibonacci_ratio(p, m):
    assert an.no_consec_zeros_prob(m, p) == pytest.approx(an.fib_extended(m + 2, p) / p, rel=1e-9)


@given(probs)
def test_j_nonincreasing(p):
    js = [an.no_consec_zeros_prob(m, p) for m in range(30)]
    assert all(b <= a + 1e-15 for a, b in zip(js, js[1:]))


# ---- survival ----


def test_survival_examples():
    q = an.SurvivalQuery
    assert an.survival_prob(q("1", (0, 0), 3, 0.5)) == pytest.approx(0.5)
    assert an.survival_prob(q("1", (1, 0), 5, 0.5)) == pytest.approx(0.375)
    assert an.survival_prob(q("3", (1, 1), 5, 0.5)) == pytest.approx(0.34375)


@pytest.mark.parametrize("m", [3, 5, 7, 9])
@pytest.mark.parametrize("p", [0.2, 0.5])
def test_survival_closed_forms(m, p):
    J = lambda j: an.no_consec_zeros_prob(j, p)  # noqa: E731
    mu = lambda t, s: an.survival_prob(an.SurvivalQuery(t, s, m, p))  # noqa: E731
    assert mu("1", (0, 0)) == pytest.approx((1 - p) ** (m - 2))
    assert mu("1", (1, 1)) == pytest.approx(J(m - 2))
    assert mu("1", (0, 1)) == mu("1", (1, 0)) == pytest.approx(p * J(m - 3))
    assert mu("2a", (0, 0)) == mu("2b", (0, 0)) == pytest.approx((1 - p) ** (m - 1))
    for slot in [(1, 1), (1, 0)]:
        assert mu("2a", slot) == pytest.approx(J(m - 1))
    assert mu("2a", (0, 1)) == mu("2b", (1, 0)) == pytest.approx(p * p * J(m - 3))
    assert mu("2b", (0, 1)) == pytest.approx(J(m - 1))
    assert mu("3", (0, 0)) == pytest.approx((1 - p) ** m)


def test_type3_triangle_by_hand():
    # three non-active vertices, busy slot: at most one may stay silent
    p = 0.3
    expected = p**3 + 3 * p * p * (1 - p)
    assert an.survival_prob(an.SurvivalQuery("3", (1, 1), 3, p)) == pytest.approx(expected)


@pytest.mark.parametrize("cycle_type", an.CYCLE_TYPES)
@pytest.mark.parametrize("slot", an.SLOT_CLASSES)
def test_survival_matches_simulation(cycle_type, slot):
    rng = np.random.default_rng(hash((cycle_type, slot)) % 2**32)
    for m in (3, 5, 7):
        q = an.SurvivalQuery(cycle_type, slot, m, 0.4)
        mu = an.survival_prob(q)
        n = 50_000
        sigma = math.sqrt(max(mu * (1 - mu), 1e-12) / n)
        assert abs(an.simulate_survival(q, n, rng) - mu) <= 4 * sigma + 1e-12


@pytest.mark.parametrize(
    "args", [("4", (0, 0), 3, 0.5), ("1", (2, 0), 3, 0.5), ("1", (0, 0), 4, 0.5), ("1", (0, 0), 1, 0.5), ("1", (0, 0), 3, 2.0)]
)
def test_survival_query_validation(args):
    with pytest.raises(InvalidInput):
        an.SurvivalQuery(*args)


def test_cycle_listing():
    assert an.SurvivalQuery("1", (0, 0), 5, 0.5).cycle() == [1, 2, 3, 4, 5]
    assert an.SurvivalQuery("2b", (0, 0), 3, 0.5).cycle() == [2, 3, 4]
    assert an.SurvivalQuery("3", (0, 0), 3, 0.5).cycle() == [3, 4, 5]


# ---- rates ----


def test_entropy():
    assert an.binary_entropy(0.5) == 1.0
    assert an.binary_entropy(0.0) == an.binary_entropy(1.0) == 0.0
    assert an.binary_entropy(0.25) == pytest.approx(0.811278, abs=1e-6)
    with pytest.raises(InvalidInput):
        an.binary_entropy(-0.1)


def test_rate_values():
    # direct substitution: -0.75 log2(0.809017) - 0.25 log2(0.5)
    assert an.c_rate(0.5) == pytest.approx(0.4793186, abs=1e-6)
    assert an.c_group(0.5) == pytest.approx(0.405639, abs=1e-6)
    assert an.c_rate(0.0) == an.c_rate(1.0) == 0.0
    assert an.c_group(0.0) == an.c_group(1.0) == 0.0


def test_rate_dominance_on_grid():
    grid = np.linspace(0, 1, 1002)[1:-1]
    for p in grid:
        assert an.c_rate(p) > an.c_group(p)


def test_rate_curve():
    pts = an.rate_curve(an.c_rate, [0.1, 0.2])
    assert [pt.p for pt in pts] == [0.1, 0.2]
    assert pts[1].value == an.c_rate(0.2)


def test_maxima():
    p_c, c = an.maximize_rate(an.c_rate)
    assert c == pytest.approx(0.5896, abs=5e-4)
    assert p_c == pytest.approx(0.30, abs=0.01)
    p_g, g = an.maximize_rate(an.c_group)
    assert g == pytest.approx(0.5, abs=5e-4)
    assert p_g == pytest.approx(1 - 2**-0.5, abs=1e-4)


def test_maximize_constant():
    assert an.maximize_rate(lambda p: 0.25)[1] == 0.25


def test_maximize_non_unimodal_falls_back_to_grid():
    p, v = an.maximize_rate(lambda p: math.sin(6 * math.pi * p) + p, grid_points=999)
    assert an.is_unimodal([1, 0, 1]) is False
    assert v == pytest.approx(max(math.sin(6 * math.pi * q) + q for q in np.linspace(0, 1, 1001)[1:-1]))


def test_unimodal_scan():
    assert an.is_unimodal([0, 1, 2, 2, 1])
    assert an.is_unimodal([3, 2, 1])
    assert not an.is_unimodal([0, 2, 1, 2])


# ---- bounds ----


def test_cycle_bound():
    assert an.cycle_error_bound(3, 0.3, 0) == 1.0
    assert an.cycle_error_bound(3, 0.5, 10) == pytest.approx(2 ** -(10 * 0.4793186), rel=1e-6)
    assert an.cycle_error_bound(3, 0.5, 10) == pytest.approx(0.036067, abs=1e-6)
    b = [an.cycle_error_bound(m, 0.3, 5) for m in (3, 5, 7)]
    assert b[1] / b[0] == pytest.approx(b[2] / b[1])
    with pytest.raises(InvalidInput):
        an.cycle_error_bound(4, 0.3, 5)


def test_union_bound():
    n, t = 64, 40
    direct = sum(n ** (m - 2) * an.cycle_error_bound(m, 0.3, t) for m in range(3, n + 1, 2))
    assert an.one_odd_union_bound(n, 0.3, t) == pytest.approx(direct, rel=1e-9)
    assert an.one_odd_union_bound(1024, 0.3, 1) == math.inf


# ---- asymptotics ----


def test_asymptotic_rates():
    assert an.asymptotic_partition_rate(0.5) == pytest.approx(0.5)
    assert an.asymptotic_gt_rate(0.5) == pytest.approx(1.0)
    assert an.asymptotic_partition_rate(1e-9) < 1e-8
    with pytest.raises(InvalidInput):
        an.asymptotic_gt_rate(1.0)


@given(st.floats(0.001, 0.999))
def test_asymptotic_gap(eta):
    gap = an.asymptotic_gt_rate(eta) - an.asymptotic_partition_rate(eta)
    assert gap == pytest.approx(-eta * math.log2(eta), abs=1e-12)
