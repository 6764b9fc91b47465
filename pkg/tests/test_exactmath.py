import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from lcmsum.errors import PrecisionError, ResourceLimitError
from lcmsum.exactmath import (
    BoundedReal,
    SurdRatio,
    leading_coeff_by_differences,
    sieve,
    stirling2,
    valuation,
    zeta_value,
)


# ---------------------------------------------------------------------------
# sieve tables
# ---------------------------------------------------------------------------

def mobius_brute(n):
    out, m = 1, n
    d = 2
    while d * d <= m:
        if m % d == 0:
            m //= d
            if m % d == 0:
                return 0
            out = -out
        d += 1
    if m > 1:
        out = -out
    return out if n > 1 else 1


def test_sieve_first_primes():
    assert list(sieve(10).primes) == [2, 3, 5, 7]


def test_sieve_mobius_examples():
    assert sieve(10).mobius[6] == 1
    assert sieve(30).mobius[12] == 0


def test_sieve_mobius_against_brute():
    t = sieve(500)
    for n in range(1, 501):
        assert t.mobius[n] == mobius_brute(n), n


def test_mobius_divisor_sum_identity():
    # sum over d | n of mu(d) vanishes except at n = 1
    t = sieve(1000)
    for n in range(1, 1001):
        s = sum(int(t.mobius[d]) for d in range(1, n + 1) if n % d == 0)
        assert s == (1 if n == 1 else 0), n


def test_smallest_prime_factor_full_factorization():
    t = sieve(10**4)
    for n in (2, 60, 97, 9973, 9998, 10000):
        fac = t.factor(n)
        assert math.prod(p**e for p, e in fac) == n
        assert all(t.is_prime(p) for p, _ in fac)


def test_factor_beyond_limit_uses_trial_division():
    t = sieve(100)
    assert t.factor(101 * 97) == [(97, 1), (101, 1)]
    assert t.factor(9999) == [(3, 2), (11, 1), (101, 1)]
    with pytest.raises(ResourceLimitError):
        t.factor(100**2 + 1_000_000)


def test_sieve_limit_budget():
    with pytest.raises(ResourceLimitError):
        sieve(10**9)


# ---------------------------------------------------------------------------
# Stirling numbers
# ---------------------------------------------------------------------------

def set_partitions(items):
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in set_partitions(rest):
        for i in range(len(part)):
            yield part[:i] + [[first] + part[i]] + part[i + 1 :]
        yield [[first]] + part


def test_stirling_examples():
    assert stirling2(3, 2) == 3
    for k in range(8):
        assert stirling2(k, k) == 1
    assert stirling2(4, 2) == 7  # partitions of {1,2,3,4} into 2 blocks
    assert stirling2(5, 7) == 0 and stirling2(3, -1) == 0


def test_stirling_against_partition_enumeration():
    for k in range(1, 8):
        counts = {}
        for part in set_partitions(list(range(k))):
            counts[len(part)] = counts.get(len(part), 0) + 1
        for m in range(k + 1):
            assert stirling2(k, m) == counts.get(m, 0), (k, m)


def test_stirling_row_sums_are_bell_numbers():
    # Bell numbers by direct partition enumeration
    for k in range(1, 9):
        bell = sum(1 for _ in set_partitions(list(range(k))))
        assert sum(stirling2(k, m) for m in range(k + 1)) == bell


def test_stirling_recurrence():
    for k in range(1, 12):
        for m in range(1, k + 1):
            assert stirling2(k, m) == m * stirling2(k - 1, m) + stirling2(k - 1, m - 1)


# ---------------------------------------------------------------------------
# valuation
# ---------------------------------------------------------------------------

def test_valuation():
    assert valuation(12, 2) == 2
    assert valuation(12, 5) == 0
    assert valuation(2**20 * 3, 2) == 20
    with pytest.raises(ValueError):
        valuation(0, 2)


# ---------------------------------------------------------------------------
# zeta values
# ---------------------------------------------------------------------------

def test_zeta_2_and_4_against_closed_forms():
    z2 = zeta_value(2, 1e-12)
    assert z2.abs_error <= Fraction(1, 10**12)
    assert abs(float(z2.value) - math.pi**2 / 6) <= 1e-12 + 1e-14
    z4 = zeta_value(4, 1e-12)
    assert z4.abs_error <= Fraction(1, 10**12)
    assert abs(float(z4.value) - math.pi**4 / 90) <= 1e-12 + 1e-14


def test_zeta_large_j_dominant_term():
    z = zeta_value(40, 1e-18)
    assert abs(float(z.value - 1) - 2.0**-40) < 1e-13


def test_zeta_enclosure_nested_when_tightened():
    loose = zeta_value(3, 1e-6)
    tight = zeta_value(3, 1e-14)
    assert loose.encloses(tight)


def test_zeta_unreachable_precision():
    with pytest.raises(PrecisionError):
        zeta_value(2, Fraction(1, 10**40))


def test_zeta_rejects_bad_args():
    with pytest.raises(ValueError):
        zeta_value(1, 1e-6)
    with pytest.raises(ValueError):
        zeta_value(3, 0)


# ---------------------------------------------------------------------------
# finite differences
# ---------------------------------------------------------------------------

def test_leading_coeff_examples():
    sq = [(m, Fraction(m * m)) for m in range(3)]
    assert leading_coeff_by_differences(sq, 2) == 1
    simplex = [(m, Fraction(math.comb(m + 3, 3))) for m in range(4)]
    assert leading_coeff_by_differences(simplex, 3) == Fraction(1, 6)
    stepped = [(m, Fraction(5 * m**3 - m)) for m in (0, 2, 4, 6)]
    assert leading_coeff_by_differences(stepped, 3) == 5


def test_leading_coeff_arity_and_spacing_errors():
    with pytest.raises(ValueError):
        leading_coeff_by_differences([(0, Fraction(0)), (1, Fraction(1))], 2)
    with pytest.raises(ValueError):
        leading_coeff_by_differences(
            [(0, Fraction(0)), (1, Fraction(1)), (3, Fraction(9))], 2)


@given(
    coeffs=st.lists(st.integers(-50, 50), min_size=1, max_size=6),
    lead=st.integers(1, 50),
    step=st.integers(1, 4),
    start=st.integers(-10, 10),
)
def test_leading_coeff_random_polynomials(coeffs, lead, step, start):
    poly = coeffs + [lead]
    deg = len(poly) - 1

    def f(m):
        return Fraction(sum(c * m**i for i, c in enumerate(poly)))

    xs = [start + j * step for j in range(deg + 2)]
    got = leading_coeff_by_differences([(x, f(x)) for x in xs], deg)
    assert got == lead


# ---------------------------------------------------------------------------
# BoundedReal
# ---------------------------------------------------------------------------

fractions_st = st.fractions(
    min_value=-1000, max_value=1000, max_denominator=997)


@given(a=fractions_st, b=fractions_st)
def test_bounded_real_ops_contain_truth(a, b):
    x = BoundedReal.exact(a, 64)
    y = BoundedReal.exact(b, 64)
    assert (x + y).contains(a + b)
    assert (x - y).contains(a - b)
    assert (x * y).contains(a * b)
    assert (x**3).contains(a**3)
    if abs(b) > Fraction(1, 100):
        assert (x / y).contains(a / b)


@given(a=fractions_st, b=fractions_st, c=fractions_st)
def test_bounded_real_double_precision_nests(a, b, c):
    # recomputing any composed expression at twice the working precision
    # must land inside the coarse run's interval
    def compute(bits):
        x = BoundedReal.exact(a, bits)
        y = BoundedReal.exact(b, bits)
        z = BoundedReal.exact(c, bits)
        expr = (x * y + z) * (x - y) + z**2
        if abs(c) > Fraction(1, 10):
            expr = expr / BoundedReal.exact(c, bits)
        return expr

    coarse = compute(48)
    fine = compute(96)
    assert coarse.lo <= fine.value <= coarse.hi


def test_bounded_real_comparisons():
    a = BoundedReal.from_bracket(Fraction(1, 3), Fraction(1, 2))
    b = BoundedReal.from_bracket(Fraction(2, 3), Fraction(3, 4))
    assert a.strictly_less(b)
    assert b.strictly_greater(a)
    assert not a.intersects(b)
    c = BoundedReal.from_bracket(Fraction(0.4), Fraction(0.7))
    assert a.intersects(c) and b.intersects(c)


def test_bounded_real_exact_scaling():
    x = BoundedReal.from_value_error(Fraction(1, 7), Fraction(1, 10**9))
    y = 7 * x
    assert y.contains(1)
    assert y.abs_error <= 8 * x.abs_error


def test_bounded_real_division_by_zero_interval():
    x = BoundedReal.exact(1)
    z = BoundedReal.from_bracket(-1, 1)
    with pytest.raises(ZeroDivisionError):
        x / z


# ---------------------------------------------------------------------------
# exact rationals: order independence (documents the oracle contract)
# ---------------------------------------------------------------------------

@given(st.lists(fractions_st, min_size=2, max_size=12), st.randoms())
def test_fraction_summation_order_is_irrelevant(vals, rng):
    forward = sum(vals, Fraction(0))
    shuffled = list(vals)
    rng.shuffle(shuffled)
    assert sum(shuffled, Fraction(0)) == forward


# ---------------------------------------------------------------------------
# SurdRatio
# ---------------------------------------------------------------------------

def test_surd_canonicalization():
    s = SurdRatio(Fraction(3), 9)  # 3/sqrt(9) = 1
    assert s.is_rational and s.as_fraction() == 1
    t = SurdRatio(Fraction(1), 8)  # 1/sqrt(8) = (1/2)/sqrt(2)
    assert t.root == 2 and t.rational == Fraction(1, 2)
    assert SurdRatio(Fraction(1, 14)) == Fraction(1, 14)
    assert abs(float(SurdRatio(Fraction(1), 2)) - 1 / math.sqrt(2)) < 1e-15
