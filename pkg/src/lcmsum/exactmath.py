"""Exact arithmetic foundations.

Everything downstream leans on four guarantees provided here:

* rationals are exact (`fractions.Fraction`, re-exported as `ExactRational`);
* `BoundedReal` is a two-sided dyadic enclosure: the true quantity always
  lies in [lo, hi], and every operation rounds outward, so bounds are
  worst-case rather than statistical;
* sieve tables (primes, Mobius values, smallest prime factors) are exact for
  every integer up to their limit and support factoring up to limit**2;
* zeta values come with a certified absolute error from a bracketed
  integral tail bound.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from .errors import PrecisionError, ResourceLimitError

ExactRational = Fraction

#: default working precision (fractional bits) for BoundedReal enclosures
DEFAULT_BITS = 128

#: hard ceiling on sieve size (the limit**2 trial-division fallback covers the rest)
MAX_SIEVE_LIMIT = 10**8

#: refuse zeta partial sums longer than this (raise PrecisionError instead)
ZETA_MAX_TERMS = 1 << 26


# ---------------------------------------------------------------------------
# BoundedReal: dyadic interval arithmetic
# ---------------------------------------------------------------------------

def _scale_floor(x: Fraction, bits: int) -> int:
    return (x.numerator << bits) // x.denominator


def _scale_ceil(x: Fraction, bits: int) -> int:
    return -((-x.numerator << bits) // x.denominator)


class BoundedReal:
    """A real number known to lie in a dyadic interval [lo, hi] / 2**bits.

    `value` is the midpoint, `abs_error` the radius; both are exact
    rationals.  Arithmetic (+, -, *, /, integer powers) rounds endpoints
    outward, so composing operations can only widen, never lose, the
    enclosure of the true result.
    """

    __slots__ = ("_lo", "_hi", "_bits")

    def __init__(self, lo: int, hi: int, bits: int):
        if hi < lo:
            raise ValueError("empty interval")
        self._lo = lo
        self._hi = hi
        self._bits = bits

    # -- constructors -------------------------------------------------------

    @classmethod
    def exact(cls, x, bits: int = DEFAULT_BITS) -> "BoundedReal":
        """Enclosure of an int or Fraction, exact when x is dyadic."""
        f = Fraction(x)
        return cls(_scale_floor(f, bits), _scale_ceil(f, bits), bits)

    @classmethod
    def from_bracket(cls, lo, hi, bits: int = DEFAULT_BITS) -> "BoundedReal":
        lo, hi = Fraction(lo), Fraction(hi)
        return cls(_scale_floor(lo, bits), _scale_ceil(hi, bits), bits)

    @classmethod
    def from_value_error(cls, value, abs_error, bits: int = DEFAULT_BITS) -> "BoundedReal":
        v, e = Fraction(value), Fraction(abs_error)
        if e < 0:
            raise ValueError("abs_error must be non-negative")
        return cls.from_bracket(v - e, v + e, bits)

    # -- views ---------------------------------------------------------------

    @property
    def bits(self) -> int:
        return self._bits

    @property
    def lo(self) -> Fraction:
        return Fraction(self._lo, 1 << self._bits)

    @property
    def hi(self) -> Fraction:
        return Fraction(self._hi, 1 << self._bits)

    @property
    def value(self) -> Fraction:
        """Midpoint of the enclosure."""
        return Fraction(self._lo + self._hi, 2 << self._bits)

    @property
    def abs_error(self) -> Fraction:
        """Radius of the enclosure; the true value is within +-abs_error."""
        return Fraction(self._hi - self._lo, 2 << self._bits)

    def __float__(self) -> float:
        return float(self.value)

    def __repr__(self) -> str:
        return f"BoundedReal({float(self.value)!r} +- {float(self.abs_error):.3e})"

    def contains(self, x) -> bool:
        x = Fraction(x)
        return self.lo <= x <= self.hi

    def encloses(self, other: "BoundedReal") -> bool:
        return self.lo <= other.lo and other.hi <= self.hi

    def intersects(self, other: "BoundedReal") -> bool:
        return self.lo <= other.hi and other.lo <= self.hi

    def strictly_less(self, other: "BoundedReal") -> bool:
        """True only if every point of self is below every point of other."""
        return self.hi < other.lo

    def strictly_greater(self, other: "BoundedReal") -> bool:
        return other.hi < self.lo

    # -- arithmetic ----------------------------------------------------------

    def _coerce(self, other, bits: int) -> "BoundedReal":
        if isinstance(other, BoundedReal):
            return other
        return BoundedReal.exact(other, bits)

    def rescale(self, bits: int) -> "BoundedReal":
        if bits == self._bits:
            return self
        if bits > self._bits:
            s = bits - self._bits
            return BoundedReal(self._lo << s, self._hi << s, bits)
        s = self._bits - bits
        return BoundedReal(self._lo >> s, -((-self._hi) >> s), bits)

    def _pair(self, other) -> tuple["BoundedReal", "BoundedReal", int]:
        other = self._coerce(other, self._bits)
        bits = max(self._bits, other._bits)
        return self.rescale(bits), other.rescale(bits), bits

    def __add__(self, other):
        a, b, bits = self._pair(other)
        return BoundedReal(a._lo + b._lo, a._hi + b._hi, bits)

    __radd__ = __add__

    def __neg__(self):
        return BoundedReal(-self._hi, -self._lo, self._bits)

    def __sub__(self, other):
        a, b, bits = self._pair(other)
        return BoundedReal(a._lo - b._hi, a._hi - b._lo, bits)

    def __rsub__(self, other):
        return (-self).__add__(other)

    def __mul__(self, other):
        a, b, bits = self._pair(other)
        cands = (a._lo * b._lo, a._lo * b._hi, a._hi * b._lo, a._hi * b._hi)
        return BoundedReal(min(cands) >> bits, -((-max(cands)) >> bits), bits)

    __rmul__ = __mul__

    def __truediv__(self, other):
        a, b, bits = self._pair(other)
        if b._lo <= 0 <= b._hi:
            raise ZeroDivisionError("divisor interval contains zero")
        cands = (
            Fraction(a._lo, b._lo), Fraction(a._lo, b._hi),
            Fraction(a._hi, b._lo), Fraction(a._hi, b._hi),
        )
        return BoundedReal(
            _scale_floor(min(cands), bits), _scale_ceil(max(cands), bits), bits
        )

    def __rtruediv__(self, other):
        return self._coerce(other, self._bits).__truediv__(self)

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return (1 / self) ** (-n)
        result = BoundedReal.exact(1, self._bits)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result


# ---------------------------------------------------------------------------
# Exact quadratic surds (for error exponents like q / sqrt(k+1))
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SurdRatio:
    """Exact number of the form rational / sqrt(root), root a positive integer.

    Square factors of `root` are folded into the rational part on
    construction, so equality is canonical; `root == 1` means the number is
    rational.
    """

    rational: Fraction
    root: int = 1

    def __post_init__(self):
        if self.root <= 0:
            raise ValueError("root must be positive")
        r, q = self.root, Fraction(1)
        d = 2
        while d * d <= r:
            while r % (d * d) == 0:
                r //= d * d
                q /= d
            d += 1
        object.__setattr__(self, "rational", self.rational * q)
        object.__setattr__(self, "root", r)

    @property
    def is_rational(self) -> bool:
        return self.root == 1

    def as_fraction(self) -> Fraction:
        if not self.is_rational:
            raise ValueError(f"{self} is irrational")
        return self.rational

    def __float__(self) -> float:
        return float(self.rational) / math.sqrt(self.root)

    def __eq__(self, other):
        if isinstance(other, SurdRatio):
            return self.rational == other.rational and self.root == other.root
        if isinstance(other, (int, Fraction)):
            return self.is_rational and self.rational == other
        return NotImplemented

    def __hash__(self):
        return hash((self.rational, self.root))

    def __repr__(self):
        if self.is_rational:
            return f"{self.rational}"
        return f"{self.rational}/sqrt({self.root})"


# ---------------------------------------------------------------------------
# Sieve tables
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SieveTables:
    """Primes, Mobius values, and smallest prime factors up to `limit`.

    `mobius[n]` and `smallest_prime_factor[n]` are valid for 1 <= n <= limit;
    `factor` handles any n <= limit**2 by trial division over the sieved
    primes.
    """

    limit: int
    primes: np.ndarray
    mobius: np.ndarray
    smallest_prime_factor: np.ndarray

    def is_prime(self, n: int) -> bool:
        if n < 2:
            return False
        if n <= self.limit:
            return int(self.smallest_prime_factor[n]) == n
        return self.factor(n) == [(n, 1)]

    def _trial_primes(self, n: int) -> Iterable[int]:
        root = math.isqrt(n)
        for p in self.primes:
            p = int(p)
            if p > root:
                return
            yield p

    def factor(self, n: int) -> list[tuple[int, int]]:
        """Prime factorization of n as sorted (p, exponent) pairs."""
        if n < 1:
            raise ValueError("n must be positive")
        if n > self.limit * self.limit:
            raise ResourceLimitError(
                f"cannot factor {n} with sieve limit {self.limit}"
            )
        out: list[tuple[int, int]] = []
        if n <= self.limit:
            spf = self.smallest_prime_factor
            while n > 1:
                p = int(spf[n])
                e = 0
                while n % p == 0:
                    n //= p
                    e += 1
                out.append((p, e))
            return out
        for p in self._trial_primes(n):
            if n % p == 0:
                e = 0
                while n % p == 0:
                    n //= p
                    e += 1
                out.append((p, e))
        if n > 1:
            out.append((n, 1))
        return out


def sieve(limit: int) -> SieveTables:
    """Build prime/Mobius/smallest-factor tables for all n <= limit."""
    if limit < 2:
        raise ValueError("limit must be at least 2")
    if limit > MAX_SIEVE_LIMIT:
        raise ResourceLimitError(
            f"sieve limit {limit} exceeds memory budget {MAX_SIEVE_LIMIT}"
        )
    spf = np.zeros(limit + 1, dtype=np.int64)
    for p in range(2, math.isqrt(limit) + 1):
        if spf[p] == 0:
            block = spf[p * p :: p]
            block[block == 0] = p
    rest = np.nonzero(spf[2:] == 0)[0] + 2
    spf[rest] = rest
    spf[1] = 1
    primes = np.nonzero(spf == np.arange(limit + 1, dtype=np.int64))[0]
    primes = primes[primes >= 2]

    # Mobius: flip sign per prime p <= sqrt(limit), kill square multiples,
    # then one more flip where a prime factor > sqrt(limit) remains.
    mob = np.ones(limit + 1, dtype=np.int8)
    mob[0] = 0
    accounted = np.ones(limit + 1, dtype=np.int64)
    idx = np.arange(limit + 1, dtype=np.int64)
    for p in range(2, math.isqrt(limit) + 1):
        if spf[p] == p:
            mob[p::p] *= -1
            mob[p * p :: p * p] = 0
            accounted[p::p] *= p
    mob[accounted != idx] *= -1
    mob[0] = 0
    return SieveTables(limit=limit, primes=primes, mobius=mob,
                       smallest_prime_factor=spf)


#: default table size for callers that do not state their own needs
DEFAULT_SIEVE_LIMIT = 10**7


@lru_cache(maxsize=6)
def shared_sieve(limit: int = DEFAULT_SIEVE_LIMIT) -> SieveTables:
    """Process-wide cached tables for callers that do not manage their own."""
    return sieve(limit)


# ---------------------------------------------------------------------------
# Combinatorial helpers
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def _stirling_row(k: int) -> tuple[int, ...]:
    if k == 0:
        return (1,)
    prev = _stirling_row(k - 1)
    row = [0] * (k + 1)
    for m in range(1, k + 1):
        row[m] = m * (prev[m] if m < k else 0) + prev[m - 1]
    return tuple(row)


def stirling2(k: int, m: int) -> int:
    """Stirling number of the second kind S(k, m); zero outside 0 <= m <= k."""
    if k < 0 or m < 0 or m > k:
        return 0
    return _stirling_row(k)[m]


def valuation(n: int, p: int) -> int:
    """Largest e with p**e dividing n (n >= 1, p >= 2)."""
    if n < 1:
        raise ValueError("n must be positive")
    if p < 2:
        raise ValueError("p must be at least 2")
    e = 0
    while n % p == 0:
        n //= p
        e += 1
    return e


# ---------------------------------------------------------------------------
# Certified zeta values
# ---------------------------------------------------------------------------

@lru_cache(maxsize=64)
def _zeta_cached(j: int, num: int, den: int, bits: int) -> BoundedReal:
    target = Fraction(num, den)
    # bracket the tail: integral bounds give
    #   sum_{n>N} n^-j  in  [ (N+1)^(1-j), N^(1-j) ] / (j-1)
    # so the bracket width shrinks like N^-j; grow N until it fits.
    N = 4
    def width(n: int) -> Fraction:
        return (Fraction(1, n ** (j - 1)) - Fraction(1, (n + 1) ** (j - 1))) / (j - 1)
    while width(N) > target / 2:
        N *= 2
        if N > ZETA_MAX_TERMS:
            raise PrecisionError(
                f"zeta({j}) to {float(target):.2e} needs more than "
                f"{ZETA_MAX_TERMS} terms", achieved=width(N // 2))
    one = 1 << bits
    lo = 0
    for n in range(1, N + 1):
        lo += one // n**j
    hi = lo + N  # each floored term under-counts by < 1 ulp
    tail_lo = Fraction(1, (j - 1) * (N + 1) ** (j - 1))
    tail_hi = Fraction(1, (j - 1) * N ** (j - 1))
    out = BoundedReal(lo + _scale_floor(tail_lo, bits),
                      hi + _scale_ceil(tail_hi, bits), bits)
    if out.abs_error > target:
        raise PrecisionError(
            f"zeta({j}): achieved {float(out.abs_error):.2e} > target "
            f"{float(target):.2e}; raise working precision",
            achieved=out.abs_error)
    return out


def zeta_value(j: int, target_error, bits: int = DEFAULT_BITS) -> BoundedReal:
    """zeta(j) for integer j >= 2 with certified absolute error <= target_error.

    Partial sum of n^-j plus a two-sided integral tail bound N^(1-j)/(j-1);
    the returned enclosure is rigorous, not heuristic.
    """
    if j < 2:
        raise ValueError("j must be at least 2")
    t = Fraction(target_error)
    if t <= 0:
        raise ValueError("target_error must be positive")
    return _zeta_cached(j, t.numerator, t.denominator, bits)


# ---------------------------------------------------------------------------
# Finite differences
# ---------------------------------------------------------------------------

def finite_differences(values: Sequence[Fraction]) -> list[Fraction]:
    return [b - a for a, b in zip(values, values[1:])]


def leading_coeff_by_differences(
    samples: Sequence[tuple[int, Fraction]], degree: int
) -> Fraction:
    """Leading coefficient of a degree-`degree` polynomial from its values.

    `samples` must be at equally spaced abscissae; the result is the
    degree-th finite difference divided by degree! and step**degree,
    computed in exact rationals.  Extra samples beyond degree+1 are used to
    cross-check that the difference is stable.
    """
    if len(samples) < degree + 1:
        raise ValueError(
            f"need at least {degree + 1} samples for degree {degree}, "
            f"got {len(samples)}")
    xs = [s[0] for s in samples]
    steps = {b - a for a, b in zip(xs, xs[1:])}
    if len(steps) != 1:
        raise ValueError("samples must be equally spaced")
    step = steps.pop()
    if step <= 0:
        raise ValueError("abscissae must be increasing")
    vals = [Fraction(s[1]) for s in samples]
    for _ in range(degree):
        vals = finite_differences(vals)
    if any(v != vals[0] for v in vals[1:]):
        raise ValueError(
            "degree-th differences disagree; samples are not a polynomial "
            f"of degree {degree}")
    return vals[0] / (math.factorial(degree) * Fraction(step) ** degree)
