"""Certified evaluation of Euler products over graph local-factor polynomials.

The density constant of a graph is the product over primes of its local
polynomial evaluated at 1/p.  Truncating that product raw converges like
1/P, hopeless for eight certified digits, so the polynomial is first
factored through (1 - x^j) pieces:

    Q(x) = prod_{j=2..J} (1 - x^j)^(b_j) * R(x),   R(x) = 1 + O(x^(J+1)),

with integer exponents b_j obtained from the formal logarithm and the
remainder identity verified exactly in rational arithmetic.  Multiplying
and dividing by the sieved primes below a cutoff P turns the product into

    prod_{p<=P} Q(1/p) * prod_j [zeta(j) * prod_{p<=P}(1 - p^-j)]^(-b_j)
    * prod_{p>P} R(1/p),

where every factor is numerically tame: the first is the raw finite
product, the bracket is the zeta tail past P (close to 1), and the last is
enclosed by a Cauchy-estimate coefficient bound on R, giving a rigorous
interval whose width drops like P**-J.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence, Union

from .coprimality import Graph, local_factor_poly, stirling_ism_counts
from .errors import PrecisionError
from .exactmath import (
    BoundedReal,
    DEFAULT_BITS,
    shared_sieve,
    stirling2,
    zeta_value,
)

#: default acceleration order (factor out (1-x^j) up to j = ORDER)
DEFAULT_ORDER = 12

#: prime cutoffs double from here until the tail bound meets the target
MIN_PRIME_CUTOFF = 64
MAX_PRIME_CUTOFF = 1 << 22

#: default certified absolute error
DEFAULT_TARGET = Fraction(1, 2 * 10**9)

#: Cauchy radii tried for the remainder coefficient bound, largest first
RADIUS_LADDER = tuple(Fraction(1, d) for d in (2, 3, 4, 6, 8, 12, 16, 24, 32, 48))

PolyLike = Union[Graph, Sequence[int]]


# ---------------------------------------------------------------------------
# Formal series over exact rationals
# ---------------------------------------------------------------------------

def _series_mul(a: list[Fraction], b: list[Fraction], deg: int) -> list[Fraction]:
    out = [Fraction(0)] * (deg + 1)
    for i, ai in enumerate(a[: deg + 1]):
        if ai:
            for j, bj in enumerate(b[: deg + 1 - i]):
                if bj:
                    out[i + j] += ai * bj
    return out


def _series_log(q: Sequence[int], deg: int) -> list[Fraction]:
    """log of a polynomial with constant term 1, to degree deg."""
    lam = [Fraction(0)] * (deg + 1)
    qq = [Fraction(c) for c in q] + [Fraction(0)] * max(0, deg + 1 - len(q))
    for n in range(1, deg + 1):
        s = n * qq[n]
        for m in range(1, n):
            s -= m * lam[m] * qq[n - m]
        lam[n] = s / n
    return lam


def _geometric_factor(j: int, bj: int, deg: int) -> list[Fraction]:
    """(1 - x^j)^(-bj) as a series to degree deg (bj of either sign)."""
    out = [Fraction(0)] * (deg + 1)
    if bj > 0:
        for mm in range(deg // j + 1):
            out[mm * j] = Fraction(math.comb(mm + bj - 1, bj - 1))
    else:
        for mm in range(min(-bj, deg // j) + 1):
            out[mm * j] = Fraction((-1) ** mm * math.comb(-bj, mm))
    return out


@dataclass(frozen=True)
class ZetaFactorization:
    """Integer exponents b_j with Q(x) = prod (1-x^j)^(b_j) * (1 + O(x^(J+1)))."""

    order: int
    exponents: dict[int, int]
    residual_series: tuple[Fraction, ...]


def zeta_factorization(coeffs: Sequence[int], order: int = DEFAULT_ORDER) -> ZetaFactorization:
    """Factor the polynomial through (1 - x^j) pieces up to j = order.

    The exponents come from matching formal logarithms: with L_n the n-th
    log coefficient, n L_n = -sum_{j | n} j b_j, solved recursively.  Each
    b_n must come out an integer (the polynomial has integer coefficients
    and constant term 1); a non-integer aborts loudly.  The residual series
    is then recomputed by direct multiplication and required to be exactly
    1 + O(x^(order+1)).
    """
    if not coeffs or coeffs[0] != 1:
        raise ValueError("polynomial must have constant term 1")
    if len(coeffs) > 1 and coeffs[1] != 0:
        raise ValueError("linear coefficient must vanish")
    lam = _series_log(coeffs, order)
    b: dict[int, int] = {}
    for n in range(2, order + 1):
        s = -n * lam[n]
        for j in range(2, n):
            if n % j == 0 and j in b:
                s -= j * b[j]
        bn = s / n
        if bn.denominator != 1:
            raise ArithmeticError(f"non-integer factorization exponent b_{n} = {bn}")
        if bn:
            b[n] = int(bn)
    residual = [Fraction(c) for c in coeffs] + [Fraction(0)] * max(0, order + 1 - len(coeffs))
    residual = residual[: order + 1]
    for j, bj in b.items():
        residual = _series_mul(residual, _geometric_factor(j, bj, order), order)
    if residual[0] != 1 or any(residual[1:]):
        raise ArithmeticError("residual series is not 1 + O(x^(order+1))")
    return ZetaFactorization(order=order, exponents=b, residual_series=tuple(residual))


# ---------------------------------------------------------------------------
# Certified product
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class EulerProductResult:
    value: BoundedReal
    primes_used: int
    prime_cutoff: int
    acceleration_order: int
    factorization: ZetaFactorization
    tail_bound: Fraction


def _coeff_bound(coeffs: Sequence[int], b: dict[int, int], radius: Fraction,
                 bits: int) -> Fraction | None:
    """Upper bound for max |R| on the circle |x| = radius, or None if huge.

    Triangle inequality per factor: |Q| <= sum |c_a| r^a, |1-x^j| within
    [1 - r^j, 1 + r^j].  Rejects radii at which the bound exceeds 2**24
    (a tighter radius will be tried instead).
    """
    acc = BoundedReal.exact(sum(abs(c) * radius**a for a, c in enumerate(coeffs)), bits)
    for j, bj in b.items():
        rj = radius**j
        if bj > 0:
            if rj >= 1:
                return None
            acc = acc * BoundedReal.exact(1 - rj, bits) ** (-bj)
        else:
            acc = acc * BoundedReal.exact(1 + rj, bits) ** (-bj)
        if acc.hi > 1 << 24:
            return None
    return acc.hi


def euler_product(
    coeffs: Sequence[int],
    target_error=DEFAULT_TARGET,
    order: int = DEFAULT_ORDER,
    prime_cutoff: int | None = None,
    bits: int = DEFAULT_BITS + 32,
) -> EulerProductResult:
    """prod over primes of Q(1/p) for an integer polynomial Q, certified.

    Preconditions checked along the way: Q(1/p) > 0 for every prime below
    the cutoff (the enclosure of each local factor must be positive), and
    past the cutoff positivity follows from the remainder bound.  Raises
    PrecisionError if the final enclosure is wider than target_error.
    Results are cached (the computation is pure).
    """
    target = Fraction(target_error)
    if target <= 0:
        raise ValueError("target_error must be positive")
    return _euler_product_cached(
        tuple(int(c) for c in coeffs), target, order, prime_cutoff, bits)


@lru_cache(maxsize=64)
def _euler_product_cached(
    coeffs: tuple[int, ...],
    target: Fraction,
    order: int,
    prime_cutoff: int | None,
    bits: int,
) -> EulerProductResult:
    if all(c == 0 for c in coeffs[1:]):
        if coeffs[0] != 1:
            raise ValueError("polynomial must have constant term 1")
        fz = ZetaFactorization(order, {}, (Fraction(1),))
        return EulerProductResult(BoundedReal.exact(1, bits), 0, 0, order, fz, Fraction(0))

    fz = zeta_factorization(coeffs, order)
    b = fz.exponents

    radius = bound = None
    for r in RADIUS_LADDER:
        m = _coeff_bound(coeffs, b, r, bits)
        if m is not None:
            radius, bound = r, m
            break
    if radius is None:
        raise PrecisionError("no usable remainder radius; raise the order")

    def tail(p_cut: int) -> Fraction:
        # sum_{p > P} |R(1/p) - 1| <= 2*M*(1/r)^(J+1) * sum_{n>P} n^-(J+1)
        #                          <= 2*M*(1/r)^(J+1) * P^-J / J
        return 2 * bound * (1 / radius) ** (order + 1) / (order * Fraction(p_cut) ** order)

    if prime_cutoff is None:
        p_cut = MIN_PRIME_CUTOFF
        while (tail(p_cut) > target / 4 or p_cut * radius < 2) and p_cut < MAX_PRIME_CUTOFF:
            p_cut *= 2
    else:
        p_cut = prime_cutoff
    t1 = tail(p_cut)
    if t1 > target / 4 or t1 > Fraction(1, 2) or p_cut * radius < 2:
        raise PrecisionError(
            f"tail bound {float(t1):.3e} at cutoff {p_cut} misses target",
            achieved=t1)

    primes = [int(p) for p in shared_sieve(max(p_cut, 100)).primes if p <= p_cut]
    one = BoundedReal.exact(1, bits)
    v = len(coeffs) - 1

    # raw finite product of Q(1/p); every local factor must be strictly positive
    qprod = one
    for p in primes:
        x = BoundedReal(
            (1 << bits) // p, (1 << bits) // p + 1, bits)
        acc = BoundedReal.exact(coeffs[v], bits)
        for a in range(v - 1, -1, -1):
            acc = acc * x + coeffs[a]
        if acc.lo <= 0:
            raise ArithmeticError(f"local factor not positive at p={p}: {acc!r}")
        qprod = qprod * acc

    # zeta tails past the cutoff: excess_j = zeta(j) * prod_{p<=P}(1 - p^-j)
    zpart = one
    nfac = max(1, len(b))
    for j, bj in sorted(b.items()):
        ztarget = target / (16 * nfac * max(1, abs(bj)))
        # snap to a power of two so repeated evaluations share the zeta cache
        ztarget = Fraction(1, 2 ** (1 - math.floor(math.log2(ztarget))))
        excess = zeta_value(j, ztarget, bits=bits)
        for p in primes:
            pj = p**j
            excess = excess * BoundedReal(
                (1 << bits) - (1 << bits) // pj - 1,
                (1 << bits) - (1 << bits) // pj, bits)
        if excess.lo <= 0:
            raise ArithmeticError(f"zeta excess not positive at j={j}")
        zpart = zpart * (excess ** (-bj))

    total = qprod * zpart
    # prod_{p>P} R(1/p) lies in [1 - T, exp(T)] subset [1 - T, 1 + 2T] for T <= 1/2
    total = total * BoundedReal.from_bracket(1 - t1, 1 + 2 * t1, bits)

    if total.abs_error > target:
        raise PrecisionError(
            f"achieved bound {float(total.abs_error):.3e} exceeds target "
            f"{float(target):.3e}", achieved=total.abs_error)
    return EulerProductResult(
        value=total, primes_used=len(primes), prime_cutoff=p_cut,
        acceleration_order=order, factorization=fz, tail_bound=t1)


def _as_coeffs(g_or_coeffs: PolyLike) -> tuple[int, ...]:
    if isinstance(g_or_coeffs, Graph):
        return local_factor_poly(g_or_coeffs)
    return tuple(int(c) for c in g_or_coeffs)


def coprime_density(g_or_coeffs: PolyLike, target_error=DEFAULT_TARGET,
                    **kwargs) -> BoundedReal:
    """Density constant of graph-wise coprime tuples: prod_p Q(1/p), certified."""
    return euler_product(_as_coeffs(g_or_coeffs), target_error, **kwargs).value


# ---------------------------------------------------------------------------
# The tuple-count route to the same constant
# ---------------------------------------------------------------------------

def count_density_poly(k: int) -> tuple[int, ...]:
    """Local polynomial of the lcm-multiplicity density, via Stirling numbers.

    The local factor (1-x)^(2**k-1) * sum_nu ((nu+1)^k - nu^k) x^nu has the
    closed form sum_{m=1..k} S(k,m) m! x^(m-1) (1-x)^(2**k-1-m), expanded
    here in exact integers.  Built with no reference to any graph.
    """
    if k < 2:
        raise ValueError("k must be at least 2")
    v = 2**k - 1
    acc = [0] * (v + 1)
    for m in range(1, k + 1):
        w = stirling2(k, m) * math.factorial(m)
        binom = [(-1) ** i * math.comb(v - m, i) for i in range(v - m + 1)]
        for i, t in enumerate(binom):
            acc[m - 1 + i] += w * t
    return tuple(acc)


def lcm_count_density(k: int, target_error=DEFAULT_TARGET, **kwargs) -> BoundedReal:
    """The density constant evaluated from the tuple-count local factors.

    Must agree with coprime_density of the k-input graph within combined
    error bounds; the two routes share no graph data.
    """
    if not (2 <= k <= 4):
        raise ValueError("k must be between 2 and 4")
    return euler_product(count_density_poly(k), target_error, **kwargs).value


# ---------------------------------------------------------------------------
# Exact series identities
# ---------------------------------------------------------------------------

def series_identity_mismatch(k: int, n: int) -> tuple[str, int] | None:
    """First failing identity and coefficient index, or None if all hold.

    Checks, in exact integers up to degree n:
      (a) Q(x) = (1-x)^(2**k-1) * sum_{nu<=n} ((nu+1)^k - nu^k) x^nu + O(x^(n+1))
      (b) Q(x) = sum_m i_m (1-x)^(v-m) x^m with the Stirling-form i_m.
    """
    from .coprimality import build_coprimality_graph

    if n < 2**k:
        raise ValueError("n must be at least 2**k")
    q = list(local_factor_poly(build_coprimality_graph(k))) + [0] * (n + 1)
    q = q[: n + 1]

    v = 2**k - 1
    series = [(nu + 1) ** k - nu**k for nu in range(n + 1)]
    binom = [(-1) ** i * math.comb(v, i) for i in range(v + 1)]
    prod = [0] * (n + 1)
    for i, t in enumerate(binom):
        for nu, s in enumerate(series[: n + 1 - i]):
            prod[i + nu] += t * s
    for a in range(n + 1):
        if prod[a] != q[a]:
            return ("count-series", a)

    ism = stirling_ism_counts(k)
    alt = [0] * (n + 1)
    for m, im in enumerate(ism):
        if im == 0:
            continue
        binom = [(-1) ** i * math.comb(v - m, i) for i in range(v - m + 1)]
        for i, t in enumerate(binom):
            alt[m + i] += im * t
    for a in range(n + 1):
        if alt[a] != q[a]:
            return ("independent-set", a)
    return None


def series_identity_check(k: int, n: int) -> bool:
    """True iff both exact power-series identities hold through degree n."""
    return series_identity_mismatch(k, n) is None


# ---------------------------------------------------------------------------
# Closed-form pivot bounds
# ---------------------------------------------------------------------------

def hadamard_constants(k: int) -> tuple[float, float]:
    """Zero-one-matrix pivot bounds ((k+1)^((k+1)/2)/2^k, 2^(k-1)/k^(k/2))."""
    if k < 2:
        raise ValueError("k must be at least 2")
    c_upper = (k + 1) ** ((k + 1) / 2) / 2**k
    c_lower = 2 ** (k - 1) / k ** (k / 2)
    return (c_upper, c_lower)
