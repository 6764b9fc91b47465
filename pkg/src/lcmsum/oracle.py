"""Brute-force oracles and assembled leading constants.

The sums treated here, for tuples (n_1..n_k) of positive integers up to x:

    recip-lcm sum      sum 1/lcm(n_1..n_k)
    coprime variant    same, restricted to gcd(n_1..n_k) = 1
    product-over-lcm   sum (n_1*...*n_k)/lcm(n_1..n_k)

All oracle values are exact rationals.  Internally each sum accumulates an
integer numerator over the fixed denominator lcm(1..x): every tuple lcm
divides it, so a single big integer add per tuple replaces rational
normalization.  Sorted-tuple symmetry cuts the work by about k!.

`leading_constants` assembles the top-coefficient data of the three sums:
c = density * vol(D), the coprime constant (2**k - 1) c, the product-sum
constant density * vol(D_star2), and the exact power-saving exponents.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations_with_replacement
from typing import Sequence

import numpy as np

from .coprimality import build_coprimality_graph
from .errors import InvariantViolation, ResourceLimitError
from .eulerprod import coprime_density
from .exactmath import BoundedReal, SurdRatio, shared_sieve
from .polytope import volume_of

#: brute sums refuse more than this many raw tuple evaluations
TUPLE_BUDGET = 10**8

#: constrained-tuple search refuses more than this many tree nodes
GWISE_NODE_BUDGET = 5 * 10**7

#: totient-formula sum switches from exact rationals to enclosures here
FAST_S2_EXACT_LIMIT = 10**4
FAST_S2_MAX = 10**7


@lru_cache(maxsize=32)
def _lcm_upto(x: int) -> int:
    out = 1
    for n in range(2, x + 1):
        out = math.lcm(out, n)
    return out


def _perm_count(t: Sequence[int]) -> int:
    # permutations of the sorted multiset t (multinomial coefficient)
    out = math.factorial(len(t))
    i = 0
    while i < len(t):
        j = i
        while j < len(t) and t[j] == t[i]:
            j += 1
        out //= math.factorial(j - i)
        i = j
    return out


def _check_budget(k: int, x: int, budget: int) -> None:
    if x < 1:
        raise ValueError("x must be positive")
    if x**k > budget:
        raise ResourceLimitError(
            f"x**k = {x**k} exceeds the tuple budget {budget}")


def brute_recip_lcm_sum(k: int, x: int, budget: int = TUPLE_BUDGET) -> Fraction:
    """sum over all k-tuples <= x of 1/lcm, exact."""
    _check_budget(k, x, budget)
    big = _lcm_upto(x)
    num = 0
    for t in combinations_with_replacement(range(1, x + 1), k):
        num += _perm_count(t) * (big // math.lcm(*t))
    return Fraction(num, big)


def brute_recip_lcm_sum_coprime(k: int, x: int, budget: int = TUPLE_BUDGET) -> Fraction:
    """Same sum restricted to tuples with overall gcd 1, exact."""
    _check_budget(k, x, budget)
    big = _lcm_upto(x)
    num = 0
    for t in combinations_with_replacement(range(1, x + 1), k):
        if math.gcd(*t) == 1:
            num += _perm_count(t) * (big // math.lcm(*t))
    return Fraction(num, big)


def brute_prod_over_lcm_sum(k: int, x: int, budget: int = TUPLE_BUDGET) -> Fraction:
    """sum over all k-tuples <= x of (n_1*...*n_k)/lcm; integer-valued."""
    _check_budget(k, x, budget)
    total = 0
    for t in combinations_with_replacement(range(1, x + 1), k):
        total += _perm_count(t) * (math.prod(t) // math.lcm(*t))
    return Fraction(total)


# ---------------------------------------------------------------------------
# Totient-formula fast route for k = 2
# ---------------------------------------------------------------------------

def _phi_sieve(x: int) -> np.ndarray:
    phi = np.arange(x + 1, dtype=np.int64)
    for p in range(2, x + 1):
        if phi[p] == p:  # p untouched so far means prime
            phi[p::p] -= phi[p::p] // p
    return phi


def fast_recip_lcm_sum2(x: int, bits: int = 96):
    """The k=2 reciprocal-lcm sum via sum_d phi(d)/d^2 * H(x//d)^2.

    Writing each pair through its gcd d turns the double sum into a single
    sum over d with squared harmonic numbers.  Exact rational for
    x <= 10**4 (bit-identical to the brute route); above that, a dyadic
    enclosure whose error covers every floor-rounding performed.
    """
    if x < 1:
        raise ValueError("x must be positive")
    if x > FAST_S2_MAX:
        raise ResourceLimitError(f"x = {x} exceeds {FAST_S2_MAX}")
    phi = _phi_sieve(x)
    if x <= FAST_S2_EXACT_LIMIT:
        big = _lcm_upto(x)
        harm = [0] * (x + 1)  # harm[m] = H(m) * big, an integer
        for m in range(1, x + 1):
            harm[m] = harm[m - 1] + big // m
        num = 0
        for d in range(1, x + 1):
            num += int(phi[d]) * ((big // d) * harm[x // d]) ** 2
        return Fraction(num, big**4)

    one = 1 << bits
    # descending harmonic enclosure: H(x//d) shrinks as d grows
    h_lo = 0
    h_terms = 0
    for m in range(1, x + 1):
        h_lo += one // m
        h_terms += 1
    acc_lo = 0
    acc_hi = 0
    q_prev = x
    for d in range(1, x + 1):
        q = x // d
        if q < q_prev:
            for m in range(q + 1, q_prev + 1):
                h_lo -= one // m
                h_terms -= 1
            q_prev = q
        h_hi = h_lo + h_terms  # each floored term is short by < 1 ulp
        p = int(phi[d])
        d2 = d * d
        acc_lo += p * h_lo * h_lo // d2
        acc_hi += p * h_hi * h_hi // d2 + 1
    return BoundedReal(acc_lo >> bits, (acc_hi >> bits) + 1, bits)


# ---------------------------------------------------------------------------
# Constrained coprime-tuple sums (the structural identity)
# ---------------------------------------------------------------------------

def gwise_constrained_sum(
    k: int, x: int, fix_last_to_one: bool = False,
    node_budget: int = GWISE_NODE_BUDGET,
) -> Fraction:
    """Exact sum of 1/(a_1*...*a_v) over graph-wise coprime tuples under
    the hyperbolic product constraints prod_{j in A_i} a_j <= x.

    Depth-first over the parts, assigning the most-constrained labels first
    and pruning as soon as any partial constraint product exceeds x.  With
    fix_last_to_one the all-ones part (the tuple gcd) is pinned to 1, which
    flips the sum from the plain to the coprime variant.

    Equals the brute k-fold sums bit-exactly: that equality is the
    decomposition identity the whole construction rests on.
    """
    return _gwise_with_count(k, x, fix_last_to_one, node_budget)[0]


def _gwise_with_count(
    k: int, x: int, fix_last_to_one: bool, node_budget: int
) -> tuple[Fraction, int]:
    if k not in (2, 3):
        raise ValueError("k must be 2 or 3")
    if x < 1:
        raise ValueError("x must be positive")
    g = build_coprimality_graph(k)
    v = g.v
    big = _lcm_upto(x)
    order = sorted(range(1, v + 1),
                   key=lambda j: (-j.bit_count(), j))
    adj = g.adjacency
    cons = g.constraints
    values = [1] * (v + 1)  # 1-indexed by label
    prods = [1] * k
    nodes = 0
    total = 0
    leaves = 0

    def dfs(pos: int, denom: int) -> None:
        nonlocal nodes, total, leaves
        nodes += 1
        if nodes > node_budget:
            raise ResourceLimitError(
                f"search exceeded {node_budget} nodes; shrink x")
        if pos == v:
            total += big // denom
            leaves += 1
            return
        j = order[pos]
        touching = [i for i in range(k) if j in cons[i]]
        cap = min(x // prods[i] for i in touching)
        top = 1 if (fix_last_to_one and j == v) else cap
        neighbors = [l for l in range(1, v + 1)
                     if adj[j] >> l & 1 and values[l] > 1]
        for a in range(1, top + 1):
            if a > 1 and any(math.gcd(a, values[l]) != 1 for l in neighbors):
                continue
            values[j] = a
            for i in touching:
                prods[i] *= a
            dfs(pos + 1, denom * a)
            for i in touching:
                prods[i] //= a
            values[j] = 1

    dfs(0, 1)
    return Fraction(total, big), leaves


# ---------------------------------------------------------------------------
# lcm multiplicities
# ---------------------------------------------------------------------------

def lcm_multiplicity(k: int, n: int, tables=None) -> int:
    """Number of k-tuples with lcm exactly n: prod over p^e || n of ((e+1)^k - e^k)."""
    if k < 1 or n < 1:
        raise ValueError("k and n must be positive")
    if tables is None:
        tables = shared_sieve(max(100, min(n, 10**6)))
    out = 1
    for _, e in tables.factor(n):
        out *= (e + 1) ** k - e**k
    return out


def lcm_multiplicity_sum(k: int, x: int, tables=None) -> Fraction:
    """sum_{n<=x} (tuples with lcm n)/n, exact; a lower bound for the full sum."""
    if x < 1:
        raise ValueError("x must be positive")
    if tables is None:
        tables = shared_sieve(max(100, x))
    big = _lcm_upto(x)
    num = 0
    for n in range(1, x + 1):
        num += lcm_multiplicity(k, n, tables) * (big // n)
    return Fraction(num, big)


# ---------------------------------------------------------------------------
# Uniform sum reports
# ---------------------------------------------------------------------------

SUM_KINDS = ("S", "U", "V", "gwise", "alpha")


@dataclass(frozen=True)
class SumReport:
    """One evaluated sum with the number of tuples it ranged over.

    kind: S = reciprocal-lcm sum, U = its gcd-1 restriction, V = the
    product-over-lcm sum, gwise = the constrained coprime-part route,
    alpha = the lcm-multiplicity partial sum.  tuple_count is the number
    of contributing tuples (for alpha, the tuples with lcm <= x).
    """

    kind: str
    k: int
    x: int
    value: Fraction
    tuple_count: int

    def __post_init__(self):
        if self.kind not in SUM_KINDS:
            raise ValueError(f"kind must be one of {SUM_KINDS}")
        if self.x >= 1 and self.value <= 0:
            raise ValueError("sums over a non-empty range are positive")


def sum_report(kind: str, k: int, x: int, fix_last_to_one: bool = False,
               budget: int = TUPLE_BUDGET) -> SumReport:
    """Evaluate one of the named sums together with its tuple count."""
    if kind == "S":
        return SumReport("S", k, x, brute_recip_lcm_sum(k, x, budget), x**k)
    if kind == "V":
        return SumReport("V", k, x, brute_prod_over_lcm_sum(k, x, budget), x**k)
    if kind == "U":
        _check_budget(k, x, budget)
        big = _lcm_upto(x)
        num = 0
        count = 0
        for t in combinations_with_replacement(range(1, x + 1), k):
            if math.gcd(*t) == 1:
                w = _perm_count(t)
                num += w * (big // math.lcm(*t))
                count += w
        return SumReport("U", k, x, Fraction(num, big), count)
    if kind == "gwise":
        value, leaves = _gwise_with_count(k, x, fix_last_to_one,
                                          GWISE_NODE_BUDGET)
        return SumReport("gwise", k, x, value, leaves)
    if kind == "alpha":
        tables = shared_sieve(max(100, x))
        count = sum(lcm_multiplicity(k, n, tables) for n in range(1, x + 1))
        return SumReport("alpha", k, x, lcm_multiplicity_sum(k, x, tables),
                         count)
    raise ValueError(f"kind must be one of {SUM_KINDS}")


# ---------------------------------------------------------------------------
# Leading constants and error exponents
# ---------------------------------------------------------------------------

def theta_exponents(k: int) -> tuple[SurdRatio, SurdRatio, SurdRatio]:
    """Exact power-saving exponents (theta1, theta2, theta3) for k >= 3.

    theta1 = theta3 = (2^k/(k+1)^((k+1)/2)) * 3/(2^k + 6k - 5)
    theta2 =          (2^k/(k+1)^((k+1)/2)) * 3/(2^k + 6k - 6)

    (k+1)^((k+1)/2) is kept exact: an integer power for odd k, an integer
    power times sqrt(k+1) for even k.
    """
    if k < 3:
        raise ValueError("exponents are defined for k >= 3 only")
    root = 1 if k % 2 == 1 else k + 1
    denom_pow = (k + 1) ** ((k + 1) // 2)
    t1 = SurdRatio(Fraction(3 * 2**k, denom_pow * (2**k + 6 * k - 5)), root)
    t2 = SurdRatio(Fraction(3 * 2**k, denom_pow * (2**k + 6 * k - 6)), root)
    return (t1, t2, t1)


@dataclass(frozen=True)
class LeadingConstants:
    """Leading coefficients of the three sums' top log powers, certified."""

    k: int
    density: BoundedReal          # the Euler product over the graph
    vol_d: Fraction               # full polytope volume
    vol_d_star: Fraction
    vol_d_star2: Fraction
    c: BoundedReal                # density * vol_d
    c2: BoundedReal               # (2**k - 1) * c
    c3: BoundedReal               # density * vol_d_star2
    theta1: SurdRatio | None
    theta2: SurdRatio | None
    theta3: SurdRatio | None

    def __post_init__(self):
        for b in (self.c, self.c2, self.c3):
            if b.lo <= 0:
                raise ValueError("constants must be certified positive")
        if self.theta1 != self.theta3:
            raise ValueError("the first and third exponents must coincide")


def leading_constants(k: int, target_error=Fraction(1, 2 * 10**9)) -> LeadingConstants:
    """Assemble the certified constants for k inputs.

    Cross-checks on the way: the coprime-variant constant computed as
    (2**k - 1) c must agree with density(top-dropped graph) * vol(D_star)
    (the dropped vertex is isolated, so the density is unchanged); a
    disjoint enclosure raises InvariantViolation.
    """
    if not (2 <= k <= 4):
        raise ValueError("k must be between 2 and 4")
    g = build_coprimality_graph(k)
    rho = coprime_density(g, target_error)
    vol_d = volume_of("D", k)
    vol_ds = volume_of("D_star", k)
    vol_ds2 = volume_of("D_star2", k)
    c = rho * vol_d
    c2 = (2**k - 1) * c
    c3 = rho * vol_ds2

    rho_star = coprime_density(g.isolated_top_removed(), target_error)
    c2_alt = rho_star * vol_ds
    if not c2.intersects(c2_alt):
        raise InvariantViolation(
            f"coprime constant mismatch: {c2!r} vs {c2_alt!r}")

    if k >= 3:
        t1, t2, t3 = theta_exponents(k)
    else:
        t1 = t2 = t3 = None
    return LeadingConstants(
        k=k, density=rho, vol_d=vol_d, vol_d_star=vol_ds, vol_d_star2=vol_ds2,
        c=c, c2=c2, c3=c3, theta1=t1, theta2=t2, theta3=t3)


# ---------------------------------------------------------------------------
# Convergence trend report
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ConvergenceRow:
    x: int
    sum_value: Fraction          # midpoint when the sum is an enclosure
    log_power_ratio: float | None  # sum / log(x)**(2**k - 1); None at x = 1
    c_value: float
    ratio_to_c: float | None
    flagged: bool                # degenerate row (log x == 0)


def convergence_report(k: int, xs: Sequence[int],
                       constants: LeadingConstants | None = None,
                       budget: int = TUPLE_BUDGET) -> list[ConvergenceRow]:
    """Desk-scale growth table of the reciprocal-lcm sum against c * log^v x.

    Rows carry no pass/fail: at reachable x the convergence is O(1/log x)
    and only the k = 2 trend is quantitatively meaningful.
    """
    if constants is None:
        constants = leading_constants(k)
    cval = float(constants.c.value)
    rows = []
    power = 2**k - 1
    for x in xs:
        if k == 2:
            s = fast_recip_lcm_sum2(x)
        else:
            s = brute_recip_lcm_sum(k, x, budget=budget)
        sv = s.value if isinstance(s, BoundedReal) else s
        if x == 1:
            rows.append(ConvergenceRow(x, sv, None, cval, None, True))
            continue
        ratio = float(sv) / math.log(x) ** power
        rows.append(ConvergenceRow(x, sv, ratio, cval, ratio / cval, False))
    return rows
