"""Exact rational volumes of hyperbolic-constraint polytopes.

A polytope here is {t in [0, inf)^dim : sum_{j in A_i} t_j <= 1} for a
family of 0/1 constraint sets A_i.  Its volume is recovered exactly from
lattice-point counts of integer dilates: the counting function is a
quasi-polynomial whose every-period restriction is a true polynomial of
degree dim with leading coefficient vol * period**dim / dim!, so the dim-th
finite difference of counts sampled along one residue class hands back the
volume as an exact rational.

Counts come from a budget dynamic program: the state is the tuple of
per-constraint partial sums, one array axis per constraint, and adding a
coordinate that feeds constraints S is a prefix sum along the diagonal
direction chi_S.  Arrays hold residues modulo int32-safe primes and the
exact counts are recovered by CRT, since counts overflow 64 bits well
before the needed dilates.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

import numpy as np

from .coprimality import constraint_family
from .errors import PeriodDetectionError, ResourceLimitError
from .exactmath import leading_coeff_by_differences

#: supported polytope families
KINDS = ("D", "D_star", "D_star2", "D_star3", "T")

#: dimension cap for the Ehrhart route
MAX_DIM = 16

#: cap on the DP state table (entries = (N+1)**constraint_count)
STATE_BUDGET = 300_000_000

#: candidate quasi-polynomial periods, tried in order.  Vertex coordinates
#: solve 0/1 subsystems of size <= 4 whose determinants are at most 3, so
#: every true period divides 6; stabilization testing keeps acceptance
#: independent of this argument.
PERIOD_CANDIDATES = (1, 2, 6)


@dataclass(frozen=True)
class HyperbolicPolytope:
    """{t >= 0 : sum over each constraint set <= 1}, constraints as 0-based sets."""

    dim: int
    constraints: tuple[frozenset[int], ...]

    def __post_init__(self):
        if self.dim > MAX_DIM:
            raise ValueError(f"dimension {self.dim} exceeds {MAX_DIM}")
        covered: set[int] = set()
        for a in self.constraints:
            if not a:
                raise ValueError("empty constraint set")
            if min(a) < 0 or max(a) >= self.dim:
                raise ValueError("constraint indexes out of range")
            covered |= a
        if self.dim and covered != set(range(self.dim)):
            raise ValueError("constraints must cover every coordinate (else unbounded)")


@dataclass(frozen=True)
class EhrhartSamples:
    """Counts L(0), L(P), ..., sampled on one residue class of a candidate period."""

    period: int
    counts: tuple[int, ...]
    stabilized: bool

    def __post_init__(self):
        if self.counts[0] != 1:
            raise ValueError("L(0) must be 1")
        if any(b < a for a, b in zip(self.counts, self.counts[1:])):
            raise ValueError("counts must be non-decreasing")


def build_polytope(kind: str, k: int) -> HyperbolicPolytope:
    """The five constraint families attached to the k-input coprimality graph.

    D     : all 2**k - 1 labels, constraint i = labels with bit i set.
    D_star: D with the all-ones label dropped.
    D_star2: D with the k single-bit labels dropped (all-ones kept).
    D_star3: D with single-bit labels and the all-ones label dropped.
    T     : all labels under the single constraint sum t_j <= 1.

    Coordinates are re-indexed densely in increasing label order; constraint
    sets that become empty after dropping labels are omitted.
    """
    if kind not in KINDS:
        raise ValueError(f"unknown kind {kind!r}; expected one of {KINDS}")
    if not (2 <= k <= 4):
        raise ValueError("k must be between 2 and 4")
    v = 2**k - 1
    labels = list(range(1, v + 1))
    if kind in ("D_star", "D_star3"):
        labels.remove(v)
    if kind in ("D_star2", "D_star3"):
        for i in range(k):
            labels.remove(1 << i)
    pos = {lab: idx for idx, lab in enumerate(labels)}
    if kind == "T":
        cons: list[frozenset[int]] = [frozenset(range(len(labels)))]
    else:
        cons = []
        for a in constraint_family(k):
            dense = frozenset(pos[lab] for lab in a if lab in pos)
            if dense:
                cons.append(dense)
    return HyperbolicPolytope(dim=len(labels), constraints=tuple(cons))


# ---------------------------------------------------------------------------
# Lattice counting
# ---------------------------------------------------------------------------

def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    small = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
    for p in small:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in small:  # deterministic for n < 3.3e24
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _crt_primes(cap: int, bound: int) -> list[int]:
    primes, prod, n = [], 1, cap
    while prod <= bound:
        while not _is_prime(n):
            n -= 1
        primes.append(n)
        prod *= n
        n -= 1
    return primes


def _counts_mod(
    memberships: Sequence[tuple[int, ...]], ns: Sequence[int], m: int
) -> list[int]:
    """Counts modulo m at every dilate in ns (all axes live at max(ns)+1)."""
    nc = max(max(s) for s in memberships) + 1
    nmax = max(ns)
    sample = sorted(set(ns))
    sample_pos = {n: i for i, n in enumerate(sample)}
    arr = np.zeros((nmax + 1,) * nc, dtype=np.int32)
    arr[(0,) * nc] = 1

    done: set[int] = set()
    retired: set[int] = set()

    def retire(ax: int) -> None:
        # prefix-sum the completed axis, then keep only the sampled dilates
        nonlocal arr
        for idx in range(1, arr.shape[ax]):
            dst = [slice(None)] * nc
            src = [slice(None)] * nc
            dst[ax], src[ax] = idx, idx - 1
            arr[tuple(dst)] += arr[tuple(src)]
            arr[tuple(dst)] %= m
        sel = [slice(None)] * nc
        sel[ax] = np.array(sample, dtype=np.intp)
        arr = arr[tuple(sel)].copy()
        retired.add(ax)

    while len(done) < len(memberships):
        # finish the constraint with the fewest open coordinates first, so
        # its axis collapses to the sample positions as early as possible
        open_counts = {ax: 0 for ax in range(nc) if ax not in retired}
        for j, axes in enumerate(memberships):
            if j in done:
                continue
            for ax in axes:
                open_counts[ax] += 1
        for ax, cnt in list(open_counts.items()):
            if cnt == 0:
                retire(ax)
                del open_counts[ax]
        ax_next = min(open_counts, key=lambda ax: (open_counts[ax], ax))
        todo = [j for j, axes in enumerate(memberships)
                if j not in done and ax_next in axes]
        for j in todo:
            axes = sorted(memberships[j])
            a0 = axes[0]
            for idx in range(1, arr.shape[a0]):
                dst = [slice(None)] * nc
                src = [slice(None)] * nc
                dst[a0], src[a0] = idx, idx - 1
                for ax in axes[1:]:
                    dst[ax] = slice(1, None)
                    src[ax] = slice(0, -1)
                arr[tuple(dst)] += arr[tuple(src)]
            arr %= m
            done.add(j)
        retire(ax_next)

    for ax in range(nc):
        if ax not in retired:
            retire(ax)

    return [int(arr[(sample_pos[n],) * nc]) for n in ns]


def lattice_counts(p: HyperbolicPolytope, ns: Sequence[int]) -> list[int]:
    """Exact lattice point counts of the ns-dilates, one DP shared by all."""
    if any(n < 0 for n in ns):
        raise ValueError("dilates must be non-negative")
    if p.dim == 0:
        return [1 for _ in ns]
    if len(p.constraints) > 4:
        raise ValueError("at most 4 constraints supported")
    nmax = max(ns)
    states = (nmax + 1) ** len(p.constraints)
    if states > STATE_BUDGET:
        raise ResourceLimitError(
            f"DP state table of {states} entries exceeds budget {STATE_BUDGET}")
    memberships = tuple(
        tuple(c for c, a in enumerate(p.constraints) if j in a)
        for j in range(p.dim)
    )
    # residues stay below cap*(nmax+1) during a prefix pass; keep that in int32
    cap = (2**31 - 1) // (nmax + 1) - 1
    bound = (nmax + 1) ** p.dim
    primes = _crt_primes(cap, bound)
    residues = [_counts_mod(memberships, ns, m) for m in primes]

    out = []
    for i in range(len(ns)):
        x, mod = 0, 1
        for m, res in zip(primes, residues):
            inv = pow(mod % m, -1, m)
            x += mod * ((res[i] - x) % m * inv % m)
            mod *= m
        out.append(x % mod)
    return out


def lattice_count(p: HyperbolicPolytope, n: int) -> int:
    """Points t >= 0 with every constraint sum at most n, exactly."""
    return lattice_counts(p, [n])[0]


# ---------------------------------------------------------------------------
# Volume extraction
# ---------------------------------------------------------------------------

def ehrhart_data(p: HyperbolicPolytope) -> tuple[Fraction, EhrhartSamples]:
    """Exact volume plus the count samples that certified it.

    For each candidate period P the counts at 0, P, ..., (dim+2)P give three
    sliding windows of dim-th finite differences; the candidate is accepted
    only if all three agree (the shifted windows are the cross-validation),
    and then vol = diff / (dim! * P**dim), extracted in exact rationals.
    """
    v = p.dim
    if v == 0:
        return Fraction(1), EhrhartSamples(1, (1,), True)
    last = None
    for period in PERIOD_CANDIDATES:
        ns = [j * period for j in range(v + 3)]
        counts = lattice_counts(p, ns)
        try:
            # raises if the sliding-window differences disagree
            vol = leading_coeff_by_differences(
                [(n, Fraction(c)) for n, c in zip(ns, counts)], v)
        except ValueError:
            last = EhrhartSamples(period, tuple(counts), False)
            continue
        if vol <= 0:
            raise PeriodDetectionError(
                f"degenerate leading coefficient {vol} at period {period}",
                samples=EhrhartSamples(period, tuple(counts), False))
        return vol, EhrhartSamples(period, tuple(counts), True)
    raise PeriodDetectionError(
        f"no candidate period in {PERIOD_CANDIDATES} stabilized", samples=last)


def ehrhart_volume(p: HyperbolicPolytope) -> Fraction:
    return ehrhart_data(p)[0]


@lru_cache(maxsize=None)
def volume_of(kind: str, k: int) -> Fraction:
    """Cached exact volume of a named polytope family member."""
    return ehrhart_volume(build_polytope(kind, k))


@dataclass(frozen=True)
class VolumeRelation:
    name: str
    lhs: Fraction
    rhs: Fraction

    @property
    def ok(self) -> bool:
        return self.lhs == self.rhs


@dataclass(frozen=True)
class VolumeRelationsReport:
    k: int
    relations: tuple[VolumeRelation, ...]

    @property
    def ok(self) -> bool:
        return all(r.ok for r in self.relations)

    def failures(self) -> list[VolumeRelation]:
        return [r for r in self.relations if not r.ok]


def volume_relations_check(k: int) -> VolumeRelationsReport:
    """Cone relations tying the dropped-coordinate volumes together, bit-exact.

    vol(D) = vol(D_star) / (2**k - 1): the all-ones coordinate sits in every
    constraint, so integrating it out scales by 1/dim(D).  Likewise
    vol(D_star2) = vol(D_star3) / (2**k - k - 1).
    """
    if not (2 <= k <= 4):
        raise ValueError("k must be between 2 and 4")
    rel1 = VolumeRelation(
        "vol(D) == vol(D_star)/(2**k-1)",
        volume_of("D", k),
        volume_of("D_star", k) / (2**k - 1),
    )
    rel2 = VolumeRelation(
        "vol(D_star2) == vol(D_star3)/(2**k-k-1)",
        volume_of("D_star2", k),
        volume_of("D_star3", k) / (2**k - k - 1),
    )
    return VolumeRelationsReport(k=k, relations=(rel1, rel2))


# ---------------------------------------------------------------------------
# Inequality-matrix export
# ---------------------------------------------------------------------------

def ieqs_rows(p: HyperbolicPolytope) -> list[list[int]]:
    """H-representation rows [b, a_1..a_dim] meaning b + a.t >= 0.

    One row [1, -(j in A_i)] per constraint in family order, then the dim
    non-negativity unit rows.
    """
    rows = []
    for a in p.constraints:
        rows.append([1] + [-1 if j in a else 0 for j in range(p.dim)])
    for j in range(p.dim):
        rows.append([0] + [1 if i == j else 0 for i in range(p.dim)])
    return rows


def export_ieqs(p: HyperbolicPolytope) -> str:
    """Worksheet-style text form of the inequality matrix, one row per line."""
    rows = ieqs_rows(p)
    body = ",\n".join(str(r) for r in rows)
    return f"P=Polyhedron(ieqs=[\n{body}])\nP.volume()\n"
